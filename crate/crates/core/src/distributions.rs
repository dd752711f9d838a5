//! Distribution families used for simulation, with CDFs, entropies and fits.
//!
//! Interpretations of the short labels: `DE` is Laplace(0,1), `EV(0,k)` is a
//! Gumbel (maximum) law with location 0 and scale k, `Chi(k)` is chi-square
//! with k degrees of freedom, and `Gexp(α)` has CDF `(1 - e^{-x})^α`.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use rand::distr::{Distribution, Open01};
use rand::Rng;
use rand_distr as rd;
use serde::{Deserialize, Serialize};
use statrs::distribution::{self as sd, ContinuousCDF};

use crate::error::{EntropyError, Result};
use crate::rng::SeededStream;
use crate::sample::{mean, sample_sigma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    Normal { mu: f64, sigma: f64 },
    Exponential { rate: f64 },
    Uniform { a: f64, b: f64 },
    StudentT { nu: f64 },
    Laplace { loc: f64, scale: f64 },
    Logistic { loc: f64, scale: f64 },
    Gumbel { loc: f64, scale: f64 },
    ChiSquare { df: f64 },
    LogNormal { mu: f64, sigma: f64 },
    Gamma { shape: f64, scale: f64 },
    Weibull { shape: f64, scale: f64 },
    Beta { a: f64, b: f64 },
    GExp { alpha: f64 },
    InverseGaussian { mu: f64, lambda: f64 },
}

pub const STANDARD_NORMAL: DistributionSpec = DistributionSpec::Normal { mu: 0.0, sigma: 1.0 };

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(EntropyError::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(EntropyError::domain(format!("{name} must be finite, got {v}")))
    }
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// Mills ratio `Φ(-b) / φ(b)` for `b >= 0`.
fn mills_ratio(b: f64) -> f64 {
    if b < 20.0 {
        std_normal_cdf(-b) / std_normal_pdf(b)
    } else {
        let r = 1.0 / (b * b);
        (1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)))) / b
    }
}

pub fn normal_cdf(x: f64, mu: f64, sigma: f64) -> f64 {
    std_normal_cdf((x - mu) / sigma)
}

/// Inverse-Gaussian CDF `Φ(a) + e^{2λ/μ} Φ(-b)`, with the second term
/// evaluated as `φ(a)·Φ(-b)/φ(b)` so it never overflows.
pub fn ig_cdf(x: f64, mu: f64, lambda: f64) -> Result<f64> {
    positive("mu", mu)?;
    positive("lambda", lambda)?;
    if x.is_nan() {
        return Err(EntropyError::domain("ig_cdf argument is NaN"));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let r = (lambda / x).sqrt();
    let a = r * (x / mu - 1.0);
    let b = r * (x / mu + 1.0);
    let p = std_normal_cdf(a) + std_normal_pdf(a) * mills_ratio(b);
    Ok(p.clamp(0.0, 1.0))
}

pub fn ig_pdf(x: f64, mu: f64, lambda: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (lambda / (2.0 * PI * x * x * x)).sqrt() * (-lambda * (x - mu).powi(2) / (2.0 * mu * mu * x)).exp()
}

fn open01(rng: &mut impl Rng) -> f64 {
    Open01.sample(rng)
}

fn collect<D: Distribution<f64>>(d: D, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    d.sample_iter(rng).take(n).collect()
}

fn rd_err(e: impl fmt::Display) -> EntropyError {
    EntropyError::domain(format!("invalid distribution parameters: {e}"))
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        use DistributionSpec::*;
        match *self {
            Normal { mu, sigma } | LogNormal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            Exponential { rate } => positive("rate", rate),
            Uniform { a, b } => {
                finite("a", a)?;
                finite("b", b)?;
                if a < b {
                    Ok(())
                } else {
                    Err(EntropyError::domain(format!("uniform needs a < b, got ({a}, {b})")))
                }
            }
            StudentT { nu } => {
                if nu >= 1.0 && nu.is_finite() {
                    Ok(())
                } else {
                    Err(EntropyError::domain(format!("t degrees of freedom must be >= 1, got {nu}")))
                }
            }
            ChiSquare { df } => {
                if df >= 1.0 && df.is_finite() {
                    Ok(())
                } else {
                    Err(EntropyError::domain(format!("chi-square df must be >= 1, got {df}")))
                }
            }
            Laplace { loc, scale } | Logistic { loc, scale } | Gumbel { loc, scale } => {
                finite("loc", loc)?;
                positive("scale", scale)
            }
            Gamma { shape, scale } | Weibull { shape, scale } => {
                positive("shape", shape)?;
                positive("scale", scale)
            }
            Beta { a, b } => {
                positive("a", a)?;
                positive("b", b)
            }
            GExp { alpha } => positive("alpha", alpha),
            InverseGaussian { mu, lambda } => {
                positive("mu", mu)?;
                positive("lambda", lambda)
            }
        }
    }

    /// Draws `n` values from `rng`.
    pub fn sample_with(&self, n: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
        use DistributionSpec::*;
        self.validate()?;
        Ok(match *self {
            Normal { mu, sigma } => collect(rd::Normal::new(mu, sigma).map_err(rd_err)?, n, rng),
            Exponential { rate } => collect(rd::Exp::new(rate).map_err(rd_err)?, n, rng),
            Uniform { a, b } => collect(rd::Uniform::new(a, b).map_err(rd_err)?, n, rng),
            StudentT { nu } => collect(rd::StudentT::new(nu).map_err(rd_err)?, n, rng),
            Laplace { loc, scale } => (0..n)
                .map(|_| {
                    let u = open01(rng);
                    if u < 0.5 {
                        loc + scale * (2.0 * u).ln()
                    } else {
                        loc - scale * (2.0 * (1.0 - u)).ln()
                    }
                })
                .collect(),
            Logistic { loc, scale } => (0..n)
                .map(|_| {
                    let u = open01(rng);
                    loc + scale * (u / (1.0 - u)).ln()
                })
                .collect(),
            Gumbel { loc, scale } => collect(rd::Gumbel::new(loc, scale).map_err(rd_err)?, n, rng),
            ChiSquare { df } => collect(rd::ChiSquared::new(df).map_err(rd_err)?, n, rng),
            LogNormal { mu, sigma } => collect(rd::LogNormal::new(mu, sigma).map_err(rd_err)?, n, rng),
            Gamma { shape, scale } => collect(rd::Gamma::new(shape, scale).map_err(rd_err)?, n, rng),
            Weibull { shape, scale } => collect(rd::Weibull::new(scale, shape).map_err(rd_err)?, n, rng),
            Beta { a, b } => collect(rd::Beta::new(a, b).map_err(rd_err)?, n, rng),
            GExp { alpha } => (0..n)
                .map(|_| -(-open01(rng).powf(1.0 / alpha)).ln_1p())
                .collect(),
            InverseGaussian { mu, lambda } => {
                collect(rd::InverseGaussian::new(mu, lambda).map_err(rd_err)?, n, rng)
            }
        })
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        use DistributionSpec::*;
        self.validate()?;
        if x.is_nan() {
            return Err(EntropyError::domain("cdf argument is NaN"));
        }
        let pos = |f: &dyn Fn(f64) -> f64| if x <= 0.0 { 0.0 } else { f(x) };
        Ok(match *self {
            Normal { mu, sigma } => normal_cdf(x, mu, sigma),
            Exponential { rate } => pos(&|x| -(-rate * x).exp_m1()),
            Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            StudentT { nu } => sd::StudentsT::new(0.0, 1.0, nu).map_err(rd_err)?.cdf(x),
            Laplace { loc, scale } => {
                let z = (x - loc) / scale;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            Logistic { loc, scale } => 1.0 / (1.0 + (-(x - loc) / scale).exp()),
            Gumbel { loc, scale } => (-(-(x - loc) / scale).exp()).exp(),
            ChiSquare { df } => pos(&|x| sd::ChiSquared::new(df).map(|d| d.cdf(x)).unwrap_or(f64::NAN)),
            LogNormal { mu, sigma } => pos(&|x| std_normal_cdf((x.ln() - mu) / sigma)),
            Gamma { shape, scale } => {
                pos(&|x| sd::Gamma::new(shape, 1.0 / scale).map(|d| d.cdf(x)).unwrap_or(f64::NAN))
            }
            Weibull { shape, scale } => pos(&|x| -(-(x / scale).powf(shape)).exp_m1()),
            Beta { a, b } => {
                if x <= 0.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    sd::Beta::new(a, b).map_err(rd_err)?.cdf(x)
                }
            }
            GExp { alpha } => pos(&|x| (-(-x).exp_m1()).powf(alpha)),
            InverseGaussian { mu, lambda } => ig_cdf(x, mu, lambda)?,
        })
    }

    /// Analytic differential entropy, where this crate provides one.
    pub fn true_entropy(&self) -> Option<f64> {
        match *self {
            DistributionSpec::Exponential { rate } => Some(1.0 - rate.ln()),
            DistributionSpec::Normal { sigma, .. } => Some(0.5 * (2.0 * PI * E * sigma * sigma).ln()),
            DistributionSpec::Uniform { a, b } => Some((b - a).ln()),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

/// Draws `n` values from the stream's generator.
pub fn sample(spec: &DistributionSpec, n: usize, stream: SeededStream) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(EntropyError::domain("sample size must be at least 1"));
    }
    spec.sample_with(n, &mut stream.rng())
}

pub fn true_entropy(spec: &DistributionSpec) -> Option<f64> {
    spec.true_entropy()
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DistributionSpec::*;
        match *self {
            Normal { mu, sigma } => write!(f, "normal:{mu},{sigma}"),
            Exponential { rate } => write!(f, "exp:{rate}"),
            Uniform { a, b } => write!(f, "unif:{a},{b}"),
            StudentT { nu } => write!(f, "t:{nu}"),
            Laplace { loc, scale } => write!(f, "laplace:{loc},{scale}"),
            Logistic { loc, scale } => write!(f, "logistic:{loc},{scale}"),
            Gumbel { loc, scale } => write!(f, "ev:{loc},{scale}"),
            ChiSquare { df } => write!(f, "chi:{df}"),
            LogNormal { mu, sigma } => write!(f, "ln:{mu},{sigma}"),
            Gamma { shape, scale } => write!(f, "gamma:{shape},{scale}"),
            Weibull { shape, scale } => write!(f, "weibull:{shape},{scale}"),
            Beta { a, b } => write!(f, "beta:{a},{b}"),
            GExp { alpha } => write!(f, "gexp:{alpha}"),
            InverseGaussian { mu, lambda } => write!(f, "ig:{mu},{lambda}"),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = EntropyError;

    /// Parses `family:params`, e.g. `exp:1`, `t:3`, `ev:0,2`, `beta:0.5,3`.
    /// Trailing parameters may be omitted where a default exists.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (family, rest) = match s.split_once(':') {
            Some((f, r)) => (f.trim().to_string(), r.trim().to_string()),
            None => (s.clone(), String::new()),
        };
        let params: Vec<f64> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| EntropyError::domain(format!("bad parameter '{p}' in '{s}'")))
                })
                .collect::<Result<_>>()?
        };
        let get = |defaults: &[Option<f64>]| -> Result<Vec<f64>> {
            if params.len() > defaults.len() {
                return Err(EntropyError::domain(format!(
                    "'{family}' takes at most {} parameters, got {}",
                    defaults.len(),
                    params.len()
                )));
            }
            defaults
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    params.get(i).copied().or(*d).ok_or_else(|| {
                        EntropyError::domain(format!("'{family}' is missing parameter {}", i + 1))
                    })
                })
                .collect()
        };
        use DistributionSpec::*;
        let spec = match family.as_str() {
            "normal" | "norm" | "n" => {
                let p = get(&[Some(0.0), Some(1.0)])?;
                Normal { mu: p[0], sigma: p[1] }
            }
            "exp" | "exponential" => Exponential { rate: get(&[Some(1.0)])?[0] },
            "unif" | "uniform" | "u" => {
                let p = get(&[Some(0.0), Some(1.0)])?;
                Uniform { a: p[0], b: p[1] }
            }
            "t" | "student" | "studentt" => StudentT { nu: get(&[None])?[0] },
            "de" | "laplace" => {
                let p = get(&[Some(0.0), Some(1.0)])?;
                Laplace { loc: p[0], scale: p[1] }
            }
            "logistic" | "logis" => {
                let p = get(&[Some(0.0), Some(1.0)])?;
                Logistic { loc: p[0], scale: p[1] }
            }
            "ev" | "gumbel" => {
                let p = get(&[Some(0.0), Some(1.0)])?;
                Gumbel { loc: p[0], scale: p[1] }
            }
            "chi" | "chisq" | "chi2" => ChiSquare { df: get(&[None])?[0] },
            "ln" | "lognormal" => {
                let p = get(&[Some(0.0), Some(1.0)])?;
                LogNormal { mu: p[0], sigma: p[1] }
            }
            "gamma" | "ga" => {
                let p = get(&[None, Some(1.0)])?;
                Gamma { shape: p[0], scale: p[1] }
            }
            "weibull" | "w" => {
                let p = get(&[None, Some(1.0)])?;
                Weibull { shape: p[0], scale: p[1] }
            }
            "beta" | "b" => {
                let p = get(&[None, None])?;
                Beta { a: p[0], b: p[1] }
            }
            "gexp" => GExp { alpha: get(&[None])?[0] },
            "ig" | "invgauss" | "inverse_gaussian" => {
                let p = get(&[None, None])?;
                InverseGaussian { mu: p[0], lambda: p[1] }
            }
            other => return Err(EntropyError::domain(format!("unknown distribution family '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `(mean, divisor-n standard deviation)`.
pub fn fit_normal(s: &[f64]) -> Result<(f64, f64)> {
    let sigma = sample_sigma(s)?;
    Ok((mean(s), sigma))
}

fn check_positive_sample(s: &[f64]) -> Result<()> {
    if let Some(x) = s.iter().find(|&&x| !(x > 0.0)) {
        return Err(EntropyError::domain(format!(
            "inverse Gaussian fit needs positive values, found {x}"
        )));
    }
    Ok(())
}

/// Moment rule `μ̂ = mean`, `λ̂ = μ̂³ / σ̂²`.
pub fn fit_inverse_gaussian(s: &[f64]) -> Result<(f64, f64)> {
    check_positive_sample(s)?;
    let (mu, sigma) = fit_normal(s)?;
    Ok((mu, mu.powi(3) / (sigma * sigma)))
}

/// Maximum likelihood `μ̂ = mean`, `λ̂ = n / Σ(1/x_i - 1/μ̂)`.
pub fn fit_inverse_gaussian_mle(s: &[f64]) -> Result<(f64, f64)> {
    check_positive_sample(s)?;
    if s.len() < 2 {
        return Err(EntropyError::DegenerateSample("need at least two values".into()));
    }
    let mu = mean(s);
    let denom: f64 = s.iter().map(|x| 1.0 / x - 1.0 / mu).sum();
    if !(denom > 0.0) {
        return Err(EntropyError::DegenerateSample("all values equal".into()));
    }
    Ok((mu, s.len() as f64 / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ks_distance(spec: &DistributionSpec, mut x: Vec<f64>) -> f64 {
        x.sort_by(f64::total_cmp);
        let n = x.len() as f64;
        x.iter()
            .enumerate()
            .map(|(i, &v)| {
                let f = spec.cdf(v).unwrap();
                ((i + 1) as f64 / n - f).max(f - i as f64 / n)
            })
            .fold(0.0, f64::max)
    }

    fn families() -> Vec<DistributionSpec> {
        [
            "normal:0,1", "normal:2,3", "exp:1", "exp:2.5", "unif:0,1", "t:1", "t:3", "de", "logistic",
            "ev:0,1", "ev:0,2", "chi:1", "chi:4", "ln:0,0.6", "gamma:0.5", "gamma:2", "weibull:0.5",
            "weibull:2", "beta:0.5,0.5", "beta:2,5", "gexp:0.5", "gexp:2", "ig:1,0.5", "ig:3.5,2",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
    }

    #[test]
    fn every_family_matches_its_cdf() {
        let n = 100_000;
        for (k, spec) in families().iter().enumerate() {
            let x = sample(spec, n, SeededStream::new(7, k as u64)).unwrap();
            let d = ks_distance(spec, x);
            assert!(d < 1.63 / (n as f64).sqrt(), "{spec}: D = {d}");
        }
    }

    #[test]
    fn sampling_contracts() {
        let exp = DistributionSpec::Exponential { rate: 1.0 };
        let x = sample(&exp, 100_000, SeededStream::new(1, 0)).unwrap();
        assert!((mean(&x) - 1.0).abs() < 0.02);
        let u: DistributionSpec = "unif:0,1".parse().unwrap();
        assert!(sample(&u, 5000, SeededStream::new(3, 9)).unwrap().iter().all(|&v| (0.0..1.0).contains(&v)));
        let a = sample(&exp, 50, SeededStream::new(5, 5)).unwrap();
        let b = sample(&exp, 50, SeededStream::new(5, 5)).unwrap();
        assert_eq!(a, b);
        assert!(sample(&exp, 0, SeededStream::new(5, 5)).is_err());
    }

    #[test]
    fn entropies() {
        assert_eq!(true_entropy(&DistributionSpec::Exponential { rate: 1.0 }), Some(1.0));
        assert_relative_eq!(true_entropy(&STANDARD_NORMAL).unwrap(), 1.418_938_533_204_672_7, epsilon = 1e-15);
        assert_eq!(true_entropy(&DistributionSpec::Uniform { a: 0.0, b: 1.0 }), Some(0.0));
        assert_eq!(true_entropy(&DistributionSpec::StudentT { nu: 3.0 }), None);
    }

    #[test]
    fn parsing() {
        assert_eq!("EXP:1".parse::<DistributionSpec>().unwrap(), DistributionSpec::Exponential { rate: 1.0 });
        assert_eq!("ev:0,2".parse::<DistributionSpec>().unwrap(), DistributionSpec::Gumbel { loc: 0.0, scale: 2.0 });
        assert_eq!("beta:0.5,3".parse::<DistributionSpec>().unwrap(), DistributionSpec::Beta { a: 0.5, b: 3.0 });
        assert_eq!("t:3".parse::<DistributionSpec>().unwrap(), DistributionSpec::StudentT { nu: 3.0 });
        assert_eq!("weibull:2".parse::<DistributionSpec>().unwrap(), DistributionSpec::Weibull { shape: 2.0, scale: 1.0 });
        for bad in ["t", "beta:1", "exp:-1", "exp:1,2", "zipf:1", "t:0.5", "unif:1,0", "exp:x"] {
            assert!(bad.parse::<DistributionSpec>().is_err(), "{bad}");
        }
        for spec in families() {
            assert_eq!(spec.to_string().parse::<DistributionSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn fits() {
        assert_eq!(fit_normal(&[-1.0, 1.0]).unwrap(), (0.0, 1.0));
        assert!(fit_normal(&[5.0, 5.0, 5.0]).is_err());
        // mean 2, divisor-n sd 2
        let (mu, lambda) = fit_inverse_gaussian(&[0.5, 0.5, 0.5, 6.5]).unwrap();
        assert_relative_eq!(mu, 2.0);
        assert_relative_eq!(sample_sigma(&[0.5, 0.5, 0.5, 6.5]).unwrap(), 2.598076211353316, epsilon = 1e-12);
        assert_relative_eq!(lambda, 8.0 / 6.75, epsilon = 1e-12);
        let (mu, lambda) = fit_inverse_gaussian(&[1.0, 1.0, 1.0, 1.0, 6.0]).unwrap();
        assert_relative_eq!(mu, 2.0, epsilon = 1e-12);
        assert_relative_eq!(lambda, 2.0, epsilon = 1e-12);
        assert!(fit_inverse_gaussian(&[0.0, 1.0, 2.0]).is_err());
        let (_, l) = fit_inverse_gaussian_mle(&[1.0, 2.0, 4.0]).unwrap();
        assert_relative_eq!(l, 3.0 / (1.75 - 3.0 / (7.0 / 3.0)), epsilon = 1e-12);
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn ig_cdf_matches_quadrature() {
        for &(mu, lambda) in &[(1.0, 1.0), (3.5644, 2.0063), (2.0, 50.0), (1.0, 0.2)] {
            let f = |x: f64| ig_pdf(x, mu, lambda);
            // substitute x = t^2 to tame the behaviour near zero
            let g = |t: f64| 2.0 * t * f(t * t);
            let q = simpson(g, 0.0, mu.sqrt(), 200_000);
            assert!((ig_cdf(mu, mu, lambda).unwrap() - q).abs() < 1e-8, "({mu},{lambda})");
        }
    }

    #[test]
    fn ig_cdf_shape() {
        let (mu, lambda) = (3.5644, 2.0063);
        assert_eq!(ig_cdf(0.0, mu, lambda).unwrap(), 0.0);
        assert!(ig_cdf(1e-6, mu, lambda).unwrap() < 1e-12);
        assert!(ig_cdf(1e6, mu, lambda).unwrap() > 1.0 - 1e-12);
        let mut prev = 0.0;
        for i in 1..=10_000 {
            let p = ig_cdf(i as f64 * 0.01, mu, lambda).unwrap();
            assert!((0.0..=1.0).contains(&p) && p >= prev);
            prev = p;
        }
        // large λ/μ stays finite and approaches the normal limit
        let p = ig_cdf(1.0, 1.0, 1e6).unwrap();
        assert!((p - 0.5).abs() < 1e-3);
        assert!(ig_cdf(1.0, 0.0, 1.0).is_err());
    }
}
