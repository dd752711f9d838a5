//! Seeded Monte Carlo engines: critical values, estimator error tables,
//! power, p-values and the parametric-bootstrap power for observed data.
//!
//! Replicate `r` uses substream `r * 16 + attempt` of a per-purpose master
//! seed. A replicate whose draw is degenerate (ties) is redrawn from the next
//! attempt; more than 1% redrawn replicates aborts the run. Results are
//! collected in replicate order, so they do not depend on thread count.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, STANDARD_NORMAL};
use crate::error::{EntropyError, Result};
use crate::estimators::{default_window, estimate, EstimatorKind, Observation};
use crate::normality::{test_statistic, TestKind};
use crate::rng::{derive_seed, SeededStream};
use crate::distributions::fit_normal;
use crate::sample::SortedSample;
use crate::smoothing::{bootstrap_diagonal, build_rss_diagonal, diagonal_from_owned_rows, RssDiagonal, RssSource};

const ATTEMPTS: u64 = 16;
const QUANTILE_SE_RESAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    FullGrid,
    Bootstrap,
}

impl SamplingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplingMode::FullGrid => "full",
            SamplingMode::Bootstrap => "bootstrap",
        }
    }
}

impl fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplingMode {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" | "full_grid" | "full-grid" => Ok(SamplingMode::FullGrid),
            "bootstrap" | "boot" => Ok(SamplingMode::Bootstrap),
            other => Err(EntropyError::domain(format!("unknown mode '{other}' (full|bootstrap)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub replicates: usize,
    pub alpha: f64,
    pub master_seed: u64,
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub mode: SamplingMode,
}

impl McConfig {
    pub const DEFAULT_REPLICATES: usize = 10_000;
    pub const DEFAULT_ALPHA: f64 = 0.05;

    pub fn new(n: usize, m: usize, master_seed: u64) -> Self {
        McConfig {
            replicates: Self::DEFAULT_REPLICATES,
            alpha: Self::DEFAULT_ALPHA,
            master_seed,
            n,
            m,
            w: crate::smoothing::DEFAULT_WIDTH,
            mode: SamplingMode::FullGrid,
        }
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_width(mut self, w: usize) -> Self {
        self.w = w;
        self
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 100 {
            return Err(EntropyError::domain(format!(
                "replicates must be >= 100, got {}",
                self.replicates
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(EntropyError::domain(format!("alpha must lie in (0,1), got {}", self.alpha)));
        }
        if self.n < 3 {
            return Err(EntropyError::domain(format!("n must be >= 3, got {}", self.n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub alpha: Option<f64>,
    pub replicates: usize,
    pub seed: u64,
    pub value: f64,
    pub std_error: f64,
    pub bias: Option<f64>,
    pub sd: Option<f64>,
    pub rmse: Option<f64>,
    pub power: Option<f64>,
}

impl McReport {
    fn base(kind: impl Into<String>, cfg: &McConfig, value: f64, std_error: f64) -> Self {
        McReport {
            kind: kind.into(),
            n: cfg.n,
            m: cfg.m,
            w: cfg.w,
            alpha: Some(cfg.alpha),
            replicates: cfg.replicates,
            seed: cfg.master_seed,
            value,
            std_error,
            bias: None,
            sd: None,
            rmse: None,
            power: None,
        }
    }

    /// A single deterministic value with no Monte Carlo error.
    pub fn point(kind: impl Into<String>, n: usize, m: usize, w: usize, seed: u64, value: f64) -> Self {
        McReport {
            kind: kind.into(),
            n,
            m,
            w,
            alpha: None,
            replicates: 0,
            seed,
            value,
            std_error: 0.0,
            bias: None,
            sd: None,
            rmse: None,
            power: None,
        }
    }
}

/// `n` rows of `n` bootstrap draws from `s` taken from one generator.
fn bootstrap_rows(s: &[f64], rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = s.len();
    (0..n)
        .map(|_| (0..n).map(|_| s[rng.random_range(0..n)]).collect())
        .collect()
}

/// One simulated observation of size `n` from `spec`: a plain sorted sample,
/// or an RSS diagonal from a full `n x n` grid or from a bootstrap grid of a
/// single sample.
pub fn simulate_observation(
    spec: &DistributionSpec,
    n: usize,
    rss: bool,
    w: usize,
    mode: SamplingMode,
    stream: SeededStream,
) -> Result<Observation> {
    let mut rng = stream.rng();
    if !rss {
        return Ok(Observation::Sample(SortedSample::new(spec.sample_with(n, &mut rng)?)?));
    }
    let diag = match mode {
        SamplingMode::FullGrid => {
            let rows = (0..n).map(|_| spec.sample_with(n, &mut rng)).collect::<Result<Vec<_>>>()?;
            diagonal_from_owned_rows(rows, w, RssSource::FullGrid)?
        }
        SamplingMode::Bootstrap => {
            let s = spec.sample_with(n, &mut rng)?;
            diagonal_from_owned_rows(bootstrap_rows(&s, &mut rng), w, RssSource::Bootstrap)?
        }
    };
    Ok(Observation::Diagonal(diag))
}

/// Runs `cfg.replicates` independent replicates of `f` and returns their
/// results in replicate order.
pub fn run_replicates<T, F>(replicates: usize, purpose_seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(SeededStream) -> Result<T> + Sync,
{
    let outcomes: Vec<Result<(T, u64)>> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut last = None;
            for attempt in 0..ATTEMPTS {
                match f(SeededStream::new(purpose_seed, r * ATTEMPTS + attempt)) {
                    Ok(v) => return Ok((v, attempt)),
                    Err(e) if e.is_degenerate_draw() => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(EntropyError::TooManyFailures {
                failed: ATTEMPTS as usize,
                total: ATTEMPTS as usize,
                reason: format!("replicate {r} never produced a usable draw ({})", last.expect("attempted").name()),
            })
        })
        .collect();
    let mut values = Vec::with_capacity(replicates);
    let mut redrawn = 0usize;
    for o in outcomes {
        let (v, attempt) = o?;
        if attempt > 0 {
            redrawn += 1;
        }
        values.push(v);
    }
    if redrawn * 100 > replicates {
        return Err(EntropyError::TooManyFailures {
            failed: redrawn,
            total: replicates,
            reason: "degenerate draws (ties) had to be redrawn".into(),
        });
    }
    Ok(values)
}

fn check_kind(kind: TestKind, cfg: &McConfig) -> Result<()> {
    cfg.validate()?;
    if kind.uses_rss() {
        crate::smoothing::check_width(cfg.n, cfg.w)?;
    }
    Ok(())
}

/// Null statistics of `kind` over `cfg.replicates` standard-normal draws.
pub fn null_statistics(kind: TestKind, cfg: &McConfig, purpose: &str) -> Result<Vec<f64>> {
    check_kind(kind, cfg)?;
    statistics_under(kind, &STANDARD_NORMAL, cfg, derive_seed(cfg.master_seed, purpose))
}

fn statistics_under(kind: TestKind, spec: &DistributionSpec, cfg: &McConfig, seed: u64) -> Result<Vec<f64>> {
    run_replicates(cfg.replicates, seed, |stream| {
        let obs = simulate_observation(spec, cfg.n, kind.uses_rss(), cfg.w, cfg.mode, stream)?;
        test_statistic(kind, &obs, cfg.m)
    })
}

/// 1-based rank `ceil(α R)` of the critical order statistic, at least 1.
fn critical_rank(alpha: f64, r: usize) -> usize {
    ((alpha * r as f64).ceil() as usize).clamp(1, r)
}

fn tail_quantile(sorted: &[f64], alpha: f64, lower: bool) -> f64 {
    let k = critical_rank(alpha, sorted.len());
    if lower {
        sorted[k - 1]
    } else {
        sorted[sorted.len() - k]
    }
}

fn sd_of(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Empirical `α` critical value: the `ceil(αR)`-th smallest null statistic
/// for entropy tests, the `ceil(αR)`-th largest for KS/AD. The standard
/// error is the spread of the same quantile over 200 seeded resamples of
/// the null statistics.
pub fn critical_value(kind: TestKind, cfg: &McConfig) -> Result<McReport> {
    let mut stats = null_statistics(kind, cfg, "null")?;
    stats.sort_by(f64::total_cmp);
    let lower = kind.rejects_lower_tail();
    let value = tail_quantile(&stats, cfg.alpha, lower);
    let mut rng = SeededStream::new(derive_seed(cfg.master_seed, "quantile-se"), 0).rng();
    let r = stats.len();
    let boot: Vec<f64> = (0..QUANTILE_SE_RESAMPLES)
        .map(|_| {
            let mut res: Vec<f64> = (0..r).map(|_| stats[rng.random_range(0..r)]).collect();
            res.sort_by(f64::total_cmp);
            tail_quantile(&res, cfg.alpha, lower)
        })
        .collect();
    Ok(McReport::base(kind.as_str(), cfg, value, sd_of(&boot)))
}

/// Fraction of `alt` samples for which `kind` rejects at `critical`.
pub fn power(kind: TestKind, alt: &DistributionSpec, cfg: &McConfig, critical: f64) -> Result<McReport> {
    check_kind(kind, cfg)?;
    let stats = statistics_under(kind, alt, cfg, derive_seed(cfg.master_seed, "alternative"))?;
    let rejected = stats.iter().filter(|&&t| kind.rejects(t, critical)).count();
    let p = rejected as f64 / stats.len() as f64;
    let mut rep = McReport::base(kind.as_str(), cfg, p, (p * (1.0 - p) / stats.len() as f64).sqrt());
    rep.power = Some(p);
    Ok(rep)
}

/// Monte Carlo p-value `(count + 1)/(R + 1)` against a standard-normal null,
/// counting null statistics at least as extreme as `observed` in the
/// rejection tail. In bootstrap mode each null sample is bootstrap-gridded
/// the same way as the observed data.
pub fn mc_p_value(kind: TestKind, observed: f64, cfg: &McConfig) -> Result<McReport> {
    if !observed.is_finite() {
        return Err(EntropyError::domain(format!("observed statistic must be finite, got {observed}")));
    }
    let stats = null_statistics(kind, cfg, "p-value")?;
    let extreme = stats
        .iter()
        .filter(|&&t| if kind.rejects_lower_tail() { t <= observed } else { t >= observed })
        .count();
    let r = stats.len() as f64;
    let p = (extreme as f64 + 1.0) / (r + 1.0);
    Ok(McReport::base(kind.as_str(), cfg, p, (p * (1.0 - p) / r).sqrt()))
}

/// Bias, SD (divisor R) and RMSE of `est` against the analytic entropy of
/// `dist`. `value` is the RMSE; its standard error is the delta-method
/// `SE(MSE) / (2 RMSE)`.
pub fn estimator_error_table(est: EstimatorKind, dist: &DistributionSpec, cfg: &McConfig) -> Result<McReport> {
    cfg.validate()?;
    let truth = dist
        .true_entropy()
        .ok_or_else(|| EntropyError::domain(format!("no analytic entropy for {dist}")))?;
    let seed = derive_seed(cfg.master_seed, "estimator");
    let values = run_replicates(cfg.replicates, seed, |stream| {
        let obs = simulate_observation(dist, cfg.n, est.uses_rss(), cfg.w, cfg.mode, stream)?;
        estimate(est, &obs, cfg.m)
    })?;
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    let bias = mean - truth;
    let sd = sd_of(&values);
    let sq: Vec<f64> = values.iter().map(|v| (v - truth).powi(2)).collect();
    let mse = sq.iter().sum::<f64>() / r;
    let rmse = mse.sqrt();
    let se_mse = sd_of(&sq) / r.sqrt();
    let se = if rmse > 0.0 { se_mse / (2.0 * rmse) } else { 0.0 };
    let mut rep = McReport::base(est.as_str(), cfg, rmse, se);
    rep.alpha = None;
    rep.bias = Some(bias);
    rep.sd = Some(sd);
    rep.rmse = Some(rmse);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowRule {
    /// `m = floor(sqrt(n) + 0.5)` per sample size.
    Heuristic,
    Fixed(usize),
}

impl WindowRule {
    pub fn window(&self, n: usize) -> Result<usize> {
        match *self {
            WindowRule::Heuristic => default_window(n),
            WindowRule::Fixed(m) => Ok(m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub n: usize,
    pub m: usize,
    pub mse: f64,
    pub scaled: f64,
    pub std_error: f64,
}

/// `MSE · n^b` of `est` for each sample size in `ns`.
pub fn mse_trend(
    est: EstimatorKind,
    dist: &DistributionSpec,
    ns: &[usize],
    b: f64,
    rule: WindowRule,
    cfg: &McConfig,
) -> Result<Vec<TrendPoint>> {
    if ns.is_empty() {
        return Err(EntropyError::domain("mse trend needs at least one sample size"));
    }
    ns.iter()
        .map(|&n| {
            let m = rule.window(n)?;
            let c = McConfig { n, m, ..*cfg };
            let rep = estimator_error_table(est, dist, &c)?;
            let rmse = rep.rmse.expect("rmse present");
            let mse = rmse * rmse;
            let scale = (n as f64).powf(b);
            Ok(TrendPoint {
                n,
                m,
                mse,
                scaled: mse * scale,
                std_error: 2.0 * rmse * rep.std_error * scale,
            })
        })
        .collect()
}

/// Turns observed data into the input of `kind`: a sorted sample for the
/// plain statistics, otherwise an RSS diagonal. Full-grid mode reads the
/// data as `n` rows of `n` values; bootstrap mode resamples the data with
/// `seed`.
pub fn observation_from_data(
    values: &[f64],
    rss: bool,
    w: usize,
    mode: SamplingMode,
    seed: u64,
) -> Result<Observation> {
    if !rss {
        return Ok(Observation::Sample(SortedSample::new(values.to_vec())?));
    }
    let diag: RssDiagonal = match mode {
        SamplingMode::Bootstrap => bootstrap_diagonal(values, w, derive_seed(seed, "observed"))?,
        SamplingMode::FullGrid => {
            let len = values.len();
            let n = (len as f64).sqrt().round() as usize;
            if n * n != len {
                return Err(EntropyError::domain(format!(
                    "full-grid input needs n*n values, got {len}"
                )));
            }
            let rows: Vec<Vec<f64>> = values.chunks(n).map(|c| c.to_vec()).collect();
            build_rss_diagonal(&rows, w)?
        }
    };
    Ok(Observation::Diagonal(diag))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealDataPower {
    pub observed: f64,
    pub mu_hat: f64,
    pub sigma_hat: f64,
    pub lambda_hat: f64,
    pub report: McReport,
}

/// Power against an inverse-Gaussian alternative fitted to `s`:
/// fit a normal `(μ̂, σ̂)` to `s`, evaluate `TEST` on `s`, set
/// `λ̂ = μ̂³/σ̂²`, simulate `cfg.replicates` samples of size `cfg.n` from
/// `IG(μ̂, λ̂)` and report the fraction with `TEST^{iB} <= TEST`
/// (`>=` for KS/AD). Simulated samples are treated with the same mode as
/// the observed data.
pub fn empirical_power_real_data(s: &[f64], kind: TestKind, cfg: &McConfig) -> Result<RealDataPower> {
    check_kind(kind, cfg)?;
    if let Some(x) = s.iter().find(|&&x| !(x > 0.0)) {
        return Err(EntropyError::domain(format!("data must be positive, found {x}")));
    }
    let (mu_hat, sigma_hat) = fit_normal(s)?;
    let lambda_hat = mu_hat.powi(3) / (sigma_hat * sigma_hat);
    let obs = observation_from_data(s, kind.uses_rss(), cfg.w, SamplingMode::Bootstrap, cfg.master_seed)?;
    let observed = test_statistic(kind, &obs, cfg.m)?;
    let alt = DistributionSpec::InverseGaussian { mu: mu_hat, lambda: lambda_hat };
    let stats = statistics_under(kind, &alt, cfg, derive_seed(cfg.master_seed, "real-data"))?;
    let hits = stats
        .iter()
        .filter(|&&t| if kind.rejects_lower_tail() { t <= observed } else { t >= observed })
        .count();
    let p = hits as f64 / stats.len() as f64;
    let mut report = McReport::base(kind.as_str(), cfg, p, (p * (1.0 - p) / stats.len() as f64).sqrt());
    report.power = Some(p);
    Ok(RealDataPower { observed, mu_hat, sigma_hat, lambda_hat, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn config_validation() {
        assert!(McConfig::new(10, 2, 1).validate().is_ok());
        assert!(McConfig::new(10, 2, 1).with_replicates(99).validate().is_err());
        assert!(McConfig::new(10, 2, 1).with_alpha(1.0).validate().is_err());
        assert!(McConfig::new(2, 1, 1).validate().is_err());
        assert_eq!("full".parse::<SamplingMode>().unwrap(), SamplingMode::FullGrid);
        assert_eq!("bootstrap".parse::<SamplingMode>().unwrap(), SamplingMode::Bootstrap);
        assert!("grid".parse::<SamplingMode>().is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(critical_rank(0.05, 10_000), 500);
        assert_eq!(critical_rank(0.05, 100), 5);
        assert_eq!(critical_rank(0.001, 100), 1);
        let v: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(tail_quantile(&v, 0.05, true), 5.0);
        assert_eq!(tail_quantile(&v, 0.05, false), 96.0);
    }

    #[test]
    fn replicates_are_deterministic_and_ordered() {
        let f = |s: SeededStream| -> Result<u64> { Ok(s.rng().random::<u64>()) };
        let a = run_replicates(300, 9, f).unwrap();
        let b = run_replicates(300, 9, f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[7], SeededStream::new(9, 7 * ATTEMPTS).rng().random::<u64>());
    }

    #[test]
    fn degenerate_draws_are_redrawn_then_abort() {
        // every fifth replicate fails on its first attempt: 20% > 1%
        let flaky = |s: SeededStream| -> Result<u64> {
            if s.stream_id.is_multiple_of(ATTEMPTS) && (s.stream_id / ATTEMPTS).is_multiple_of(5) {
                Err(EntropyError::TiedSpacing { index: 1 })
            } else {
                Ok(s.stream_id)
            }
        };
        match run_replicates(200, 1, flaky) {
            Err(EntropyError::TooManyFailures { failed, total, .. }) => {
                assert_eq!((failed, total), (40, 200));
            }
            other => panic!("expected abort, got {other:?}"),
        }
        let rare = |s: SeededStream| -> Result<u64> {
            if s.stream_id == 0 {
                Err(EntropyError::TiedSpacing { index: 1 })
            } else {
                Ok(s.stream_id)
            }
        };
        let v = run_replicates(200, 1, rare).unwrap();
        assert_eq!(v[0], 1);
        let hard = |_: SeededStream| -> Result<u64> { Err(EntropyError::domain("bad")) };
        assert!(matches!(run_replicates(200, 1, hard), Err(EntropyError::Domain(_))));
    }

    #[test]
    fn error_table_identity() {
        let cfg = McConfig::new(20, 4, 11).with_replicates(300);
        for est in [EstimatorKind::Hv, EstimatorKind::HwR] {
            let r = estimator_error_table(est, &"exp:1".parse().unwrap(), &cfg).unwrap();
            let (b, s, e) = (r.bias.unwrap(), r.sd.unwrap(), r.rmse.unwrap());
            assert_relative_eq!(e * e, b * b + s * s, epsilon = 1e-9);
            assert!(r.std_error >= 0.0);
        }
        assert!(estimator_error_table(EstimatorKind::Hv, &"t:3".parse().unwrap(), &cfg).is_err());
    }

    #[test]
    fn p_value_extremes() {
        let cfg = McConfig::new(10, 2, 5).with_replicates(200);
        assert!(mc_p_value(TestKind::Tv, f64::NEG_INFINITY, &cfg).is_err());
        let p = mc_p_value(TestKind::Tv, 1e9, &cfg).unwrap();
        assert_relative_eq!(p.value, 1.0);
        let p = mc_p_value(TestKind::Tv, 0.0, &cfg).unwrap();
        assert_relative_eq!(p.value, 1.0 / 201.0);
    }

    #[test]
    fn observation_from_data_modes() {
        let grid: Vec<f64> = (0..16).map(|v| v as f64).collect();
        let o = observation_from_data(&grid, true, 3, SamplingMode::FullGrid, 0).unwrap();
        assert_eq!(o.len(), 4);
        assert!(observation_from_data(&grid[..15], true, 3, SamplingMode::FullGrid, 0).is_err());
        let o = observation_from_data(&grid[..10], true, 3, SamplingMode::Bootstrap, 4).unwrap();
        let again = observation_from_data(&grid[..10], true, 3, SamplingMode::Bootstrap, 4).unwrap();
        assert_eq!(o, again);
        assert!(matches!(
            observation_from_data(&grid[..10], false, 3, SamplingMode::Bootstrap, 4).unwrap(),
            Observation::Sample(_)
        ));
    }
}
