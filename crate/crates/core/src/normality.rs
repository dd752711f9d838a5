//! Entropy-based normality statistics and the KS/AD baselines.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::normal_cdf;
use crate::error::{EntropyError, Result};
use crate::estimators::{estimate, hw_r, EstimatorKind, Observation};
use crate::sample::{mean, sample_sigma};
use crate::special::{bias_correction_c, WindowPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Tv,
    Tve,
    Tc,
    Tw,
    Tz1,
    Tz2,
    TveR,
    TwR,
    Ks,
    Ad,
}

impl TestKind {
    pub const ALL: [TestKind; 10] = [
        TestKind::Tv,
        TestKind::Tve,
        TestKind::Tc,
        TestKind::Tw,
        TestKind::Tz1,
        TestKind::Tz2,
        TestKind::TveR,
        TestKind::TwR,
        TestKind::Ks,
        TestKind::Ad,
    ];

    pub const ENTROPY: [TestKind; 8] = [
        TestKind::Tv,
        TestKind::Tve,
        TestKind::Tc,
        TestKind::Tw,
        TestKind::Tz1,
        TestKind::Tz2,
        TestKind::TveR,
        TestKind::TwR,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TestKind::Tv => "tv",
            TestKind::Tve => "tve",
            TestKind::Tc => "tc",
            TestKind::Tw => "tw",
            TestKind::Tz1 => "tz1",
            TestKind::Tz2 => "tz2",
            TestKind::TveR => "tve_r",
            TestKind::TwR => "tw_r",
            TestKind::Ks => "ks",
            TestKind::Ad => "ad",
        }
    }

    /// The entropy estimator in the statistic's exponent, if any.
    pub fn estimator(&self) -> Option<EstimatorKind> {
        Some(match self {
            TestKind::Tv => EstimatorKind::Hv,
            TestKind::Tve => EstimatorKind::Hve,
            TestKind::Tc => EstimatorKind::Hc,
            TestKind::Tw => EstimatorKind::Hw,
            TestKind::Tz1 => EstimatorKind::Hz1,
            TestKind::Tz2 => EstimatorKind::Hz2,
            TestKind::TveR => EstimatorKind::HveR,
            TestKind::TwR => EstimatorKind::HwR,
            TestKind::Ks | TestKind::Ad => return None,
        })
    }

    pub fn uses_rss(&self) -> bool {
        matches!(self, TestKind::TveR | TestKind::TwR)
    }

    /// Entropy statistics reject for small values, KS/AD for large ones.
    pub fn rejects_lower_tail(&self) -> bool {
        self.estimator().is_some()
    }

    /// Whether the statistic uses the window size `m`.
    pub fn uses_window(&self) -> bool {
        self.estimator().is_some()
    }

    pub fn rejects(&self, statistic: f64, critical_value: f64) -> bool {
        if self.rejects_lower_tail() {
            statistic < critical_value
        } else {
            statistic > critical_value
        }
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TestKind {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        TestKind::ALL
            .into_iter()
            .find(|k| k.as_str() == key)
            .ok_or_else(|| EntropyError::domain(format!("unknown test statistic '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub kind: TestKind,
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub reject: bool,
    pub n: usize,
    pub m: usize,
}

impl TestOutcome {
    pub fn new(kind: TestKind, statistic: f64, critical_value: f64, alpha: f64, n: usize, m: usize) -> Self {
        TestOutcome {
            kind,
            statistic,
            critical_value,
            alpha,
            reject: kind.rejects(statistic, critical_value),
            n,
            m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestingWindow {
    pub m: usize,
    /// Set when `n > 100` and the last tabulated window is reused.
    pub extrapolated: bool,
}

/// Recommended window for the normality tests:
/// n ≤ 8 → 1, 9–15 → 2, 16–35 → 3, 36–60 → 4, 61–80 → 5, 81–100 → 6.
pub fn testing_window(n: usize) -> Result<TestingWindow> {
    let m = match n {
        0..=2 => return Err(EntropyError::domain(format!("testing window needs n >= 3, got {n}"))),
        3..=8 => 1,
        9..=15 => 2,
        16..=35 => 3,
        36..=60 => 4,
        61..=80 => 5,
        _ => 6,
    };
    Ok(TestingWindow { m, extrapolated: n > 100 })
}

/// `TW^R` as `exp{(1/n) Σ log(Y_{i+m} - Y_{i-m}) + log(n/2m)} / σ̂`, i.e.
/// `exp(HW^R) / σ̂` multiplied by the constant `(n/2m)·e^{-c}`.
fn tw_r_statistic(obs: &Observation, m: usize) -> Result<f64> {
    let Observation::Diagonal(d) = obs else {
        return Err(EntropyError::domain("tw_r needs an RSS diagonal, got a plain sample"));
    };
    let w = WindowPair::new(d.len(), m)?;
    let n = w.n() as f64;
    let shift = (n / (2.0 * m as f64)).ln() - bias_correction_c(w);
    Ok((hw_r(d, m)? + shift).exp() / sample_sigma(d.values())?)
}

/// Evaluates a statistic. Entropy statistics are `exp(Ĥ)/σ̂` with σ̂ taken
/// from the same values the estimator sees (the diagonal for the RSS
/// kinds). KS and AD compare against the normal law fitted by mean and
/// divisor-n standard deviation; `m` is ignored for them.
pub fn test_statistic(kind: TestKind, obs: &Observation, m: usize) -> Result<f64> {
    match kind {
        TestKind::TwR => tw_r_statistic(obs, m),
        TestKind::Ks | TestKind::Ad => {
            let x = obs.values();
            let (mu, sigma) = (mean(x), sample_sigma(x)?);
            let cdf = |v: f64| normal_cdf(v, mu, sigma);
            if kind == TestKind::Ks {
                ks_statistic(x, cdf)
            } else {
                ad_statistic(x, cdf)
            }
        }
        _ => {
            let est = kind.estimator().expect("entropy statistic");
            let h = estimate(est, obs, m)?;
            Ok(h.exp() / sample_sigma(obs.values())?)
        }
    }
}

fn cdf_values(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    if sorted.is_empty() {
        return Err(EntropyError::domain("empty sample"));
    }
    if sorted.windows(2).any(|p| p[0] > p[1]) {
        return Err(EntropyError::domain("sample must be sorted ascending"));
    }
    sorted
        .iter()
        .map(|&x| {
            let f = cdf(x);
            if (0.0..=1.0).contains(&f) {
                Ok(f)
            } else {
                Err(EntropyError::domain(format!("cdf returned {f} at {x}")))
            }
        })
        .collect()
}

/// Two-sided Kolmogorov–Smirnov distance of a sorted sample from `cdf`.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let f = cdf_values(sorted, cdf)?;
    let n = f.len() as f64;
    Ok(f.iter()
        .enumerate()
        .map(|(i, &fi)| ((i + 1) as f64 / n - fi).max(fi - i as f64 / n))
        .fold(0.0, f64::max))
}

/// Anderson–Darling `A²` of a sorted sample against `cdf`.
pub fn ad_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let f = cdf_values(sorted, cdf)?;
    if let Some(i) = f.iter().position(|&v| v <= 0.0 || v >= 1.0) {
        return Err(EntropyError::domain(format!(
            "cdf equals {} at order statistic {}",
            f[i],
            i + 1
        )));
    }
    let n = f.len();
    let s: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (f[i].ln() + (-f[n - 1 - i]).ln_1p()))
        .sum();
    Ok(-(n as f64) - s / n as f64)
}
