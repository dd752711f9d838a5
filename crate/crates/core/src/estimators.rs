//! Spacing-based entropy estimators.
//!
//! Every estimator targets the differential entropy `H(f) = -∫ f log f`
//! (so `Exp(1)` has entropy 1) and uses 1-based order statistics with the
//! clamping convention `X_(i) = X_(1)` for `i < 1` and `X_(i) = X_(n)` for
//! `i > n` where a formula reaches past the sample.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{EntropyError, Result};
use crate::sample::{clamped, sample_sigma, SortedSample};
use crate::smoothing::RssDiagonal;
use crate::special::{bias_correction_c, harmonic_range, WindowPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// Vasicek
    Hv,
    /// Van Es
    Hve,
    /// Correa local-linear
    Hc,
    /// Ebrahimi boundary-weighted
    He,
    /// Wieczorkowski–Grzegorzewski bias-corrected Vasicek
    Hw,
    /// Kernel-density ratio estimator, equal weights
    Hz1,
    /// Kernel-density ratio estimator, boundary weights
    Hz2,
    /// Van Es form on the smoothed RSS diagonal
    HveR,
    /// Bias-corrected Vasicek form on the smoothed RSS diagonal
    HwR,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 9] = [
        EstimatorKind::Hv,
        EstimatorKind::Hve,
        EstimatorKind::Hc,
        EstimatorKind::He,
        EstimatorKind::Hw,
        EstimatorKind::Hz1,
        EstimatorKind::Hz2,
        EstimatorKind::HveR,
        EstimatorKind::HwR,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Hv => "hv",
            EstimatorKind::Hve => "hve",
            EstimatorKind::Hc => "hc",
            EstimatorKind::He => "he",
            EstimatorKind::Hw => "hw",
            EstimatorKind::Hz1 => "hz1",
            EstimatorKind::Hz2 => "hz2",
            EstimatorKind::HveR => "hve_r",
            EstimatorKind::HwR => "hw_r",
        }
    }

    /// Whether the estimator consumes an RSS diagonal rather than a plain
    /// sample.
    pub fn uses_rss(&self) -> bool {
        matches!(self, EstimatorKind::HveR | EstimatorKind::HwR)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = EntropyError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == key)
            .ok_or_else(|| EntropyError::domain(format!("unknown estimator '{s}'")))
    }
}

/// What an estimator or test statistic is evaluated on.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Sample(SortedSample),
    Diagonal(RssDiagonal),
}

impl Observation {
    pub fn values(&self) -> &[f64] {
        match self {
            Observation::Sample(s) => s.values(),
            Observation::Diagonal(d) => d.values(),
        }
    }

    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.values().is_empty()
    }
}

/// Heuristic window `m = floor(sqrt(n) + 0.5)`, reduced if needed so that
/// `m < n/2`.
pub fn default_window(n: usize) -> Result<usize> {
    if n < 3 {
        return Err(EntropyError::domain(format!("default window needs n >= 3, got {n}")));
    }
    let m = ((n as f64).sqrt() + 0.5).floor() as usize;
    Ok(if 2 * m >= n { (n - 1) / 2 } else { m })
}

/// Mean of `log(scale * (x_(i+m) - x_(i-m)))` over `i = 1..=n` with clamping.
fn mean_log_clamped_spacing(x: &[f64], m: usize, scale: impl Fn(usize) -> f64) -> Result<f64> {
    let n = x.len();
    let m = m as isize;
    let mut acc = 0.0;
    for i in 1..=n {
        let ii = i as isize;
        let d = clamped(x, ii + m) - clamped(x, ii - m);
        if !(d > 0.0) {
            return Err(EntropyError::TiedSpacing { index: i });
        }
        acc += (scale(i) * d).ln();
    }
    Ok(acc / n as f64)
}

/// `sum_{i=1}^{n-m} log(x_(i+m) - x_(i)) / (n - m)`.
fn mean_log_forward_spacing(x: &[f64], m: usize) -> Result<f64> {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..n - m {
        let d = x[i + m] - x[i];
        if !(d > 0.0) {
            return Err(EntropyError::TiedSpacing { index: i + 1 });
        }
        acc += d.ln();
    }
    Ok(acc / (n - m) as f64)
}

fn check_forward_window(n: usize, m: usize) -> Result<()> {
    if m == 0 || m >= n {
        return Err(EntropyError::domain(format!(
            "window size m={m} must satisfy 1 <= m < n (n={n})"
        )));
    }
    Ok(())
}

/// Vasicek: `(1/n) sum log{(n/2m)(X_(i+m) - X_(i-m))}`.
pub fn hv(s: &SortedSample, m: usize) -> Result<f64> {
    let w = WindowPair::new(s.len(), m)?;
    let scale = w.n() as f64 / (2.0 * m as f64);
    mean_log_clamped_spacing(s.values(), m, |_| scale)
}

/// Van Es:
/// `(1/(n-m)) sum_{i=1}^{n-m} log{((n+1)/m)(X_(i+m) - X_(i))}
///   + sum_{k=m}^{n} 1/k + log m - log(n+1)`.
pub fn hve(s: &SortedSample, m: usize) -> Result<f64> {
    let n = s.len();
    check_forward_window(n, m)?;
    let x = s.values();
    let scale = (n as f64 + 1.0) / m as f64;
    let mut acc = 0.0;
    for i in 0..n - m {
        let d = x[i + m] - x[i];
        if !(d > 0.0) {
            return Err(EntropyError::TiedSpacing { index: i + 1 });
        }
        acc += (scale * d).ln();
    }
    Ok(acc / (n - m) as f64 + harmonic_range(m, n) + (m as f64).ln() - (n as f64 + 1.0).ln())
}

/// Correa's local-linear estimator over `2m + 1` clamped points.
pub fn hc(s: &SortedSample, m: usize) -> Result<f64> {
    let w = WindowPair::new(s.len(), m)?;
    let n = w.n();
    let x = s.values();
    let mi = m as isize;
    let mut acc = 0.0;
    for i in 1..=n {
        let ii = i as isize;
        let window = (ii - mi..=ii + mi).map(|j| (j - ii, clamped(x, j)));
        let mean = window.clone().map(|(_, v)| v).sum::<f64>() / (2 * m + 1) as f64;
        let (num, ss) = window.fold((0.0, 0.0), |(num, ss), (offset, v)| {
            let dev = v - mean;
            (num + dev * offset as f64, ss + dev * dev)
        });
        if !(ss > 0.0) {
            return Err(EntropyError::TiedWindow { index: i });
        }
        let a = num / (n as f64 * ss);
        if !(a > 0.0) {
            return Err(EntropyError::TiedWindow { index: i });
        }
        acc += a.ln();
    }
    Ok(-acc / n as f64)
}

/// Boundary weights `c_i` of the Ebrahimi estimator.
pub fn ebrahimi_weights(n: usize, m: usize) -> Vec<f64> {
    let mf = m as f64;
    (1..=n)
        .map(|i| {
            if i <= m {
                1.0 + (i - 1) as f64 / mf
            } else if i <= n - m {
                2.0
            } else {
                1.0 + (n - i) as f64 / mf
            }
        })
        .collect()
}

/// Ebrahimi: `(1/n) sum log{(n/(c_i m))(X_(i+m) - X_(i-m))}`.
pub fn he(s: &SortedSample, m: usize) -> Result<f64> {
    let w = WindowPair::new(s.len(), m)?;
    let c = ebrahimi_weights(w.n(), m);
    let n = w.n() as f64;
    let mf = m as f64;
    mean_log_clamped_spacing(s.values(), m, |i| n / (c[i - 1] * mf))
}

/// `HW = HV - log n + log 2m + c`.
pub fn hw(s: &SortedSample, m: usize) -> Result<f64> {
    let w = WindowPair::new(s.len(), m)?;
    let n = w.n() as f64;
    Ok(hv(s, m)? - n.ln() + (2.0 * m as f64).ln() + bias_correction_c(w))
}

/// Gaussian kernel density estimate with bandwidth `1.06 σ̂ n^{-1/5}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeModel {
    sample: Vec<f64>,
    bandwidth: f64,
    sigma_hat: f64,
}

impl KdeModel {
    pub fn new(sample: &[f64]) -> Result<Self> {
        let sigma_hat = sample_sigma(sample)?;
        let n = sample.len() as f64;
        Ok(KdeModel {
            sample: sample.to_vec(),
            bandwidth: 1.06 * sigma_hat * n.powf(-0.2),
            sigma_hat,
        })
    }

    /// Model with an explicit bandwidth; `sigma_hat` is still recorded when
    /// the sample allows it (single-point samples report 0).
    pub fn with_bandwidth(sample: &[f64], bandwidth: f64) -> Result<Self> {
        if sample.is_empty() {
            return Err(EntropyError::domain("kernel density needs a non-empty sample"));
        }
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return Err(EntropyError::domain(format!("bandwidth must be positive, got {bandwidth}")));
        }
        Ok(KdeModel {
            sample: sample.to_vec(),
            bandwidth,
            sigma_hat: sample_sigma(sample).unwrap_or(0.0),
        })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn sigma_hat(&self) -> f64 {
        self.sigma_hat
    }

    pub fn density(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let norm = 1.0 / ((2.0 * PI).sqrt() * h * self.sample.len() as f64);
        let sum: f64 = self
            .sample
            .iter()
            .map(|&xj| {
                let z = (x - xj) / h;
                (-0.5 * z * z).exp()
            })
            .sum();
        norm * sum
    }
}

pub fn kde_at(model: &KdeModel, x: f64) -> f64 {
    model.density(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HzVariant {
    EqualWeights,
    BoundaryWeights,
}

/// Raw boundary weights `{m+i-1, 2m, n-i+m}` and their total. Dividing each
/// by the total gives weights summing to one.
pub fn hz_raw_weights(n: usize, m: usize) -> (Vec<u64>, u64) {
    let raw: Vec<u64> = (1..=n)
        .map(|i| {
            if i <= m {
                (m + i - 1) as u64
            } else if i <= n - m {
                (2 * m) as u64
            } else {
                (n - i + m) as u64
            }
        })
        .collect();
    let total = raw.iter().sum();
    (raw, total)
}

pub fn hz_weights(n: usize, m: usize) -> Vec<f64> {
    let (raw, total) = hz_raw_weights(n, m);
    raw.into_iter().map(|r| r as f64 / total as f64).collect()
}

/// The ratios `b_i` of clamped `2m`-spacings to the trapezoid integral of the
/// kernel density between the same order statistics.
pub fn hz_ratios(s: &SortedSample, m: usize) -> Result<Vec<f64>> {
    let w = WindowPair::new(s.len(), m)?;
    let n = w.n();
    let x = s.values();
    let kde = KdeModel::new(x)?;
    let f: Vec<f64> = x.iter().map(|&v| kde.density(v)).collect();
    // trapezoid areas of each gap [X_(j), X_(j+1)], j = 1..n-1
    let areas: Vec<f64> = (0..n - 1)
        .map(|j| 0.5 * (f[j + 1] + f[j]) * (x[j + 1] - x[j]))
        .collect();
    let mi = m as isize;
    (1..=n)
        .map(|i| {
            let ii = i as isize;
            let spacing = clamped(x, ii + mi) - clamped(x, ii - mi);
            if !(spacing > 0.0) {
                return Err(EntropyError::TiedSpacing { index: i });
            }
            let k1 = if i <= m { 1 } else { i - m };
            let k2 = if i <= n - m { i + m } else { n };
            let denom: f64 = areas[k1 - 1..k2 - 1].iter().sum();
            if !(denom > 0.0) {
                return Err(EntropyError::DegenerateDensity { index: i });
            }
            Ok(spacing / denom)
        })
        .collect()
}

pub fn hz(s: &SortedSample, m: usize, variant: HzVariant) -> Result<f64> {
    let b = hz_ratios(s, m)?;
    let n = b.len();
    Ok(match variant {
        HzVariant::EqualWeights => b.iter().map(|v| v.ln()).sum::<f64>() / n as f64,
        HzVariant::BoundaryWeights => hz_weights(n, m)
            .iter()
            .zip(&b)
            .map(|(w, v)| w * v.ln())
            .sum(),
    })
}

/// `(1/(n-m)) sum_{i=1}^{n-m} log(Y_{i+m} - Y_i) + sum_{k=m}^{n} 1/k`.
pub fn hve_r(d: &RssDiagonal, m: usize) -> Result<f64> {
    let n = d.len();
    check_forward_window(n, m)?;
    Ok(mean_log_forward_spacing(d.values(), m)? + harmonic_range(m, n))
}

/// `(1/n) sum_{i=1}^{n} log(Y_{i+m} - Y_{i-m}) + c` with clamping.
pub fn hw_r(d: &RssDiagonal, m: usize) -> Result<f64> {
    let w = WindowPair::new(d.len(), m)?;
    Ok(mean_log_clamped_spacing(d.values(), m, |_| 1.0)? + bias_correction_c(w))
}

/// Dispatches on the estimator kind. Plain-sample estimators accept a
/// diagonal too (its values are treated as an ordinary sample); the RSS
/// estimators require a diagonal.
pub fn estimate(kind: EstimatorKind, obs: &Observation, m: usize) -> Result<f64> {
    match (kind, obs) {
        (EstimatorKind::HveR, Observation::Diagonal(d)) => hve_r(d, m),
        (EstimatorKind::HwR, Observation::Diagonal(d)) => hw_r(d, m),
        (EstimatorKind::HveR | EstimatorKind::HwR, Observation::Sample(_)) => Err(
            EntropyError::domain(format!("{kind} needs an RSS diagonal, got a plain sample")),
        ),
        (_, Observation::Sample(s)) => estimate_plain(kind, s, m),
        (_, Observation::Diagonal(d)) => estimate_plain(kind, &d.as_sample()?, m),
    }
}

fn estimate_plain(kind: EstimatorKind, s: &SortedSample, m: usize) -> Result<f64> {
    match kind {
        EstimatorKind::Hv => hv(s, m),
        EstimatorKind::Hve => hve(s, m),
        EstimatorKind::Hc => hc(s, m),
        EstimatorKind::He => he(s, m),
        EstimatorKind::Hw => hw(s, m),
        EstimatorKind::Hz1 => hz(s, m, HzVariant::EqualWeights),
        EstimatorKind::Hz2 => hz(s, m, HzVariant::BoundaryWeights),
        EstimatorKind::HveR | EstimatorKind::HwR => unreachable!("handled by estimate"),
    }
}
