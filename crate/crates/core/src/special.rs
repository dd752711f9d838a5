//! Integer-argument digamma and the bias-correction constant used by the
//! corrected Vasicek estimators.

use crate::error::{EntropyError, Result};
/// Euler–Mascheroni constant.
/// Euler–Mascheroni constant, 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Sample size together with a spacing half-width, validated so that
/// `1 <= m < n / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowPair {
    n: usize,
    m: usize,
}

impl WindowPair {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(EntropyError::domain("window size m must be positive"));
        }
        // m < n/2  <=>  2m < n
        if 2 * m >= n {
            return Err(EntropyError::domain(format!(
                "window size m={m} must be smaller than n/2 (n={n})"
            )));
        }
        Ok(WindowPair { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Partial harmonic sum `sum_{i=lo}^{hi} 1/i`; zero when `lo > hi`.
pub fn harmonic_range(lo: usize, hi: usize) -> f64 {
    if lo > hi {
        return 0.0;
    }
    // Summed from the small terms upwards to limit round-off.
    (lo..=hi).rev().map(|i| 1.0 / i as f64).sum()
}

/// `Psi(k) = sum_{i=1}^{k-1} 1/i - gamma` for positive integers `k`.
pub fn digamma_int(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(EntropyError::domain("digamma_int requires k >= 1"));
    }
    Ok(harmonic_range(1, k - 1) - EULER_GAMMA)
}

/// The constant `c` that turns the Vasicek estimator into its bias-corrected
/// form:
///
/// `c = -(1 - 2m/n) Psi(2m) + Psi(n+1) - (2/n) sum_{i=1}^{m} Psi(i+m-1)`.
///
/// Depends on `(n, m)` only.
pub fn bias_correction_c(w: WindowPair) -> f64 {
    let n = w.n() as f64;
    let m = w.m();
    let psi = |k: usize| harmonic_range(1, k - 1) - EULER_GAMMA;
    let tail: f64 = (1..=m).map(|i| psi(i + m - 1)).sum();
    -(1.0 - 2.0 * m as f64 / n) * psi(2 * m) + psi(w.n() + 1) - 2.0 / n * tail
}
