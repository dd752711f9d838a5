//! Moving-average smoothing of order-statistic paths and construction of the
//! ranked-set-sampling diagonal.
//!
//! For an odd width `w = 2h + 1` the smoothed path of a sorted sample
//! `X_1 <= ... <= X_n` is
//!
//! * `Y_i = (X_1 + ... + X_i) / i` for `1 <= i <= h`,
//! * `Y_i = (X_{i-h} + ... + X_{i+h}) / w` for `h + 1 <= i <= n - h`,
//! * `Y_i = (X_i + ... + X_n) / (n - i + 1)` for `n - h + 1 <= i <= n`.
//!
//! The RSS diagonal takes `n` independent samples of size `n`, smooths each
//! sorted row, keeps element `k` of row `k`, and sorts those `n` values.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EntropyError, Result};
use crate::rng::SeededStream;
use crate::sample::SortedSample;

/// Smoothing width used throughout unless a caller asks otherwise.
pub const DEFAULT_WIDTH: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedPath {
    values: Vec<f64>,
    width: usize,
}

impl SmoothedPath {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// Where the rows of an RSS grid came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RssSource {
    /// `n` independent samples of size `n`.
    FullGrid,
    /// `n` resamples with replacement of one observed sample.
    Bootstrap,
}

impl RssSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            RssSource::FullGrid => "full",
            RssSource::Bootstrap => "bootstrap",
        }
    }
}

/// Sorted diagonal `Y^R_1 <= ... <= Y^R_n` of a smoothed RSS grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RssDiagonal {
    values: Vec<f64>,
    source: RssSource,
}

impl RssDiagonal {
    /// Wraps already-computed diagonal values; they are sorted here.
    pub fn from_values(mut values: Vec<f64>, source: RssSource) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EntropyError::domain("non-finite value in RSS diagonal"));
        }
        values.sort_by(f64::total_cmp);
        Ok(RssDiagonal { values, source })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> RssSource {
        self.source
    }

    /// The diagonal viewed as an ordinary sorted sample.
    pub fn as_sample(&self) -> Result<SortedSample> {
        SortedSample::new(self.values.clone())
    }
}

pub(crate) fn check_width(n: usize, w: usize) -> Result<()> {
    if n < 3 {
        return Err(EntropyError::domain(format!("smoothing needs n >= 3, got {n}")));
    }
    if w < 3 || w.is_multiple_of(2) {
        return Err(EntropyError::domain(format!("smoothing width must be odd and >= 3, got {w}")));
    }
    if w >= n {
        return Err(EntropyError::domain(format!(
            "smoothing width w={w} must be smaller than n={n}"
        )));
    }
    Ok(())
}

/// Smoothed value at 1-based position `i` of a sorted slice. Width must
/// already be validated.
fn smoothed_at(x: &[f64], w: usize, i: usize) -> f64 {
    let n = x.len();
    let h = (w - 1) / 2;
    let (lo, hi) = if i <= h {
        (1, i)
    } else if i <= n - h {
        (i - h, i + h)
    } else {
        (i, n)
    };
    let sum: f64 = x[lo - 1..hi].iter().sum();
    sum / (hi - lo + 1) as f64
}

pub fn moving_average_smooth(s: &SortedSample, w: usize) -> Result<SmoothedPath> {
    let x = s.values();
    check_width(x.len(), w)?;
    let values = (1..=x.len()).map(|i| smoothed_at(x, w, i)).collect();
    Ok(SmoothedPath { values, width: w })
}

fn diagonal_from_rows(rows: Vec<Vec<f64>>, w: usize, source: RssSource) -> Result<RssDiagonal> {
    let n = rows.len();
    if let Some((k, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(EntropyError::domain(format!(
            "RSS grid must be {n}x{n}; row {} has {} values",
            k + 1,
            row.len()
        )));
    }
    check_width(n, w)?;
    let mut diag = Vec::with_capacity(n);
    for (k, mut row) in rows.into_iter().enumerate() {
        if row.iter().any(|v| !v.is_finite()) {
            return Err(EntropyError::domain(format!("non-finite value in grid row {}", k + 1)));
        }
        row.sort_by(f64::total_cmp);
        diag.push(smoothed_at(&row, w, k + 1));
    }
    RssDiagonal::from_values(diag, source)
}

/// Sorts and smooths every row of an `n x n` grid and returns the sorted
/// diagonal. Rows may be in any order internally.
pub fn build_rss_diagonal(grid: &[Vec<f64>], w: usize) -> Result<RssDiagonal> {
    diagonal_from_rows(grid.to_vec(), w, RssSource::FullGrid)
}

/// Same as [`build_rss_diagonal`] but tags the result as bootstrap-derived.
pub fn build_bootstrap_diagonal(grid: &[Vec<f64>], w: usize) -> Result<RssDiagonal> {
    diagonal_from_rows(grid.to_vec(), w, RssSource::Bootstrap)
}

/// Consuming variant used by the Monte Carlo engine.
pub(crate) fn diagonal_from_owned_rows(
    rows: Vec<Vec<f64>>,
    w: usize,
    source: RssSource,
) -> Result<RssDiagonal> {
    diagonal_from_rows(rows, w, source)
}

/// `n` rows of `n` draws with replacement from `s`. Row `k` (0-based) is
/// drawn from stream `(seed, k)`, so rows can be generated in parallel.
pub fn bootstrap_grid(s: &[f64], seed: u64) -> Result<Vec<Vec<f64>>> {
    let n = s.len();
    if n < 3 {
        return Err(EntropyError::domain(format!("bootstrap grid needs n >= 3, got {n}")));
    }
    let grid = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = SeededStream::new(seed, k as u64).rng();
            (0..n).map(|_| s[rng.random_range(0..n)]).collect()
        })
        .collect();
    Ok(grid)
}

/// Bootstrap diagonal of a single observed sample.
pub fn bootstrap_diagonal(s: &[f64], w: usize, seed: u64) -> Result<RssDiagonal> {
    let grid = bootstrap_grid(s, seed)?;
    diagonal_from_rows(grid, w, RssSource::Bootstrap)
}
