use crate::error::{EntropyError, Result};

/// A finite real sample held in nondecreasing order, `n >= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sorts `values` and wraps them. Rejects NaN/infinite values and
    /// samples shorter than three.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(EntropyError::domain(format!(
                "sample needs at least 3 values, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(EntropyError::domain(format!("non-finite value {bad} in sample")));
        }
        values.sort_by(f64::total_cmp);
        Ok(SortedSample { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// 1-based order statistic with the boundary clamping used by the
    /// spacing estimators: positions below 1 map to the minimum, positions
    /// above n to the maximum.
    pub fn clamped(&self, i: isize) -> f64 {
        clamped(&self.values, i)
    }
}

pub(crate) fn clamped(values: &[f64], i: isize) -> f64 {
    let n = values.len() as isize;
    let idx = i.clamp(1, n) - 1;
    values[idx as usize]
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Divisor-n standard deviation `sqrt((1/n) sum (x_i - mean)^2)`.
pub fn sample_sigma(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(EntropyError::DegenerateSample(
            "standard deviation needs at least 2 values".into(),
        ));
    }
    let mu = mean(values);
    let ss: f64 = values.iter().map(|x| (x - mu) * (x - mu)).sum();
    let sigma = (ss / values.len() as f64).sqrt();
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(EntropyError::DegenerateSample("all values are equal".into()));
    }
    Ok(sigma)
}
