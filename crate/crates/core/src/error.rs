use thiserror::Error;

pub type Result<T> = std::result::Result<T, EntropyError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("domain error: {0}")]
    Domain(String),

    /// A spacing used inside a logarithm is zero. `index` is the 1-based
    /// order-statistic position whose spacing vanished.
    #[error("zero spacing at order statistic {index}")]
    TiedSpacing { index: usize },

    /// Every value in the local window around `index` is identical.
    #[error("all values tied in the local window around order statistic {index}")]
    TiedWindow { index: usize },

    #[error("kernel density trapezoid sum vanished at order statistic {index}")]
    DegenerateDensity { index: usize },

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("monte carlo aborted: {failed} of {total} replicates failed ({reason})")]
    TooManyFailures {
        failed: usize,
        total: usize,
        reason: String,
    },
}

impl EntropyError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EntropyError::Domain(msg.into())
    }

    /// Failures caused by ties or degenerate draws; a Monte Carlo replicate
    /// hitting one of these is redrawn from the next substream.
    pub fn is_degenerate_draw(&self) -> bool {
        matches!(
            self,
            EntropyError::TiedSpacing { .. }
                | EntropyError::TiedWindow { .. }
                | EntropyError::DegenerateDensity { .. }
                | EntropyError::DegenerateSample(_)
        )
    }

    /// Short stable name used by the CLI when reporting computation errors.
    pub fn name(&self) -> &'static str {
        match self {
            EntropyError::Domain(_) => "DomainError",
            EntropyError::TiedSpacing { .. } => "TiedSpacing",
            EntropyError::TiedWindow { .. } => "TiedWindow",
            EntropyError::DegenerateDensity { .. } => "DegenerateDensity",
            EntropyError::DegenerateSample(_) => "DegenerateSample",
            EntropyError::TooManyFailures { .. } => "TooManyFailures",
        }
    }
}
