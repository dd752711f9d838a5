//! Spacing-based entropy estimators, ranked-set-sampling smoothing and the
//! entropy normality tests built on them.

pub mod dataset;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod monte_carlo;
pub mod normality;
pub mod report;
pub mod rng;
pub mod sample;
pub mod smoothing;
pub mod special;

pub use distributions::DistributionSpec;
pub use error::{EntropyError, Result};
pub use estimators::{default_window, estimate, EstimatorKind, Observation};
pub use monte_carlo::{McConfig, McReport, SamplingMode};
pub use normality::{test_statistic, TestKind};
pub use rng::SeededStream;
pub use sample::SortedSample;
pub use smoothing::{RssDiagonal, RssSource};
pub use special::WindowPair;
