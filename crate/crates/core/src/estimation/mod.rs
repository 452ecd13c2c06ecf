//! Empirical statistics over sampled distances: moments, histograms, and
//! Kolmogorov–Smirnov distances to a reference CDF.

mod histogram;
mod ks;
mod moments;

use thiserror::Error;

pub use histogram::{build_histogram, build_histogram_with_edges, Histogram};
pub use ks::{
    ks_critical_01, ks_critical_05, ks_statistic, ks_statistic_of, EmpiricalCdf, KS_COEFF_01,
    KS_COEFF_05,
};
pub use moments::{summarize, MomentSummary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EstimationError {
    #[error("sample is empty")]
    EmptySample,
    #[error("observation {0} is not finite")]
    NonFinite(usize),
    #[error("histogram needs at least one bin")]
    ZeroBins,
    #[error("histogram edges must be finite and strictly increasing")]
    BadEdges,
}
