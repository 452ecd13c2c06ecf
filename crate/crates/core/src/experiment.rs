//! Dimension sweep comparing sampled distances with the closed forms and the
//! reference distributions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{self, Backend, DistanceDistribution, NormalApprox};
use crate::estimation::{
    build_histogram, ks_critical_01, ks_critical_05, ks_statistic, summarize, EmpiricalCdf,
    EstimationError, Histogram, MomentSummary,
};
use crate::metric::distance_values;
use crate::sampling::{mix_seed, sample_distances, SampleSpec};

pub const DEFAULT_DIMS: [usize; 8] = [1, 2, 3, 5, 10, 20, 50, 100];
pub const DEFAULT_PAIRS: usize = 10_000;
pub const DEFAULT_BINS: usize = 30;
/// Pass band for the sample mean, in standard errors of `n/18 / N`.
pub const MEAN_BAND_SE: f64 = 4.0;
/// Pass band for the population variance, relative to `n/18`.
pub const VARIANCE_BAND_REL: f64 = 0.05;
/// Significance used for pass/fail flags on KS columns.
pub const DEFAULT_SIGNIFICANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("at least one dimension is required")]
    NoDimensions,
    #[error("invalid dimension {0}: dimensions must be positive")]
    InvalidDimension(usize),
    #[error("invalid pair count {0}: need at least 2 pairs")]
    TooFewPairs(usize),
    #[error("invalid bin count {0}: need at least 1 bin")]
    InvalidBins(usize),
    #[error("cannot compare an empty summary to theory")]
    EmptySummary,
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error(transparent)]
    Analytic(#[from] analytic::AnalyticError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dims: Vec<usize>,
    pub num_pairs: usize,
    pub seed: u64,
    pub bins: usize,
    pub emit_histograms: bool,
    pub emit_gof: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dims: DEFAULT_DIMS.to_vec(),
            num_pairs: DEFAULT_PAIRS,
            seed: 0,
            bins: DEFAULT_BINS,
            emit_histograms: false,
            emit_gof: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.dims.is_empty() {
            return Err(ExperimentError::NoDimensions);
        }
        if let Some(&d) = self.dims.iter().find(|&&d| d == 0) {
            return Err(ExperimentError::InvalidDimension(d));
        }
        if self.num_pairs < 2 {
            return Err(ExperimentError::TooFewPairs(self.num_pairs));
        }
        if self.bins == 0 {
            return Err(ExperimentError::InvalidBins(self.bins));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub backend: Backend,
    /// KS distance to the exact CDF; absent when only the normal backend served.
    pub ks_exact: Option<f64>,
    pub ks_normal: f64,
    pub ks_critical_05: f64,
    pub ks_critical_01: f64,
}

impl GoodnessOfFit {
    /// KS against the best available reference, at significance 0.01.
    pub fn passes(&self) -> bool {
        self.ks_exact.unwrap_or(self.ks_normal) <= self.ks_critical_01
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dim: usize,
    pub empirical_mean: f64,
    pub theoretical_mean: f64,
    pub empirical_variance: f64,
    pub empirical_variance_unbiased: f64,
    pub theoretical_variance: f64,
    pub mean_dev_se: f64,
    pub var_dev_rel: f64,
    pub mean_in_band: bool,
    pub variance_in_band: bool,
    pub gof: Option<GoodnessOfFit>,
    pub histogram: Option<Histogram>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub artifact_version: String,
    pub seed: u64,
    pub num_pairs: usize,
    pub variance_convention: String,
    pub mean_band_se: f64,
    pub variance_band_rel: f64,
    pub significance: f64,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
}

/// `(mean - n/3) / sqrt((n/18) / N)` and `(variance - n/18) / (n/18)`.
pub fn compare_to_theory(
    summary: &MomentSummary,
    dim: usize,
) -> Result<(f64, f64), ExperimentError> {
    let (Some(mean), Some(var)) = (summary.mean(), summary.variance_population()) else {
        return Err(ExperimentError::EmptySummary);
    };
    if dim == 0 {
        return Err(ExperimentError::InvalidDimension(dim));
    }
    let theory_mean = analytic::theoretical_mean(dim);
    let theory_var = analytic::theoretical_variance(dim);
    let se = (theory_var / summary.count() as f64).sqrt();
    Ok(((mean - theory_mean) / se, (var - theory_var) / theory_var))
}

/// Substream family for one row. Keyed by the dimension value so that a row
/// never depends on its position in the sweep.
pub fn row_seed(seed: u64, dim: usize) -> u64 {
    mix_seed(seed, dim as u64)
}

fn run_row(config: &ExperimentConfig, dim: usize) -> Result<ReportRow, ExperimentError> {
    let spec = SampleSpec::new(dim, config.num_pairs, row_seed(config.seed, dim))
        .expect("validated config");
    let values = distance_values(&sample_distances(&spec));
    let summary = summarize(&values);
    let (mean_dev_se, var_dev_rel) = compare_to_theory(&summary, dim)?;

    let histogram = if config.emit_histograms {
        Some(build_histogram(&values, config.bins, true)?)
    } else {
        None
    };

    let gof = if config.emit_gof {
        let ecdf = EmpiricalCdf::new(values)?;
        let reference = DistanceDistribution::for_dim(dim)?;
        let normal = NormalApprox::for_dim(dim)?;
        let ks_exact = match &reference {
            DistanceDistribution::Exact(d) => Some(ks_statistic(&ecdf, |x| d.integral_to(x))),
            DistanceDistribution::Normal(_) => None,
        };
        Some(GoodnessOfFit {
            backend: reference.backend(),
            ks_exact,
            ks_normal: ks_statistic(&ecdf, |x| normal.cdf(x)),
            ks_critical_05: ks_critical_05(config.num_pairs),
            ks_critical_01: ks_critical_01(config.num_pairs),
        })
    } else {
        None
    };

    Ok(ReportRow {
        dim,
        empirical_mean: summary.mean().unwrap(),
        theoretical_mean: analytic::theoretical_mean(dim),
        empirical_variance: summary.variance_population().unwrap(),
        empirical_variance_unbiased: summary.variance_unbiased().unwrap(),
        theoretical_variance: analytic::theoretical_variance(dim),
        mean_dev_se,
        var_dev_rel,
        mean_in_band: mean_dev_se.abs() <= MEAN_BAND_SE,
        variance_in_band: var_dev_rel.abs() <= VARIANCE_BAND_REL,
        gof,
        histogram,
    })
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    config.validate()?;
    let rows = config
        .dims
        .par_iter()
        .map(|&dim| run_row(config, dim))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentReport {
        metadata: ReportMetadata {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            num_pairs: config.num_pairs,
            variance_convention: "population".to_string(),
            mean_band_se: MEAN_BAND_SE,
            variance_band_rel: VARIANCE_BAND_REL,
            significance: DEFAULT_SIGNIFICANCE,
            config: config.clone(),
        },
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compare_exact_theory_is_zero() {
        let s = MomentSummary::from_parts(10_000, 1.0 / 3.0, 1.0 / 18.0);
        let (m, v) = compare_to_theory(&s, 1).unwrap();
        assert!(m.abs() < 1e-12 && v.abs() < 1e-12);
    }

    #[test]
    fn compare_flags_anomalous_dim_one_row() {
        let s = MomentSummary::from_parts(10_000, 0.31435, 0.05439);
        let (m, _) = compare_to_theory(&s, 1).unwrap();
        // (0.31435 - 1/3) / sqrt(1/18 / 1e4)
        let oracle = (0.31435 - 1.0 / 3.0) / (1.0f64 / 18.0 / 1e4).sqrt();
        assert!((m - oracle).abs() < 1e-12);
        assert!((m + 8.05).abs() < 0.01, "{m}");
    }

    #[test]
    fn compare_dim_ten_row_is_inside_band() {
        let s = MomentSummary::from_parts(10_000, 3.32831, 0.55973);
        let (m, v) = compare_to_theory(&s, 10).unwrap();
        let oracle = (3.32831 - 10.0 / 3.0) / (10.0f64 / 18.0 / 1e4).sqrt();
        assert!((m - oracle).abs() < 1e-12);
        assert!((m + 0.674).abs() < 0.001, "{m}");
        assert!(m.abs() <= MEAN_BAND_SE);
        assert!(v.abs() <= VARIANCE_BAND_REL);
    }

    #[test]
    fn compare_rejects_empty() {
        assert_eq!(
            compare_to_theory(&MomentSummary::new(), 1),
            Err(ExperimentError::EmptySummary)
        );
    }

    #[test]
    fn config_validation() {
        let ok = ExperimentConfig::default();
        assert!(ok.validate().is_ok());
        let bad = |f: fn(&mut ExperimentConfig)| {
            let mut c = ExperimentConfig::default();
            f(&mut c);
            c.validate().unwrap_err()
        };
        assert_eq!(bad(|c| c.dims.clear()), ExperimentError::NoDimensions);
        assert_eq!(
            bad(|c| c.dims = vec![3, 0]),
            ExperimentError::InvalidDimension(0)
        );
        assert_eq!(bad(|c| c.num_pairs = 1), ExperimentError::TooFewPairs(1));
        assert_eq!(bad(|c| c.bins = 0), ExperimentError::InvalidBins(0));
    }

    #[test]
    fn dim_three_row_lands_in_bands() {
        let config = ExperimentConfig {
            dims: vec![3],
            ..ExperimentConfig::default()
        };
        let report = run_experiment(&config).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.theoretical_mean, 1.0);
        assert!(row.mean_in_band && row.variance_in_band, "{row:?}");
    }

    #[test]
    fn rows_do_not_depend_on_order() {
        let a = ExperimentConfig {
            dims: vec![2, 40, 7],
            num_pairs: 3000,
            seed: 9,
            emit_gof: true,
            emit_histograms: true,
            ..ExperimentConfig::default()
        };
        let b = ExperimentConfig {
            dims: vec![7, 2, 40],
            ..a.clone()
        };
        let ra = run_experiment(&a).unwrap();
        let rb = run_experiment(&b).unwrap();
        assert_eq!(ra.rows[0], rb.rows[1]);
        assert_eq!(ra.rows[1], rb.rows[2]);
        assert_eq!(ra.rows[2], rb.rows[0]);
        let gof = ra.rows[1].gof.as_ref().unwrap();
        assert_eq!(gof.backend, Backend::NormalOnly);
        assert!(gof.ks_exact.is_none());
        assert_eq!(ra.rows[0].gof.as_ref().unwrap().backend, Backend::Exact);
    }
}
