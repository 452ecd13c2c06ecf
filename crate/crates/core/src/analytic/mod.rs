//! Closed-form moments and the exact distribution of the distance between two
//! uniform points of `[0, 1]^n`.
//!
//! Per coordinate, `|X - Y|` has density `2(1 - z)` on `[0, 1]`, mean `1/3`
//! and variance `1/18`. The `n`-dimensional distance is the sum of `n`
//! independent copies, so its exact density is the `n`-fold convolution of
//! that triangle, a piecewise polynomial of degree `2n - 1` on the unit
//! segments of `[0, n]`.

mod normal;
mod piecewise;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use normal::{normal_cdf, normal_pdf, NormalApprox};
pub use piecewise::{PiecewiseError, PiecewisePolynomial};

/// Largest dimension served by the exact convolution engine.
pub const MAX_EXACT_DIM: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("exact density is supported up to dimension {max}, got {dim}")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("variance must be positive and finite, got {0}")]
    InvalidVariance(f64),
}

/// `E[D] = n/3`.
pub fn theoretical_mean(dim: usize) -> f64 {
    dim as f64 / 3.0
}

/// `Var(D) = n/18`.
pub fn theoretical_variance(dim: usize) -> f64 {
    dim as f64 / 18.0
}

/// Density of `|X - Y|` for independent uniforms: `2(1 - z)` on `[0, 1]`.
pub fn single_dim_density(z: f64) -> f64 {
    if (0.0..=1.0).contains(&z) {
        2.0 * (1.0 - z)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalMoments {
    pub dim: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

/// Skewness of one coordinate term: `mu3 / sigma^3 = (1/135) / (1/18)^(3/2)`.
pub const SINGLE_DIM_SKEWNESS: f64 = 2.0 * std::f64::consts::SQRT_2 / 5.0;
/// Excess kurtosis of one coordinate term: `(1/135) / (1/18)^2 - 3`.
pub const SINGLE_DIM_EXCESS_KURTOSIS: f64 = -0.6;

/// Closed-form moments. Skewness and excess kurtosis follow from cumulant
/// additivity: `kappa_r` scales by `n`, so skewness scales by `1/sqrt(n)` and
/// excess kurtosis by `1/n`.
pub fn theoretical_moments(dim: usize) -> Result<TheoreticalMoments, AnalyticError> {
    if dim == 0 {
        return Err(AnalyticError::ZeroDimension);
    }
    let n = dim as f64;
    Ok(TheoreticalMoments {
        dim,
        mean: theoretical_mean(dim),
        variance: theoretical_variance(dim),
        skewness: SINGLE_DIM_SKEWNESS / n.sqrt(),
        excess_kurtosis: SINGLE_DIM_EXCESS_KURTOSIS / n,
    })
}

/// Exact density of the distance for `dim` coordinates.
pub fn exact_density(dim: usize) -> Result<PiecewisePolynomial, AnalyticError> {
    if dim == 0 {
        return Err(AnalyticError::ZeroDimension);
    }
    if dim > MAX_EXACT_DIM {
        return Err(AnalyticError::UnsupportedDimension {
            dim,
            max: MAX_EXACT_DIM,
        });
    }
    let mut segments = vec![vec![2.0, -2.0]];
    for _ in 1..dim {
        segments = piecewise::convolve_with_triangle(&segments);
    }
    let breakpoints = (0..=dim).map(|k| k as f64).collect();
    Ok(PiecewisePolynomial::new(breakpoints, segments).expect("integer breakpoints are valid"))
}

pub fn exact_cdf(density: &PiecewisePolynomial, x: f64) -> f64 {
    density.integral_to(x)
}

/// Mean, variance, skewness and excess kurtosis by exact polynomial
/// integration. `dim` is read off the right end of the support.
pub fn moments_of(density: &PiecewisePolynomial) -> TheoreticalMoments {
    let mass = density.total_integral();
    let mean = density.shifted_moment(0.0, 1) / mass;
    let variance = density.shifted_moment(mean, 2) / mass;
    let mu3 = density.shifted_moment(mean, 3) / mass;
    let mu4 = density.shifted_moment(mean, 4) / mass;
    TheoreticalMoments {
        dim: density.support().1.round() as usize,
        mean,
        variance,
        skewness: mu3 / variance.powf(1.5),
        excess_kurtosis: mu4 / (variance * variance) - 3.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact,
    NormalOnly,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::NormalOnly => "normal_only",
        }
    }
}

/// The best available reference distribution for a dimension: exact up to
/// [`MAX_EXACT_DIM`], the Gaussian limit above it.
#[derive(Debug, Clone)]
pub enum DistanceDistribution {
    Exact(PiecewisePolynomial),
    Normal(NormalApprox),
}

impl DistanceDistribution {
    pub fn for_dim(dim: usize) -> Result<Self, AnalyticError> {
        match exact_density(dim) {
            Ok(d) => Ok(Self::Exact(d)),
            Err(AnalyticError::UnsupportedDimension { .. }) => {
                Ok(Self::Normal(NormalApprox::for_dim(dim)?))
            }
            Err(e) => Err(e),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Self::Exact(_) => Backend::Exact,
            Self::Normal(_) => Backend::NormalOnly,
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            Self::Exact(d) => d.eval(x),
            Self::Normal(n) => n.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Exact(d) => d.integral_to(x),
            Self::Normal(n) => n.cdf(x),
        }
    }
}

/// `sup_x |exact_cdf(x) - normal_cdf(x)|` for `N(n/3, n/18)`.
///
/// The sup is taken over a uniform grid of `grid` points on `[0, n]`, refined
/// by golden-section search around the best grid point. Both ends of the
/// support are included: outside `[0, n]` the gap is monotone toward the ends
/// (exact CDF is flat at 0 or 1, normal CDF moves away from it).
pub fn clt_sup_distance(dim: usize, grid: usize) -> Result<f64, AnalyticError> {
    let density = exact_density(dim)?;
    let normal = NormalApprox::for_dim(dim)?;
    let gap = |x: f64| (density.integral_to(x) - normal.cdf(x)).abs();
    let n = dim as f64;
    let grid = grid.max(2);
    let step = n / (grid - 1) as f64;
    let (mut best_x, mut best) = (0.0, gap(0.0));
    for i in 1..grid {
        let x = i as f64 * step;
        let g = gap(x);
        if g > best {
            best = g;
            best_x = x;
        }
    }
    let (mut a, mut b) = ((best_x - step).max(0.0), (best_x + step).min(n));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if gap(c) > gap(d) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best.max(gap(0.5 * (a + b))))
}
