//! Points in the unit hypercube and the Manhattan (L1) distance between them.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("a point needs at least one coordinate")]
    EmptyPoint,
    #[error("coordinate {index} is {value}, outside the unit interval [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("dimension mismatch: left point has {left} coordinates, right point has {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("pair {index}: dimension mismatch ({left} vs {right} coordinates)")]
    PairMismatch {
        index: usize,
        left: usize,
        right: usize,
    },
}

/// A point of `[0, 1]^n`, `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting empty vectors and coordinates outside `[0, 1]`
    /// (including NaN). Nothing is clamped.
    pub fn new(coords: Vec<f64>) -> Result<Self, MetricError> {
        if coords.is_empty() {
            return Err(MetricError::EmptyPoint);
        }
        if let Some((index, &value)) = coords
            .iter()
            .enumerate()
            .find(|(_, c)| !(0.0..=1.0).contains(*c))
        {
            return Err(MetricError::OutOfRange { index, value });
        }
        Ok(Self { coords })
    }

    /// Used by the sampler, whose draws are in `[0, 1)` by construction.
    pub(crate) fn from_unit_draws(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty());
        debug_assert!(coords.iter().all(|c| (0.0..1.0).contains(c)));
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }
}

/// A Manhattan distance value. Not tied to a dimension; callers check bounds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
#[repr(transparent)]
pub struct Distance(f64);

impl Distance {
    pub fn new(value: f64) -> Self {
        Self(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Distance> for f64 {
    fn from(d: Distance) -> f64 {
        d.0
    }
}

/// Unwraps a run of distances into plain values.
pub fn distance_values(distances: &[Distance]) -> Vec<f64> {
    distances.iter().map(|d| d.0).collect()
}

/// Sequential sum of absolute coordinate differences. Slices must have equal length.
#[inline]
pub(crate) fn l1(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        sum += (x - y).abs();
    }
    sum
}

/// `sum_i |p_i - q_i|`.
pub fn manhattan_distance(p: &Point, q: &Point) -> Result<Distance, MetricError> {
    if p.dim() != q.dim() {
        return Err(MetricError::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(Distance(l1(&p.coords, &q.coords)))
}

/// Distances for a batch of pairs, in input order.
pub fn batch_distances(pairs: &[(Point, Point)]) -> Result<Vec<Distance>, MetricError> {
    pairs
        .iter()
        .enumerate()
        .map(|(index, (p, q))| {
            if p.dim() != q.dim() {
                Err(MetricError::PairMismatch {
                    index,
                    left: p.dim(),
                    right: q.dim(),
                })
            } else {
                Ok(Distance(l1(&p.coords, &q.coords)))
            }
        })
        .collect()
}
