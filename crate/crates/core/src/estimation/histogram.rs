use serde::{Deserialize, Serialize};

use super::EstimationError;

/// Binned counts over explicit edges. In density mode, heights are
/// `count / (N * width)` where `N` counts every observation offered,
/// including those outside the edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    bin_edges: Vec<f64>,
    counts: Vec<u64>,
    density_mode: bool,
    observations: u64,
}

impl Histogram {
    pub fn bin_edges(&self) -> &[f64] {
        &self.bin_edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn density_mode(&self) -> bool {
        self.density_mode
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Every observation offered, in range or not.
    pub fn observations(&self) -> u64 {
        self.observations
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.bin_edges[0], *self.bin_edges.last().unwrap())
    }

    /// Density heights in density mode, raw counts otherwise.
    pub fn heights(&self) -> Vec<f64> {
        if !self.density_mode {
            return self.counts.iter().map(|&c| c as f64).collect();
        }
        let n = self.observations as f64;
        self.counts
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(&c, w)| c as f64 / (n * (w[1] - w[0])))
            .collect()
    }

    /// `(left, right, height)` per bin.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.bin_edges
            .windows(2)
            .zip(self.heights())
            .map(|(w, h)| (w[0], w[1], h))
    }
}

fn check_data(data: &[f64]) -> Result<(), EstimationError> {
    if data.is_empty() {
        return Err(EstimationError::EmptySample);
    }
    if let Some(i) = data.iter().position(|x| !x.is_finite()) {
        return Err(EstimationError::NonFinite(i));
    }
    Ok(())
}

/// `bins` equal-width bins spanning `[min, max]` of the data, last bin closed.
///
/// A constant sample has no spread; like numpy it then gets the unit-wide
/// range `[x - 0.5, x + 0.5]`.
pub fn build_histogram(
    data: &[f64],
    bins: usize,
    density_mode: bool,
) -> Result<Histogram, EstimationError> {
    if bins == 0 {
        return Err(EstimationError::ZeroBins);
    }
    check_data(data)?;
    let (mut lo, mut hi) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    build_histogram_with_edges(data, edges, density_mode)
}

/// Histogram over caller-supplied edges (e.g. a theory-driven `[0, n]`).
/// Bins are `[e_k, e_{k+1})` except the last, which is closed.
pub fn build_histogram_with_edges(
    data: &[f64],
    bin_edges: Vec<f64>,
    density_mode: bool,
) -> Result<Histogram, EstimationError> {
    if bin_edges.len() < 2 {
        return Err(EstimationError::ZeroBins);
    }
    if bin_edges.iter().any(|e| !e.is_finite()) || bin_edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(EstimationError::BadEdges);
    }
    check_data(data)?;
    let bins = bin_edges.len() - 1;
    let (lo, hi) = (bin_edges[0], bin_edges[bins]);
    let mut counts = vec![0u64; bins];
    for &x in data {
        if x < lo || x > hi {
            continue;
        }
        let k = bin_edges.partition_point(|&e| e <= x).saturating_sub(1);
        counts[k.min(bins - 1)] += 1;
    }
    Ok(Histogram {
        bin_edges,
        counts,
        density_mode,
        observations: data.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_countable() {
        let h = build_histogram(&[0.0, 0.5, 1.0], 2, false).unwrap();
        assert_eq!(h.bin_edges(), &[0.0, 0.5, 1.0]);
        assert_eq!(h.counts(), &[1, 2]);
        assert_eq!(h.heights(), vec![1.0, 2.0]);
    }

    #[test]
    fn density_normalization() {
        let data: Vec<f64> = (0..997)
            .map(|i| ((i * 37) % 101) as f64 * 0.013 - 0.4)
            .collect();
        for bins in [1, 7, 30] {
            let h = build_histogram(&data, bins, true).unwrap();
            assert_eq!(h.in_range(), data.len() as u64);
            let mass: f64 = h.rows().map(|(l, r, d)| d * (r - l)).sum();
            assert!((mass - 1.0).abs() < 1e-12, "bins {bins}: {mass}");
        }
    }

    #[test]
    fn constant_sample_gets_unit_range() {
        let h = build_histogram(&[3.0; 5], 4, true).unwrap();
        assert_eq!(h.range(), (2.5, 3.5));
        assert_eq!(h.in_range(), 5);
    }

    #[test]
    fn explicit_edges_drop_outliers() {
        let h = build_histogram_with_edges(
            &[-1.0, 0.0, 0.2, 0.99, 1.0, 2.0],
            vec![0.0, 0.5, 1.0],
            true,
        )
        .unwrap();
        assert_eq!(h.counts(), &[2, 2]);
        assert_eq!(h.observations(), 6);
        let mass: f64 = h.rows().map(|(l, r, d)| d * (r - l)).sum();
        assert!((mass - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(
            build_histogram(&[], 3, true),
            Err(EstimationError::EmptySample)
        );
        assert_eq!(
            build_histogram(&[1.0], 0, true),
            Err(EstimationError::ZeroBins)
        );
        assert_eq!(
            build_histogram(&[1.0, f64::NAN], 2, true),
            Err(EstimationError::NonFinite(1))
        );
        assert_eq!(
            build_histogram_with_edges(&[1.0], vec![0.0, 0.0], true),
            Err(EstimationError::BadEdges)
        );
    }
}
