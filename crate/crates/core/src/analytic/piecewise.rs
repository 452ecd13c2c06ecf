use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PiecewiseError {
    #[error("need at least two breakpoints, got {0}")]
    TooFewBreakpoints(usize),
    #[error("breakpoints must be finite and strictly increasing (violated at index {0})")]
    NotIncreasing(usize),
    #[error("{segments} coefficient lists for {intervals} intervals")]
    SegmentCount { segments: usize, intervals: usize },
}

/// A function that is polynomial on each interval `[b_k, b_{k+1})` and zero
/// outside `[b_0, b_m]`.
///
/// Segment `k` stores coefficients in the local variable `t = x - b_k`,
/// lowest degree first. Local coordinates keep high-degree pieces well
/// conditioned: on a unit-width segment the coefficients stay on the scale of
/// the function itself instead of growing like `b_k^degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    segments: Vec<Vec<f64>>,
    masses: Vec<f64>,
    // mass left of each breakpoint
    cumulative: Vec<f64>,
    // mass right of each breakpoint, summed from the right
    tail: Vec<f64>,
    // segments from here on evaluate the CDF as total minus upper tail
    upper_from: usize,
}

fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

/// `int_0^t p(s) ds`.
fn antiderivative_at(coeffs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for (j, &c) in coeffs.iter().enumerate().rev() {
        acc = acc * t + c / (j + 1) as f64;
    }
    acc * t
}

impl PiecewisePolynomial {
    pub fn new(breakpoints: Vec<f64>, segments: Vec<Vec<f64>>) -> Result<Self, PiecewiseError> {
        if breakpoints.len() < 2 {
            return Err(PiecewiseError::TooFewBreakpoints(breakpoints.len()));
        }
        if !breakpoints[0].is_finite() {
            return Err(PiecewiseError::NotIncreasing(0));
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(PiecewiseError::NotIncreasing(i + 1));
            }
        }
        if segments.len() != breakpoints.len() - 1 {
            return Err(PiecewiseError::SegmentCount {
                segments: segments.len(),
                intervals: breakpoints.len() - 1,
            });
        }
        let masses: Vec<f64> = segments
            .iter()
            .enumerate()
            .map(|(k, c)| antiderivative_at(c, breakpoints[k + 1] - breakpoints[k]))
            .collect();
        let mut cumulative = vec![0.0; masses.len() + 1];
        let mut tail = vec![0.0; masses.len() + 1];
        for k in 0..masses.len() {
            cumulative[k + 1] = cumulative[k] + masses[k];
        }
        for k in (0..masses.len()).rev() {
            tail[k] = tail[k + 1] + masses[k];
        }
        let half = 0.5 * cumulative[masses.len()];
        let upper_from = (1..masses.len())
            .find(|&k| cumulative[k] >= half)
            .unwrap_or(masses.len());
        Ok(Self {
            breakpoints,
            segments,
            masses,
            cumulative,
            tail,
            upper_from,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Local-coordinate coefficients, one list per interval.
    pub fn segments(&self) -> &[Vec<f64>] {
        &self.segments
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn max_degree(&self) -> usize {
        self.segments
            .iter()
            .map(|s| s.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Index of the segment containing `x`, with the right end of the support
    /// belonging to the last segment.
    fn locate(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.support();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let k = self.breakpoints.partition_point(|&b| b <= x);
        Some(k.saturating_sub(1).min(self.segments.len() - 1))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.locate(x) {
            Some(k) => horner(&self.segments[k], x - self.breakpoints[k]),
            None => 0.0,
        }
    }

    /// `int_{-inf}^x`, from exact per-segment antiderivatives.
    ///
    /// Past the median segment the value is formed as `total - upper tail`,
    /// so that near the right end, where the result saturates at the total,
    /// rounding cannot make it step backwards.
    pub fn integral_to(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return self.total_integral();
        }
        let k = self.locate(x).unwrap();
        let coeffs = &self.segments[k];
        let t = x - self.breakpoints[k];
        if k < self.upper_from {
            return self.cumulative[k] + antiderivative_at(coeffs, t);
        }
        let rest_of_segment = (self.masses[k] - antiderivative_at(coeffs, t)).max(0.0);
        self.total_integral() - (self.tail[k + 1] + rest_of_segment)
    }

    pub fn total_integral(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// `int (x - center)^power p(x) dx` over the support, integrating each
    /// segment's polynomial exactly.
    pub fn shifted_moment(&self, center: f64, power: u32) -> f64 {
        let power = power as usize;
        let binom = binomial_row(power);
        let mut total = 0.0;
        for (k, coeffs) in self.segments.iter().enumerate() {
            let width = self.breakpoints[k + 1] - self.breakpoints[k];
            let offset = self.breakpoints[k] - center;
            // (offset + t)^power = sum_i C(power, i) offset^(power-i) t^i
            for (i, &b) in binom.iter().enumerate() {
                let scale = b * offset.powi((power - i) as i32);
                if scale == 0.0 {
                    continue;
                }
                let mut seg = 0.0;
                for (j, &c) in coeffs.iter().enumerate() {
                    let deg = (i + j + 1) as i32;
                    seg += c * width.powi(deg) / deg as f64;
                }
                total += scale * seg;
            }
        }
        total
    }
}

fn binomial_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for i in 1..n {
        row[i] = row[i - 1] * (n - i + 1) as f64 / i as f64;
    }
    row
}

/// Convolves a density living on unit segments `[k, k+1)`, `k = 0..m`, with
/// the density `2(1 - u)` on `[0, 1]`. The result lives on `[0, m + 1]`.
///
/// With `z = k + t`, the result on segment `k` is
/// `int_0^t 2(1-u) f_k(t-u) du + int_t^1 2(1-u) f_{k-1}(t-u+1) du`,
/// and both integrals are taken termwise in closed form, so no binomial
/// re-expansion of `(t - u)^j` is ever needed.
pub(crate) fn convolve_with_triangle(f: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = f.len();
    let degree = f.iter().map(|s| s.len()).max().unwrap_or(0) + 2;
    let mut out = vec![vec![0.0; degree]; m + 1];
    for (k, seg) in out.iter_mut().enumerate() {
        if let Some(cur) = f.get(k) {
            // int_0^t 2(1 - t + s) s^j ds = 2 t^(j+1)/(j+1) - 2 t^(j+2)/((j+1)(j+2))
            for (j, &c) in cur.iter().enumerate() {
                let j1 = (j + 1) as f64;
                let j2 = (j + 2) as f64;
                seg[j + 1] += 2.0 * c / j1;
                seg[j + 2] -= 2.0 * c / (j1 * j2);
            }
        }
        if k >= 1 {
            // int_t^1 2(s - t) s^j ds = 2/(j+2) - 2t/(j+1) + 2 t^(j+2)/((j+1)(j+2))
            for (j, &c) in f[k - 1].iter().enumerate() {
                let j1 = (j + 1) as f64;
                let j2 = (j + 2) as f64;
                seg[0] += 2.0 * c / j2;
                seg[1] -= 2.0 * c / j1;
                seg[j + 2] += 2.0 * c / (j1 * j2);
            }
        }
        while seg.len() > 1 && *seg.last().unwrap() == 0.0 {
            seg.pop();
        }
    }
    out
}
