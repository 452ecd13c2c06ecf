use super::EstimationError;

/// Asymptotic Kolmogorov quantile at significance 0.05.
pub const KS_COEFF_05: f64 = 1.358;
/// Asymptotic Kolmogorov quantile at significance 0.01.
pub const KS_COEFF_01: f64 = 1.628;

/// `1.358 / sqrt(n)`.
pub fn ks_critical_05(n: usize) -> f64 {
    KS_COEFF_05 / (n as f64).sqrt()
}

/// `1.628 / sqrt(n)`.
pub fn ks_critical_01(n: usize) -> f64 {
    KS_COEFF_01 / (n as f64).sqrt()
}

/// Step function `F(x) = #{values <= x} / N` over a nonempty finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self, EstimationError> {
        if values.is_empty() {
            return Err(EstimationError::EmptySample);
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(EstimationError::NonFinite(i));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }
}

/// `sup_x |F_N(x) - F(x)|`, checking both one-sided limits at every sample
/// point: `max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N)`.
pub fn ks_statistic(sample: &EmpiricalCdf, reference_cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sample.sorted.len() as f64;
    sample
        .sorted
        .iter()
        .enumerate()
        .fold(0.0f64, |acc, (i, &x)| {
            let f = reference_cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            acc.max(above).max(below)
        })
        .clamp(0.0, 1.0)
}

/// Convenience wrapper building the empirical CDF first.
pub fn ks_statistic_of(
    values: &[f64],
    reference_cdf: impl Fn(f64) -> f64,
) -> Result<f64, EstimationError> {
    let ecdf = EmpiricalCdf::new(values.to_vec())?;
    Ok(ks_statistic(&ecdf, reference_cdf))
}
