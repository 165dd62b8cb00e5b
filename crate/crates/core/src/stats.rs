//! Empirical-distribution statistics used by the splitting test.
//!
//! The Anderson-Darling statistic compares the empirical CDF of a
//! standardized sample against the standard normal CDF, weighting the tails
//! more heavily than the centre. [`ad_statistic`] returns both the raw
//! statistic `A²` and the small-sample corrected `A*² = A²(1 + 4/n - 25/n²)`
//! used when the mean and variance are estimated from the data.

use std::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

/// Lower/upper clamp applied to `z_i` before taking logarithms.
pub const Z_CLAMP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("at least 2 values are required, got {n}")]
    TooFewPoints { n: usize },
    #[error("sample has zero variance")]
    ZeroVariance,
}

/// A sorted sample with mean 0 and unit sample variance.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardizedSample {
    values: Vec<f64>,
}

impl StandardizedSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Raw and corrected Anderson-Darling statistics for one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdResult {
    pub a2: f64,
    pub a2_corrected: f64,
    pub n: usize,
}

/// `1 + 4/n - 25/n²`.
pub fn correction_factor(n: usize) -> f64 {
    let n = n as f64;
    1.0 + 4.0 / n - 25.0 / (n * n)
}

/// Mean and sample (n-1) variance.
pub(crate) fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, ss / (n - 1.0))
}

/// Returns a sorted copy of `values` shifted to mean 0 and scaled by the
/// sample standard deviation.
pub fn standardize(values: &[f64]) -> Result<StandardizedSample, StatsError> {
    let n = values.len();
    if n < 2 {
        return Err(StatsError::TooFewPoints { n });
    }
    let (mean, var) = mean_and_variance(values);
    // A spread below rounding noise of the mean counts as constant.
    if !(var > 0.0) || var.sqrt() <= f64::EPSILON * mean.abs() {
        return Err(StatsError::ZeroVariance);
    }
    let sd = var.sqrt();
    let mut out: Vec<f64> = values.iter().map(|&x| (x - mean) / sd).collect();
    out.sort_by(f64::total_cmp);
    Ok(StandardizedSample { values: out })
}

/// Standard normal CDF, strictly inside (0, 1).
pub fn normal_cdf(x: f64) -> f64 {
    let p = 0.5 * libm::erfc(-x * FRAC_1_SQRT_2);
    p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Anderson-Darling statistic of `values` against a normal distribution with
/// mean and variance estimated from the sample.
pub fn ad_statistic(values: &[f64]) -> Result<AdResult, StatsError> {
    let sample = standardize(values)?;
    Ok(ad_statistic_standardized(&sample))
}

/// Same as [`ad_statistic`] for an already standardized sample.
pub fn ad_statistic_standardized(sample: &StandardizedSample) -> AdResult {
    let xs = sample.values();
    let n = xs.len();
    let nf = n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let lower = normal_cdf(xs[i]).clamp(Z_CLAMP, 1.0 - Z_CLAMP);
        // 1 - z_{n+1-i}, evaluated through the symmetry of the normal CDF so
        // that upper-tail values keep their relative precision.
        let upper = normal_cdf(-xs[n - 1 - i]).clamp(Z_CLAMP, 1.0 - Z_CLAMP);
        sum += (2 * i + 1) as f64 * (lower.ln() + upper.ln());
    }
    let a2 = -nf - sum / nf;
    AdResult {
        a2,
        a2_corrected: a2 * correction_factor(n),
        n,
    }
}
