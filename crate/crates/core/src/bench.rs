//! Wall-clock timing of cover construction.

use std::time::Instant;

use serde::Serialize;

use crate::cover::{build_cover, CoverError, CoverStrategyConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverTiming {
    pub strategy: &'static str,
    pub trials: usize,
    pub mean_seconds: f64,
    /// Sample standard deviation; zero for a single trial.
    pub std_seconds: f64,
    pub n_intervals: usize,
}

/// Builds the cover `trials` times and reports the mean and spread of the
/// elapsed time. Only `build_cover` is inside the timed region.
pub fn time_cover(lens: &[f64], cfg: &CoverStrategyConfig, trials: usize) -> Result<CoverTiming, CoverError> {
    if trials == 0 {
        return Err(CoverError::InvalidConfig("trials must be at least 1".into()));
    }
    let mut times = Vec::with_capacity(trials);
    let mut n_intervals = 0;
    for _ in 0..trials {
        let start = Instant::now();
        let cover = build_cover(lens, cfg)?;
        times.push(start.elapsed().as_secs_f64());
        n_intervals = std::hint::black_box(cover).len();
    }
    let mean = times.iter().sum::<f64>() / trials as f64;
    let std = if trials > 1 {
        (times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(CoverTiming {
        strategy: cfg.source().name(),
        trials,
        mean_seconds: mean,
        std_seconds: std,
        n_intervals,
    })
}
