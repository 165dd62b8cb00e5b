//! Covers of the lens range by closed intervals.
//!
//! Four strategies are available: the adaptive G-Mapper splitting procedure
//! ([`gmapper_cover`]) and three baselines with a fixed interval count
//! ([`uniform_cover`], [`balanced_cover`], [`fcm_cover`]).

mod fcm;
mod gmapper;
mod uniform;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fcm::{fcm_cover, fcm_memberships, FcmConfig, FCM_MAX_ITER};
pub use gmapper::{
    gmapper_cover, select_bfs, select_weighted, split_interval, Frontier, GMapperConfig, SearchMethod,
};
pub use uniform::{balanced_cover, uniform_cover, BalancedConfig, UniformConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("lens is empty")]
    EmptyLens,
    #[error("lens value at index {index} is not finite")]
    NonFiniteLens { index: usize },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("split of [{lo}, {hi}] produced an empty interval")]
    DegenerateSplit { lo: f64, hi: f64 },
    #[error("fuzzy c-means needs at least {needed} distinct lens values, found {found}")]
    TooFewDistinctValues { needed: usize, found: usize },
    #[error("invalid cover configuration: {0}")]
    InvalidConfig(String),
}

/// A closed interval `[lo, hi]` of lens values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Corrected Anderson-Darling statistic of the member lens values, when
    /// it has been computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ad: Option<f64>,
    #[serde(default)]
    pub tested: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            ad: None,
            tested: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverSource {
    Gmapper,
    Uniform,
    Balanced,
    Fcm,
}

impl CoverSource {
    pub fn name(self) -> &'static str {
        match self {
            CoverSource::Gmapper => "gmapper",
            CoverSource::Uniform => "uniform",
            CoverSource::Balanced => "balanced",
            CoverSource::Fcm => "fcm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalCover {
    pub intervals: Vec<Interval>,
    pub source: CoverSource,
    /// Number of splits performed; zero for the fixed-count strategies.
    pub iterations: usize,
}

impl IntervalCover {
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Index of the first lens value that lies in no interval.
    pub fn first_uncovered(&self, lens: &[f64]) -> Option<usize> {
        lens.iter()
            .position(|&x| !self.intervals.iter().any(|iv| iv.contains(x)))
    }

    /// Every interval is nondegenerate, the list is sorted by `lo`, and the
    /// union of the intervals has no gap that contains a lens value.
    pub fn is_valid_for(&self, lens: &[f64]) -> bool {
        self.intervals.iter().all(|iv| iv.lo < iv.hi)
            && self.intervals.windows(2).all(|w| w[0].lo <= w[1].lo)
            && self.first_uncovered(lens).is_none()
    }

    fn sort(&mut self) {
        self.intervals
            .sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    }
}

/// Which cover strategy to run and with what parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum CoverStrategyConfig {
    Gmapper(GMapperConfig),
    Uniform(UniformConfig),
    Balanced(BalancedConfig),
    Fcm(FcmConfig),
}

impl Default for CoverStrategyConfig {
    fn default() -> Self {
        CoverStrategyConfig::Gmapper(GMapperConfig::default())
    }
}

impl CoverStrategyConfig {
    pub fn source(&self) -> CoverSource {
        match self {
            CoverStrategyConfig::Gmapper(_) => CoverSource::Gmapper,
            CoverStrategyConfig::Uniform(_) => CoverSource::Uniform,
            CoverStrategyConfig::Balanced(_) => CoverSource::Balanced,
            CoverStrategyConfig::Fcm(_) => CoverSource::Fcm,
        }
    }

    pub fn validate(&self) -> Result<(), CoverError> {
        match self {
            CoverStrategyConfig::Gmapper(c) => c.validate(),
            CoverStrategyConfig::Uniform(c) => check_fixed(c.n_intervals, c.gain),
            CoverStrategyConfig::Balanced(c) => check_fixed(c.n_intervals, c.gain),
            CoverStrategyConfig::Fcm(c) => c.validate(),
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            CoverStrategyConfig::Gmapper(c) => c.seed = seed,
            CoverStrategyConfig::Fcm(c) => c.seed = seed,
            CoverStrategyConfig::Uniform(_) | CoverStrategyConfig::Balanced(_) => {}
        }
    }
}

fn check_fixed(n_intervals: usize, gain: f64) -> Result<(), CoverError> {
    if n_intervals < 1 {
        return Err(CoverError::InvalidConfig("n_intervals must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&gain) {
        return Err(CoverError::InvalidConfig(format!("gain must lie in [0, 1), got {gain}")));
    }
    Ok(())
}

/// Builds a cover of `lens` with the configured strategy.
pub fn build_cover(lens: &[f64], cfg: &CoverStrategyConfig) -> Result<IntervalCover, CoverError> {
    cfg.validate()?;
    match cfg {
        CoverStrategyConfig::Gmapper(c) => gmapper_cover(lens, c),
        CoverStrategyConfig::Uniform(c) => {
            let (lo, hi) = lens_range(lens)?;
            uniform_cover((lo, hi), c.n_intervals, c.gain)
        }
        CoverStrategyConfig::Balanced(c) => balanced_cover(lens, c.n_intervals, c.gain),
        CoverStrategyConfig::Fcm(c) => fcm_cover(lens, c),
    }
}

/// Minimum and maximum of the lens, rejecting empty or non-finite input.
pub fn lens_range(lens: &[f64]) -> Result<(f64, f64), CoverError> {
    if lens.is_empty() {
        return Err(CoverError::EmptyLens);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (index, &x) in lens.iter().enumerate() {
        if !x.is_finite() {
            return Err(CoverError::NonFiniteLens { index });
        }
        lo = lo.min(x);
        hi = hi.max(x);
    }
    Ok((lo, hi))
}

pub(crate) fn sorted_copy(lens: &[f64]) -> Vec<f64> {
    let mut v = lens.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Widens a zero-length range so that it forms a valid interval.
pub(crate) fn guard_point(x: f64) -> Interval {
    let pad = x.abs().max(1.0) * 1e-9;
    Interval::new(x - pad, x + pad)
}
