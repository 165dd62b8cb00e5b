use serde::{Deserialize, Serialize};

use super::{guard_point, lens_range, sorted_copy, CoverError, CoverSource, Interval, IntervalCover};

/// Iteration cap for the fuzzy c-means loop.
pub const FCM_MAX_ITER: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FcmConfig {
    pub n_intervals: usize,
    /// Membership a point needs in a cluster to be placed in its interval.
    pub threshold_tau: f64,
    /// Fuzzifier exponent `m > 1`.
    pub fuzzifier: f64,
    /// Stop once no membership changes by more than this.
    pub tol: f64,
    /// Accepted for configuration symmetry; initialization is deterministic.
    pub seed: u64,
}

impl Default for FcmConfig {
    fn default() -> Self {
        FcmConfig {
            n_intervals: 10,
            threshold_tau: 0.1,
            fuzzifier: 2.0,
            tol: 0.005,
            seed: 0,
        }
    }
}

impl FcmConfig {
    pub fn validate(&self) -> Result<(), CoverError> {
        if self.n_intervals < 2 {
            return Err(CoverError::InvalidConfig("fcm needs at least 2 clusters".into()));
        }
        if !(self.threshold_tau > 0.0 && self.threshold_tau < 1.0) {
            return Err(CoverError::InvalidConfig(format!(
                "threshold_tau must lie in (0, 1), got {}",
                self.threshold_tau
            )));
        }
        if !(self.fuzzifier > 1.0) || !self.fuzzifier.is_finite() {
            return Err(CoverError::InvalidConfig(format!(
                "fuzzifier must exceed 1, got {}",
                self.fuzzifier
            )));
        }
        if !(self.tol > 0.0) {
            return Err(CoverError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Result of fuzzy c-means on 1-D values.
#[derive(Debug, Clone, PartialEq)]
pub struct FcmFit {
    /// Cluster centres in ascending order.
    pub centers: Vec<f64>,
    /// Row-major `n × c` membership matrix, columns ordered like `centers`.
    pub memberships: Vec<f64>,
    pub iterations: usize,
}

impl FcmFit {
    pub fn membership(&self, point: usize, cluster: usize) -> f64 {
        self.memberships[point * self.centers.len() + cluster]
    }
}

fn update_memberships(lens: &[f64], centers: &[f64], exponent: f64, out: &mut [f64]) {
    let c = centers.len();
    for (x, row) in lens.iter().zip(out.chunks_exact_mut(c)) {
        let mut d_min = f64::INFINITY;
        for (u, &ck) in row.iter_mut().zip(centers) {
            *u = (x - ck).abs();
            d_min = d_min.min(*u);
        }
        if d_min == 0.0 {
            let hits = row.iter().filter(|&&d| d == 0.0).count() as f64;
            for u in row.iter_mut() {
                *u = if *u == 0.0 { 1.0 / hits } else { 0.0 };
            }
            continue;
        }
        // (d_min / d_k)^p keeps every term in (0, 1].
        let mut total = 0.0;
        for u in row.iter_mut() {
            *u = (d_min / *u).powf(exponent);
            total += *u;
        }
        for u in row.iter_mut() {
            *u /= total;
        }
    }
}

/// Runs fuzzy c-means with `cfg.n_intervals` clusters, initialized at evenly
/// spaced quantiles of the lens.
pub fn fcm_memberships(lens: &[f64], cfg: &FcmConfig) -> Result<FcmFit, CoverError> {
    cfg.validate()?;
    lens_range(lens)?;
    let c = cfg.n_intervals;
    let sorted = sorted_copy(lens);
    let distinct = 1 + sorted.windows(2).filter(|w| w[0] != w[1]).count();
    if distinct < c {
        return Err(CoverError::TooFewDistinctValues { needed: c, found: distinct });
    }
    let n = lens.len();
    let mut centers: Vec<f64> = (0..c)
        .map(|k| {
            let pos = (k as f64 + 0.5) / c as f64 * n as f64 - 0.5;
            let i = (pos.floor() as usize).min(n - 1);
            let t = pos - i as f64;
            if i + 1 < n {
                sorted[i] + t * (sorted[i + 1] - sorted[i])
            } else {
                sorted[i]
            }
        })
        .collect();

    let exponent = 2.0 / (cfg.fuzzifier - 1.0);
    let mut u = vec![0.0; n * c];
    let mut next = vec![0.0; n * c];
    update_memberships(lens, &centers, exponent, &mut u);
    let mut iterations = 0;
    while iterations < FCM_MAX_ITER {
        iterations += 1;
        let mut num = vec![0.0; c];
        let mut den = vec![0.0; c];
        for (x, row) in lens.iter().zip(u.chunks_exact(c)) {
            for k in 0..c {
                let w = row[k].powf(cfg.fuzzifier);
                num[k] += w * x;
                den[k] += w;
            }
        }
        for k in 0..c {
            if den[k] > 0.0 {
                centers[k] = num[k] / den[k];
            }
        }
        update_memberships(lens, &centers, exponent, &mut next);
        let change = u
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut u, &mut next);
        if change < cfg.tol {
            break;
        }
    }

    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&a, &b| centers[a].total_cmp(&centers[b]));
    let memberships = u
        .chunks_exact(c)
        .flat_map(|row| order.iter().map(move |&k| row[k]))
        .collect();
    Ok(FcmFit {
        centers: order.iter().map(|&k| centers[k]).collect(),
        memberships,
        iterations,
    })
}

/// Cover whose k-th interval spans the lens values with membership above
/// `τ` in cluster k. Each value is also assigned to the interval of its
/// highest-membership cluster so that no value is left uncovered.
pub fn fcm_cover(lens: &[f64], cfg: &FcmConfig) -> Result<IntervalCover, CoverError> {
    let fit = fcm_memberships(lens, cfg)?;
    let c = fit.centers.len();
    let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); c];
    for (i, &x) in lens.iter().enumerate() {
        let row = &fit.memberships[i * c..(i + 1) * c];
        let best = row
            .iter()
            .enumerate()
            .fold(0, |b, (k, &v)| if v > row[b] { k } else { b });
        for (k, &v) in row.iter().enumerate() {
            if v > cfg.threshold_tau || k == best {
                bounds[k].0 = bounds[k].0.min(x);
                bounds[k].1 = bounds[k].1.max(x);
            }
        }
    }
    let intervals = bounds
        .into_iter()
        .filter(|(lo, hi)| lo <= hi)
        .map(|(lo, hi)| if lo < hi { Interval::new(lo, hi) } else { guard_point(lo) })
        .collect();
    let mut cover = IntervalCover {
        intervals,
        source: CoverSource::Fcm,
        iterations: 0,
    };
    cover.sort();
    Ok(cover)
}
