use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{guard_point, lens_range, sorted_copy, CoverError, CoverSource, Interval, IntervalCover};
use crate::gmm::{fit_gmm2, Gmm2Fit};
use crate::stats::ad_statistic;

/// Order in which untested intervals are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMethod {
    /// Descend into the child with the larger statistic after every split.
    #[default]
    Dfs,
    /// Always split the untested interval with the largest statistic.
    Bfs,
    /// Sample an untested interval with probability proportional to its
    /// statistic.
    #[serde(alias = "random")]
    Randomized,
}

impl std::str::FromStr for SearchMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dfs" => Ok(SearchMethod::Dfs),
            "bfs" => Ok(SearchMethod::Bfs),
            "random" | "randomized" => Ok(SearchMethod::Randomized),
            other => Err(format!("unknown search method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GMapperConfig {
    /// Intervals whose corrected statistic is at or above this value are split.
    pub ad_threshold: f64,
    /// Extra overlap of the two children, as a fraction of the distance from
    /// the decision point to each mean.
    pub g_overlap: f64,
    pub search: SearchMethod,
    /// Only consulted by [`SearchMethod::Randomized`].
    pub seed: u64,
    pub max_intervals: usize,
}

impl Default for GMapperConfig {
    fn default() -> Self {
        GMapperConfig {
            ad_threshold: 10.0,
            g_overlap: 0.1,
            search: SearchMethod::Dfs,
            seed: 0,
            max_intervals: 256,
        }
    }
}

impl GMapperConfig {
    pub fn validate(&self) -> Result<(), CoverError> {
        if !(self.ad_threshold > 0.0) || !self.ad_threshold.is_finite() {
            return Err(CoverError::InvalidConfig(format!(
                "ad_threshold must be positive, got {}",
                self.ad_threshold
            )));
        }
        if !(0.0..1.0).contains(&self.g_overlap) {
            return Err(CoverError::InvalidConfig(format!(
                "g_overlap must lie in [0, 1), got {}",
                self.g_overlap
            )));
        }
        if self.max_intervals < 1 {
            return Err(CoverError::InvalidConfig("max_intervals must be at least 1".into()));
        }
        Ok(())
    }
}

/// Splits `iv` at the point dividing the two means in the ratio `s1 : s2`,
/// extending each side past that point by `g_overlap` times its distance to
/// the corresponding mean. Each new endpoint is clamped to the opposite mean.
pub fn split_interval(iv: &Interval, fit: &Gmm2Fit, g_overlap: f64) -> Result<(Interval, Interval), CoverError> {
    let gap = fit.m2 - fit.m1;
    let total = fit.s1 + fit.s2;
    let left_hi = (fit.m1 + (1.0 + g_overlap) * fit.s1 / total * gap).min(fit.m2);
    let right_lo = (fit.m2 - (1.0 + g_overlap) * fit.s2 / total * gap).max(fit.m1);
    let left = Interval::new(iv.lo, left_hi);
    let right = Interval::new(right_lo, iv.hi);
    // Written so that NaN endpoints are rejected too.
    if !(left.lo < left.hi) || !(right.lo < right.hi) {
        return Err(CoverError::DegenerateSplit { lo: iv.lo, hi: iv.hi });
    }
    Ok((left, right))
}

/// Index of the largest score; unscored entries rank below every score and
/// ties go to the earliest entry.
pub fn select_bfs(scores: &[Option<f64>]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in scores.iter().enumerate() {
        let s = s.unwrap_or(f64::NEG_INFINITY);
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

/// Draws an index with probability proportional to its score. Negative or
/// missing scores weigh zero; if every weight is zero the draw is uniform.
pub fn select_weighted<R: Rng + ?Sized>(scores: &[Option<f64>], rng: &mut R) -> Option<usize> {
    if scores.is_empty() {
        return None;
    }
    let weight = |s: &Option<f64>| match s {
        Some(v) if v.is_finite() && *v > 0.0 => *v,
        _ => 0.0,
    };
    let total: f64 = scores.iter().map(weight).sum();
    if !(total > 0.0) || !total.is_finite() {
        return Some(rng.random_range(0..scores.len()));
    }
    let mut target = rng.random::<f64>() * total;
    let mut last_positive = 0;
    for (i, s) in scores.iter().enumerate() {
        let w = weight(s);
        if w > 0.0 {
            if target < w {
                return Some(i);
            }
            target -= w;
            last_positive = i;
        }
    }
    Some(last_positive)
}

/// The untested intervals, together with the policy for choosing the next one.
#[derive(Debug, Clone)]
pub struct Frontier {
    method: SearchMethod,
    items: Vec<Interval>,
    rng: ChaCha8Rng,
}

impl Frontier {
    pub fn new(method: SearchMethod, seed: u64) -> Self {
        Frontier {
            method,
            items: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, iv: Interval) {
        self.items.push(iv);
    }

    /// Adds the two halves of a split. For depth-first search the child with
    /// the larger statistic ends up on top of the stack.
    pub fn push_children(&mut self, left: Interval, right: Interval) {
        let score = |iv: &Interval| iv.ad.unwrap_or(f64::NEG_INFINITY);
        if self.method == SearchMethod::Dfs && score(&left) > score(&right) {
            self.items.push(right);
            self.items.push(left);
        } else {
            self.items.push(left);
            self.items.push(right);
        }
    }

    /// Index of the interval that [`Frontier::pop`] would return next. Draws
    /// from the RNG for the randomized policy.
    pub fn choose(&mut self) -> Option<usize> {
        if self.items.is_empty() {
            return None;
        }
        match self.method {
            SearchMethod::Dfs => Some(self.items.len() - 1),
            SearchMethod::Bfs => select_bfs(&self.scores()),
            SearchMethod::Randomized => {
                let scores = self.scores();
                select_weighted(&scores, &mut self.rng)
            }
        }
    }

    pub fn pop(&mut self) -> Option<Interval> {
        let i = self.choose()?;
        Some(self.items.remove(i))
    }

    fn scores(&self) -> Vec<Option<f64>> {
        self.items.iter().map(|iv| iv.ad).collect()
    }
}

/// Members of the closed interval `[lo, hi]` in an ascending slice.
fn members<'a>(sorted: &'a [f64], iv: &Interval) -> &'a [f64] {
    let start = sorted.partition_point(|&x| x < iv.lo);
    let end = sorted.partition_point(|&x| x <= iv.hi);
    &sorted[start..end.max(start)]
}

fn scored(sorted: &[f64], mut iv: Interval) -> Interval {
    iv.ad = ad_statistic(members(sorted, &iv)).ok().map(|r| r.a2_corrected);
    iv
}

/// Builds a cover by repeatedly splitting intervals whose lens values fail
/// the Anderson-Darling normality test, starting from `[min f, max f]`.
pub fn gmapper_cover(lens: &[f64], cfg: &GMapperConfig) -> Result<IntervalCover, CoverError> {
    cfg.validate()?;
    let (lo, hi) = lens_range(lens)?;
    if lo == hi {
        let mut iv = guard_point(lo);
        iv.tested = true;
        return Ok(IntervalCover {
            intervals: vec![iv],
            source: CoverSource::Gmapper,
            iterations: 0,
        });
    }
    let sorted = sorted_copy(lens);
    let mut frontier = Frontier::new(cfg.search, cfg.seed);
    frontier.push(scored(&sorted, Interval::new(lo, hi)));

    let mut kept = Vec::new();
    let mut splits = 0;
    while let Some(mut iv) = frontier.pop() {
        iv.tested = true;
        let at_cap = kept.len() + frontier.len() + 1 >= cfg.max_intervals;
        let split = match iv.ad {
            Some(a) if a >= cfg.ad_threshold && !at_cap => try_split(&sorted, &iv, cfg.g_overlap),
            _ => None,
        };
        match split {
            Some((left, right)) => {
                frontier.push_children(scored(&sorted, left), scored(&sorted, right));
                splits += 1;
            }
            None => kept.push(iv),
        }
    }

    let mut cover = IntervalCover {
        intervals: kept,
        source: CoverSource::Gmapper,
        iterations: splits,
    };
    cover.sort();
    Ok(cover)
}

/// `None` whenever the interval has to be kept as it is.
fn try_split(sorted: &[f64], iv: &Interval, g_overlap: f64) -> Option<(Interval, Interval)> {
    let fit = fit_gmm2(members(sorted, iv)).ok()?;
    split_interval(iv, &fit, g_overlap).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(m1: f64, m2: f64, s1: f64, s2: f64) -> Gmm2Fit {
        Gmm2Fit {
            m1,
            m2,
            s1,
            s2,
            w1: 0.5,
            w2: 0.5,
            log_likelihood: 0.0,
            iterations: 0,
        }
    }

    #[test]
    fn split_equal_spread_no_overlap() {
        let (l, r) = split_interval(&Interval::new(0.0, 1.0), &fit(0.25, 0.75, 0.1, 0.1), 0.0).unwrap();
        assert!((l.lo - 0.0).abs() < 1e-12 && (l.hi - 0.5).abs() < 1e-12);
        assert!((r.lo - 0.5).abs() < 1e-12 && (r.hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_with_overlap() {
        let (l, r) = split_interval(&Interval::new(0.0, 1.0), &fit(0.25, 0.75, 0.1, 0.1), 0.2).unwrap();
        assert!((l.hi - 0.55).abs() < 1e-12);
        assert!((r.lo - 0.45).abs() < 1e-12);
    }

    #[test]
    fn split_clamps_to_opposite_mean() {
        let (l, r) = split_interval(&Interval::new(0.0, 1.0), &fit(0.25, 0.75, 0.4, 0.01), 1.0).unwrap();
        assert!((l.hi - 0.75).abs() < 1e-12);
        // 0.75 - 2 * (0.01 / 0.41) * 0.5 = 0.72560975...
        assert!((r.lo - (0.75 - 2.0 * 0.01 / 0.41 * 0.5)).abs() < 1e-12);
    }

    #[test]
    fn split_degenerate() {
        let err = split_interval(&Interval::new(0.0, 1.0), &fit(0.0, 0.0, 0.1, 0.1), 0.1).unwrap_err();
        assert!(matches!(err, CoverError::DegenerateSplit { .. }));
    }

    #[test]
    fn single_candidate_selected_by_every_policy() {
        for method in [SearchMethod::Dfs, SearchMethod::Bfs, SearchMethod::Randomized] {
            let mut f = Frontier::new(method, 1);
            let mut iv = Interval::new(0.0, 1.0);
            iv.ad = Some(4.0);
            f.push(iv);
            assert_eq!(f.choose(), Some(0));
        }
        assert_eq!(select_bfs(&[None]), Some(0));
        assert_eq!(select_bfs(&[]), None);
    }

    #[test]
    fn largest_statistic_first() {
        let mut a = Interval::new(0.0, 0.6);
        a.ad = Some(12.0);
        let mut b = Interval::new(0.5, 1.0);
        b.ad = Some(3.0);
        for method in [SearchMethod::Dfs, SearchMethod::Bfs] {
            let mut f = Frontier::new(method, 0);
            f.push_children(a, b);
            assert_eq!(f.pop().unwrap().ad, Some(12.0), "{method:?}");
        }
    }

    #[test]
    fn weighted_selection_frequency() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let scores = [Some(30.0), Some(10.0)];
        let hits = (0..10_000)
            .filter(|_| select_weighted(&scores, &mut rng) == Some(0))
            .count();
        let freq = hits as f64 / 10_000.0;
        assert!((freq - 0.75).abs() < 0.03, "freq = {freq}");
    }

    #[test]
    fn weighted_selection_zero_weights_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let scores = [None, Some(-1.0), Some(0.0)];
        let mut seen = [0usize; 3];
        for _ in 0..3000 {
            seen[select_weighted(&scores, &mut rng).unwrap()] += 1;
        }
        assert!(seen.iter().all(|&c| c > 800));
    }

    #[test]
    fn constant_lens_gives_guarded_interval() {
        let cover = gmapper_cover(&[2.0; 10], &GMapperConfig::default()).unwrap();
        assert_eq!(cover.len(), 1);
        assert!(cover.intervals[0].tested);
        assert!(cover.intervals[0].contains(2.0));
        assert_eq!(cover.iterations, 0);
    }

    #[test]
    fn empty_lens() {
        assert_eq!(gmapper_cover(&[], &GMapperConfig::default()), Err(CoverError::EmptyLens));
    }

    #[test]
    fn tiny_lens_is_kept() {
        let cover = gmapper_cover(&[0.0, 1.0, 5.0], &GMapperConfig::default()).unwrap();
        assert_eq!(cover.len(), 1);
        assert!(cover.is_valid_for(&[0.0, 1.0, 5.0]));
    }

    #[test]
    fn cap_limits_interval_count() {
        let lens: Vec<f64> = (0..2000).map(|i| ((i % 7) as f64) * 10.0 + (i as f64) * 1e-4).collect();
        let cfg = GMapperConfig {
            ad_threshold: 0.5,
            max_intervals: 3,
            ..Default::default()
        };
        let cover = gmapper_cover(&lens, &cfg).unwrap();
        assert_eq!(cover.len(), 3);
        assert_eq!(cover.iterations, 2);
        assert!(cover.is_valid_for(&lens));
    }

    #[test]
    fn members_closed_bounds() {
        let sorted = [0.1, 0.4, 0.5, 0.9, 1.0];
        assert_eq!(members(&sorted, &Interval::new(0.4, 0.9)), &[0.4, 0.5, 0.9]);
        assert!(members(&sorted, &Interval::new(0.6, 0.8)).is_empty());
    }
}
