use serde::{Deserialize, Serialize};

use super::{guard_point, lens_range, sorted_copy, CoverError, CoverSource, Interval, IntervalCover};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UniformConfig {
    pub n_intervals: usize,
    pub gain: f64,
}

impl Default for UniformConfig {
    fn default() -> Self {
        UniformConfig {
            n_intervals: 10,
            gain: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BalancedConfig {
    pub n_intervals: usize,
    pub gain: f64,
}

impl Default for BalancedConfig {
    fn default() -> Self {
        BalancedConfig {
            n_intervals: 10,
            gain: 0.2,
        }
    }
}

/// Start and end of `n` equal intervals over `[lo, hi]` in which consecutive
/// intervals share `gain` of their length.
fn uniform_endpoints(lo: f64, hi: f64, n: usize, gain: f64) -> Vec<(f64, f64)> {
    let span = hi - lo;
    let len = span / (n as f64 - (n as f64 - 1.0) * gain);
    let step = len * (1.0 - gain);
    let mut ends: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let start = lo + i as f64 * step;
            (start, start + len)
        })
        .collect();
    // Rounding can leave the last end a few ulps short of `hi`.
    ends[n - 1].1 = hi;
    ends
}

/// `n_intervals` intervals of equal length spanning `range`, consecutive
/// ones overlapping by `gain` times the length.
pub fn uniform_cover(range: (f64, f64), n_intervals: usize, gain: f64) -> Result<IntervalCover, CoverError> {
    let (lo, hi) = range;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CoverError::InvalidRange { lo, hi });
    }
    super::check_fixed(n_intervals, gain)?;
    let intervals = uniform_endpoints(lo, hi, n_intervals, gain)
        .into_iter()
        .map(|(a, b)| Interval::new(a, b))
        .collect::<Vec<_>>();
    Ok(IntervalCover {
        intervals,
        source: CoverSource::Uniform,
        iterations: 0,
    })
}

/// Lens value at fractional rank `r ∈ [0, n]`. The i-th smallest value
/// occupies ranks `[i, i + 1]`; between the centres of two such slots the
/// value is interpolated linearly.
fn quantile_at_rank(sorted: &[f64], r: f64) -> f64 {
    let last = sorted.len() - 1;
    let pos = (r - 0.5).clamp(0.0, last as f64);
    let i = pos.floor() as usize;
    if i >= last {
        return sorted[last];
    }
    let t = pos - i as f64;
    if t == 0.0 {
        sorted[i]
    } else {
        sorted[i] + t * (sorted[i + 1] - sorted[i])
    }
}

/// A uniform cover of rank space `[0, n]` mapped through the empirical
/// quantile function, so that every interval holds about the same number of
/// points. Intervals that collapse onto a single repeated value are dropped;
/// their points remain covered by a neighbour.
pub fn balanced_cover(lens: &[f64], n_intervals: usize, gain: f64) -> Result<IntervalCover, CoverError> {
    let (lo, hi) = lens_range(lens)?;
    super::check_fixed(n_intervals, gain)?;
    if lo == hi {
        return Err(CoverError::InvalidRange { lo, hi });
    }
    let sorted = sorted_copy(lens);
    let n = sorted.len() as f64;
    let mut intervals: Vec<Interval> = uniform_endpoints(0.0, n, n_intervals, gain)
        .into_iter()
        .map(|(a, b)| Interval::new(quantile_at_rank(&sorted, a), quantile_at_rank(&sorted, b)))
        .filter(|iv| iv.lo < iv.hi)
        .collect();
    if intervals.is_empty() {
        intervals.push(guard_point(lo));
    }
    Ok(IntervalCover {
        intervals,
        source: CoverSource::Balanced,
        iterations: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(cover: &IntervalCover, lens: &[f64]) -> Vec<usize> {
        cover
            .intervals
            .iter()
            .map(|iv| lens.iter().filter(|&&x| iv.contains(x)).count())
            .collect()
    }

    #[test]
    fn uniform_single_interval() {
        let c = uniform_cover((0.0, 1.0), 1, 0.7).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c.intervals[0].lo, c.intervals[0].hi), (0.0, 1.0));
    }

    #[test]
    fn uniform_two_halves() {
        let c = uniform_cover((0.0, 1.0), 2, 0.5).unwrap();
        let l = 1.0 / 1.5;
        assert!((c.intervals[0].hi - l).abs() < 1e-12);
        assert!((c.intervals[1].lo - (1.0 - l)).abs() < 1e-12);
        assert!((c.intervals[1].hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_three_with_twenty_percent() {
        let c = uniform_cover((-0.03, 1.05), 3, 0.2).unwrap();
        let len = c.intervals[0].length();
        assert!((len + 2.0 * len * 0.8 - 1.08).abs() < 1e-12);
        for w in c.intervals.windows(2) {
            assert!((w[0].hi - w[1].lo - 0.2 * len).abs() < 1e-12);
        }
        assert!((c.intervals[0].lo + 0.03).abs() < 1e-12);
        assert!((c.intervals[2].hi - 1.05).abs() < 1e-12);
    }

    #[test]
    fn uniform_bad_range() {
        assert!(matches!(uniform_cover((1.0, 1.0), 2, 0.1), Err(CoverError::InvalidRange { .. })));
        assert!(matches!(uniform_cover((2.0, 1.0), 2, 0.1), Err(CoverError::InvalidRange { .. })));
    }

    #[test]
    fn balanced_grid_quarters() {
        let lens: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        let c = balanced_cover(&lens, 4, 0.0).unwrap();
        assert_eq!(count(&c, &lens), vec![25, 25, 25, 25]);
    }

    #[test]
    fn balanced_with_duplicates() {
        let lens = [1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let c = balanced_cover(&lens, 2, 0.0).unwrap();
        let first: Vec<f64> = lens.iter().copied().filter(|&x| c.intervals[0].contains(x)).collect();
        assert_eq!(first, vec![1.0; 4]);
        assert_eq!(count(&c, &lens), vec![4, 4]);
    }

    #[test]
    fn balanced_single_interval_is_full_range() {
        let lens = [3.0, -2.0, 7.5, 0.0];
        let c = balanced_cover(&lens, 1, 0.3).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c.intervals[0].lo, c.intervals[0].hi), (-2.0, 7.5));
    }

    #[test]
    fn balanced_uneven_division_within_one() {
        let lens: Vec<f64> = (0..10).map(|i| (i * i) as f64).collect();
        let c = balanced_cover(&lens, 4, 0.0).unwrap();
        for k in count(&c, &lens) {
            assert!((2..=3).contains(&k));
        }
        assert!(c.is_valid_for(&lens));
    }

    #[test]
    fn balanced_heavy_ties_stay_valid() {
        let lens = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0];
        let c = balanced_cover(&lens, 5, 0.1).unwrap();
        assert!(c.is_valid_for(&lens));
    }
}
