//! DBSCAN over preimages of cover elements.
//!
//! A point is a core point when at least `min_pts` points (itself included)
//! lie within distance `eps`, inclusive. Points are scanned in index order;
//! each new cluster is grown from the first unlabeled core point, and a
//! border point joins the first cluster that reaches it.
//!
//! The correlation distance `1 - r` is not a metric (the triangle inequality
//! can fail), but DBSCAN only needs the neighbourhood predicate.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClusteringError {
    #[error("points have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("point {index} has zero variance across its coordinates")]
    ZeroVariancePoint { index: usize },
    #[error("correlation distance needs at least 2 coordinates")]
    CorrelationNeedsTwoDims,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    /// `1 - r` with `r` the Pearson correlation of the two coordinate vectors.
    Correlation,
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "correlation" => Ok(Metric::Correlation),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Cluster(usize),
    Noise,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    pub labels: Vec<Label>,
    pub n_clusters: usize,
}

impl ClusterLabels {
    /// Member indices of every cluster, in cluster order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters];
        for (i, l) in self.labels.iter().enumerate() {
            if let Label::Cluster(c) = l {
                out[*c].push(i);
            }
        }
        out
    }

    pub fn noise(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Label::Noise)
            .map(|(i, _)| i)
            .collect()
    }
}

fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Centred, unit-norm copy of `p`, or `None` for a constant vector.
fn correlation_profile(p: &[f64]) -> Option<Vec<f64>> {
    let mean = p.iter().sum::<f64>() / p.len() as f64;
    let centred: Vec<f64> = p.iter().map(|x| x - mean).collect();
    let norm = centred.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return None;
    }
    Some(centred.into_iter().map(|x| x / norm).collect())
}

fn profile_distance(u: &[f64], v: &[f64]) -> f64 {
    let r: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    (1.0 - r).clamp(0.0, 2.0)
}

pub fn pairwise_distance(p: &[f64], q: &[f64], metric: Metric) -> Result<f64, ClusteringError> {
    if p.len() != q.len() {
        return Err(ClusteringError::DimensionMismatch(p.len(), q.len()));
    }
    match metric {
        Metric::Euclidean => Ok(euclidean(p, q)),
        Metric::Correlation => {
            if p.len() < 2 {
                return Err(ClusteringError::CorrelationNeedsTwoDims);
            }
            let u = correlation_profile(p).ok_or(ClusteringError::ZeroVariancePoint { index: 0 })?;
            let v = correlation_profile(q).ok_or(ClusteringError::ZeroVariancePoint { index: 1 })?;
            Ok(profile_distance(&u, &v))
        }
    }
}

/// Answers "which points lie within eps of point i" into `out`.
trait Neighbourhood {
    fn neighbours(&self, i: usize, out: &mut Vec<usize>);
}

/// Uniform grid over the first (up to three) coordinates with cell side
/// `eps`. Candidates from adjacent cells are filtered by the full distance,
/// so the answer equals a brute-force scan. Points are stored grouped by
/// cell, with their coordinates copied contiguously.
struct GridIndex<'a> {
    points: &'a [&'a [f64]],
    eps: f64,
    dims: usize,
    dim: usize,
    /// Cell key to a range of `order` / rows of `coords`.
    cells: HashMap<[i64; 3], (usize, usize)>,
    order: Vec<usize>,
    coords: Vec<f64>,
}

impl<'a> GridIndex<'a> {
    fn new(points: &'a [&'a [f64]], eps: f64) -> Self {
        let dim = points.first().map_or(0, |p| p.len());
        let mut index = GridIndex {
            points,
            eps,
            dims: dim.min(3),
            dim,
            cells: HashMap::new(),
            order: Vec::with_capacity(points.len()),
            coords: Vec::with_capacity(points.len() * dim),
        };
        let mut keyed: Vec<([i64; 3], usize)> = points.iter().enumerate().map(|(i, p)| (index.cell(p), i)).collect();
        keyed.sort_unstable();
        for (k, &(key, i)) in keyed.iter().enumerate() {
            index.cells.entry(key).or_insert((k, k)).1 = k + 1;
            index.order.push(i);
            index.coords.extend_from_slice(points[i]);
        }
        index
    }

    fn cell(&self, p: &[f64]) -> [i64; 3] {
        let mut key = [0i64; 3];
        for (k, x) in key.iter_mut().zip(p.iter().take(self.dims)) {
            *k = (x / self.eps).floor() as i64;
        }
        key
    }
}

impl Neighbourhood for GridIndex<'_> {
    fn neighbours(&self, i: usize, out: &mut Vec<usize>) {
        let p = self.points[i];
        let base = self.cell(p);
        let span = |k: usize| if k < self.dims { -1..=1i64 } else { 0..=0 };
        out.clear();
        for dx in span(0) {
            for dy in span(1) {
                for dz in span(2) {
                    let key = [
                        base[0].saturating_add(dx),
                        base[1].saturating_add(dy),
                        base[2].saturating_add(dz),
                    ];
                    if let Some(&(start, end)) = self.cells.get(&key) {
                        let rows = self.coords[start * self.dim..end * self.dim].chunks_exact(self.dim);
                        for (row, &j) in rows.zip(&self.order[start..end]) {
                            if euclidean(p, row) <= self.eps {
                                out.push(j);
                            }
                        }
                    }
                }
            }
        }
    }
}

struct CorrelationScan {
    profiles: Vec<Vec<f64>>,
    eps: f64,
}

impl Neighbourhood for CorrelationScan {
    fn neighbours(&self, i: usize, out: &mut Vec<usize>) {
        let u = &self.profiles[i];
        out.clear();
        out.extend((0..self.profiles.len()).filter(|&j| profile_distance(u, &self.profiles[j]) <= self.eps));
    }
}

/// Clusters `points` with DBSCAN. `eps` must be positive.
pub fn dbscan(points: &[&[f64]], eps: f64, min_pts: usize, metric: Metric) -> Result<ClusterLabels, ClusteringError> {
    assert!(eps > 0.0, "eps must be positive");
    if let Some(first) = points.first() {
        if let Some(bad) = points.iter().find(|p| p.len() != first.len()) {
            return Err(ClusteringError::DimensionMismatch(first.len(), bad.len()));
        }
    }
    match metric {
        Metric::Euclidean => Ok(run(points.len(), min_pts, &GridIndex::new(points, eps))),
        Metric::Correlation => {
            if points.first().is_some_and(|p| p.len() < 2) {
                return Err(ClusteringError::CorrelationNeedsTwoDims);
            }
            let profiles = points
                .iter()
                .enumerate()
                .map(|(index, p)| correlation_profile(p).ok_or(ClusteringError::ZeroVariancePoint { index }))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(run(points.len(), min_pts, &CorrelationScan { profiles, eps }))
        }
    }
}

/// Scans points in index order and grows each new cluster from its first
/// core point. A point is labelled when it is first reached, so a border
/// point belongs to the first cluster that reaches it.
fn run(n: usize, min_pts: usize, index: &dyn Neighbourhood) -> ClusterLabels {
    let mut labels: Vec<Option<Label>> = vec![None; n];
    let mut n_clusters = 0;
    let mut frontier = Vec::new();
    let mut reach = Vec::new();
    for i in 0..n {
        if labels[i].is_some() {
            continue;
        }
        index.neighbours(i, &mut reach);
        if reach.len() < min_pts {
            labels[i] = Some(Label::Noise);
            continue;
        }
        let cluster = Label::Cluster(n_clusters);
        labels[i] = Some(cluster);
        loop {
            for &q in &reach {
                match labels[q] {
                    None => {
                        labels[q] = Some(cluster);
                        frontier.push(q);
                    }
                    // Already known not to be core: becomes a border point.
                    Some(Label::Noise) => labels[q] = Some(cluster),
                    Some(Label::Cluster(_)) => {}
                }
            }
            let Some(q) = frontier.pop() else { break };
            index.neighbours(q, &mut reach);
            if reach.len() < min_pts {
                reach.clear();
            }
        }
        n_clusters += 1;
    }
    ClusterLabels {
        labels: labels.into_iter().map(|l| l.unwrap_or(Label::Noise)).collect(),
        n_clusters,
    }
}
