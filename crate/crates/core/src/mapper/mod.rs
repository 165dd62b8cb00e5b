//! Mapper graph construction.
//!
//! Every cover interval is pulled back through the lens, the preimage is
//! clustered with DBSCAN in the ambient space, and each cluster becomes a
//! node. Two nodes are joined whenever their member sets intersect; this is
//! checked for every pair of nodes, not only for nodes from consecutive
//! intervals.

mod lens;

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lens::{apply_lens, LensKind, LensVector, Normalization};

use crate::clustering::{dbscan, ClusteringError, Metric};
use crate::cover::{Interval, IntervalCover};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapperError {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("row {row} has {found} coordinates, expected {expected}")]
    RaggedPoints { row: usize, expected: usize, found: usize },
    #[error("coordinate {col} of point {row} is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("lens is constant; min-max normalization is undefined")]
    DegenerateNormalization,
    #[error("coordinate {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },
    #[error("no column named `{0}`")]
    UnknownColumn(String),
    #[error("need at least {needed} points, got {n}")]
    TooFewPoints { n: usize, needed: usize },
    #[error("lens has {lens} values for {points} points")]
    LensLength { lens: usize, points: usize },
    #[error("cover has no intervals")]
    EmptyCover,
    #[error("eps must be positive, got {0}")]
    InvalidEps(f64),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
}

/// `n` points in `d` dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    data: Vec<f64>,
    dim: usize,
    pub labels: Option<Vec<String>>,
    pub column_names: Option<Vec<String>>,
}

impl PointCloud {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self, MapperError> {
        let dim = rows.first().map(Vec::len).ok_or(MapperError::EmptyCloud)?;
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (row, p) in rows.into_iter().enumerate() {
            if p.len() != dim {
                return Err(MapperError::RaggedPoints {
                    row,
                    expected: dim,
                    found: p.len(),
                });
            }
            data.extend(p);
        }
        Self::from_flat(data, dim)
    }

    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self, MapperError> {
        if dim == 0 || data.is_empty() {
            return Err(MapperError::EmptyCloud);
        }
        if data.len() % dim != 0 {
            return Err(MapperError::RaggedPoints {
                row: data.len() / dim,
                expected: dim,
                found: data.len() % dim,
            });
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(MapperError::NonFinite {
                row: i / dim,
                col: i % dim,
            });
        }
        Ok(PointCloud {
            data,
            dim,
            labels: None,
            column_names: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, MapperError> {
        if labels.len() != self.len() {
            return Err(MapperError::LabelCount {
                labels: labels.len(),
                points: self.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }
}

/// What happens to points DBSCAN labels as noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePolicy {
    /// Noise points belong to no node.
    #[default]
    Drop,
    /// Every noise point becomes a node of its own.
    Singletons,
}

impl std::str::FromStr for NoisePolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "drop" => Ok(NoisePolicy::Drop),
            "singletons" => Ok(NoisePolicy::Singletons),
            other => Err(format!("unknown noise policy `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterParams {
    pub eps: f64,
    pub min_pts: usize,
    pub metric: Metric,
    pub noise: NoisePolicy,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            eps: 0.1,
            min_pts: 5,
            metric: Metric::Euclidean,
            noise: NoisePolicy::Drop,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperNode {
    pub id: usize,
    /// Index of the cover interval whose preimage produced this node.
    #[serde(rename = "interval")]
    pub interval_index: usize,
    /// Number of member points.
    pub size: usize,
    /// Sorted point indices. Empty when the graph was written without members.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<usize>,
    pub mean_lens: f64,
    #[serde(rename = "labels", default)]
    pub label_histogram: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MapperEdge {
    pub a: usize,
    pub b: usize,
    /// Number of points the two nodes share.
    pub shared: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapperGraph {
    pub nodes: Vec<MapperNode>,
    pub edges: Vec<MapperEdge>,
    #[serde(default)]
    pub provenance: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n_nodes: usize,
    pub n_edges: usize,
    pub n_components: usize,
    /// First Betti number `E - V + C`.
    pub cycle_rank: usize,
}

/// Indices of points whose lens value lies in the closed interval.
pub fn preimage(lens: &[f64], iv: &Interval) -> Vec<usize> {
    lens.iter()
        .enumerate()
        .filter(|(_, &x)| iv.contains(x))
        .map(|(i, _)| i)
        .collect()
}

pub fn build_mapper(
    cloud: &PointCloud,
    lens: &LensVector,
    cover: &IntervalCover,
    params: &ClusterParams,
) -> Result<MapperGraph, MapperError> {
    if lens.len() != cloud.len() {
        return Err(MapperError::LensLength {
            lens: lens.len(),
            points: cloud.len(),
        });
    }
    if cover.is_empty() {
        return Err(MapperError::EmptyCover);
    }
    if !(params.eps > 0.0) {
        return Err(MapperError::InvalidEps(params.eps));
    }

    let per_interval = cover
        .intervals
        .par_iter()
        .map(|iv| cluster_preimage(cloud, &lens.values, iv, params))
        .collect::<Result<Vec<_>, _>>()?;

    let mut nodes = Vec::new();
    for (interval_index, groups) in per_interval.into_iter().enumerate() {
        for members in groups {
            nodes.push(make_node(nodes.len(), interval_index, members, cloud, &lens.values));
        }
    }
    let edges = nerve_edges(&nodes, cloud.len());

    let provenance = serde_json::json!({
        "lens": { "kind": lens.kind, "normalization": lens.normalization },
        "cover": {
            "strategy": cover.source.name(),
            "n_intervals": cover.len(),
            "iterations": cover.iterations,
            "intervals": cover.intervals.iter().map(|iv| [iv.lo, iv.hi]).collect::<Vec<_>>(),
        },
        "clustering": params,
    });
    Ok(MapperGraph {
        nodes,
        edges,
        provenance,
    })
}

/// Member lists (global indices) for every node produced by one interval:
/// clusters in DBSCAN order, then noise singletons if requested.
fn cluster_preimage(
    cloud: &PointCloud,
    lens: &[f64],
    iv: &Interval,
    params: &ClusterParams,
) -> Result<Vec<Vec<usize>>, MapperError> {
    let idx = preimage(lens, iv);
    let points: Vec<&[f64]> = idx.iter().map(|&i| cloud.point(i)).collect();
    let labels = dbscan(&points, params.eps, params.min_pts, params.metric)?;
    let mut groups: Vec<Vec<usize>> = labels
        .clusters()
        .into_iter()
        .map(|c| c.into_iter().map(|local| idx[local]).collect())
        .collect();
    if params.noise == NoisePolicy::Singletons {
        groups.extend(labels.noise().into_iter().map(|local| vec![idx[local]]));
    }
    Ok(groups)
}

fn make_node(id: usize, interval_index: usize, members: Vec<usize>, cloud: &PointCloud, lens: &[f64]) -> MapperNode {
    let mean_lens = members.iter().map(|&i| lens[i]).sum::<f64>() / members.len() as f64;
    let mut label_histogram = BTreeMap::new();
    if let Some(labels) = &cloud.labels {
        for &i in &members {
            *label_histogram.entry(labels[i].clone()).or_insert(0) += 1;
        }
    }
    MapperNode {
        id,
        interval_index,
        size: members.len(),
        members,
        mean_lens,
        label_histogram,
    }
}

/// Edges between all pairs of nodes with a common point, weighted by the
/// number of shared points.
fn nerve_edges(nodes: &[MapperNode], n_points: usize) -> Vec<MapperEdge> {
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n_points];
    for node in nodes {
        for &p in &node.members {
            owners[p].push(node.id);
        }
    }
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for ids in owners.iter().filter(|o| o.len() > 1) {
        for (k, &a) in ids.iter().enumerate() {
            for &b in &ids[k + 1..] {
                *shared.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
    }
    let mut edges: Vec<MapperEdge> = shared
        .into_iter()
        .map(|((a, b), shared)| MapperEdge { a, b, shared })
        .collect();
    edges.sort_unstable();
    edges
}

pub fn graph_summary(g: &MapperGraph) -> GraphSummary {
    let n = g.nodes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for e in &g.edges {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    GraphSummary {
        n_nodes: n,
        n_edges: g.edges.len(),
        n_components: components,
        cycle_rank: g.edges.len() + components - n,
    }
}
