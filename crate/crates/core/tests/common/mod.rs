//! Reference implementations used only by tests. They share no code with the
//! library: the normal tail comes from `puruspe`, distances and
//! neighbourhoods are computed by brute force.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gmapper::clustering::{ClusterLabels, Label, Metric};
use gmapper::mapper::MapperGraph;

/// Anderson-Darling A² and A*² straight from the textbook formula, with
/// Welford standardization and Kahan summation.
pub fn ad_oracle(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    let sd = (m2 / (n - 1) as f64).sqrt();
    let mut y: Vec<f64> = values.iter().map(|x| (x - mean) / sd).collect();
    y.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let clamp = |p: f64| p.max(1e-15).min(1.0 - 1e-15);
    let lower = |x: f64| clamp(0.5 * puruspe::erfc(-x / std::f64::consts::SQRT_2));
    let upper = |x: f64| clamp(0.5 * puruspe::erfc(x / std::f64::consts::SQRT_2));

    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for i in 1..=n {
        let term = (2 * i - 1) as f64 * (lower(y[i - 1]).ln() + upper(y[n - i]).ln());
        let t = term - carry;
        let s = sum + t;
        carry = (s - sum) - t;
        sum = s;
    }
    let nf = n as f64;
    let a2 = -nf - sum / nf;
    (a2, a2 * (1.0 + 4.0 / nf - 25.0 / (nf * nf)))
}

fn euclid(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

fn one_minus_pearson(p: &[f64], q: &[f64]) -> f64 {
    let d = p.len() as f64;
    let (mp, mq) = (p.iter().sum::<f64>() / d, q.iter().sum::<f64>() / d);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in p.iter().zip(q) {
        sxy += (a - mp) * (b - mq);
        sxx += (a - mp) * (a - mp);
        syy += (b - mq) * (b - mq);
    }
    (1.0 - sxy / (sxx * syy).sqrt()).clamp(0.0, 2.0)
}

/// O(n²) DBSCAN. Clusters are the connected components of the core-point
/// graph, numbered by their smallest core index; a border point goes to the
/// lowest-numbered component it touches. Returns `None` for noise.
pub fn naive_dbscan(points: &[Vec<f64>], eps: f64, min_pts: usize, metric: Metric) -> Vec<Option<usize>> {
    let n = points.len();
    let dist = |i: usize, j: usize| match metric {
        Metric::Euclidean => euclid(&points[i], &points[j]),
        Metric::Correlation => one_minus_pearson(&points[i], &points[j]),
    };
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| dist(i, j) <= eps).collect()).collect();
    let core: Vec<bool> = nbrs.iter().map(|v| v.len() >= min_pts).collect();

    let mut comp = vec![usize::MAX; n];
    let mut n_comp = 0;
    for s in 0..n {
        if !core[s] || comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = n_comp;
        while let Some(p) = stack.pop() {
            for &q in &nbrs[p] {
                if core[q] && comp[q] == usize::MAX {
                    comp[q] = n_comp;
                    stack.push(q);
                }
            }
        }
        n_comp += 1;
    }
    (0..n)
        .map(|i| {
            if core[i] {
                Some(comp[i])
            } else {
                nbrs[i].iter().filter(|&&j| core[j]).map(|&j| comp[j]).min()
            }
        })
        .collect()
}

/// True when the two labelings agree up to a renaming of clusters.
pub fn same_partition(labels: &ClusterLabels, reference: &[Option<usize>]) -> bool {
    if labels.labels.len() != reference.len() {
        return false;
    }
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for (got, want) in labels.labels.iter().zip(reference) {
        match (got, want) {
            (Label::Noise, None) => {}
            (Label::Cluster(a), Some(b)) => {
                if *forward.entry(*a).or_insert(*b) != *b || *backward.entry(*b).or_insert(*a) != *a {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Every pair of nodes with intersecting member sets, with the intersection
/// size.
pub fn brute_force_edges(graph: &MapperGraph) -> BTreeSet<(usize, usize, usize)> {
    let sets: Vec<BTreeSet<usize>> = graph.nodes.iter().map(|n| n.members.iter().copied().collect()).collect();
    let mut edges = BTreeSet::new();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            let shared = sets[a].intersection(&sets[b]).count();
            if shared > 0 {
                edges.insert((graph.nodes[a].id, graph.nodes[b].id, shared));
            }
        }
    }
    edges
}

pub fn edge_set(graph: &MapperGraph) -> BTreeSet<(usize, usize, usize)> {
    graph.edges.iter().map(|e| (e.a, e.b, e.shared)).collect()
}
