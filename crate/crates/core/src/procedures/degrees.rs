//! Filters for (k-1)- and (k-2)-tuples of high degree.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Tuples of one size whose degree clears a threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeSplit {
    pub k: usize,
    pub tuple_size: usize,
    pub threshold: f64,
    /// Listed tuples (sorted) with their degrees, in lexicographic order.
    pub tuples: Vec<(Vec<Vertex>, usize)>,
    /// Distinct edges containing at least one listed tuple.
    pub edge_count: usize,
}

impl DegreeSplit {
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Edges of `h` containing none of the listed tuples.
    pub fn remove_from(&self, h: &Hypergraph) -> Hypergraph {
        if self.tuples.is_empty() {
            return h.clone();
        }
        let listed: HashSet<&[Vertex]> = self.tuples.iter().map(|(t, _)| t.as_slice()).collect();
        h.filter_edges(|e| !touches(e, self.tuple_size, &listed))
    }
}

fn touches(e: &[Vertex], size: usize, listed: &HashSet<&[Vertex]>) -> bool {
    let mut hit = false;
    for_each_combination(e, size, |sub| hit |= listed.contains(sub));
    hit
}

/// Degrees of every `size`-subset of every edge (subsets of degree zero are absent).
pub fn sub_tuple_degrees(h: &Hypergraph, size: usize) -> HashMap<Vec<Vertex>, usize> {
    let mut deg = HashMap::new();
    for e in h.edges() {
        for_each_combination(e, size, |sub| *deg.entry(sub.to_vec()).or_insert(0) += 1);
    }
    deg
}

fn split(h: &Hypergraph, k: usize, size: usize, threshold: f64, strict: bool) -> Result<DegreeSplit> {
    h.require_uniform(k)?;
    let mut tuples: Vec<(Vec<Vertex>, usize)> = sub_tuple_degrees(h, size)
        .into_iter()
        .filter(|&(_, d)| if strict { d as f64 > threshold } else { d as f64 >= threshold })
        .collect();
    tuples.sort_unstable();
    let listed: HashSet<&[Vertex]> = tuples.iter().map(|(t, _)| t.as_slice()).collect();
    let edge_count = if listed.is_empty() {
        0
    } else {
        h.edges().filter(|e| touches(e, size, &listed)).count()
    };
    Ok(DegreeSplit {
        k,
        tuple_size: size,
        threshold,
        tuples,
        edge_count,
    })
}

/// All (k-1)-tuples of degree strictly greater than `threshold`, and the
/// number of edges through them. The usual threshold is `n^{1-ε/2}`.
pub fn split_high_degree_km1(h: &Hypergraph, k: usize, threshold: f64) -> Result<DegreeSplit> {
    if k < 2 {
        return Err(Error::Input(format!("k must be at least 2, got {k}")));
    }
    split(h, k, k - 1, threshold, true)
}

/// All (k-2)-tuples of degree at least `n^{2-δ_max}`, and the number of edges
/// through them.
pub fn split_high_degree_km2(h: &Hypergraph, k: usize, delta_max: f64) -> Result<DegreeSplit> {
    if k < 3 {
        return Err(Error::Input(format!("(k-2)-tuple split needs k >= 3, got {k}")));
    }
    let threshold = (h.n() as f64).powf(2.0 - delta_max);
    split(h, k, k - 2, threshold, false)
}

/// `ℓε / (2(ℓ-1))`, the largest δ for which (k-2)-tuples of degree `n^{2-δ}` count as high.
pub fn km2_delta_max(ell: usize, epsilon: f64) -> f64 {
    ell as f64 * epsilon / (2.0 * (ell as f64 - 1.0))
}

/// `c1 = m / n^{k-ε}` for a hypergraph with `m` edges.
pub fn density_constant(m: usize, n: usize, k: usize, epsilon: f64) -> f64 {
    m as f64 / (n as f64).powf(k as f64 - epsilon)
}

/// The (k-1)-tuple branch applies when at least `c1/4 · n^{k-1-ε}` tuples are listed.
pub fn km1_branch_applies(split: &DegreeSplit, c1: f64, n: usize, epsilon: f64) -> bool {
    split.tuples.len() as f64 >= c1 / 4.0 * (n as f64).powf(split.k as f64 - 1.0 - epsilon)
}

/// The (k-2)-tuple branch applies when at least `c1/4 · n^{k-ε}` edges go through listed tuples.
pub fn km2_branch_applies(split: &DegreeSplit, c1: f64, n: usize, epsilon: f64) -> bool {
    split.edge_count as f64 >= c1 / 4.0 * (n as f64).powf(split.k as f64 - epsilon)
}
