//! k-partite subhypergraphs and dyadic regularization of (k-1)-tuple degrees.

use std::collections::HashMap;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::rng::{derive_seed, rng_from_seed};

use super::families::at_least;

/// The constant chain `c1 ≥ c2 ≥ ... ≥ c5`, computed from actual counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Constants {
    pub fn from_c1(c1: f64, k: usize, ell: usize) -> Self {
        let c2 = c1 / 2.0;
        let c3 = factorial(k) / (k as f64).powi(k as i32) * c2;
        let c4 = c3 / 2.0;
        let c5 = c4 * (c4 / (4.0 * (ell as f64 - 1.0))).min(1.0 / 8.0);
        Constants { c1, c2, c3, c4, c5 }
    }

    /// `c1 = m / n^{k-ε}`.
    pub fn from_edge_count(m: usize, n: usize, k: usize, ell: usize, epsilon: f64) -> Self {
        Self::from_c1(m as f64 / (n as f64).powf(k as f64 - epsilon), k, ell)
    }
}

/// A hypergraph with a partition `V_1, ..., V_k` (stored 0-based) such that
/// every edge meets every part exactly once.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "PartiteRecord", try_from = "PartiteRecord")]
pub struct PartiteHypergraph {
    pub hypergraph: Hypergraph,
    pub k: usize,
    /// Part of every vertex, in `0..k`.
    pub parts: Vec<usize>,
    /// Set once degrees are regularized: nonzero head degrees lie in `[n^{1-α}, 2n^{1-α}]`.
    pub alpha: Option<f64>,
    pub constants: Option<Constants>,
    /// Edge count of the hypergraph the partition was taken from.
    pub source_edges: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PartiteRecord {
    n: usize,
    k: usize,
    parts: Vec<usize>,
    edges: Vec<Vec<Vertex>>,
    alpha: Option<f64>,
    constants: Option<Constants>,
    source_edges: usize,
}

impl From<PartiteHypergraph> for PartiteRecord {
    fn from(p: PartiteHypergraph) -> Self {
        PartiteRecord {
            n: p.hypergraph.n(),
            k: p.k,
            edges: p.hypergraph.to_edge_list(),
            parts: p.parts,
            alpha: p.alpha,
            constants: p.constants,
            source_edges: p.source_edges,
        }
    }
}

impl TryFrom<PartiteRecord> for PartiteHypergraph {
    type Error = Error;
    fn try_from(r: PartiteRecord) -> Result<Self> {
        let mut p = PartiteHypergraph::new(Hypergraph::new(r.n, r.edges)?, r.k, r.parts)?;
        p.alpha = r.alpha;
        p.constants = r.constants;
        p.source_edges = r.source_edges;
        Ok(p)
    }
}

impl PartiteHypergraph {
    pub fn new(h: Hypergraph, k: usize, parts: Vec<usize>) -> Result<Self> {
        if parts.len() != h.n() {
            return Err(Error::Input(format!(
                "partition covers {} vertices, hypergraph has {}",
                parts.len(),
                h.n()
            )));
        }
        if !(2..=64).contains(&k) {
            return Err(Error::Input(format!("k = {k} outside 2..=64")));
        }
        if let Some(p) = parts.iter().find(|&&p| p >= k) {
            return Err(Error::Input(format!("part index {p} not below k = {k}")));
        }
        h.require_uniform(k)?;
        if let Some(e) = h.edges().find(|e| !meets_all(e, &parts, k)) {
            return Err(Error::Input(format!("edge {e:?} does not meet every part once")));
        }
        let source_edges = h.edge_count();
        Ok(PartiteHypergraph {
            hypergraph: h,
            k,
            parts,
            alpha: None,
            constants: None,
            source_edges,
        })
    }

    pub fn n(&self) -> usize {
        self.hypergraph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.hypergraph.edge_count()
    }

    pub fn retained_fraction(&self) -> f64 {
        if self.source_edges == 0 {
            return 0.0;
        }
        self.edge_count() as f64 / self.source_edges as f64
    }

    /// Vertices of `V_{j+1}` in index order.
    pub fn part_members(&self, j: usize) -> Vec<Vertex> {
        (0..self.n() as Vertex)
            .filter(|&v| self.parts[v as usize] == j)
            .collect()
    }

    /// Edge members listed by part: entry `j` lies in `V_{j+1}`.
    pub fn ordered(&self, e: &[Vertex]) -> Vec<Vertex> {
        let mut out = vec![0; self.k];
        for &v in e {
            out[self.parts[v as usize]] = v;
        }
        out
    }

    /// Degrees of all heads (edge members in `V_1..V_{k-1}`, listed by part).
    pub fn head_degrees(&self) -> HashMap<Vec<Vertex>, usize> {
        let mut deg = HashMap::new();
        for e in self.hypergraph.edges() {
            let mut o = self.ordered(e);
            o.pop();
            *deg.entry(o).or_insert(0) += 1;
        }
        deg
    }

    /// Number of heads whose nonzero degree falls outside `[n^{1-α}, 2n^{1-α}]`.
    pub fn degree_window_violations(&self, alpha: f64) -> usize {
        let lo = (self.n() as f64).powf(1.0 - alpha);
        self.head_degrees()
            .values()
            .filter(|&&d| !(at_least(d as f64, lo) && at_least(2.0 * lo, d as f64)))
            .count()
    }

    /// Same partition and metadata, edges restricted to those satisfying `keep`.
    pub fn filter_edges<F: FnMut(&[Vertex]) -> bool>(&self, keep: F) -> PartiteHypergraph {
        PartiteHypergraph {
            hypergraph: self.hypergraph.filter_edges(keep),
            k: self.k,
            parts: self.parts.clone(),
            alpha: self.alpha,
            constants: self.constants,
            source_edges: self.source_edges,
        }
    }
}

fn meets_all(e: &[Vertex], parts: &[usize], k: usize) -> bool {
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut mask = 0u64;
    for &v in e {
        mask |= 1 << parts[v as usize];
    }
    mask == full && e.len() == k
}

/// Best of `trials` uniformly random partitions into `k` parts, by the
/// number of edges meeting every part once; only those edges are kept.
pub fn k_partite_reduction(h: &Hypergraph, k: usize, trials: usize, seed: u64) -> Result<PartiteHypergraph> {
    if trials == 0 {
        return Err(Error::Input("at least one partition trial is required".into()));
    }
    if !(2..=64).contains(&k) {
        return Err(Error::Input(format!("k = {k} outside 2..=64")));
    }
    h.require_uniform(k)?;
    let mut best: Option<(usize, Vec<usize>)> = None;
    for t in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, t as u64));
        let parts: Vec<usize> = (0..h.n()).map(|_| rng.random_range(0..k)).collect();
        let kept = h.edges().filter(|e| meets_all(e, &parts, k)).count();
        if best.as_ref().is_none_or(|(b, _)| kept > *b) {
            best = Some((kept, parts));
        }
    }
    let (_, parts) = best.expect("trials >= 1");
    let kept = h.filter_edges(|e| meets_all(e, &parts, k));
    let mut p = PartiteHypergraph::new(kept, k, parts)?;
    p.source_edges = h.edge_count();
    Ok(p)
}

/// One dyadic degree class `[2^i, 2^{i+1})` of heads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicBucket {
    pub i: u32,
    pub tuples: usize,
    pub edges: usize,
    /// Share of all (post-deletion) edges going through the class.
    pub fraction: f64,
    pub threshold: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularizationReport {
    pub constants: Constants,
    /// Heads of degree below this (`c3/2 · n^{1-ε}`) lose their edges.
    pub low_degree_threshold: f64,
    pub removed_low: usize,
    pub buckets: Vec<DyadicBucket>,
    pub selected: u32,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regularization {
    pub partite: PartiteHypergraph,
    pub report: RegularizationReport,
}

/// `floor(log2 d)` for `d ≥ 1`.
fn dyadic_class(d: usize) -> u32 {
    usize::BITS - 1 - d.leading_zeros()
}

/// Heads grouped by dyadic degree class: `(i, heads, edges through them)`, sorted by `i`.
pub fn dyadic_buckets<I: IntoIterator<Item = usize>>(degrees: I) -> Vec<(u32, usize, usize)> {
    let mut by: HashMap<u32, (usize, usize)> = HashMap::new();
    for d in degrees.into_iter().filter(|&d| d > 0) {
        let slot = by.entry(dyadic_class(d)).or_default();
        slot.0 += 1;
        slot.1 += d;
    }
    let mut out: Vec<(u32, usize, usize)> = by.into_iter().map(|(i, (t, e))| (i, t, e)).collect();
    out.sort_unstable();
    out
}

/// Normalized threshold of class `i`:
/// `2^{-i/(ℓ-1)}/D1 + 2^{i(ℓ-2)/(ℓ-1)}/D2` with
/// `D1 = 4(ℓ-1)/c4 · n^{-(1-ε)/(ℓ-1)}` and `D2 = 8 n^{(ℓ-2)(1-ε/2)/(ℓ-1)}`.
pub fn dyadic_threshold(i: u32, n: usize, ell: usize, epsilon: f64, c4: f64) -> f64 {
    let l1 = ell as f64 - 1.0;
    let nf = n as f64;
    let i = i as f64;
    let d1 = 4.0 * l1 / c4 * nf.powf(-(1.0 - epsilon) / l1);
    let d2 = 8.0 * nf.powf((ell as f64 - 2.0) * (1.0 - epsilon / 2.0) / l1);
    2f64.powf(-i / l1) / d1 + 2f64.powf(i * (ell as f64 - 2.0) / l1) / d2
}

/// Index of the bucket maximizing `(edge share) / threshold`; first wins ties.
pub fn select_dyadic_bucket(edges: &[usize], thresholds: &[f64]) -> Option<usize> {
    let total: usize = edges.iter().sum();
    if total == 0 || edges.len() != thresholds.len() {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for (j, (&e, &t)) in edges.iter().zip(thresholds).enumerate() {
        if e == 0 {
            continue;
        }
        let r = e as f64 / total as f64 / t;
        if best.is_none_or(|(_, b)| r > b) {
            best = Some((j, r));
        }
    }
    best.map(|(j, _)| j)
}

/// Deletes edges through heads of degree below `c3/2 · n^{1-ε}`, then keeps
/// only the edges through the dyadic degree class with the best ratio of
/// edge share to normalized threshold. The result has
/// `α = 1 - i·ln2 / ln n` where `2^i` is the class's lower end.
pub fn regularize_degrees(ph: &PartiteHypergraph, epsilon: f64, ell: usize) -> Result<Regularization> {
    if ell < 2 {
        return Err(Error::Input(format!("ell must be at least 2, got {ell}")));
    }
    let n = ph.n();
    let nf = n as f64;
    let constants = Constants::from_edge_count(ph.source_edges, n, ph.k, ell, epsilon);
    let low = constants.c3 / 2.0 * nf.powf(1.0 - epsilon);
    let degrees = ph.head_degrees();
    let removed_low: usize = degrees.values().filter(|&&d| (d as f64) < low).sum();
    let kept_degrees = degrees.values().copied().filter(|&d| d as f64 >= low);
    let raw = dyadic_buckets(kept_degrees);
    if raw.is_empty() || n < 2 {
        return Err(Error::ReductionFailed(format!(
            "no head has degree at least {low:.3}"
        )));
    }
    let total: usize = raw.iter().map(|b| b.2).sum();
    let thresholds: Vec<f64> = raw
        .iter()
        .map(|&(i, _, _)| dyadic_threshold(i, n, ell, epsilon, constants.c4))
        .collect();
    let edge_counts: Vec<usize> = raw.iter().map(|b| b.2).collect();
    let pick = select_dyadic_bucket(&edge_counts, &thresholds).expect("nonempty buckets");
    let buckets: Vec<DyadicBucket> = raw
        .iter()
        .zip(&thresholds)
        .map(|(&(i, tuples, edges), &threshold)| {
            let fraction = edges as f64 / total as f64;
            DyadicBucket {
                i,
                tuples,
                edges,
                fraction,
                threshold,
                ratio: fraction / threshold,
            }
        })
        .collect();
    let selected = raw[pick].0;
    let alpha = 1.0 - selected as f64 * std::f64::consts::LN_2 / nf.ln();
    let mut partite = ph.filter_edges(|e| {
        let mut o = ph.ordered(e);
        o.pop();
        let d = degrees[&o];
        d as f64 >= low && dyadic_class(d) == selected
    });
    partite.alpha = Some(alpha);
    partite.constants = Some(constants);
    Ok(Regularization {
        partite,
        report: RegularizationReport {
            constants,
            low_degree_threshold: low,
            removed_low,
            buckets,
            selected,
            alpha,
        },
    })
}

/// `t = ⌊c5 · ℓ^{-k} · n^{(ℓ/(ℓ-1))(α-ε/2)}⌋`, at least 1.
pub fn stage_count(c5: f64, ell: usize, k: usize, n: usize, alpha: f64, epsilon: f64) -> usize {
    let l = ell as f64;
    let t = c5 * l.powi(-(k as i32)) * (n as f64).powf(l / (l - 1.0) * (alpha - epsilon / 2.0));
    if t.is_finite() && t >= 1.0 {
        t.floor() as usize
    } else {
        1
    }
}
