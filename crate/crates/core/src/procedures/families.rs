//! Greedy extraction of vertex families with disjoint neighborhoods.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// Relative slack for comparisons against real-valued powers of `n`.
pub(crate) const REL_TOL: f64 = 1e-12;

pub(crate) fn at_least(x: f64, bound: f64) -> bool {
    x >= bound - REL_TOL * bound.abs()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Family {
    /// `v_1, v_2, ...` in the order taken.
    pub vertices: Vec<Vertex>,
    /// `d_i`: degree of `v_i` in the working copy when taken.
    pub degrees: Vec<usize>,
    /// Neighborhood of `v_i` in the working copy when taken.
    pub neighborhoods: Vec<Vec<Vertex>>,
    /// Edges deleted from the working copy while building the family.
    pub working_removed: usize,
    /// Edges deleted from the graph together with the family's vertices.
    pub permanent_removed: usize,
    /// The working copy ran out of edges before the square sum reached its target.
    pub stalled: bool,
}

impl Family {
    pub fn power_sum(&self, ell: usize) -> f64 {
        self.degrees.iter().map(|&d| (d as f64).powi(ell as i32)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyExtraction {
    pub n: usize,
    pub delta: f64,
    pub ell: usize,
    pub edge_count: usize,
    /// `max(1, ⌊½ n^{1-δ}⌋)` families are attempted.
    pub target_families: usize,
    /// The graph had fewer than `n^{2-δ}` edges.
    pub precondition_failed: bool,
    pub families: Vec<Family>,
}

impl FamilyExtraction {
    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `½ n^{1-δ}`
    pub fn degree_bound(&self) -> f64 {
        0.5 * self.nf().powf(1.0 - self.delta)
    }

    /// `n^{ℓ-(ℓ-1)δ} / 2^ℓ`
    pub fn power_sum_bound(&self) -> f64 {
        let l = self.ell as f64;
        self.nf().powf(l - (l - 1.0) * self.delta) / 2f64.powi(self.ell as i32)
    }

    /// `¼ n^{2-δ}`: families grow while their square sum is below this.
    pub fn square_sum_target(&self) -> f64 {
        0.25 * self.nf().powf(2.0 - self.delta)
    }

    /// Failures of the four family invariants, as readable messages.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut used = HashSet::new();
        for (j, f) in self.families.iter().enumerate() {
            for (&v, &d) in f.vertices.iter().zip(&f.degrees) {
                if !at_least(d as f64, self.degree_bound()) {
                    out.push(format!("family {j}: vertex {v} has degree {d} below {:.3}", self.degree_bound()));
                }
                if !used.insert(v) {
                    out.push(format!("family {j}: vertex {v} already used by an earlier family"));
                }
            }
            if !at_least(f.power_sum(self.ell), self.power_sum_bound()) {
                out.push(format!(
                    "family {j}: power sum {} below {:.3}",
                    f.power_sum(self.ell),
                    self.power_sum_bound()
                ));
            }
            let mut seen = HashSet::new();
            for nb in &f.neighborhoods {
                if nb.iter().any(|u| !seen.insert(*u)) {
                    out.push(format!("family {j}: neighborhoods overlap"));
                    break;
                }
            }
        }
        out
    }

    /// Edge accounting: `Σd_i ≤ n` and at most `Σd_i²` working-copy deletions per family.
    pub fn accounting_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (j, f) in self.families.iter().enumerate() {
            let sum: usize = f.degrees.iter().sum();
            if sum > self.n {
                out.push(format!("family {j}: degree sum {sum} exceeds n"));
            }
            let sq: usize = f.degrees.iter().map(|d| d * d).sum();
            if f.working_removed > sq {
                out.push(format!("family {j}: removed {} working edges, more than {sq}", f.working_removed));
            }
        }
        out
    }
}

fn take_max_degree(w: &[BTreeSet<Vertex>]) -> Option<Vertex> {
    let mut best: Option<(usize, Vertex)> = None;
    for (v, nb) in w.iter().enumerate() {
        if !nb.is_empty() && best.is_none_or(|(d, _)| nb.len() > d) {
            best = Some((nb.len(), v as Vertex));
        }
    }
    best.map(|(_, v)| v)
}

/// Deletes every edge at `u`; returns how many were deleted.
fn isolate(g: &mut [BTreeSet<Vertex>], u: Vertex) -> usize {
    let nb = std::mem::take(&mut g[u as usize]);
    for &x in &nb {
        g[x as usize].remove(&u);
    }
    nb.len()
}

/// Greedy family extraction on a graph (2-uniform hypergraph).
///
/// For each family a working copy of the current graph is peeled: take the
/// vertex of maximum degree (smallest index on ties), record its
/// neighborhood, delete all edges at its neighbors, and repeat while the sum
/// of squared degrees stays below `¼n^{2-δ}`. The family's vertices are then
/// deleted from the graph itself.
pub fn extract_families(g: &Hypergraph, delta: f64, ell: usize) -> Result<FamilyExtraction> {
    g.require_uniform(2)?;
    if ell < 2 {
        return Err(Error::Input(format!("ell must be at least 2, got {ell}")));
    }
    let n = g.n();
    let nf = n as f64;
    let mut adj = vec![BTreeSet::new(); n];
    for e in g.edges() {
        adj[e[0] as usize].insert(e[1]);
        adj[e[1] as usize].insert(e[0]);
    }
    let target_families = ((0.5 * nf.powf(1.0 - delta)).floor() as usize).max(1);
    let mut out = FamilyExtraction {
        n,
        delta,
        ell,
        edge_count: g.edge_count(),
        target_families,
        precondition_failed: !at_least(g.edge_count() as f64, nf.powf(2.0 - delta)),
        families: Vec::new(),
    };
    let target = out.square_sum_target();

    for _ in 0..target_families {
        let mut w = adj.clone();
        let mut f = Family {
            vertices: Vec::new(),
            degrees: Vec::new(),
            neighborhoods: Vec::new(),
            working_removed: 0,
            permanent_removed: 0,
            stalled: false,
        };
        let mut square_sum = 0.0;
        while !at_least(square_sum, target) {
            let Some(v) = take_max_degree(&w) else {
                f.stalled = true;
                break;
            };
            let nb: Vec<Vertex> = w[v as usize].iter().copied().collect();
            for &u in &nb {
                f.working_removed += isolate(&mut w, u);
            }
            square_sum += (nb.len() * nb.len()) as f64;
            f.vertices.push(v);
            f.degrees.push(nb.len());
            f.neighborhoods.push(nb);
        }
        if f.vertices.is_empty() {
            break;
        }
        for &v in &f.vertices {
            f.permanent_removed += isolate(&mut adj, v);
        }
        out.families.push(f);
    }
    Ok(out)
}
