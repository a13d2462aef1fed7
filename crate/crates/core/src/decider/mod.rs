//! Exact 2-colorability decisions.

mod cluster;
mod prescribed;
mod search;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Hypergraph, Vertex};

pub use cluster::{cluster_feasible, cluster_feasible_exhaustive, ClusterDecision, ClusterInstance};
pub use prescribed::{
    compose_xyz_witness, forest_condition_holds, reduce_to_prescribed, sample_prescribed,
    solve_prescribed, PrescribedInstance, ReductionOutcome, ReductionStats,
};

pub(crate) use search::NaeSearch;

/// Largest vertex count the exhaustive oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Colorable,
    NotColorable,
    /// The search budget ran out before an answer was found.
    Undecided,
}

/// Limits on the search; `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Branching decisions (or assignments examined, for the exhaustive oracle).
    pub nodes: u64,
    pub conflicts: u64,
    pub propagations: u64,
    pub elapsed_us: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionResult {
    pub verdict: Verdict,
    /// Present exactly when the verdict is `Colorable`.
    pub witness: Option<Coloring>,
    pub stats: SearchStats,
}

impl DecisionResult {
    /// `Some(answer)`, or `None` when undecided.
    pub fn colorable(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Colorable => Some(true),
            Verdict::NotColorable => Some(false),
            Verdict::Undecided => None,
        }
    }

    pub(crate) fn not_colorable(stats: SearchStats) -> Self {
        DecisionResult {
            verdict: Verdict::NotColorable,
            witness: None,
            stats,
        }
    }
}

/// Decides 2-colorability exactly with no budget.
pub fn is_two_colorable(h: &Hypergraph) -> DecisionResult {
    is_two_colorable_with(h, &Budget::unlimited())
}

/// Decides 2-colorability; returns `Undecided` if `budget` is exhausted.
pub fn is_two_colorable_with(h: &Hypergraph, budget: &Budget) -> DecisionResult {
    let mut search = NaeSearch::new(h.n(), h.edges(), &[]);
    let (verdict, witness) = search.solve(budget);
    debug_assert!(witness
        .as_ref()
        .is_none_or(|w| h.is_proper(w).unwrap_or(false)));
    DecisionResult {
        verdict,
        witness,
        stats: search.stats,
    }
}

/// Same as [`is_two_colorable_with`] but some vertices have fixed colors.
pub fn is_two_colorable_with_fixed(
    h: &Hypergraph,
    fixed: &[(Vertex, Color)],
    budget: &Budget,
) -> Result<DecisionResult> {
    if let Some(&(v, _)) = fixed.iter().find(|(v, _)| *v as usize >= h.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
    }
    let mut search = NaeSearch::new(h.n(), h.edges(), fixed);
    let (verdict, witness) = search.solve(budget);
    Ok(DecisionResult {
        verdict,
        witness,
        stats: search.stats,
    })
}

/// Exhaustive search over all `2^n` colorings; refuses `n > 24`.
pub fn brute_force_two_colorable(h: &Hypergraph) -> Result<DecisionResult> {
    let n = h.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let masks: Vec<u32> = h
        .edges()
        .map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v))
        .collect();
    let mut stats = SearchStats::default();
    let start = std::time::Instant::now();
    // vertex n-1 fixed to color one: complements of proper colorings are proper
    let limit: u64 = if n == 0 { 1 } else { 1u64 << (n - 1) };
    let mut found = None;
    for mask in 0..limit {
        stats.nodes += 1;
        let mask = mask as u32;
        if masks.iter().all(|&e| {
            let hit = mask & e;
            hit != 0 && hit != e
        }) {
            found = Some(mask);
            break;
        }
    }
    stats.elapsed_us = start.elapsed().as_micros() as u64;
    Ok(match found {
        Some(mask) => DecisionResult {
            verdict: Verdict::Colorable,
            witness: Some(Coloring::from_mask(n, mask as u64)),
            stats,
        },
        None => DecisionResult::not_colorable(stats),
    })
}
