//! Feasibility of a set of random edges when given disjoint clusters must be
//! monochromatic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{normalize_edge, Color, Coloring, Hypergraph, HypergraphBuilder, Vertex};

use super::{is_two_colorable_with, is_two_colorable_with_fixed, Budget, DecisionResult, SearchStats, Verdict};

/// Exhaustive cluster enumeration refuses more clusters than this.
pub const EXHAUSTIVE_CLUSTER_LIMIT: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterInstance {
    pub n: usize,
    pub clusters: Vec<Vec<Vertex>>,
    pub r_edges: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterDecision {
    /// Witness (when colorable) is a coloring of all `n` original vertices.
    pub result: DecisionResult,
    pub cluster_colors: Option<Vec<Color>>,
}

/// Vertex map onto the contracted instance: clusters become `0..t`, the
/// remaining vertices follow in index order.
struct Contraction {
    image: Vec<Vertex>,
    size: usize,
}

impl ClusterInstance {
    pub fn new(n: usize, clusters: Vec<Vec<Vertex>>, r_edges: Vec<Vec<Vertex>>) -> Result<Self> {
        let inst = ClusterInstance { n, clusters, r_edges };
        inst.contraction()?;
        for e in &inst.r_edges {
            normalize_edge(n, e)?;
        }
        Ok(inst)
    }

    fn contraction(&self) -> Result<Contraction> {
        let t = self.clusters.len();
        let mut image = vec![Vertex::MAX; self.n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                if v as usize >= self.n {
                    return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
                }
                if image[v as usize] != Vertex::MAX {
                    return Err(Error::Input(format!(
                        "vertex {v} lies in more than one cluster"
                    )));
                }
                image[v as usize] = i as Vertex;
            }
        }
        let mut next = t as Vertex;
        for slot in image.iter_mut().filter(|s| **s == Vertex::MAX) {
            *slot = next;
            next += 1;
        }
        Ok(Contraction {
            image,
            size: next as usize,
        })
    }

    /// Contracted hypergraph, or `None` when some edge collapses to a single
    /// vertex (it would be monochromatic under every cluster coloring).
    fn contracted(&self, c: &Contraction) -> Result<Option<Hypergraph>> {
        let mut b = HypergraphBuilder::new(c.size);
        for e in &self.r_edges {
            let mut img: Vec<Vertex> = e.iter().map(|&v| c.image[v as usize]).collect();
            img.sort_unstable();
            img.dedup();
            if img.len() < 2 {
                return Ok(None);
            }
            b.add_edge(&img)?;
        }
        Ok(Some(b.build()))
    }

    fn expand(&self, c: &Contraction, contracted: &Coloring) -> (Coloring, Vec<Color>) {
        let full = Coloring::new(
            (0..self.n)
                .map(|v| contracted.get(c.image[v]))
                .collect(),
        );
        let clusters = (0..self.clusters.len())
            .map(|i| contracted.get(i as Vertex))
            .collect();
        (full, clusters)
    }
}

/// True iff some coloring with every cluster monochromatic leaves no edge of
/// `r_edges` monochromatic. Each cluster is contracted to one vertex and the
/// contracted instance goes to the exact decider.
pub fn cluster_feasible(inst: &ClusterInstance, budget: &Budget) -> Result<ClusterDecision> {
    let c = inst.contraction()?;
    let Some(h) = inst.contracted(&c)? else {
        return Ok(ClusterDecision {
            result: DecisionResult::not_colorable(SearchStats::default()),
            cluster_colors: None,
        });
    };
    let result = is_two_colorable_with(&h, budget);
    Ok(finish(inst, &c, result))
}

fn finish(inst: &ClusterInstance, c: &Contraction, result: DecisionResult) -> ClusterDecision {
    match &result.witness {
        Some(w) => {
            let (full, clusters) = inst.expand(c, w);
            ClusterDecision {
                result: DecisionResult {
                    verdict: result.verdict,
                    witness: Some(full),
                    stats: result.stats,
                },
                cluster_colors: Some(clusters),
            }
        }
        None => ClusterDecision {
            result,
            cluster_colors: None,
        },
    }
}

/// Same answer as [`cluster_feasible`], by trying all `2^t` cluster colorings
/// (cluster 0 fixed to color one) and deciding the free vertices for each.
pub fn cluster_feasible_exhaustive(inst: &ClusterInstance, budget: &Budget) -> Result<ClusterDecision> {
    let t = inst.clusters.len();
    if t > EXHAUSTIVE_CLUSTER_LIMIT {
        return Err(Error::TooLarge {
            n: t,
            limit: EXHAUSTIVE_CLUSTER_LIMIT,
        });
    }
    let c = inst.contraction()?;
    let Some(h) = inst.contracted(&c)? else {
        return Ok(ClusterDecision {
            result: DecisionResult::not_colorable(SearchStats::default()),
            cluster_colors: None,
        });
    };
    let mut stats = SearchStats::default();
    let patterns: u64 = if t == 0 { 1 } else { 1 << (t - 1) };
    for mask in 0..patterns {
        let fixed: Vec<(Vertex, Color)> = (0..t)
            .map(|i| {
                let c = if mask >> i & 1 == 1 { Color::Two } else { Color::One };
                (i as Vertex, c)
            })
            .collect();
        let r = is_two_colorable_with_fixed(&h, &fixed, budget)?;
        stats.nodes += r.stats.nodes + 1;
        stats.conflicts += r.stats.conflicts;
        stats.propagations += r.stats.propagations;
        stats.elapsed_us += r.stats.elapsed_us;
        match r.verdict {
            Verdict::Colorable => {
                let mut out = finish(inst, &c, r);
                out.result.stats = stats;
                return Ok(out);
            }
            Verdict::Undecided => {
                return Ok(ClusterDecision {
                    result: DecisionResult {
                        verdict: Verdict::Undecided,
                        witness: None,
                        stats,
                    },
                    cluster_colors: None,
                })
            }
            Verdict::NotColorable => {}
        }
    }
    Ok(ClusterDecision {
        result: DecisionResult::not_colorable(stats),
        cluster_colors: None,
    })
}
