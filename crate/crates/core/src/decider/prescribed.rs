//! Reduction of a perturbation of the X/Y/Z construction to a graph with
//! prescribed vertex colors, and an exact solver for such instances.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Part, PerturbationSpec, XyzConstruction};
use crate::hypergraph::{normalize_edge, Color, Coloring, Vertex};
use crate::rng::{derive_seed, rng_from_seed};

use super::{DecisionResult, SearchStats, Verdict};

/// Pair constraints plus per-vertex prescribed colors. A vertex may carry
/// both colors; that makes the instance infeasible but is not an error.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrescribedInstance {
    pub n: usize,
    /// Sorted, without repeated `(vertex, color)` entries.
    pub prescriptions: Vec<(Vertex, Color)>,
    /// Distinct sorted pairs.
    pub pair_edges: Vec<[Vertex; 2]>,
}

impl PrescribedInstance {
    pub fn new(
        n: usize,
        mut prescriptions: Vec<(Vertex, Color)>,
        pairs: impl IntoIterator<Item = [Vertex; 2]>,
    ) -> Result<Self> {
        if let Some(&(v, _)) = prescriptions.iter().find(|(v, _)| *v as usize >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        prescriptions.sort_unstable();
        prescriptions.dedup();
        let mut seen = HashSet::new();
        let mut pair_edges = Vec::new();
        for p in pairs {
            let e = normalize_edge(n, &p)?;
            let e = [e[0], e[1]];
            if seen.insert(e) {
                pair_edges.push(e);
            }
        }
        Ok(PrescribedInstance {
            n,
            prescriptions,
            pair_edges,
        })
    }

    fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for &[u, w] in &self.pair_edges {
            adj[u as usize].push(w);
            adj[w as usize].push(u);
        }
        adj
    }

    /// Per-vertex prescriptions as a bitmask: bit 0 for color one, bit 1 for color two.
    fn prescription_masks(&self) -> Vec<u8> {
        let mut mask = vec![0u8; self.n];
        for &(v, c) in &self.prescriptions {
            mask[v as usize] |= c.index();
        }
        mask
    }
}

/// How many `ℓ`-sets fell into each rule class of the reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStats {
    pub inside_x: usize,
    pub inside_y: usize,
    pub discarded_mixed: usize,
    pub prescribed_one: usize,
    pub prescribed_two: usize,
    pub pair_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ReductionOutcome {
    Reduced {
        instance: PrescribedInstance,
        stats: ReductionStats,
    },
    /// Some `ℓ`-set lies inside `X` or inside `Y`.
    Failure { stats: ReductionStats },
}

/// Turns random `ℓ`-sets `r` on top of the X/Y/Z construction into a
/// prescribed-color instance on `Z`, assuming `X` gets color one and `Y` color two.
///
/// Rules, per `ℓ`-set `L`:
/// - inside `X` or inside `Y`: failure;
/// - meets both `X` and `Y`: already non-monochromatic, dropped;
/// - `ℓ-1` vertices in `Y` and one `v` in `Z`: prescribe color one to `v`;
/// - `ℓ-1` vertices in `X` and one `v` in `Z`: prescribe color two to `v`;
/// - otherwise `|L ∩ Z| >= 2`: pair edge on the two smallest vertices of `L ∩ Z`.
pub fn reduce_to_prescribed(xyz: &XyzConstruction, r: &[Vec<Vertex>]) -> Result<ReductionOutcome> {
    let mut stats = ReductionStats::default();
    let mut prescriptions = Vec::new();
    let mut pairs = Vec::new();
    for l in r {
        let l = normalize_edge(xyz.n, l)?;
        let (mut in_x, mut in_y) = (0, 0);
        let mut in_z: Vec<Vertex> = Vec::new();
        for &v in &l {
            match xyz.part_of(v) {
                Part::X => in_x += 1,
                Part::Y => in_y += 1,
                Part::Z => in_z.push(v),
            }
        }
        if in_x == l.len() {
            stats.inside_x += 1;
        } else if in_y == l.len() {
            stats.inside_y += 1;
        } else if in_x > 0 && in_y > 0 {
            stats.discarded_mixed += 1;
        } else if in_z.len() == 1 {
            if in_y > 0 {
                stats.prescribed_one += 1;
                prescriptions.push((in_z[0], Color::One));
            } else {
                stats.prescribed_two += 1;
                prescriptions.push((in_z[0], Color::Two));
            }
        } else {
            // l is sorted, so in_z is too
            stats.pair_edges += 1;
            pairs.push([in_z[0], in_z[1]]);
        }
    }
    if stats.inside_x + stats.inside_y > 0 {
        return Ok(ReductionOutcome::Failure { stats });
    }
    Ok(ReductionOutcome::Reduced {
        instance: PrescribedInstance::new(xyz.n, prescriptions, pairs)?,
        stats,
    })
}

/// Exact feasibility: breadth-first 2-coloring of each component of the pair
/// graph, aligned with that component's prescriptions.
pub fn solve_prescribed(inst: &PrescribedInstance) -> DecisionResult {
    let start = std::time::Instant::now();
    let mut stats = SearchStats::default();
    let adj = inst.adjacency();
    let masks = inst.prescription_masks();
    let fail = |mut stats: SearchStats| {
        stats.elapsed_us = start.elapsed().as_micros() as u64;
        DecisionResult::not_colorable(stats)
    };
    if masks.contains(&3) {
        return fail(stats);
    }

    // parity[v]: color relative to the component root; root gets parity 0
    let mut parity: Vec<Option<bool>> = vec![None; inst.n];
    let mut colors = vec![Color::One; inst.n];
    let mut queue = VecDeque::new();
    let mut component = Vec::new();
    for root in 0..inst.n {
        if parity[root].is_some() {
            continue;
        }
        parity[root] = Some(false);
        queue.push_back(root);
        component.clear();
        while let Some(u) = queue.pop_front() {
            stats.nodes += 1;
            component.push(u);
            let pu = parity[u].expect("queued vertices have parity");
            for &w in &adj[u] {
                match parity[w as usize] {
                    None => {
                        parity[w as usize] = Some(!pu);
                        queue.push_back(w as usize);
                    }
                    Some(pw) if pw == pu => {
                        stats.conflicts += 1;
                        return fail(stats);
                    }
                    Some(_) => {}
                }
            }
        }
        // flip = whether the root takes color two
        let mut flip: Option<bool> = None;
        for &v in &component {
            let want_two = match masks[v] {
                0 => continue,
                1 => false,
                _ => true,
            };
            let f = want_two ^ parity[v].unwrap();
            match flip {
                None => flip = Some(f),
                Some(g) if g != f => {
                    stats.conflicts += 1;
                    return fail(stats);
                }
                Some(_) => {}
            }
        }
        let flip = flip.unwrap_or(false);
        for &v in &component {
            colors[v] = if parity[v].unwrap() ^ flip {
                Color::Two
            } else {
                Color::One
            };
        }
    }
    stats.elapsed_us = start.elapsed().as_micros() as u64;
    DecisionResult {
        verdict: Verdict::Colorable,
        witness: Some(Coloring::new(colors)),
        stats,
    }
}

/// The sufficient condition behind the almost-sure claim: no vertex has both
/// prescriptions, the pair graph is a forest, and every tree carries at most
/// one prescribed vertex.
pub fn forest_condition_holds(inst: &PrescribedInstance) -> bool {
    let masks = inst.prescription_masks();
    if masks.contains(&3) {
        return false;
    }
    let mut parent: Vec<usize> = (0..inst.n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &[u, w] in &inst.pair_edges {
        let (a, b) = (find(&mut parent, u as usize), find(&mut parent, w as usize));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    let mut prescribed_roots = HashSet::new();
    for v in 0..inst.n {
        if masks[v] != 0 && !prescribed_roots.insert(find(&mut parent, v)) {
            return false;
        }
    }
    true
}

/// `X → 1`, `Y → 2`, `Z` as in `solution`.
pub fn compose_xyz_witness(xyz: &XyzConstruction, solution: &Coloring) -> Result<Coloring> {
    if solution.len() != xyz.n {
        return Err(Error::ColoringLength {
            expected: xyz.n,
            actual: solution.len(),
        });
    }
    let z: Vec<Color> = xyz.z_range().map(|v| solution.get(v)).collect();
    xyz.canonical_coloring(&z)
}

/// Random prescribed instance: each vertex independently gets color one with
/// probability `p1` and (independently) color two with probability `p2`;
/// each pair is an edge with probability `p3`.
pub fn sample_prescribed(n: usize, p1: f64, p2: f64, p3: f64, seed: u64) -> Result<PrescribedInstance> {
    use rand::Rng;
    for p in [p1, p2, p3] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Input(format!("probability must lie in [0, 1], got {p}")));
        }
    }
    let mut rng = rng_from_seed(derive_seed(seed, 0));
    let mut prescriptions = Vec::new();
    for v in 0..n as Vertex {
        if rng.random_bool(p1) {
            prescriptions.push((v, Color::One));
        }
        if rng.random_bool(p2) {
            prescriptions.push((v, Color::Two));
        }
    }
    let pairs = if n >= 2 {
        crate::generators::sample_perturbation(
            n,
            &PerturbationSpec::bernoulli(p3, 2, derive_seed(seed, 1)),
        )?
    } else {
        Vec::new()
    };
    PrescribedInstance::new(n, prescriptions, pairs.into_iter().map(|p| [p[0], p[1]]))
}
