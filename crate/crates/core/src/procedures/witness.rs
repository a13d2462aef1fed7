//! Witness trees: ℓ-ary trees of active tuples whose sibling sets are random
//! ℓ-edges, forcing some leaf neighborhood to be monochromatic.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Coloring, Vertex, VertexTuple};

use super::families::at_least;
use super::partite::PartiteHypergraph;

/// Tree vertex count above which exhaustive verification is refused.
pub const VERIFY_VERTEX_LIMIT: usize = 24;

/// Activity thresholds `Δ_r` (r = 1..k-1) and extension bounds `d_r` (r = 1..k-2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActivityThresholds {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    /// `delta[r-1] = Δ_r`
    pub delta: Vec<f64>,
    /// `extension[r-1] = d_r = Δ_r / (4 n^{k-r-1-α})`
    pub extension: Vec<f64>,
    /// `degree_cap[r-1] = 2 n^{k-r-1-α}`, the expected bound on (r+1)-tuple degrees.
    pub degree_cap: Vec<f64>,
}

impl ActivityThresholds {
    /// `Δ_r = (c5 / 2^r) · n^{k-r-ε-((ℓ-2)/(ℓ-1))(α-ε/2)}`.
    pub fn new(n: usize, k: usize, ell: usize, epsilon: f64, alpha: f64, c5: f64) -> Self {
        let nf = n as f64;
        let l = ell as f64;
        let shift = (l - 2.0) / (l - 1.0) * (alpha - epsilon / 2.0);
        let delta: Vec<f64> = (1..k)
            .map(|r| c5 / 2f64.powi(r as i32) * nf.powf(k as f64 - r as f64 - epsilon - shift))
            .collect();
        let cap = |r: usize| nf.powf(k as f64 - r as f64 - 1.0 - alpha);
        let extension = (1..k.saturating_sub(1))
            .map(|r| delta[r - 1] / (4.0 * cap(r)))
            .collect();
        let degree_cap = (1..k.saturating_sub(1)).map(|r| 2.0 * cap(r)).collect();
        ActivityThresholds {
            n,
            k,
            alpha,
            delta,
            extension,
            degree_cap,
        }
    }

    /// Thresholds from the `α` and `c5` stored on a regularized hypergraph.
    pub fn for_partite(ph: &PartiteHypergraph, epsilon: f64, ell: usize) -> Result<Self> {
        let (Some(alpha), Some(c)) = (ph.alpha, ph.constants) else {
            return Err(Error::Input("hypergraph has no regularized degrees".into()));
        };
        Ok(Self::new(ph.n(), ph.k, ell, epsilon, alpha, c.c5))
    }

    /// `Δ_r`
    pub fn delta(&self, r: usize) -> f64 {
        self.delta[r - 1]
    }

    fn is_active(&self, r: usize, degree: usize) -> bool {
        degree > 0 && at_least(degree as f64, self.delta(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildEdge {
    /// The ℓ children, sorted.
    pub members: Vec<Vertex>,
    /// Index of the batch the edge was drawn from (level `j` uses batch `j-1`).
    pub batch: usize,
    /// Position of the edge inside its batch.
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub vertex: Vertex,
    /// 1-based; level `j` lies in `V_j`.
    pub level: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub child_edge: Option<ChildEdge>,
    /// Degree of the root-to-node path.
    pub path_degree: usize,
}

/// An active tuple with fewer active extensions than the claimed bound `d_r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimViolation {
    pub path: Vec<Vertex>,
    pub active_extensions: usize,
    pub required: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessTree {
    pub k: usize,
    pub ell: usize,
    /// Node 0 is the root; children always follow their parent.
    pub nodes: Vec<TreeNode>,
    /// The `ℓ^{k-2}` root-to-leaf tuples, listed by part, in depth-first order.
    pub leaf_paths: Vec<Vec<Vertex>>,
    /// `S_i = N(leaf_paths[i])`.
    pub s_sets: Vec<Vec<Vertex>>,
    pub thresholds: ActivityThresholds,
    pub claim_violations: Vec<ClaimViolation>,
    /// Extensions whose degree exceeded `2 n^{k-r-1-α}`.
    pub degree_cap_violations: usize,
}

impl WitnessTree {
    pub fn root(&self) -> Vertex {
        self.nodes[0].vertex
    }

    /// Node indices on level `j` (1-based).
    pub fn level(&self, j: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].level == j).collect()
    }

    pub fn path_to(&self, mut node: usize) -> Vec<Vertex> {
        let mut out = vec![self.nodes[node].vertex];
        while let Some(p) = self.nodes[node].parent {
            out.push(self.nodes[p].vertex);
            node = p;
        }
        out.reverse();
        out
    }

    fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty()).collect()
    }

    /// Distinct vertices used by the tree, sorted.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.nodes.iter().map(|n| n.vertex).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowFailure {
    NoRoot,
    /// No batch edge lies inside the active extensions of `path`.
    BatchExhausted { level: usize, path: Vec<Vertex> },
}

/// Degree of `prefix` (a tuple over `V_1..V_r`) and the degree of each extension into `V_{r+1}`.
pub(crate) fn extensions(ph: &PartiteHypergraph, prefix: &[Vertex]) -> (usize, BTreeMap<Vertex, usize>) {
    let r = prefix.len();
    let last = *prefix.last().expect("nonempty prefix");
    let mut degree = 0;
    let mut ext = BTreeMap::new();
    for &i in ph.hypergraph.incident_edges(last) {
        let o = ph.ordered(ph.hypergraph.edge(i as usize));
        if o[..r] == *prefix {
            degree += 1;
            if r < ph.k {
                *ext.entry(o[r]).or_insert(0) += 1;
            }
        }
    }
    (degree, ext)
}

/// Grows one witness tree level by level.
///
/// The root is the first vertex of `V_1` with degree at least `Δ_1`. For each
/// level `j ≤ k-2` and each current path `P`, the active extensions
/// `W ⊆ V_{j+1}` are computed and `batches[j-1]` is scanned in order for the
/// first ℓ-set inside `W`; its members become the children of `P`'s end.
pub fn grow_witness_tree(
    ph: &PartiteHypergraph,
    batches: &[Vec<Vec<Vertex>>],
    thresholds: &ActivityThresholds,
    ell: usize,
) -> Result<std::result::Result<WitnessTree, GrowFailure>> {
    let k = ph.k;
    if thresholds.k != k || thresholds.delta.len() + 1 != k {
        return Err(Error::Input(format!("thresholds built for k = {}, hypergraph has k = {k}", thresholds.k)));
    }
    if batches.len() < k - 2 {
        return Err(Error::Input(format!("{} batches given, {} levels need one each", batches.len(), k - 2)));
    }
    if ell < 2 {
        return Err(Error::Input(format!("ell must be at least 2, got {ell}")));
    }
    let root = (0..ph.n() as Vertex).find(|&v| {
        ph.parts[v as usize] == 0 && thresholds.is_active(1, ph.hypergraph.vertex_degree(v))
    });
    let Some(root) = root else {
        return Ok(Err(GrowFailure::NoRoot));
    };
    let mut tree = WitnessTree {
        k,
        ell,
        nodes: vec![TreeNode {
            vertex: root,
            level: 1,
            parent: None,
            children: Vec::new(),
            child_edge: None,
            path_degree: ph.hypergraph.vertex_degree(root),
        }],
        leaf_paths: Vec::new(),
        s_sets: Vec::new(),
        thresholds: thresholds.clone(),
        claim_violations: Vec::new(),
        degree_cap_violations: 0,
    };
    let mut frontier = vec![0usize];
    for j in 1..k - 1 {
        let mut next = Vec::new();
        for &node in &frontier {
            let path = tree.path_to(node);
            let (_, ext) = extensions(ph, &path);
            tree.degree_cap_violations += ext
                .values()
                .filter(|&&d| !at_least(thresholds.degree_cap[j - 1], d as f64))
                .count();
            let active: HashSet<Vertex> = ext
                .iter()
                .filter(|&(_, &d)| thresholds.is_active(j + 1, d))
                .map(|(&x, _)| x)
                .collect();
            if !at_least(active.len() as f64, thresholds.extension[j - 1]) {
                tree.claim_violations.push(ClaimViolation {
                    path: path.clone(),
                    active_extensions: active.len(),
                    required: thresholds.extension[j - 1],
                });
            }
            let hit = batches[j - 1]
                .iter()
                .position(|l| l.len() == ell && l.iter().all(|x| active.contains(x)));
            let Some(pos) = hit else {
                return Ok(Err(GrowFailure::BatchExhausted { level: j, path }));
            };
            let mut members = batches[j - 1][pos].clone();
            members.sort_unstable();
            for &x in &members {
                let id = tree.nodes.len();
                tree.nodes.push(TreeNode {
                    vertex: x,
                    level: j + 1,
                    parent: Some(node),
                    children: Vec::new(),
                    child_edge: None,
                    path_degree: ext[&x],
                });
                tree.nodes[node].children.push(id);
                next.push(id);
            }
            tree.nodes[node].child_edge = Some(ChildEdge {
                members,
                batch: j - 1,
                position: pos,
            });
        }
        frontier = next;
    }
    for &leaf in &frontier {
        let path = tree.path_to(leaf);
        let s = ph.hypergraph.neighborhood(&VertexTuple::new(path.iter().copied())?, k)?;
        tree.leaf_paths.push(path);
        tree.s_sets.push(s);
    }
    Ok(Ok(tree))
}

/// Why a witness tree failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessDefect {
    Structure(String),
    EdgeMissing { node: usize, members: Vec<Vertex> },
    Inactive { path: Vec<Vertex>, degree: usize },
    NeighborhoodMismatch { leaf: usize },
    /// A coloring with no monochromatic child set and no monochromatic branch.
    ColoringEscapes { coloring: Vec<(Vertex, u8)> },
    TooManyVertices(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub defect: Option<WitnessDefect>,
    /// Tree colorings examined by the exhaustive pass.
    pub colorings_checked: u64,
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        self.defect.is_none()
    }

    fn fail(d: WitnessDefect) -> Self {
        WitnessCheck {
            defect: Some(d),
            colorings_checked: 0,
        }
    }
}

fn check_structure(tree: &WitnessTree, ph: &PartiteHypergraph) -> std::result::Result<(), String> {
    let k = tree.k;
    if tree.nodes.is_empty() || tree.nodes[0].parent.is_some() || tree.nodes[0].level != 1 {
        return Err("node 0 is not a level-1 root".into());
    }
    if k != ph.k {
        return Err(format!("tree depth {} does not match k = {}", k - 1, ph.k));
    }
    for (i, node) in tree.nodes.iter().enumerate() {
        if node.vertex as usize >= ph.n() || ph.parts[node.vertex as usize] != node.level - 1 {
            return Err(format!("node {i} is not in part {}", node.level));
        }
        if let Some(p) = node.parent {
            if p >= i || tree.nodes[p].level + 1 != node.level || !tree.nodes[p].children.contains(&i) {
                return Err(format!("node {i} has an inconsistent parent"));
            }
        }
        let internal = node.level + 1 < k;
        let expected = if internal { tree.ell } else { 0 };
        if node.children.len() != expected {
            return Err(format!("node {i} has {} children, expected {expected}", node.children.len()));
        }
        match (&node.child_edge, internal) {
            (Some(e), true) => {
                let mut kids: Vec<Vertex> = node.children.iter().map(|&c| tree.nodes[c].vertex).collect();
                kids.sort_unstable();
                if kids != e.members {
                    return Err(format!("children of node {i} differ from their edge"));
                }
            }
            (None, false) => {}
            _ => return Err(format!("node {i} has a misplaced child edge")),
        }
    }
    let q = tree.ell.pow(k as u32 - 2);
    if tree.leaf_paths.len() != q || tree.s_sets.len() != q {
        return Err(format!("expected {q} leaf paths"));
    }
    Ok(())
}

/// Checks a witness tree against `ph` and the level batches: structure,
/// batch membership of every child set, activity of every branch, each
/// `S_i` equal to its branch's neighborhood, and, by enumerating every
/// coloring of the tree's vertices, that each coloring leaving all child
/// sets non-monochromatic has a monochromatic root-to-leaf branch.
pub fn verify_witness(tree: &WitnessTree, ph: &PartiteHypergraph, batches: &[Vec<Vec<Vertex>>]) -> WitnessCheck {
    if let Err(msg) = check_structure(tree, ph) {
        return WitnessCheck::fail(WitnessDefect::Structure(msg));
    }
    for (i, node) in tree.nodes.iter().enumerate() {
        if let Some(e) = &node.child_edge {
            let present = batches.get(e.batch).is_some_and(|b| {
                b.get(e.position).is_some_and(|l| {
                    let mut l = l.clone();
                    l.sort_unstable();
                    l == e.members
                })
            });
            if !present || e.batch + 1 != node.level {
                return WitnessCheck::fail(WitnessDefect::EdgeMissing {
                    node: i,
                    members: e.members.clone(),
                });
            }
        }
        let path = tree.path_to(i);
        let (degree, _) = extensions(ph, &path);
        if !tree.thresholds.is_active(node.level, degree) {
            return WitnessCheck::fail(WitnessDefect::Inactive { path, degree });
        }
    }
    let leaves = tree.leaves();
    for (li, &leaf) in leaves.iter().enumerate() {
        let path = tree.path_to(leaf);
        let ok = tree.leaf_paths.get(li) == Some(&path)
            && VertexTuple::new(path.iter().copied())
                .and_then(|t| ph.hypergraph.neighborhood(&t, ph.k))
                .is_ok_and(|s| tree.s_sets.get(li) == Some(&s));
        if !ok {
            return WitnessCheck::fail(WitnessDefect::NeighborhoodMismatch { leaf: li });
        }
    }
    let verts = tree.vertices();
    if verts.len() > VERIFY_VERTEX_LIMIT {
        return WitnessCheck::fail(WitnessDefect::TooManyVertices(verts.len()));
    }
    let slot = |v: Vertex| verts.binary_search(&v).expect("tree vertex") as u32;
    let node_bit: Vec<u32> = tree.nodes.iter().map(|n| slot(n.vertex)).collect();
    let child_masks: Vec<u32> = tree
        .nodes
        .iter()
        .filter_map(|n| n.child_edge.as_ref())
        .map(|e| e.members.iter().fold(0u32, |m, &v| m | 1 << slot(v)))
        .collect();
    let mut checked = 0u64;
    for mask in 0u32..(1u32 << verts.len()) {
        let split = child_masks.iter().all(|&e| {
            let hit = mask & e;
            hit != 0 && hit != e
        });
        if !split {
            continue;
        }
        checked += 1;
        let color = |node: usize| mask >> node_bit[node] & 1;
        let root_color = color(0);
        // follow nodes sharing the root's color down to a leaf
        let mut stack = vec![0usize];
        let mut found = false;
        while let Some(x) = stack.pop() {
            if tree.nodes[x].children.is_empty() {
                found = true;
                break;
            }
            stack.extend(tree.nodes[x].children.iter().copied().filter(|&c| color(c) == root_color));
        }
        if !found {
            let coloring = verts
                .iter()
                .enumerate()
                .map(|(b, &v)| (v, (mask >> b & 1) as u8 + 1))
                .collect();
            return WitnessCheck {
                defect: Some(WitnessDefect::ColoringEscapes { coloring }),
                colorings_checked: checked,
            };
        }
    }
    WitnessCheck {
        defect: None,
        colorings_checked: checked,
    }
}

/// Under a proper coloring of the tree's own edges, a monochromatic branch
/// forces its leaf neighborhood to the opposite color. Returns the index of
/// such a branch for `coloring`, if any.
pub fn monochromatic_branch(tree: &WitnessTree, coloring: &Coloring) -> Option<usize> {
    tree.leaf_paths.iter().position(|p| coloring.is_monochromatic(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;

    fn permissive(k: usize) -> ActivityThresholds {
        ActivityThresholds::new(10, k, 2, 0.5, 0.5, 1e-9)
    }

    /// V_1 = {0}, V_2 = {1,2,3,4}, V_3 = {5,6,7}: all 12 triples.
    fn k3() -> PartiteHypergraph {
        let mut edges = Vec::new();
        for x in 1..5 {
            for z in 5..8 {
                edges.push([0, x, z]);
            }
        }
        let parts = vec![0, 1, 1, 1, 1, 2, 2, 2];
        PartiteHypergraph::new(Hypergraph::new(8, edges).unwrap(), 3, parts).unwrap()
    }

    #[test]
    fn k2_root_only() {
        let h = Hypergraph::new(5, [[0, 2], [0, 3], [1, 4]]).unwrap();
        let ph = PartiteHypergraph::new(h, 2, vec![0, 0, 1, 1, 1]).unwrap();
        let tree = grow_witness_tree(&ph, &[], &permissive(2), 2).unwrap().unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.leaf_paths, vec![vec![0]]);
        assert_eq!(tree.s_sets, vec![vec![2, 3]]);
        assert!(verify_witness(&tree, &ph, &[]).is_valid());
    }

    #[test]
    fn k3_children_from_batch() {
        let ph = k3();
        let batches = vec![vec![vec![5, 6], vec![2, 3], vec![1, 4]]];
        let th = permissive(3);
        let tree = grow_witness_tree(&ph, &batches, &th, 2).unwrap().unwrap();
        assert_eq!(tree.root(), 0);
        let kids: Vec<Vertex> = tree.nodes[0].children.iter().map(|&c| tree.nodes[c].vertex).collect();
        assert_eq!(kids, vec![2, 3]);
        assert_eq!(tree.leaf_paths, vec![vec![0, 2], vec![0, 3]]);
        assert_eq!(tree.s_sets, vec![vec![5, 6, 7], vec![5, 6, 7]]);
        let check = verify_witness(&tree, &ph, &batches);
        assert!(check.is_valid(), "{check:?}");
        // 8 colorings of {0,2,3}; 4 of them split {2,3}
        assert_eq!(check.colorings_checked, 4);
        assert_eq!(tree.level(2).len(), 2);
    }

    #[test]
    fn batch_outside_extensions_fails() {
        let ph = k3();
        let batches = vec![vec![vec![5, 6], vec![0, 7]]];
        let out = grow_witness_tree(&ph, &batches, &permissive(3), 2).unwrap();
        assert_eq!(out, Err(GrowFailure::BatchExhausted { level: 1, path: vec![0] }));
    }

    #[test]
    fn no_root_when_thresholds_high() {
        let ph = k3();
        let th = ActivityThresholds::new(8, 3, 2, 0.5, 0.5, 1e6);
        let out = grow_witness_tree(&ph, &[vec![]], &th, 2).unwrap();
        assert_eq!(out, Err(GrowFailure::NoRoot));
    }

    #[test]
    fn wrong_batch_edge_detected() {
        let ph = k3();
        let batches = vec![vec![vec![2, 3]]];
        let tree = grow_witness_tree(&ph, &batches, &permissive(3), 2).unwrap().unwrap();
        let other = vec![vec![vec![1, 3]]];
        assert!(matches!(
            verify_witness(&tree, &ph, &other).defect,
            Some(WitnessDefect::EdgeMissing { .. })
        ));
        let mut bad = tree.clone();
        bad.s_sets[0].pop();
        assert!(matches!(
            verify_witness(&bad, &ph, &batches).defect,
            Some(WitnessDefect::NeighborhoodMismatch { leaf: 0 })
        ));
    }

    #[test]
    fn k4_seven_vertices() {
        // V_1 = {0}, V_2 = {1,2}, V_3 = {3,4,5,6}, V_4 = {7,8};
        // (0,1) extends into {3,4} and (0,2) into {5,6}
        let mut edges = Vec::new();
        for b in 1..3u32 {
            for c in 2 * b + 1..2 * b + 3 {
                for d in 7..9 {
                    edges.push([0, b, c, d]);
                }
            }
        }
        let parts = vec![0, 1, 1, 2, 2, 2, 2, 3, 3];
        let ph = PartiteHypergraph::new(Hypergraph::new(9, edges).unwrap(), 4, parts).unwrap();
        let batches = vec![vec![vec![1, 2]], vec![vec![3, 4], vec![5, 6]]];
        let th = ActivityThresholds::new(9, 4, 2, 0.5, 0.5, 1e-9);
        let tree = grow_witness_tree(&ph, &batches, &th, 2).unwrap().unwrap();
        assert_eq!(tree.nodes.len(), 7);
        assert_eq!(tree.vertices().len(), 7);
        assert_eq!(tree.leaf_paths.len(), 4);
        let check = verify_witness(&tree, &ph, &batches);
        assert!(check.is_valid(), "{check:?}");
        // of the 2^7 colorings, 16 split all three child sets
        assert_eq!(check.colorings_checked, 16);
    }

    #[test]
    fn tampered_tree_escapes() {
        let ph = k3();
        let batches = vec![vec![vec![2, 3]]];
        let tree = grow_witness_tree(&ph, &batches, &permissive(3), 2).unwrap().unwrap();
        assert!(tree.claim_violations.is_empty());
        let mut bad = tree.clone();
        bad.nodes[0].children.truncate(1);
        assert!(matches!(verify_witness(&bad, &ph, &batches).defect, Some(WitnessDefect::Structure(_))));
    }

    #[test]
    fn thresholds_formula() {
        let th = ActivityThresholds::new(100, 3, 2, 0.8, 0.6, 0.5);
        // Δ_1 = 0.25 · 100^{3-1-0.8}, Δ_2 = 0.125 · 100^{0.2}
        assert!((th.delta(1) - 0.25 * 100f64.powf(1.2)).abs() < 1e-9);
        assert!((th.delta(2) - 0.125 * 100f64.powf(0.2)).abs() < 1e-9);
        assert!((th.extension[0] - th.delta(1) / (4.0 * 100f64.powf(0.4))).abs() < 1e-9);
        assert_eq!(th.extension.len(), 1);
    }
}
