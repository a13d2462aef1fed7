//! Finite hypergraphs with edges of possibly mixed arity.
//!
//! Vertices are `0..n`. Edges are stored as sorted vertex sets in a flat
//! compressed layout together with a vertex-to-edge incidence index, so a
//! hypergraph is cheap to clone and all queries are read-only.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// One of the two colors of a 2-coloring, serialized as `1` or `2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Color {
    One,
    Two,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::One => Color::Two,
            Color::Two => Color::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Color::One => 1,
            Color::Two => 2,
        }
    }
}

impl From<Color> for u8 {
    fn from(c: Color) -> u8 {
        c.index()
    }
}

impl TryFrom<u8> for Color {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, Self::Error> {
        match v {
            1 => Ok(Color::One),
            2 => Ok(Color::Two),
            other => Err(format!("color must be 1 or 2, got {other}")),
        }
    }
}

/// A total assignment of colors to the vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn uniform(n: usize, color: Color) -> Self {
        Coloring(vec![color; n])
    }

    /// Builds a coloring from `1`/`2` values.
    pub fn from_indices(values: &[u8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| Color::try_from(v).map_err(Error::Input))
            .collect::<Result<Vec<_>>>()
            .map(Coloring)
    }

    /// Bit `v` of `mask` set means vertex `v` gets color two.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Coloring(
            (0..n)
                .map(|v| if mask >> v & 1 == 1 { Color::Two } else { Color::One })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Color {
        self.0[v as usize]
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        self.0[v as usize] = c;
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn complement(&self) -> Coloring {
        Coloring(self.0.iter().map(|c| c.flip()).collect())
    }

    /// True when every vertex of `set` has the same color (vacuously for empty sets).
    pub fn is_monochromatic(&self, set: &[Vertex]) -> bool {
        match set.split_first() {
            None => true,
            Some((&first, rest)) => {
                let c = self.get(first);
                rest.iter().all(|&v| self.get(v) == c)
            }
        }
    }
}

/// A sorted set of distinct vertices, used as the argument of degree,
/// neighborhood and link queries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexTuple(Vec<Vertex>);

impl VertexTuple {
    pub fn new<I: IntoIterator<Item = Vertex>>(members: I) -> Result<Self> {
        let mut members: Vec<Vertex> = members.into_iter().collect();
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(w[0]));
        }
        Ok(VertexTuple(members))
    }

    pub fn empty() -> Self {
        VertexTuple(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The tuple extended by `v`; `None` when `v` is already a member.
    pub fn with(&self, v: Vertex) -> Option<VertexTuple> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut members = self.0.clone();
                members.insert(pos, v);
                Some(VertexTuple(members))
            }
        }
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }
}

impl fmt::Display for VertexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// `small ⊆ big` for sorted slices.
pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            if b == s {
                continue 'outer;
            }
            if b > s {
                return false;
            }
        }
        return false;
    }
    true
}

/// Sorts and validates a candidate edge against a vertex universe of size `n`.
pub fn normalize_edge(n: usize, edge: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut e = edge.to_vec();
    e.sort_unstable();
    if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RepeatedVertex(w[0]));
    }
    if let Some(&v) = e.last() {
        if v as usize >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if e.len() < 2 {
        return Err(Error::EdgeTooSmall(e));
    }
    Ok(e)
}

/// A hypergraph on vertices `0..n`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    offsets: Vec<usize>,
    members: Vec<Vertex>,
    inc_offsets: Vec<usize>,
    incidence: Vec<u32>,
}

/// Incremental builder that deduplicates edges by content.
#[derive(Clone, Debug)]
pub struct HypergraphBuilder {
    n: usize,
    offsets: Vec<usize>,
    members: Vec<Vertex>,
    seen: HashSet<Box<[Vertex]>>,
}

impl HypergraphBuilder {
    pub fn new(n: usize) -> Self {
        HypergraphBuilder {
            n,
            offsets: vec![0],
            members: Vec::new(),
            seen: HashSet::new(),
        }
    }

    /// Starts from the edges of an existing hypergraph.
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        HypergraphBuilder {
            n: h.n,
            offsets: h.offsets.clone(),
            members: h.members.clone(),
            seen: h.edges().map(Box::from).collect(),
        }
    }

    /// Adds an edge; returns `false` when an equal edge is already present.
    pub fn add_edge(&mut self, edge: &[Vertex]) -> Result<bool> {
        let e = normalize_edge(self.n, edge)?;
        Ok(self.push_normalized(e))
    }

    fn push_normalized(&mut self, e: Vec<Vertex>) -> bool {
        if self.seen.contains(e.as_slice()) {
            return false;
        }
        self.members.extend_from_slice(&e);
        self.offsets.push(self.members.len());
        self.seen.insert(e.into_boxed_slice());
        true
    }

    pub fn edge_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn build(self) -> Hypergraph {
        Hypergraph::from_parts(self.n, self.offsets, self.members)
    }
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge and collapsing duplicates.
    pub fn new<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        let mut b = HypergraphBuilder::new(n);
        for e in edges {
            b.add_edge(e.as_ref())?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Self {
        Hypergraph::from_parts(n, vec![0], Vec::new())
    }

    /// Caller guarantees: edges sorted, distinct, in range, size >= 2.
    pub(crate) fn from_parts(n: usize, offsets: Vec<usize>, members: Vec<Vertex>) -> Self {
        let m = offsets.len() - 1;
        let mut counts = vec![0usize; n + 1];
        for &v in &members {
            counts[v as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let inc_offsets = counts.clone();
        let mut fill = counts;
        let mut incidence = vec![0u32; members.len()];
        for e in 0..m {
            for &v in &members[offsets[e]..offsets[e + 1]] {
                incidence[fill[v as usize]] = e as u32;
                fill[v as usize] += 1;
            }
        }
        Hypergraph {
            n,
            offsets,
            members,
            inc_offsets,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count() == 0
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.members[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + Clone + '_ {
        (0..self.edge_count()).map(move |i| self.edge(i))
    }

    /// Indices of the edges containing `v`, increasing.
    pub fn incident_edges(&self, v: Vertex) -> &[u32] {
        &self.incidence[self.inc_offsets[v as usize]..self.inc_offsets[v as usize + 1]]
    }

    /// Number of edges containing `v`.
    pub fn vertex_degree(&self, v: Vertex) -> usize {
        self.incident_edges(v).len()
    }

    /// Sum of edge sizes.
    pub fn total_size(&self) -> usize {
        self.members.len()
    }

    pub fn max_arity(&self) -> usize {
        self.edges().map(<[Vertex]>::len).max().unwrap_or(0)
    }

    /// The common edge size, if every edge has the same size and there is at least one edge.
    pub fn uniform_arity(&self) -> Option<usize> {
        let mut it = self.edges().map(<[Vertex]>::len);
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }

    pub fn require_uniform(&self, k: usize) -> Result<()> {
        match self.edges().map(<[Vertex]>::len).find(|&s| s != k) {
            Some(found) => Err(Error::NotUniform { k, found }),
            None => Ok(()),
        }
    }

    /// Whether an edge equal to the sorted set `e` is present.
    pub fn contains_edge(&self, e: &[Vertex]) -> bool {
        match e.first() {
            None => false,
            Some(&v) if (v as usize) < self.n => self
                .incident_edges(v)
                .iter()
                .any(|&i| self.edge(i as usize) == e),
            Some(_) => false,
        }
    }

    fn check_tuple(&self, a: &VertexTuple) -> Result<()> {
        match a.as_slice().last() {
            Some(&v) if v as usize >= self.n => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            _ => Ok(()),
        }
    }

    /// Edge indices containing every member of `a`; all edges for the empty tuple.
    fn edges_through<'a>(&'a self, a: &'a VertexTuple) -> Box<dyn Iterator<Item = usize> + 'a> {
        let pivot = a
            .as_slice()
            .iter()
            .copied()
            .min_by_key(|&v| self.vertex_degree(v));
        match pivot {
            None => Box::new(0..self.edge_count()),
            Some(p) => Box::new(
                self.incident_edges(p)
                    .iter()
                    .map(|&i| i as usize)
                    .filter(move |&i| is_sorted_subset(a.as_slice(), self.edge(i))),
            ),
        }
    }

    /// Number of edges (of any arity) containing `a`.
    pub fn degree(&self, a: &VertexTuple) -> Result<usize> {
        self.check_tuple(a)?;
        Ok(self.edges_through(a).count())
    }

    /// Number of edges of size `k` containing `a`.
    pub fn degree_in_arity(&self, a: &VertexTuple, k: usize) -> Result<usize> {
        self.check_tuple(a)?;
        Ok(self
            .edges_through(a)
            .filter(|&i| self.edge(i).len() == k)
            .count())
    }

    /// `N(a)`: vertices `w` outside `a` with `a ∪ {w}` an edge of size `k`.
    pub fn neighborhood(&self, a: &VertexTuple, k: usize) -> Result<Vec<Vertex>> {
        self.check_tuple(a)?;
        if a.len() + 1 != k {
            return Err(Error::TupleSize {
                expected: k.saturating_sub(1),
                actual: a.len(),
            });
        }
        let mut out: Vec<Vertex> = self
            .edges_through(a)
            .filter(|&i| self.edge(i).len() == k)
            .map(|i| {
                *self
                    .edge(i)
                    .iter()
                    .find(|v| !a.contains(**v))
                    .expect("edge of size |a|+1 through a has one extra vertex")
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `Γ(a)`: the graph of pairs `{u, v}` disjoint from `a` with `a ∪ {u, v}` an edge of size `k`.
    pub fn link(&self, a: &VertexTuple, k: usize) -> Result<Hypergraph> {
        self.check_tuple(a)?;
        if a.len() + 2 != k {
            return Err(Error::TupleSize {
                expected: k.saturating_sub(2),
                actual: a.len(),
            });
        }
        let mut b = HypergraphBuilder::new(self.n);
        for i in self.edges_through(a) {
            let e = self.edge(i);
            if e.len() != k {
                continue;
            }
            let pair: Vec<Vertex> = e.iter().copied().filter(|&v| !a.contains(v)).collect();
            b.push_normalized(pair);
        }
        Ok(b.build())
    }

    /// True iff no edge is monochromatic under `c`.
    pub fn is_proper(&self, c: &Coloring) -> Result<bool> {
        if c.len() != self.n {
            return Err(Error::ColoringLength {
                expected: self.n,
                actual: c.len(),
            });
        }
        Ok(self.edges().all(|e| !c.is_monochromatic(e)))
    }

    /// First monochromatic edge under `c`, if any.
    pub fn first_monochromatic(&self, c: &Coloring) -> Option<usize> {
        (0..self.edge_count()).find(|&i| c.is_monochromatic(self.edge(i)))
    }

    /// The sub-hypergraph of edges of size `k`.
    pub fn arity_view(&self, k: usize) -> Hypergraph {
        self.filter_edges(|e| e.len() == k)
    }

    /// The sub-hypergraph of edges satisfying `keep`, same vertex universe.
    pub fn filter_edges<F: FnMut(&[Vertex]) -> bool>(&self, mut keep: F) -> Hypergraph {
        let mut offsets = vec![0];
        let mut members = Vec::new();
        for e in self.edges() {
            if keep(e) {
                members.extend_from_slice(e);
                offsets.push(members.len());
            }
        }
        Hypergraph::from_parts(self.n, offsets, members)
    }

    /// Union with extra edges; duplicates of existing edges are dropped and `self` is untouched.
    pub fn union_with<I, E>(&self, extra: I) -> Result<Hypergraph>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        let mut offsets = self.offsets.clone();
        let mut members = self.members.clone();
        let mut fresh: HashSet<Vec<Vertex>> = HashSet::new();
        for e in extra {
            let e = normalize_edge(self.n, e.as_ref())?;
            if self.contains_edge(&e) || fresh.contains(&e) {
                continue;
            }
            members.extend_from_slice(&e);
            offsets.push(members.len());
            fresh.insert(e);
        }
        Ok(Hypergraph::from_parts(self.n, offsets, members))
    }

    /// Edges as owned vectors.
    pub fn to_edge_list(&self) -> Vec<Vec<Vertex>> {
        self.edges().map(<[Vertex]>::to_vec).collect()
    }
}
