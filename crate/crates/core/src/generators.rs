//! Deterministic adversarial constructions and the two random perturbation models.

use std::collections::HashSet;
use std::ops::Range;

use rand::Rng as _;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, for_each_combination, unrank_colex};
use crate::error::{Error, Result};
use crate::hypergraph::{Color, Coloring, Hypergraph, Vertex};
use crate::rng::rng_from_seed;

/// Which of the three parts of the X/Y/Z construction a vertex lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    X,
    Y,
    Z,
}

/// The 2-colorable dense construction: `[n]` split into `X`, `Y`, `Z` with
/// `|X| = |Y| = ⌈n^{1-ε/2}⌉`; edges are all `k`-sets with one vertex in `X`,
/// one in `Y` and `k-2` in `Z`. `X` is `0..s`, `Y` is `s..2s`, `Z` the rest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XyzConstruction {
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub part_size: usize,
}

/// `⌈n^{1-ε/2}⌉`, tolerant of floating error just above an integer.
pub fn xyz_part_size(n: usize, epsilon: f64) -> usize {
    let raw = (n as f64).powf(1.0 - epsilon / 2.0);
    (raw - 1e-9).ceil().max(1.0) as usize
}

impl XyzConstruction {
    pub fn new(n: usize, k: usize, epsilon: f64) -> Result<Self> {
        if !(0.0..2.0).contains(&epsilon) {
            return Err(Error::Construction(format!(
                "epsilon must lie in [0, 2), got {epsilon}"
            )));
        }
        let c = XyzConstruction {
            n,
            k,
            epsilon,
            part_size: xyz_part_size(n, epsilon),
        };
        c.validate()?;
        Ok(c)
    }

    /// Explicit part size; `epsilon` is recorded as the effective `2(1 - log_n s)`.
    pub fn with_part_size(n: usize, k: usize, part_size: usize) -> Result<Self> {
        let epsilon = if n > 1 {
            2.0 * (1.0 - (part_size as f64).ln() / (n as f64).ln())
        } else {
            0.0
        };
        let c = XyzConstruction {
            n,
            k,
            epsilon,
            part_size,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Construction(format!("k must be >= 2, got {}", self.k)));
        }
        if self.part_size == 0 || 2 * self.part_size > self.n {
            return Err(Error::Construction(format!(
                "parts |X| = |Y| = {} do not fit in n = {}",
                self.part_size, self.n
            )));
        }
        let z = self.n - 2 * self.part_size;
        if z < self.k - 2 {
            return Err(Error::Construction(format!(
                "|Z| = {z} is smaller than k - 2 = {}",
                self.k - 2
            )));
        }
        Ok(())
    }

    /// Fails unless `ε < 2/ℓ`, the regime where the construction is meaningful.
    pub fn check_regime(&self, ell: usize) -> Result<()> {
        if self.epsilon >= 2.0 / ell as f64 {
            return Err(Error::Input(format!(
                "epsilon {} is not below 2/ell = {}",
                self.epsilon,
                2.0 / ell as f64
            )));
        }
        Ok(())
    }

    pub fn x_range(&self) -> Range<Vertex> {
        0..self.part_size as Vertex
    }

    pub fn y_range(&self) -> Range<Vertex> {
        self.part_size as Vertex..(2 * self.part_size) as Vertex
    }

    pub fn z_range(&self) -> Range<Vertex> {
        (2 * self.part_size) as Vertex..self.n as Vertex
    }

    pub fn z_size(&self) -> usize {
        self.n - 2 * self.part_size
    }

    pub fn part_of(&self, v: Vertex) -> Part {
        let v = v as usize;
        if v < self.part_size {
            Part::X
        } else if v < 2 * self.part_size {
            Part::Y
        } else {
            Part::Z
        }
    }

    /// `|X|·|Y|·C(|Z|, k-2)`.
    pub fn expected_edge_count(&self) -> u128 {
        let s = self.part_size as u128;
        s * s * binomial(self.z_size() as u64, (self.k - 2) as u64).unwrap_or(u128::MAX)
    }

    /// `X → 1`, `Y → 2`, and `z_colors[i]` on the `i`-th vertex of `Z`.
    pub fn canonical_coloring(&self, z_colors: &[Color]) -> Result<Coloring> {
        if z_colors.len() != self.z_size() {
            return Err(Error::Input(format!(
                "expected {} Z colors, got {}",
                self.z_size(),
                z_colors.len()
            )));
        }
        let mut colors = vec![Color::One; self.part_size];
        colors.extend(std::iter::repeat_n(Color::Two, self.part_size));
        colors.extend_from_slice(z_colors);
        Ok(Coloring::new(colors))
    }
}

/// Builds the X/Y/Z hypergraph.
pub fn build_xyz(spec: &XyzConstruction) -> Result<Hypergraph> {
    spec.validate()?;
    let z: Vec<Vertex> = spec.z_range().collect();
    let mut z_combos: Vec<Vertex> = Vec::new();
    for_each_combination(&z, spec.k - 2, |c| z_combos.extend_from_slice(c));
    let combo_len = spec.k - 2;
    let combos = if combo_len == 0 { 1 } else { z_combos.len() / combo_len };

    let m = spec.part_size * spec.part_size * combos;
    let mut offsets = Vec::with_capacity(m + 1);
    let mut members = Vec::with_capacity(m * spec.k);
    offsets.push(0);
    for x in spec.x_range() {
        for y in spec.y_range() {
            for c in 0..combos {
                members.push(x);
                members.push(y);
                members.extend_from_slice(&z_combos[c * combo_len..(c + 1) * combo_len]);
                offsets.push(members.len());
            }
        }
    }
    // x < y < every z, so each edge is already sorted and all are distinct
    Ok(Hypergraph::from_parts(spec.n, offsets, members))
}

/// Side sizes `(a_i, b_i)` of disjoint complete bipartite components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLayout {
    pub components: Vec<(usize, usize)>,
}

impl ComponentLayout {
    pub fn new(components: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(a, b)) = components.iter().find(|&&(a, b)| b < 1 || a < b) {
            return Err(Error::Input(format!(
                "component sides must satisfy a >= b >= 1, got ({a}, {b})"
            )));
        }
        Ok(ComponentLayout { components })
    }

    /// `count` copies of `K_{a,b}`.
    pub fn repeated(a: usize, b: usize, count: usize) -> Result<Self> {
        Self::new(vec![(a, b); count])
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|(a, b)| a + b).sum()
    }

    /// Vertex ranges `(A_i, B_i)`, placed consecutively from vertex 0.
    pub fn placements(&self) -> Vec<(Range<Vertex>, Range<Vertex>)> {
        let mut next = 0 as Vertex;
        self.components
            .iter()
            .map(|&(a, b)| {
                let a_range = next..next + a as Vertex;
                let b_range = a_range.end..a_range.end + b as Vertex;
                next = b_range.end;
                (a_range, b_range)
            })
            .collect()
    }
}

/// Disjoint complete bipartite graphs `K_{a_i,b_i}` as 2-edges on `n` vertices.
pub fn build_components(layout: &ComponentLayout, n: usize) -> Result<Hypergraph> {
    let used = layout.vertex_count();
    if used > n {
        return Err(Error::Input(format!(
            "layout needs {used} vertices but n = {n}"
        )));
    }
    let mut offsets = vec![0];
    let mut members = Vec::new();
    for (a, b) in layout.placements() {
        for u in a.clone() {
            for v in b.clone() {
                members.push(u);
                members.push(v);
                offsets.push(members.len());
            }
        }
    }
    Ok(Hypergraph::from_parts(n, offsets, members))
}

/// How random `ℓ`-sets are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationModel {
    /// `m` uniform draws with replacement, duplicates collapsed.
    FixedCount(usize),
    /// Every `ℓ`-set independently with probability `p`.
    Bernoulli(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub model: PerturbationModel,
    pub ell: usize,
    pub seed: u64,
}

impl PerturbationSpec {
    pub fn fixed_count(m: usize, ell: usize, seed: u64) -> Self {
        PerturbationSpec {
            model: PerturbationModel::FixedCount(m),
            ell,
            seed,
        }
    }

    pub fn bernoulli(p: f64, ell: usize, seed: u64) -> Self {
        PerturbationSpec {
            model: PerturbationModel::Bernoulli(p),
            ell,
            seed,
        }
    }

    /// The Bernoulli spec with `p = m / C(n, ℓ)`.
    pub fn matched_bernoulli(m: usize, n: usize, ell: usize, seed: u64) -> Result<Self> {
        let total = binomial(n as u64, ell as u64)
            .ok_or_else(|| Error::Input("C(n, ell) overflows".into()))?;
        if total == 0 {
            return Err(Error::Input(format!("ell = {ell} exceeds n = {n}")));
        }
        Ok(Self::bernoulli(
            (m as f64 / total as f64).min(1.0),
            ell,
            seed,
        ))
    }
}

/// `round(ρ · n^{ℓε/2})`.
pub fn perturbation_size(rho: f64, n: usize, ell: usize, epsilon: f64) -> usize {
    (rho * (n as f64).powf(ell as f64 * epsilon / 2.0)).round() as usize
}

/// Draws a random set of `ℓ`-subsets of `0..n`. Each returned set is sorted;
/// no set appears twice. Output is a pure function of `(n, spec)`.
pub fn sample_perturbation(n: usize, spec: &PerturbationSpec) -> Result<Vec<Vec<Vertex>>> {
    let ell = spec.ell;
    if ell > n {
        return Err(Error::Input(format!("ell = {ell} exceeds n = {n}")));
    }
    if ell < 2 {
        return Err(Error::Input(format!("ell must be >= 2, got {ell}")));
    }
    let mut rng = rng_from_seed(spec.seed);
    match spec.model {
        PerturbationModel::FixedCount(m) => {
            let mut seen = HashSet::with_capacity(m);
            let mut out = Vec::with_capacity(m);
            for _ in 0..m {
                let mut s: Vec<Vertex> = rand::seq::index::sample(&mut rng, n, ell)
                    .into_iter()
                    .map(|v| v as Vertex)
                    .collect();
                s.sort_unstable();
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
            Ok(out)
        }
        PerturbationModel::Bernoulli(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Input(format!("probability must lie in [0, 1], got {p}")));
            }
            let total = binomial(n as u64, ell as u64)
                .ok_or_else(|| Error::Input("C(n, ell) overflows".into()))?;
            let mut out = Vec::new();
            if p == 0.0 {
                return Ok(out);
            }
            if p == 1.0 {
                for r in 0..total {
                    out.push(unrank_colex(n as u64, ell as u64, r));
                }
                return Ok(out);
            }
            // skip ahead by geometric gaps over the colex ranking of all ℓ-sets
            let gap = Geometric::new(p).map_err(|e| Error::Input(e.to_string()))?;
            let mut rank: u128 = gap.sample(&mut rng) as u128;
            while rank < total {
                out.push(unrank_colex(n as u64, ell as u64, rank));
                rank = rank.saturating_add(1 + gap.sample(&mut rng) as u128);
            }
            Ok(out)
        }
    }
}

/// `h + r`: union of the edge sets, duplicates collapsed, `h` untouched.
pub fn perturb(h: &Hypergraph, r: &[Vec<Vertex>]) -> Result<Hypergraph> {
    h.union_with(r)
}

/// Random `k`-uniform hypergraph from `m` uniform draws (duplicates collapsed).
pub fn random_uniform(n: usize, k: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    let edges = sample_perturbation(n, &PerturbationSpec::fixed_count(m, k, seed))?;
    Hypergraph::new(n, edges)
}

/// Uniformly random `k`-uniform hypergraph with exactly `m` distinct edges.
pub fn random_uniform_exact(n: usize, k: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if k < 2 || k > n {
        return Err(Error::Input(format!("edge size {k} invalid for n = {n}")));
    }
    let total = binomial(n as u64, k as u64)
        .filter(|&t| t <= usize::MAX as u128)
        .ok_or_else(|| Error::Input("C(n, k) overflows".into()))? as usize;
    if m > total {
        return Err(Error::Input(format!("{m} edges requested but only {total} exist")));
    }
    let mut rng = rng_from_seed(seed);
    let mut ranks = rand::seq::index::sample(&mut rng, total, m).into_vec();
    ranks.sort_unstable();
    let mut offsets = vec![0];
    let mut members = Vec::with_capacity(m * k);
    for r in ranks {
        members.extend(unrank_colex(n as u64, k as u64, r as u128));
        offsets.push(members.len());
    }
    Ok(Hypergraph::from_parts(n, offsets, members))
}

/// Uniformly random color for each `Z` vertex (used to probe the canonical coloring).
pub fn random_z_colors(spec: &XyzConstruction, seed: u64) -> Vec<Color> {
    let mut rng = rng_from_seed(seed);
    (0..spec.z_size())
        .map(|_| if rng.random::<bool>() { Color::Two } else { Color::One })
        .collect()
}
