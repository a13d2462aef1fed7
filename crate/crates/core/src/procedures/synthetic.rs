//! Random k-partite hypergraphs whose head degrees already lie in a window.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::rng::rng_from_seed;

use super::partite::PartiteHypergraph;
use super::witness::ActivityThresholds;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// `|V_1|, ..., |V_k|`; parts are consecutive index ranges.
    pub part_sizes: Vec<usize>,
    /// Probability that a head tuple gets any edges.
    pub head_density: f64,
    /// Each chosen head gets a uniform degree in `min..=max`; requires `max ≤ 2·min`.
    pub min_degree: usize,
    pub max_degree: usize,
    pub seed: u64,
}

/// Builds the hypergraph described by `spec`, with `α` set so that
/// `n^{1-α} = min_degree`.
pub fn synthetic_partite(spec: &SyntheticSpec) -> Result<PartiteHypergraph> {
    let k = spec.part_sizes.len();
    let tail = *spec.part_sizes.last().unwrap_or(&0);
    if k < 2 || spec.part_sizes.contains(&0) {
        return Err(Error::Input("need at least two nonempty parts".into()));
    }
    if spec.min_degree == 0 || spec.max_degree < spec.min_degree || spec.max_degree > 2 * spec.min_degree {
        return Err(Error::Input(format!(
            "degree range {}..={} is not a window [d, 2d]",
            spec.min_degree, spec.max_degree
        )));
    }
    if spec.max_degree > tail {
        return Err(Error::Input(format!("degree {} exceeds |V_k| = {tail}", spec.max_degree)));
    }
    if !(0.0..=1.0).contains(&spec.head_density) {
        return Err(Error::Input(format!("head density {} not in [0, 1]", spec.head_density)));
    }
    let n: usize = spec.part_sizes.iter().sum();
    let mut starts = vec![0usize];
    for &s in &spec.part_sizes {
        starts.push(starts.last().unwrap() + s);
    }
    let parts: Vec<usize> = (0..k).flat_map(|j| std::iter::repeat_n(j, spec.part_sizes[j])).collect();
    let mut rng = rng_from_seed(spec.seed);
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut head = vec![0usize; k - 1];
    loop {
        if rng.random_bool(spec.head_density) {
            let d = rng.random_range(spec.min_degree..=spec.max_degree);
            for t in rand::seq::index::sample(&mut rng, tail, d) {
                let mut e: Vec<Vertex> = head.iter().enumerate().map(|(j, &h)| (starts[j] + h) as Vertex).collect();
                e.push((starts[k - 1] + t) as Vertex);
                edges.push(e);
            }
        }
        // odometer over V_1 × ... × V_{k-1}
        let mut j = k - 1;
        loop {
            if j == 0 {
                let mut ph = PartiteHypergraph::new(Hypergraph::new(n, edges)?, k, parts)?;
                ph.alpha = Some(1.0 - (spec.min_degree as f64).ln() / (n as f64).ln());
                return Ok(ph);
            }
            j -= 1;
            head[j] += 1;
            if head[j] < spec.part_sizes[j] {
                break;
            }
            head[j] = 0;
        }
    }
}

impl ActivityThresholds {
    /// Thresholds with `c5 = m / n^{k-ε-((ℓ-2)/(ℓ-1))(α-ε/2)}`, the value at
    /// which `ph` exactly meets the edge-count hypothesis of tree growth.
    /// Then `Δ_1 = m / (2n)`.
    pub fn calibrated(ph: &PartiteHypergraph, epsilon: f64, ell: usize) -> Result<Self> {
        let alpha = ph
            .alpha
            .ok_or_else(|| Error::Input("hypergraph has no degree window".into()))?;
        let l = ell as f64;
        let shift = (l - 2.0) / (l - 1.0) * (alpha - epsilon / 2.0);
        let c5 = ph.edge_count() as f64 / (ph.n() as f64).powf(ph.k as f64 - epsilon - shift);
        Ok(Self::new(ph.n(), ph.k, ell, epsilon, alpha, c5))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            part_sizes: vec![4, 6, 10],
            head_density: 0.7,
            min_degree: 3,
            max_degree: 6,
            seed,
        }
    }

    #[test]
    fn window_holds() {
        let ph = synthetic_partite(&spec(1)).unwrap();
        assert!(ph.edge_count() > 0);
        assert_eq!(ph.degree_window_violations(ph.alpha.unwrap()), 0);
        assert!(ph.head_degrees().values().all(|&d| (3..=6).contains(&d)));
        assert_eq!(ph, synthetic_partite(&spec(1)).unwrap());
    }

    #[test]
    fn full_density_counts() {
        let mut s = spec(2);
        s.head_density = 1.0;
        s.min_degree = 4;
        s.max_degree = 4;
        let ph = synthetic_partite(&s).unwrap();
        assert_eq!(ph.edge_count(), 4 * 6 * 4);
        assert_eq!(ph.part_members(2), (10..20).collect::<Vec<_>>());
    }

    #[test]
    fn calibrated_first_threshold() {
        let ph = synthetic_partite(&spec(3)).unwrap();
        let th = ActivityThresholds::calibrated(&ph, 0.8, 2).unwrap();
        let expect = ph.edge_count() as f64 / (2.0 * 20.0);
        assert!((th.delta(1) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn rejects_bad_windows() {
        let mut s = spec(4);
        s.max_degree = 7;
        assert!(synthetic_partite(&s).is_err());
        s.max_degree = 11;
        s.min_degree = 11;
        assert!(synthetic_partite(&s).is_err());
    }
}
