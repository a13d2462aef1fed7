//! Shared inputs for the benchmarks.

use hypercolor_core::generators::{sample_perturbation, PerturbationSpec};
use hypercolor_core::{build_xyz, perturb, Hypergraph, XyzConstruction};

/// The X/Y/Z construction (k = 3, ε = 0.8) with `rho · n^{0.8}` random pairs.
pub fn perturbed_xyz(n: usize, rho: f64, seed: u64) -> (XyzConstruction, Vec<Vec<u32>>, Hypergraph) {
    let spec = XyzConstruction::new(n, 3, 0.8).expect("valid construction");
    let base = build_xyz(&spec).expect("builds");
    let m = (rho * (n as f64).powf(0.8)).round() as usize;
    let r = sample_perturbation(n, &PerturbationSpec::fixed_count(m, 2, seed)).expect("samples");
    let h = perturb(&base, &r).expect("perturbs");
    (spec, r, h)
}

/// `m` uniform random triples on `n` vertices.
pub fn random_triples(n: usize, m: usize, seed: u64) -> Hypergraph {
    hypercolor_core::generators::random_uniform(n, 3, m, seed).expect("samples")
}
