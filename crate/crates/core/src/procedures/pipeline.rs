//! Scripted composition of the procedures on an arbitrary uniform hypergraph:
//! degree filters, k-partite reduction, degree regularization, then one
//! witness tree or the full staged refutation.

use serde::{Deserialize, Serialize};

use crate::decider::Budget;
use crate::error::{Error, Result};
use crate::generators::perturbation_size;
use crate::hypergraph::Hypergraph;
use crate::rng::derive_seed;

use super::degrees::{
    density_constant, km1_branch_applies, km2_branch_applies, km2_delta_max, split_high_degree_km1,
    split_high_degree_km2, DegreeSplit,
};
use super::partite::{k_partite_reduction, regularize_degrees, stage_count, PartiteHypergraph, RegularizationReport};
use super::stages::{run_stages, StageBatches, StageOptions, StagesReport, DEFAULT_MAX_CHOICES};
use super::witness::{grow_witness_tree, verify_witness, ActivityThresholds, GrowFailure, WitnessCheck, WitnessTree};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub epsilon: f64,
    pub ell: usize,
    /// Batch size multiplier: each batch `R_j` has `ρ · n^{ℓε/2}` draws.
    pub rho: f64,
    pub seed: u64,
    pub partition_trials: usize,
    pub max_choices: u64,
    pub budget: Budget,
}

impl PipelineParams {
    pub fn new(epsilon: f64, ell: usize, rho: f64, seed: u64) -> Self {
        PipelineParams {
            epsilon,
            ell,
            rho,
            seed,
            partition_trials: 20,
            max_choices: DEFAULT_MAX_CHOICES,
            budget: Budget::unlimited(),
        }
    }
}

/// Everything computed before tree growth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preparation {
    pub n: usize,
    pub k: usize,
    pub edges: usize,
    pub c1: f64,
    pub km1: DegreeSplit,
    pub km1_branch: bool,
    pub km2: Option<DegreeSplit>,
    pub km2_branch: bool,
    pub after_filters: usize,
    pub partite_edges: usize,
    pub regularization: RegularizationReport,
    pub thresholds: ActivityThresholds,
    pub stage_count: usize,
    pub per_level: usize,
    pub last_size: usize,
    #[serde(skip)]
    pub regularized: Option<PartiteHypergraph>,
}

/// Runs the degree filters, the k-partite reduction and the degree
/// regularization on `h`.
pub fn prepare(h: &Hypergraph, params: &PipelineParams) -> Result<Preparation> {
    let k = h
        .uniform_arity()
        .ok_or_else(|| Error::Input("pipeline needs a nonempty uniform hypergraph".into()))?;
    let n = h.n();
    let nf = n as f64;
    let eps = params.epsilon;
    let c1 = density_constant(h.edge_count(), n, k, eps);

    let km1 = split_high_degree_km1(h, k, nf.powf(1.0 - eps / 2.0))?;
    let km1_branch = km1_branch_applies(&km1, c1, n, eps);
    let mut filtered = km1.remove_from(h);
    let (km2, km2_branch) = if k >= 3 {
        let s = split_high_degree_km2(h, k, km2_delta_max(params.ell, eps))?;
        let b = km2_branch_applies(&s, c1, n, eps);
        filtered = s.remove_from(&filtered);
        (Some(s), b)
    } else {
        (None, false)
    };
    let after_filters = filtered.edge_count();

    let mut partite = k_partite_reduction(&filtered, k, params.partition_trials.max(1), derive_seed(params.seed, 1))?;
    partite.source_edges = h.edge_count();
    let partite_edges = partite.edge_count();
    let reg = regularize_degrees(&partite, eps, params.ell)?;
    let ph = reg.partite;
    let thresholds = ActivityThresholds::for_partite(&ph, eps, params.ell)?;
    let c5 = reg.report.constants.c5;
    let t = stage_count(c5, params.ell, k, n, reg.report.alpha, eps);
    let last_size = perturbation_size(params.rho, n, params.ell, eps).max(1);
    let per_level = last_size.div_ceil(t).max(1);
    Ok(Preparation {
        n,
        k,
        edges: h.edge_count(),
        c1,
        km1,
        km1_branch,
        km2,
        km2_branch,
        after_filters,
        partite_edges,
        regularization: reg.report,
        thresholds,
        stage_count: t,
        per_level,
        last_size,
        regularized: Some(ph),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub preparation: Preparation,
    pub batches: Vec<Vec<Vec<u32>>>,
    pub tree: Option<WitnessTree>,
    pub failure: Option<GrowFailure>,
    pub check: Option<WitnessCheck>,
}

/// Prepares `h` and grows one witness tree from freshly sampled level batches.
pub fn grow_witness_pipeline(h: &Hypergraph, params: &PipelineParams) -> Result<WitnessReport> {
    let prep = prepare(h, params)?;
    let ph = prep.regularized.clone().expect("prepared");
    let sampled = StageBatches::sample(prep.n, prep.k, params.ell, 1, prep.per_level, 0, derive_seed(params.seed, 2))?;
    let batches = sampled.per_stage.into_iter().next().unwrap_or_default();
    let grown = grow_witness_tree(&ph, &batches, &prep.thresholds, params.ell)?;
    let (tree, failure, check) = match grown {
        Ok(tree) => {
            let check = verify_witness(&tree, &ph, &batches);
            (Some(tree), None, Some(check))
        }
        Err(f) => (None, Some(f), None),
    };
    Ok(WitnessReport {
        preparation: prep,
        batches,
        tree,
        failure,
        check,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagesPipelineReport {
    pub preparation: Preparation,
    pub batches: StageBatches,
    pub stages: StagesReport,
}

/// Prepares `h`, samples `t` stages of level batches plus the final batch and
/// runs the staged refutation.
pub fn run_stages_pipeline(h: &Hypergraph, params: &PipelineParams) -> Result<StagesPipelineReport> {
    let prep = prepare(h, params)?;
    let ph = prep.regularized.clone().expect("prepared");
    let batches = StageBatches::sample(
        prep.n,
        prep.k,
        params.ell,
        prep.stage_count,
        prep.per_level,
        prep.last_size,
        derive_seed(params.seed, 3),
    )?;
    let opts = StageOptions {
        budget: params.budget,
        max_choices: params.max_choices,
        seed: derive_seed(params.seed, 4),
    };
    let stages = run_stages(&ph, &batches, &prep.thresholds, params.ell, &opts)?;
    Ok(StagesPipelineReport {
        preparation: prep,
        batches,
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build_xyz, random_uniform_exact, XyzConstruction};
    use crate::hypergraph::Hypergraph;
    use crate::procedures::StagesVerdict;

    #[test]
    fn xyz_filters_everything_at_km1() {
        // every X×Y pair has degree |Z| = 68 > 100^{0.6}
        let h = build_xyz(&XyzConstruction::new(100, 3, 0.8).unwrap()).unwrap();
        let params = PipelineParams::new(0.8, 2, 1.0, 1);
        assert!(matches!(prepare(&h, &params), Err(Error::ReductionFailed(_))));
    }

    #[test]
    fn random_triples_run_end_to_end() {
        let h = random_uniform_exact(40, 3, 1500, 7).unwrap();
        let params = PipelineParams::new(0.3, 2, 2.0, 3);
        let prep = prepare(&h, &params).unwrap();
        let ph = prep.regularized.as_ref().unwrap();
        assert_eq!(ph.degree_window_violations(prep.regularization.alpha), 0);
        assert!(prep.stage_count >= 1);
        let w = grow_witness_pipeline(&h, &params).unwrap();
        if let Some(check) = &w.check {
            assert!(check.is_valid());
        }
        let s = run_stages_pipeline(&h, &params).unwrap();
        if let Some(wit) = &s.stages.witness {
            let full = h.union_with(s.batches.all_edges()).unwrap();
            assert!(full.is_proper(wit).unwrap());
        }
        assert!(s.stages.ledger.cross_stage_disjoint());
        if s.stages.verdict == StagesVerdict::Colorable {
            assert!(s.stages.witness.is_some());
        }
    }

    #[test]
    fn rejects_empty_and_mixed() {
        let params = PipelineParams::new(0.5, 2, 1.0, 0);
        assert!(prepare(&Hypergraph::empty(5), &params).is_err());
        let mixed = Hypergraph::new(5, vec![vec![0, 1], vec![1, 2, 3]]).unwrap();
        assert!(prepare(&mixed, &params).is_err());
    }
}
