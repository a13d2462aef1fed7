//! The staged refutation: repeated witness trees, then a search over which
//! leaf neighborhood each successful stage forces to be monochromatic.

use std::collections::HashSet;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::decider::{cluster_feasible, Budget, ClusterInstance, Verdict};
use crate::error::{Error, Result};
use crate::generators::{sample_perturbation, PerturbationSpec};
use crate::hypergraph::{Coloring, Vertex};
use crate::rng::{derive_seed, rng_from_seed};

use super::partite::PartiteHypergraph;
use super::witness::{grow_witness_tree, ActivityThresholds, GrowFailure, WitnessTree};

/// Default cap on the number of stage choices examined.
pub const DEFAULT_MAX_CHOICES: u64 = 1 << 20;

/// Random ℓ-sets for each stage and level, plus the final batch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageBatches {
    /// `per_stage[i][j]` is used on level `j+1` of stage `i+1`.
    pub per_stage: Vec<Vec<Vec<Vec<Vertex>>>>,
    pub last: Vec<Vec<Vertex>>,
}

impl StageBatches {
    /// `stages` stages of `k-1` level batches with `per_level` draws each, and
    /// a final batch of `last_size` draws. Every batch has its own derived seed.
    pub fn sample(
        n: usize,
        k: usize,
        ell: usize,
        stages: usize,
        per_level: usize,
        last_size: usize,
        seed: u64,
    ) -> Result<Self> {
        let levels = k.saturating_sub(1);
        let mut per_stage = Vec::with_capacity(stages);
        for i in 0..stages {
            let mut stage = Vec::with_capacity(levels);
            for j in 0..levels {
                let s = derive_seed(derive_seed(seed, i as u64), j as u64);
                stage.push(sample_perturbation(n, &PerturbationSpec::fixed_count(per_level, ell, s))?);
            }
            per_stage.push(stage);
        }
        let last = sample_perturbation(
            n,
            &PerturbationSpec::fixed_count(last_size, ell, derive_seed(seed, u64::MAX)),
        )?;
        Ok(StageBatches { per_stage, last })
    }

    pub fn stages(&self) -> usize {
        self.per_stage.len()
    }

    /// Every ℓ-set of every batch.
    pub fn all_edges(&self) -> impl Iterator<Item = &Vec<Vertex>> + '_ {
        self.per_stage.iter().flatten().flatten().chain(&self.last)
    }

    pub fn total_edges(&self) -> usize {
        self.all_edges().count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageOutcome {
    Successful(WitnessTree),
    Failed(GrowFailure),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    pub edges_before: usize,
    pub outcome: StageOutcome,
    /// Edges incident to the stage's `S` sets, removed after a success.
    pub removed_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageLedger {
    pub t: usize,
    pub stages: Vec<StageRecord>,
}

impl StageLedger {
    pub fn successes(&self) -> usize {
        self.s_sets().len()
    }

    /// `S` sets of each successful stage, in stage order.
    pub fn s_sets(&self) -> Vec<&[Vec<Vertex>]> {
        self.stages
            .iter()
            .filter_map(|r| match &r.outcome {
                StageOutcome::Successful(t) => Some(t.s_sets.as_slice()),
                StageOutcome::Failed(_) => None,
            })
            .collect()
    }

    /// True iff sets from different successful stages never share a vertex.
    pub fn cross_stage_disjoint(&self) -> bool {
        let mut owner = std::collections::HashMap::new();
        for (i, sets) in self.s_sets().iter().enumerate() {
            for &v in sets.iter().flatten() {
                if *owner.entry(v).or_insert(i) != i {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StagesVerdict {
    /// Every choice was examined and refuted.
    NonColorable,
    /// Every sampled choice was refuted, but not every choice was examined.
    LikelyNonColorable,
    /// Some choice is feasible; the witness colors the full hypergraph.
    Colorable,
    /// No stage succeeded, or the decider budget ran out on some choice.
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageOptions {
    pub budget: Budget,
    pub max_choices: u64,
    pub seed: u64,
}

impl Default for StageOptions {
    fn default() -> Self {
        StageOptions {
            budget: Budget::unlimited(),
            max_choices: DEFAULT_MAX_CHOICES,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StagesReport {
    pub ledger: StageLedger,
    pub verdict: StagesVerdict,
    /// `∏ q_i` over successful stages.
    pub choice_space: f64,
    pub exhaustive: bool,
    pub choices_examined: u64,
    pub undecided_choices: u64,
    /// Proper coloring of the full hypergraph when the verdict is `Colorable`.
    pub witness: Option<Coloring>,
    /// The last cluster instance examined (the feasible one, when colorable).
    pub final_instance: Option<ClusterInstance>,
}

/// Runs `batches.stages()` stages of witness-tree growth on a shrinking copy
/// of `ph`, removing the edges incident to each successful stage's `S` sets.
/// Then, for choices `j_i` of one `S` set per successful stage, asks whether
/// `ph + all batches` has a proper coloring with each chosen set
/// monochromatic. Any proper coloring must make some choice monochromatic,
/// so refuting every choice refutes 2-colorability.
pub fn run_stages(
    ph: &PartiteHypergraph,
    batches: &StageBatches,
    thresholds: &ActivityThresholds,
    ell: usize,
    options: &StageOptions,
) -> Result<StagesReport> {
    if options.max_choices == 0 {
        return Err(Error::Input("max_choices must be positive".into()));
    }
    let mut current = ph.clone();
    let mut ledger = StageLedger {
        t: batches.stages(),
        stages: Vec::new(),
    };
    for (i, stage) in batches.per_stage.iter().enumerate() {
        let edges_before = current.edge_count();
        let outcome = grow_witness_tree(&current, stage, thresholds, ell)?;
        let (outcome, removed_edges) = match outcome {
            Ok(tree) => {
                let used: HashSet<Vertex> = tree.s_sets.iter().flatten().copied().collect();
                current = current.filter_edges(|e| !e.iter().any(|v| used.contains(v)));
                (StageOutcome::Successful(tree), edges_before - current.edge_count())
            }
            Err(f) => (StageOutcome::Failed(f), 0),
        };
        ledger.stages.push(StageRecord {
            stage: i,
            edges_before,
            outcome,
            removed_edges,
        });
    }

    let sets: Vec<Vec<Vec<Vertex>>> = ledger.s_sets().iter().map(|s| s.to_vec()).collect();
    let mut report = StagesReport {
        verdict: StagesVerdict::Inconclusive,
        choice_space: sets.iter().map(|s| s.len() as f64).product(),
        exhaustive: false,
        choices_examined: 0,
        undecided_choices: 0,
        witness: None,
        final_instance: None,
        ledger,
    };
    if sets.is_empty() {
        return Ok(report);
    }

    let mut edges = ph.hypergraph.to_edge_list();
    edges.extend(batches.all_edges().cloned());
    let mut inst = ClusterInstance::new(ph.n(), Vec::new(), edges)?;
    let radices: Vec<usize> = sets.iter().map(Vec::len).collect();
    report.exhaustive = report.choice_space <= options.max_choices as f64;
    let mut rng = rng_from_seed(options.seed);
    let mut choice = vec![0usize; sets.len()];
    let rounds = if report.exhaustive {
        report.choice_space as u64
    } else {
        options.max_choices
    };
    for round in 0..rounds {
        if report.exhaustive {
            if round > 0 {
                advance(&mut choice, &radices);
            }
        } else {
            for (c, &r) in choice.iter_mut().zip(&radices) {
                *c = rng.random_range(0..r);
            }
        }
        inst.clusters = sets.iter().zip(&choice).map(|(s, &j)| s[j].clone()).collect();
        let d = cluster_feasible(&inst, &options.budget)?;
        report.choices_examined += 1;
        match d.result.verdict {
            Verdict::Colorable => {
                report.verdict = StagesVerdict::Colorable;
                report.witness = d.result.witness;
                report.final_instance = Some(inst);
                return Ok(report);
            }
            Verdict::Undecided => report.undecided_choices += 1,
            Verdict::NotColorable => {}
        }
    }
    report.verdict = if report.undecided_choices > 0 {
        StagesVerdict::Inconclusive
    } else if report.exhaustive {
        StagesVerdict::NonColorable
    } else {
        StagesVerdict::LikelyNonColorable
    };
    report.final_instance = Some(inst);
    Ok(report)
}

/// Mixed-radix increment.
fn advance(choice: &mut [usize], radices: &[usize]) {
    for (c, &r) in choice.iter_mut().zip(radices) {
        *c += 1;
        if *c < r {
            return;
        }
        *c = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::brute_force_two_colorable;
    use crate::hypergraph::Hypergraph;

    fn permissive(n: usize, k: usize) -> ActivityThresholds {
        ActivityThresholds::new(n, k, 2, 0.5, 0.5, 1e-9)
    }

    /// Two copies of a star: `V_1 = {0, 4}`, `V_2 = {1, 2, 5, 6}`, `V_3 = {3, 7, 8, 9}`.
    /// Stage one uses root 0 with neighborhood {3, 8}, stage two root 4 with {7, 9}.
    fn two_stage() -> (PartiteHypergraph, StageBatches) {
        let edges = [
            [0, 1, 3],
            [0, 2, 3],
            [0, 1, 8],
            [0, 2, 8],
            [4, 5, 7],
            [4, 6, 7],
            [4, 5, 9],
            [4, 6, 9],
        ];
        let parts = vec![0, 1, 1, 2, 0, 1, 1, 2, 2, 2];
        let ph = PartiteHypergraph::new(Hypergraph::new(10, edges).unwrap(), 3, parts).unwrap();
        let batches = StageBatches {
            per_stage: vec![vec![vec![vec![1, 2]], vec![]], vec![vec![vec![5, 6]], vec![]]],
            // each stage's S sets are {3,8} and {7,9}; both contain a final edge
            last: vec![vec![3, 8], vec![7, 9]],
        };
        (ph, batches)
    }

    #[test]
    fn single_failed_stage_is_inconclusive() {
        let (ph, _) = two_stage();
        let batches = StageBatches {
            per_stage: vec![vec![vec![], vec![]]],
            last: vec![],
        };
        let r = run_stages(&ph, &batches, &permissive(10, 3), 2, &StageOptions::default()).unwrap();
        assert_eq!(r.verdict, StagesVerdict::Inconclusive);
        assert_eq!(r.ledger.successes(), 0);
        assert_eq!(r.choices_examined, 0);
    }

    #[test]
    fn two_stages_refute() {
        let (ph, batches) = two_stage();
        let r = run_stages(&ph, &batches, &permissive(10, 3), 2, &StageOptions::default()).unwrap();
        assert_eq!(r.ledger.successes(), 2);
        assert!(r.ledger.cross_stage_disjoint());
        assert_eq!(r.ledger.stages[0].removed_edges, 4);
        assert_eq!(r.verdict, StagesVerdict::NonColorable);
        assert!(r.exhaustive);
        let full = ph.hypergraph.union_with(batches.all_edges()).unwrap();
        assert_eq!(brute_force_two_colorable(&full).unwrap().colorable(), Some(false));
    }

    #[test]
    fn colorable_choice_gives_witness() {
        let (ph, mut batches) = two_stage();
        batches.last = vec![vec![3, 7]];
        let r = run_stages(&ph, &batches, &permissive(10, 3), 2, &StageOptions::default()).unwrap();
        assert_eq!(r.verdict, StagesVerdict::Colorable);
        let full = ph.hypergraph.union_with(batches.all_edges()).unwrap();
        assert!(full.is_proper(r.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn sampling_cap_is_reported() {
        let (ph, batches) = two_stage();
        let opts = StageOptions {
            max_choices: 1,
            ..StageOptions::default()
        };
        let r = run_stages(&ph, &batches, &permissive(10, 3), 2, &opts).unwrap();
        assert!(!r.exhaustive);
        assert_eq!(r.choice_space, 4.0);
        assert_eq!(r.choices_examined, 1);
        assert_eq!(r.verdict, StagesVerdict::LikelyNonColorable);
    }

    #[test]
    fn mixed_radix() {
        let mut c = vec![0, 0];
        let mut seen = Vec::new();
        for round in 0..6 {
            if round > 0 {
                advance(&mut c, &[2, 3]);
            }
            seen.push(c.clone());
        }
        assert_eq!(seen.len(), 6);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn batch_sampling_is_seeded() {
        let a = StageBatches::sample(30, 3, 2, 3, 5, 7, 1).unwrap();
        assert_eq!(a, StageBatches::sample(30, 3, 2, 3, 5, 7, 1).unwrap());
        assert_eq!(a.stages(), 3);
        assert_eq!(a.per_stage[0].len(), 2);
        assert!(a.total_edges() <= 3 * 2 * 5 + 7);
    }
}
