//! Survival probabilities, threshold sweeps and scaling fits.

use std::io::Write;

use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decider::{is_two_colorable_with, Verdict};
use crate::error::{Error, Result};
use crate::generators::{perturb, sample_perturbation};
use crate::rng::{derive_seed, rng_from_seed};

use super::config::{jobs_from_env, Base, ExperimentConfig};
use super::stats::{crossing, isotonic_decreasing, least_squares, quantile, wilson_interval};

/// Undecided fraction above which a point is flagged unreliable.
pub const UNRELIABLE_UNDECIDED: f64 = 0.10;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPoint {
    pub rho: f64,
    pub r_count: usize,
    pub trials: usize,
    pub colorable: usize,
    pub undecided: usize,
    pub mean_nodes: f64,
    pub unreliable: bool,
}

impl SurvivalPoint {
    pub fn decided(&self) -> usize {
        self.trials - self.undecided
    }

    /// Colorable share of decided trials (NaN when none were decided).
    pub fn survival(&self) -> f64 {
        if self.decided() == 0 {
            return f64::NAN;
        }
        self.colorable as f64 / self.decided() as f64
    }

    /// 95% Wilson interval for the survival probability.
    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.colorable as u64, self.decided() as u64, Z95)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Crossing {
    InRange {
        rho: f64,
        /// `ρ*` times the scale factor.
        r_count: f64,
        ci_lo: f64,
        ci_hi: f64,
        /// Bootstrap replicates whose curve did not cross inside the grid.
        bootstrap_misses: usize,
    },
    OutOfRange,
}

impl Crossing {
    pub fn rho(&self) -> Option<f64> {
        match self {
            Crossing::InRange { rho, .. } => Some(*rho),
            Crossing::OutOfRange => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub epsilon: f64,
    pub points: Vec<SurvivalPoint>,
    /// Nonincreasing fit of the survival estimates.
    pub fitted: Vec<f64>,
    pub crossing: Crossing,
}

#[derive(Clone, Copy, Debug)]
struct TrialOutcome {
    verdict: Verdict,
    nodes: u64,
}

/// Seed of trial `trial` at grid value `rho`.
pub fn trial_seed(seed: u64, rho: f64, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, rho.to_bits()), trial as u64)
}

fn run_trial(cfg: &ExperimentConfig, base: &Base, rho: f64, trial: usize) -> Result<TrialOutcome> {
    let spec = cfg.perturbation(base.n, rho, trial_seed(cfg.seed, rho, trial))?;
    let r = sample_perturbation(base.n, &spec)?;
    let h = perturb(&base.hypergraph, &r)?;
    let d = is_two_colorable_with(&h, &cfg.budget);
    if let Some(w) = &d.witness {
        if !h.is_proper(w)? {
            return Err(Error::Input(format!("decider returned an improper witness at rho = {rho}, trial {trial}")));
        }
    }
    Ok(TrialOutcome {
        verdict: d.verdict,
        nodes: d.stats.nodes,
    })
}

fn summarize(cfg: &ExperimentConfig, base: &Base, rho: f64, outcomes: &[TrialOutcome]) -> SurvivalPoint {
    let colorable = outcomes.iter().filter(|o| o.verdict == Verdict::Colorable).count();
    let undecided = outcomes.iter().filter(|o| o.verdict == Verdict::Undecided).count();
    let trials = outcomes.len();
    SurvivalPoint {
        rho,
        r_count: cfg.r_count(rho, base.n),
        trials,
        colorable,
        undecided,
        mean_nodes: outcomes.iter().map(|o| o.nodes as f64).sum::<f64>() / trials as f64,
        unreliable: undecided as f64 > UNRELIABLE_UNDECIDED * trials as f64,
    }
}

/// Runs `f` on a pool with `jobs` workers (environment default, then all cores).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs.or_else(jobs_from_env) {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::Input(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

/// Fraction of trials at multiplier `rho` in which base plus the random
/// ℓ-sets is 2-colorable. Deterministic given the config.
pub fn survival_probability(cfg: &ExperimentConfig, rho: f64) -> Result<SurvivalPoint> {
    cfg.validate()?;
    let base = cfg.build_base()?;
    point(cfg, &base, rho)
}

fn point(cfg: &ExperimentConfig, base: &Base, rho: f64) -> Result<SurvivalPoint> {
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, base, rho, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(cfg, base, rho, &outcomes))
}

/// Survival at every grid point, the nonincreasing fit and the 0.5 crossing
/// with a bootstrap interval. Trials run in parallel over `(ρ, trial)` pairs.
pub fn threshold_sweep(cfg: &ExperimentConfig) -> Result<SurvivalCurve> {
    cfg.validate()?;
    let base = cfg.build_base()?;
    let pairs: Vec<(usize, usize)> = (0..cfg.rho_grid.len())
        .flat_map(|i| (0..cfg.trials).map(move |t| (i, t)))
        .collect();
    let outcomes = pairs
        .par_iter()
        .map(|&(i, t)| run_trial(cfg, &base, cfg.rho_grid[i], t))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<SurvivalPoint> = cfg
        .rho_grid
        .iter()
        .zip(outcomes.chunks(cfg.trials))
        .map(|(&rho, o)| summarize(cfg, &base, rho, o))
        .collect();
    Ok(curve_from_points(cfg, &base, points))
}

fn fit(points: &[SurvivalPoint], colorable: &[f64]) -> Vec<f64> {
    let values: Vec<f64> = points
        .iter()
        .zip(colorable)
        .map(|(p, &c)| if p.decided() == 0 { 0.0 } else { c / p.decided() as f64 })
        .collect();
    let weights: Vec<f64> = points.iter().map(|p| p.decided() as f64).collect();
    isotonic_decreasing(&values, &weights)
}

fn curve_from_points(cfg: &ExperimentConfig, base: &Base, points: Vec<SurvivalPoint>) -> SurvivalCurve {
    let counts: Vec<f64> = points.iter().map(|p| p.colorable as f64).collect();
    let fitted = fit(&points, &counts);
    let crossing = match crossing(&cfg.rho_grid, &fitted, 0.5) {
        None => Crossing::OutOfRange,
        Some(rho) => {
            let mut rng = rng_from_seed(derive_seed(cfg.seed, 0x626f_6f74));
            let mut reps = Vec::with_capacity(cfg.bootstrap);
            let mut misses = 0;
            for _ in 0..cfg.bootstrap {
                let resampled: Vec<f64> = points
                    .iter()
                    .map(|p| {
                        let s = p.survival();
                        if p.decided() == 0 || !s.is_finite() {
                            0.0
                        } else {
                            Binomial::new(p.decided() as u64, s)
                                .map(|b| b.sample(&mut rng) as f64)
                                .unwrap_or(0.0)
                        }
                    })
                    .collect();
                match crossing(&cfg.rho_grid, &fit(&points, &resampled), 0.5) {
                    Some(r) => reps.push(r),
                    None => misses += 1,
                }
            }
            reps.sort_by(f64::total_cmp);
            Crossing::InRange {
                rho,
                r_count: rho * cfg.scale_factor(base.n),
                ci_lo: quantile(&reps, 0.025),
                ci_hi: quantile(&reps, 0.975),
                bootstrap_misses: misses,
            }
        }
    };
    SurvivalCurve {
        n: base.n,
        k: base.k,
        ell: cfg.ell,
        epsilon: cfg.epsilon,
        points,
        fitted,
        crossing,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub crossing: Crossing,
    /// `ln |R|*`, when the crossing is in range.
    pub log_count: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub rows: Vec<ScalingRow>,
    /// Values of `n` left out because their crossing fell outside the grid.
    pub omitted: Vec<usize>,
    pub slope: f64,
    pub intercept: f64,
    /// `ln |R|* - (slope · ln n + intercept)` for each fitted row.
    pub residuals: Vec<f64>,
    /// The exponent `ℓε/2` the construction predicts.
    pub predicted_slope: f64,
    pub curves: Vec<SurvivalCurve>,
}

/// Sweeps the template at every `n` and fits `ln |R|*` against `ln n`.
pub fn scaling_check(template: &ExperimentConfig, n_list: &[usize]) -> Result<ScalingFit> {
    if n_list.len() < 3 {
        return Err(Error::Input(format!("scaling fit needs at least 3 values of n, got {}", n_list.len())));
    }
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut omitted = Vec::new();
    for &n in n_list {
        let mut cfg = template.clone();
        cfg.base = template
            .base
            .with_n(n)
            .ok_or_else(|| Error::Input("a file base cannot be rescaled".into()))?;
        let curve = threshold_sweep(&cfg)?;
        let log_count = match curve.crossing {
            Crossing::InRange { r_count, .. } if r_count > 0.0 => Some(r_count.ln()),
            _ => None,
        };
        match log_count {
            Some(y) => {
                xs.push((n as f64).ln());
                ys.push(y);
            }
            None => omitted.push(n),
        }
        rows.push(ScalingRow {
            n,
            crossing: curve.crossing.clone(),
            log_count,
        });
        curves.push(curve);
    }
    let (slope, intercept) = least_squares(&xs, &ys).ok_or_else(|| {
        Error::Input(format!("only {} values of n crossed inside the grid", xs.len()))
    })?;
    let residuals = xs.iter().zip(&ys).map(|(x, y)| y - (slope * x + intercept)).collect();
    Ok(ScalingFit {
        rows,
        omitted,
        slope,
        intercept,
        residuals,
        predicted_slope: template.ell as f64 * template.epsilon / 2.0,
        curves,
    })
}

/// Column order of the curve CSV.
pub const CSV_HEADER: [&str; 12] = [
    "n", "k", "ell", "epsilon", "rho", "r_count", "trials", "colorable", "undecided", "survival", "ci_lo", "ci_hi",
];

/// One CSV row per grid point; the interval is the per-point Wilson interval.
pub fn write_curve_csv<W: Write>(curve: &SurvivalCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for p in &curve.points {
        let (lo, hi) = p.wilson();
        w.write_record([
            curve.n.to_string(),
            curve.k.to_string(),
            curve.ell.to_string(),
            curve.epsilon.to_string(),
            p.rho.to_string(),
            p.r_count.to_string(),
            p.trials.to_string(),
            p.colorable.to_string(),
            p.undecided.to_string(),
            p.survival().to_string(),
            lo.to_string(),
            hi.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A gnuplot script plotting a curve CSV with its error bars.
pub fn gnuplot_script(csv_path: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set title '{title}'\n\
         set xlabel 'rho'\n\
         set ylabel 'survival'\n\
         set logscale x\n\
         set yrange [0:1]\n\
         plot '{csv_path}' using 5:10:11:12 with yerrorlines title 'survival'\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{BaseSpec, Scale};

    fn cfg(base: BaseSpec, grid: Vec<f64>, trials: usize) -> ExperimentConfig {
        ExperimentConfig {
            base,
            ell: 2,
            epsilon: 0.8,
            rho_grid: grid,
            trials,
            seed: 5,
            scale: Scale::Exponent,
            model: Default::default(),
            budget: Default::default(),
            bootstrap: 200,
        }
    }

    #[test]
    fn zero_rho_keeps_xyz_colorable() {
        let c = cfg(BaseSpec::Xyz { n: 40, k: 3, part_size: None, part_fraction: None }, vec![0.0], 5);
        let p = survival_probability(&c, 0.0).unwrap();
        assert_eq!((p.colorable, p.undecided, p.r_count), (5, 0, 0));
        assert_eq!(p.survival(), 1.0);
        let curve = threshold_sweep(&c).unwrap();
        assert_eq!(curve.fitted, vec![1.0]);
        assert_eq!(curve.crossing, Crossing::OutOfRange);
    }

    #[test]
    fn dense_random_pairs_kill_survival() {
        let mut c = cfg(BaseSpec::Empty { n: 40 }, vec![3.0], 20);
        c.scale = Scale::PerVertex;
        let p = survival_probability(&c, 3.0).unwrap();
        assert_eq!(p.r_count, 120);
        assert_eq!(p.colorable, 0);
    }

    #[test]
    fn sweep_is_reproducible_and_crosses() {
        let mut c = cfg(BaseSpec::Empty { n: 30 }, vec![0.1, 0.3, 0.5, 0.8, 1.2], 30);
        c.scale = Scale::PerVertex;
        let a = threshold_sweep(&c).unwrap();
        let b = threshold_sweep(&c).unwrap();
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        write_curve_csv(&a, &mut ca).unwrap();
        write_curve_csv(&b, &mut cb).unwrap();
        assert_eq!(ca, cb);
        let text = String::from_utf8(ca).unwrap();
        assert!(text.starts_with("n,k,ell,epsilon,rho,r_count,trials,colorable,undecided,survival,ci_lo,ci_hi\n"));
        assert_eq!(text.lines().count(), 6);
        for w in a.fitted.windows(2) {
            assert!(w[0] >= w[1]);
        }
        // random graph with ρn edges stays bipartite only for small ρ
        assert!(a.points[0].survival() > a.points[4].survival());
        if let Crossing::InRange { rho, ci_lo, ci_hi, .. } = a.crossing {
            assert!(ci_lo <= rho + 1e-9 && rho <= ci_hi + 1e-9);
        }
        let single = with_jobs(Some(1), || threshold_sweep(&c).unwrap()).unwrap();
        assert_eq!(single, a);
    }

    #[test]
    fn scaling_needs_three_sizes() {
        let c = cfg(BaseSpec::Empty { n: 10 }, vec![0.0, 1.0], 2);
        assert!(scaling_check(&c, &[10, 20]).is_err());
    }

    #[test]
    fn gnuplot_mentions_columns() {
        let s = gnuplot_script("curve.csv", "t");
        assert!(s.contains("using 5:10:11:12"));
    }
}
