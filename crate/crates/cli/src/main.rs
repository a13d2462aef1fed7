//! `hypercolor`: build, perturb and decide hypergraphs, run the refutation
//! procedures and Monte Carlo sweeps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hypercolor_core::experiments::{gnuplot_script, threshold_sweep, with_jobs, write_curve_csv, ExperimentConfig};
use hypercolor_core::generators::{build_components, ComponentLayout, PerturbationSpec};
use hypercolor_core::io::{read_file, write_file};
use hypercolor_core::procedures::{extract_families, grow_witness_pipeline, run_stages_pipeline, PipelineParams};
use hypercolor_core::{
    brute_force_two_colorable, build_xyz, is_two_colorable_with, perturb, sample_perturbation, Budget, Verdict,
    XyzConstruction,
};

/// Exit status for usage and I/O errors; 0, 1 and 2 are decider answers.
const EXIT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hypercolor", version, about = "2-colorability of randomly perturbed hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a deterministic construction in the text format.
    #[command(subcommand)]
    Generate(Generate),
    /// Add random ℓ-sets to a hypergraph.
    Perturb(PerturbArgs),
    /// Decide 2-colorability. Exit 0 colorable, 1 not, 2 undecided.
    Decide(DecideArgs),
    /// Greedy families with disjoint neighborhoods in a graph.
    ExtractFamilies(FamiliesArgs),
    /// Reduce a k-uniform hypergraph and grow one witness tree.
    GrowWitness(PipelineArgs),
    /// Reduce a k-uniform hypergraph and run the staged refutation.
    RunStages(StagesArgs),
    /// Survival curve over a grid of perturbation sizes, as CSV.
    Sweep(SweepArgs),
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// Dense 2-colorable X/Y/Z construction.
    Xyz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: f64,
        /// Use this |X| = |Y| instead of ⌈n^{1-ε/2}⌉.
        #[arg(long)]
        part_size: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Disjoint complete bipartite graphs.
    Components {
        /// Comma-separated `a:b` part sizes, e.g. `4:4,3:2`.
        #[arg(long)]
        layout: String,
        /// Vertex count; defaults to the layout's total.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct PerturbArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    ell: usize,
    /// Number of uniform draws (duplicates collapse).
    #[arg(long, conflicts_with = "prob", required_unless_present = "prob")]
    count: Option<usize>,
    /// Probability of each ℓ-set.
    #[arg(long)]
    prob: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DecideArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Exhaustive search (n ≤ 24).
    #[arg(long)]
    brute_force: bool,
    /// Maximum branching decisions before answering undecided.
    #[arg(long)]
    budget: Option<u64>,
    /// JSON report path; stdout when absent.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FamiliesArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    delta: f64,
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    ell: usize,
    /// Multiplier on n^{ℓε/2} for the batch sizes.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StagesArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Choices examined before falling back to sampling.
    #[arg(long)]
    max_choices: Option<u64>,
    /// Decider budget per choice, in branching decisions.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to HYPERCOLOR_JOBS, then all cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write a gnuplot script for the CSV here.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn parse_layout(s: &str) -> anyhow::Result<ComponentLayout> {
    let mut parts = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let Some((a, b)) = item.split_once(':') else {
            bail!("layout entry {item:?} is not of the form a:b");
        };
        parts.push((a.trim().parse()?, b.trim().parse()?));
    }
    Ok(ComponentLayout::new(parts)?)
}

fn budget(nodes: Option<u64>) -> Budget {
    nodes.map_or_else(Budget::unlimited, Budget::nodes)
}

fn params(args: &PipelineArgs) -> PipelineParams {
    PipelineParams::new(args.epsilon, args.ell, args.rho, args.seed)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Generate(Generate::Xyz {
            n,
            k,
            epsilon,
            part_size,
            out,
        }) => {
            let spec = match part_size {
                Some(s) => XyzConstruction::with_part_size(n, k, s)?,
                None => XyzConstruction::new(n, k, epsilon)?,
            };
            let h = build_xyz(&spec)?;
            write_file(&out, &h)?;
            eprintln!("wrote {} edges, |X| = |Y| = {}, |Z| = {}", h.edge_count(), spec.part_size, spec.z_size());
        }
        Command::Generate(Generate::Components { layout, n, out }) => {
            let layout = parse_layout(&layout)?;
            let n = n.unwrap_or_else(|| layout.vertex_count());
            let h = build_components(&layout, n)?;
            write_file(&out, &h)?;
            eprintln!("wrote {} edges on {n} vertices", h.edge_count());
        }
        Command::Perturb(a) => {
            let h = read_file(&a.input)?;
            let spec = match (a.count, a.prob) {
                (Some(m), _) => PerturbationSpec::fixed_count(m, a.ell, a.seed),
                (None, Some(p)) => PerturbationSpec::bernoulli(p, a.ell, a.seed),
                (None, None) => bail!("one of --count or --prob is required"),
            };
            let r = sample_perturbation(h.n(), &spec)?;
            let out = perturb(&h, &r)?;
            write_file(&a.out, &out)?;
            eprintln!("added {} distinct {}-sets, {} edges total", r.len(), a.ell, out.edge_count());
        }
        Command::Decide(a) => {
            let h = read_file(&a.input)?;
            let result = if a.brute_force {
                brute_force_two_colorable(&h)?
            } else {
                is_two_colorable_with(&h, &budget(a.budget))
            };
            emit(&result, a.report.as_deref())?;
            return Ok(match result.verdict {
                Verdict::Colorable => 0,
                Verdict::NotColorable => 1,
                Verdict::Undecided => 2,
            });
        }
        Command::ExtractFamilies(a) => {
            let g = read_file(&a.input)?;
            emit(&extract_families(&g, a.delta, a.ell)?, a.report.as_deref())?;
        }
        Command::GrowWitness(a) => {
            let h = read_file(&a.input)?;
            emit(&grow_witness_pipeline(&h, &params(&a))?, a.report.as_deref())?;
        }
        Command::RunStages(a) => {
            let h = read_file(&a.pipeline.input)?;
            let mut p = params(&a.pipeline);
            if let Some(m) = a.max_choices {
                p.max_choices = m;
            }
            p.budget = budget(a.budget);
            emit(&run_stages_pipeline(&h, &p)?, a.pipeline.report.as_deref())?;
        }
        Command::Sweep(a) => {
            let text = std::fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            let curve = with_jobs(a.jobs, || threshold_sweep(&cfg))??;
            let file = File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
            write_curve_csv(&curve, BufWriter::new(file))?;
            if let Some(g) = &a.gnuplot {
                let title = format!("n = {}, k = {}, ell = {}, epsilon = {}", curve.n, curve.k, curve.ell, curve.epsilon);
                std::fs::write(g, gnuplot_script(&a.out.to_string_lossy(), &title))?;
            }
            match curve.crossing.rho() {
                Some(rho) => eprintln!("crossing at rho = {rho:.4}"),
                None => eprintln!("crossing outside the grid"),
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
