//! Experiment configuration (JSON).

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::decider::Budget;
use crate::error::{Error, Result};
use crate::generators::{
    build_components, build_xyz, random_uniform_exact, ComponentLayout, PerturbationSpec, XyzConstruction,
};
use crate::hypergraph::Hypergraph;
use crate::io::read_file;
use crate::rng::derive_seed;

/// Environment variable read for the default worker count.
pub const JOBS_ENV: &str = "HYPERCOLOR_JOBS";

/// The fixed hypergraph that random ℓ-sets are added to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseSpec {
    /// The X/Y/Z construction. `part_size` overrides the size derived from ε.
    Xyz {
        n: usize,
        k: usize,
        #[serde(default)]
        part_size: Option<usize>,
        /// Part size as a fraction of `n`, rounded.
        #[serde(default)]
        part_fraction: Option<f64>,
    },
    /// `count` disjoint copies of `K_{a,b}` on `n` vertices.
    Components { n: usize, a: usize, b: usize, count: usize },
    /// A fixed random `k`-uniform hypergraph with `m` edges, drawn once.
    RandomUniform { n: usize, k: usize, m: usize },
    File { path: PathBuf },
    /// No edges: the perturbation alone.
    Empty { n: usize },
}

impl BaseSpec {
    /// Same family with `n` replaced; `None` for file bases.
    pub fn with_n(&self, n: usize) -> Option<BaseSpec> {
        let mut out = self.clone();
        match &mut out {
            BaseSpec::Xyz { n: m, .. }
            | BaseSpec::Components { n: m, .. }
            | BaseSpec::RandomUniform { n: m, .. }
            | BaseSpec::Empty { n: m } => *m = n,
            BaseSpec::File { .. } => return None,
        }
        Some(out)
    }
}

/// How a grid multiplier `ρ` becomes a perturbation size.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// `ρ · n^{ℓε/2}`
    #[default]
    Exponent,
    /// `ρ · n`
    PerVertex,
    /// `ρ`
    Absolute,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    FixedCount,
    /// Each ℓ-set with probability `|R| / C(n, ℓ)`.
    Bernoulli,
}

fn default_bootstrap() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub base: BaseSpec,
    pub ell: usize,
    pub epsilon: f64,
    pub rho_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub scale: Scale,
    #[serde(default)]
    pub model: ModelKind,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

/// A built base hypergraph with the parameters reported alongside results.
#[derive(Clone, Debug)]
pub struct Base {
    pub hypergraph: Hypergraph,
    pub n: usize,
    /// Edge size of the base (ℓ for an empty base).
    pub k: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Input("trials must be at least 1".into()));
        }
        if self.rho_grid.is_empty() {
            return Err(Error::Input("rho_grid is empty".into()));
        }
        if self.rho_grid.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::Input("rho_grid entries must be finite and nonnegative".into()));
        }
        if self.rho_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Input("rho_grid must be sorted".into()));
        }
        if self.ell < 2 {
            return Err(Error::Input(format!("ell must be at least 2, got {}", self.ell)));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds the base hypergraph (deterministic given the seed).
    pub fn build_base(&self) -> Result<Base> {
        let (hypergraph, k) = match &self.base {
            BaseSpec::Xyz {
                n,
                k,
                part_size,
                part_fraction,
            } => {
                let spec = match (part_size, part_fraction) {
                    (Some(s), _) => XyzConstruction::with_part_size(*n, *k, *s)?,
                    (None, Some(f)) => {
                        XyzConstruction::with_part_size(*n, *k, ((*n as f64) * f).round().max(1.0) as usize)?
                    }
                    (None, None) => XyzConstruction::new(*n, *k, self.epsilon)?,
                };
                (build_xyz(&spec)?, *k)
            }
            BaseSpec::Components { n, a, b, count } => {
                (build_components(&ComponentLayout::repeated(*a, *b, *count)?, *n)?, 2)
            }
            BaseSpec::RandomUniform { n, k, m } => {
                (random_uniform_exact(*n, *k, *m, derive_seed(self.seed, 0x6261_7365))?, *k)
            }
            BaseSpec::File { path } => {
                let h = read_file(path)?;
                let k = h.uniform_arity().unwrap_or(self.ell);
                (h, k)
            }
            BaseSpec::Empty { n } => (Hypergraph::empty(*n), self.ell),
        };
        Ok(Base {
            n: hypergraph.n(),
            hypergraph,
            k,
        })
    }

    /// The scale factor turning `ρ` into a perturbation size at `n` vertices.
    pub fn scale_factor(&self, n: usize) -> f64 {
        match self.scale {
            Scale::Exponent => (n as f64).powf(self.ell as f64 * self.epsilon / 2.0),
            Scale::PerVertex => n as f64,
            Scale::Absolute => 1.0,
        }
    }

    /// `round(ρ · scale)`.
    pub fn r_count(&self, rho: f64, n: usize) -> usize {
        (rho * self.scale_factor(n)).round() as usize
    }

    /// The perturbation for one trial.
    pub fn perturbation(&self, n: usize, rho: f64, seed: u64) -> Result<PerturbationSpec> {
        let m = self.r_count(rho, n);
        Ok(match self.model {
            ModelKind::FixedCount => PerturbationSpec::fixed_count(m, self.ell, seed),
            ModelKind::Bernoulli => {
                let total = binomial(n as u64, self.ell as u64)
                    .ok_or_else(|| Error::Input("C(n, ell) overflows".into()))?;
                PerturbationSpec::bernoulli((m as f64 / total as f64).min(1.0), self.ell, seed)
            }
        })
    }
}

/// Worker count from the environment, if set to a positive integer.
pub fn jobs_from_env() -> Option<usize> {
    std::env::var(JOBS_ENV).ok()?.trim().parse().ok().filter(|&j| j > 0)
}
