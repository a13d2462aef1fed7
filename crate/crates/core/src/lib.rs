//! Two-colorability of uniform hypergraphs under random perturbation.
//!
//! The crate is organised around five pieces:
//!
//! - [`hypergraph`]: the mixed-arity [`Hypergraph`] with degree, neighborhood
//!   and link queries, plus [`Coloring`]s and the plain-text format in [`io`];
//! - [`generators`]: the dense 2-colorable X/Y/Z construction, disjoint
//!   bipartite components and both random perturbation models;
//! - [`decider`]: an exact 2-colorability decider, a brute-force oracle, the
//!   reduction to prescribed-color graphs and cluster feasibility;
//! - [`procedures`]: the degree filters, family extraction, k-partite and
//!   dyadic degree reductions, witness trees and the staged refutation;
//! - [`experiments`]: seeded Monte Carlo survival curves, threshold crossing
//!   and scaling fits.

pub mod combinatorics;
pub mod decider;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod procedures;
pub mod rng;

pub use decider::{
    brute_force_two_colorable, is_two_colorable, is_two_colorable_with, Budget, DecisionResult,
    Verdict,
};
pub use error::{Error, Result};
pub use generators::{
    build_components, build_xyz, perturb, sample_perturbation, ComponentLayout, PerturbationModel,
    PerturbationSpec, XyzConstruction,
};
pub use hypergraph::{Color, Coloring, Hypergraph, HypergraphBuilder, Vertex, VertexTuple};
