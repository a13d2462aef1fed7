//! Executable versions of the refutation machinery for dense uniform
//! hypergraphs plus random ℓ-sets: degree filters, family extraction, the
//! k-partite and dyadic degree reductions, witness trees and the staged
//! search.

mod degrees;
mod families;
mod partite;
mod pipeline;
mod stages;
mod synthetic;
mod witness;

pub use degrees::{
    density_constant, km1_branch_applies, km2_branch_applies, km2_delta_max, split_high_degree_km1,
    split_high_degree_km2, sub_tuple_degrees, DegreeSplit,
};
pub use families::{extract_families, Family, FamilyExtraction};
pub use partite::{
    dyadic_buckets, dyadic_threshold, k_partite_reduction, regularize_degrees, select_dyadic_bucket,
    stage_count, Constants, DyadicBucket, PartiteHypergraph, Regularization, RegularizationReport,
};
pub use pipeline::{
    grow_witness_pipeline, prepare, run_stages_pipeline, PipelineParams, Preparation, StagesPipelineReport,
    WitnessReport,
};
pub use stages::{
    run_stages, StageBatches, StageLedger, StageOptions, StageOutcome, StageRecord, StagesReport, StagesVerdict,
    DEFAULT_MAX_CHOICES,
};
pub use synthetic::{synthetic_partite, SyntheticSpec};
pub use witness::{
    grow_witness_tree, monochromatic_branch, verify_witness, ActivityThresholds, ChildEdge, ClaimViolation,
    GrowFailure, TreeNode, WitnessCheck, WitnessDefect, WitnessTree, VERIFY_VERTEX_LIMIT,
};
