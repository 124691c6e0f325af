//! Instance generation, canonical examples, end-to-end runs and their checks.

pub mod canonical;
pub mod compare;
pub mod generate;
pub mod invariants;
pub mod pipeline;
pub mod report;

pub use canonical::{canonical_examples, figure4b, figure5, figure6, CanonicalExample};
pub use compare::{compare_runs, diff_graphs, RunDiff};
pub use generate::{corpus_config, random_sparse_dag, GenConfig};
pub use invariants::{check_invariants, query_bounds, InvariantCheck, Truth};
pub use pipeline::{content_hash, graph_hash, run_on_dag, run_pipeline, Algorithm, RunConfig, RunOutput, RunReport};
pub use report::{read_reports, write_reports};
