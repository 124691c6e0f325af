//! Constraint-based causal structure learning with latent and selection
//! variables: an FCI variant that finds hidden separators through hierarchies
//! of stored separating sets, with reference searches to check it against.

pub mod augment;
pub mod dsep_plus;
pub mod error;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod orientation;
pub mod pc;
pub mod reference;
pub mod sepset;

pub use augment::augment_graph;
pub use dsep_plus::{dsep_search, find_possible_dsep_links, hie, minimal_dsep, DsepOptions};
pub use error::{Error, Result};
pub use graph::{CausalDag, Mark, MixedGraph, VarId, VarSet};
pub use oracle::{IndependenceOracle, OracleStats, Stage};
pub use orientation::{apply_fci_rules, orient_v_structures};
pub use pc::pc_adjacency_search;
pub use reference::{exhaustive_skeleton, fci_reference, possible_dsep};
pub use sepset::SepsetMap;
