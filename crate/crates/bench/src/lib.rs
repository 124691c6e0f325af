//! Fixed benchmark instances shared by the criterion benches.

use fciplus::graph::CausalDag;
use fciplus::harness::{random_sparse_dag, GenConfig};

/// Seed base for every benchmark instance.
pub const BENCH_SEED: u64 = 2024;

/// A degree-3 instance with `n` observed variables, two latents and, for even
/// `variant`, one planted hidden-separator gadget.
pub fn instance(n: usize, variant: u64) -> CausalDag {
    let mut cfg = GenConfig::new(n, 3, BENCH_SEED + 100 * n as u64 + variant);
    cfg.n_latent = 2;
    cfg.planted_links = usize::from(variant.is_multiple_of(2) && n >= 5);
    cfg.density = 1.5 / (n + 2) as f64;
    random_sparse_dag(&cfg).expect("benchmark instance generates")
}
