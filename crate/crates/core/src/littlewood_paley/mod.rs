//! Littlewood-Paley decomposition and Besov-type norms.
//!
//! `φ` is built from the `e^{-1/x}` mollifier: a plateau equal to 1 on
//! `[1, 2]` with smooth ramps on `(3/4, 1)` and `(2, 8/3)`, normalized so its
//! dyadic dilates sum to 1. `χ` collects all dilates with negative index.

mod norms;
mod partition;

pub use norms::{
    besov_norm, besov_norm_multi, block_norms, chemin_lerner_norm, chemin_lerner_norm_multi,
    dyadic_block, hybrid_norm, hybrid_norm_multi, low_cutoff, BesovSpec, HybridSpec,
};
pub use partition::{chi, phi, smooth_step, DyadicPartition};
