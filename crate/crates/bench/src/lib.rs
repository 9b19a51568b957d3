//! Shared inputs for the criterion benchmarks.

use fusion_core::random::{random_frame, rng_from_seed, RandomSystemParams};
use fusion_core::FusionSystem;

/// A reproducible frame on `C^dim` with `dim + 1` members.
pub fn seeded_frame(dim: usize, seed: u64) -> FusionSystem {
    let mut rng = rng_from_seed(seed);
    random_frame(&RandomSystemParams::frame_defaults(dim), &mut rng)
}
