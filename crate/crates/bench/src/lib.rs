//! Shared fixtures for the benchmarks.

use std::path::PathBuf;

use num_bigint::BigInt;
use nrc_core::input::{load_ring, RingSpec};
use nrc_core::linalg::IntMat;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

/// Seeded random integer matrix with entries in `[-bound, bound]`.
pub fn random_matrix(rows: usize, cols: usize, bound: i64, seed: u64) -> IntMat {
    let mut rng = StdRng::seed_from_u64(seed);
    let data = (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.random_range(-bound..=bound))).collect())
        .collect();
    IntMat::from_rows(data).expect("rectangular")
}

/// One of the rings shipped under `rings/`.
pub fn shipped_ring(name: &str) -> RingSpec {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../rings").join(name);
    load_ring(&path).expect("shipped ring loads")
}
