//! Exact integer and rational linear algebra.

pub mod crt;
pub mod hnf;
pub mod lattice;
pub mod lll;
pub mod mat;
pub mod modp;
pub mod snf;

pub use crt::crt_solve;
pub use hnf::{hnf, hnf_basis, hnf_full, hnf_modular, is_hnf, xgcd, Hnf};
pub use lattice::{kernel, lattice_coords, lattice_preimage, Q, QMat};
pub use mat::IntMat;
pub use snf::{snf, snf_full, Snf};
