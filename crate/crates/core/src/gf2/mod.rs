//! Exact linear algebra over GF(2) on bit-packed vectors and matrices.

mod bitvec;
mod matrix;

pub use bitvec::BitVec;
pub use matrix::{BitMatrix, Echelon};
