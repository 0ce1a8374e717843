//! Storage encodings that bound how much data a PIR server reads per query.
//!
//! - [`gf2`]: packed bit vectors and matrices over GF(2).
//! - [`covercode`]: covering codes, coset-leader tables, encoded storage and
//!   τ-coset weights.
//! - [`bounds`]: closed-form rate/access tuples and the entropy-based curve.
//! - [`pirsim`]: executable PIR schemes with exact access accounting.

pub mod bounds;
pub mod combin;
pub mod covercode;
mod error;
pub mod gf2;
pub mod pirsim;

pub use error::{Error, Result};
