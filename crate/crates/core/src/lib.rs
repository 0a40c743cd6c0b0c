//! Exact construction and verification of spin models.

pub mod ball;
pub mod cyclo;
pub mod error;
pub mod numtheory;
pub mod gf;
pub mod matrix;
pub mod models;
pub mod scalar;
pub mod verify;
pub mod invariants;
pub mod json;

pub use cyclo::{Cyclotomic, Order};
pub use error::{Error, Result};
pub use scalar::{EntryMonomial, Ring, Scalar, UParam};
pub use matrix::{Labels, PermutationSpec, ScalarMatrix, SpinMatrix};
