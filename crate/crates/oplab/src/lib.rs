//! oplab: a numerical laboratory for Kantorovich-type tensor-product
//! operator inequalities.
//!
//! The crate verifies, at finite matrix dimension, a catalog of integral
//! inequalities for weighted fields of positive operators — tensor-product
//! Kantorovich bounds, their Kubo-Ando operator-mean variants, Hadamard and
//! scalar classics — and certifies sharpness of the constant
//! `(a^2 + b^2) / (2ab)` by explicit extremal construction and randomized
//! search.
//!
//! Start with the runnable examples (`cargo run --example ...`) or the
//! `oplab` binary (`verify`, `suite`, `sharpness`, `axioms` subcommands).

pub mod cli;
pub mod error;
pub mod fields;
pub mod matrix;
pub mod means;
pub mod scalar;
pub mod sharpness;
pub mod suite;
pub mod verifiers;

pub use error::{OplabError, Result};
pub use matrix::{
    hadamard, kron, loewner_margin, random_hermitian_in_window, random_psd, sym_tensor,
    tensor_power2, HermitianMatrix, SpectralDecomposition, SpectrumWindow,
};
pub use scalar::ScalarExpr;
