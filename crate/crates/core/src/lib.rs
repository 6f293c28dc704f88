//! Exact computations with finite-dimensional differential graded algebras.
//!
//! The crate is organised around a small exact linear algebra kernel
//! ([`field`], [`matrix`], [`graded`]) on top of which the algebraic
//! machinery is built: DGAs and their radicals ([`dga`]), weight-truncated
//! bar resolutions ([`resolution`]), Hochschild (co)homology tables and cup
//! products ([`hochschild`]), Koszul duals and reflexivity reports
//! ([`koszul`]), and an executable harness for reflexive/dualizable objects
//! in closed symmetric monoidal categories ([`monoidal`]).
//!
//! All arithmetic is exact (rationals or a prime field); nothing is ever
//! computed in floating point. Truncated computations carry explicit safe
//! windows so that no approximate number is reported as exact.

pub mod error;
pub mod field;
pub mod catalogue;
pub mod dga;
pub mod graded;
pub mod hochschild;
pub mod matrix;
pub mod radical;
pub mod resolution;
pub mod separability;

pub use error::CoreError;
pub use field::{FieldSpec, Scalar};
pub use matrix::SparseMatrix;
