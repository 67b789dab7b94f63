//! Complex Schur decompositions refined from binary64 to double-double
//! precision.
//!
//! The pipeline computes `A ≈ Q T Q^H` with a shifted QR algorithm in
//! binary64, then improves `Q` with a Newton-like iteration: each step solves
//! a triangular matrix equation for a strictly lower triangular correction
//! `L` in binary64 and re-orthogonalizes `Q (I + L - L^H)` with a
//! Newton-Schulz step, so that almost all double-double work is matrix
//! multiplication.

pub mod error;
pub mod hp;
pub mod matrix;
pub mod orthogonalize;
pub mod refine;
pub mod schur;
pub mod trisolve;

pub use error::{Error, Result};
pub use hp::{DDComplex, DDReal};
pub use matrix::{HpMatrix, LpMatrix, Matrix, Op, Scalar};
pub use num_complex::Complex64;
