//! Dense complex matrices at working and double-double precision.

mod dense;
mod gemm;
mod norms;
pub mod ozaki;
mod scalar;

pub use dense::{stril_extract, HpMatrix, LpMatrix, Matrix, TriangleKind};
pub use gemm::{
    matmul, matmul_hp, matmul_hp_with, matmul_lp, GemmConfig, HpBackend, HpGemm, Op, DEFAULT_PANEL,
};
pub use norms::{frobenius_norm, spectral_norm_estimate};
pub use scalar::Scalar;
