//! Orthogonalization of `Q (I + W)` for a nearly unitary `Q` and a small
//! skew-Hermitian `W`.
//!
//! Any procedure used here must take `||Q^H Q - I|| = O(eps^2)`,
//! `||W|| = O(eps)` to an output with `||Q_new^H Q_new - I|| = O(eps^4)` and
//! `||Q_new - Q (I + W)|| = O(eps^2)`.

mod newton;
mod qr;

pub use newton::{merged_update, merged_update_lp, newton_schulz_step};
pub use qr::qr_retract;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::{matmul_lp, HpGemm, HpMatrix, LpMatrix, Op};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrthoStrategy {
    /// Unitary factor of a Householder QR decomposition with positive real
    /// `diag(R)`.
    QrRetraction,
    /// One Newton-Schulz step `Q <- Q (3I - Q^H Q) / 2`.
    #[default]
    NewtonSchulz,
}

/// `W = L - L^H`.
pub fn skew_from_lower(l: &LpMatrix) -> LpMatrix {
    l - &l.adjoint()
}

/// `Q (I + W) = Q + Q W` with one counted double-double product.
pub fn apply_correction(q: &HpMatrix, w: &LpMatrix, gemm: &HpGemm) -> Result<HpMatrix> {
    let qw = gemm.mul(q, &w.to_hp(), Op::NoTrans, Op::NoTrans)?;
    Ok(q + &qw)
}

/// `Y = Q^H Q - I` with one counted double-double product.
pub fn gram_defect(q: &HpMatrix, gemm: &HpGemm) -> Result<HpMatrix> {
    let mut y = gemm.mul(q, q, Op::ConjTrans, Op::NoTrans)?;
    for i in 0..y.rows() {
        y[(i, i)] -= crate::DDComplex::ONE;
    }
    Ok(y)
}

/// Orthogonalizes `Q (I + W)` with the given strategy (not the merged
/// update; see [`merged_update`] for that).
pub fn orthogonalize(
    q: &HpMatrix,
    w: &LpMatrix,
    strategy: OrthoStrategy,
    gemm: &HpGemm,
) -> Result<HpMatrix> {
    let qhat = apply_correction(q, w, gemm)?;
    match strategy {
        OrthoStrategy::QrRetraction => qr_retract(&qhat),
        OrthoStrategy::NewtonSchulz => newton_schulz_step(&qhat, gemm),
    }
}

pub(crate) fn lp_products(y: &LpMatrix, w: &LpMatrix) -> Result<(LpMatrix, LpMatrix, LpMatrix)> {
    let yw = matmul_lp(y, w, Op::NoTrans, Op::NoTrans)?;
    let w2 = matmul_lp(w, w, Op::NoTrans, Op::NoTrans)?;
    let w3 = matmul_lp(&w2, w, Op::NoTrans, Op::NoTrans)?;
    Ok((yw, w2, w3))
}
