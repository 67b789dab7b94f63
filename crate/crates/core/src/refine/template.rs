use std::time::Instant;

use super::driver::{Run, Split, Update};
use super::{RefineConfig, RefineReport};
use crate::error::{Error, Result};
use crate::hp::DDComplex;
use crate::matrix::{HpGemm, HpMatrix};
use crate::orthogonalize::{newton_schulz_step, qr_retract, OrthoStrategy};
use crate::schur::SchurPair;

/// Generic refinement from a given approximate Schur vector matrix `Q̂`:
/// orthogonalize `Q̂`, then repeat `T̂ = Q^H A Q`, solve for `L` with
/// `E = stril(T̂)`, and orthogonalize `Q (I + L - L^H)` with `cfg.ortho`.
pub fn refine_template(
    a: &HpMatrix,
    qhat: &HpMatrix,
    cfg: &RefineConfig,
) -> Result<(SchurPair<DDComplex>, RefineReport)> {
    let start = Instant::now();
    cfg.validate()?;
    let n = a.ensure_square()?;
    if qhat.rows() != n || qhat.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A is {n}x{n} but Q is {}x{}",
            qhat.rows(),
            qhat.cols()
        )));
    }
    let gemm = HpGemm::new(cfg.gemm);
    let q = match cfg.ortho {
        OrthoStrategy::QrRetraction => qr_retract(qhat)?,
        OrthoStrategy::NewtonSchulz => newton_schulz_step(qhat, &gemm)?,
    };
    Run {
        a,
        cfg,
        split: Split::Triangular,
        update: Update::Explicit(cfg.ortho),
        gemm,
        start,
        theta: None,
    }
    .iterate(q)
}
