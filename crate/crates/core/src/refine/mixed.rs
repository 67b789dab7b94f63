use std::time::Instant;

use super::driver::{Run, Split, Update};
use super::{RefineConfig, RefineReport};
use crate::error::{Error, Result};
use crate::hp::DDComplex;
use crate::matrix::{HpGemm, HpMatrix};
use crate::orthogonalize::newton_schulz_step;
use crate::schur::{order_by_random_line, qr_schur_lp, reorder_schur, SchurPair};

/// Mixed-precision Schur decomposition of a double-double matrix.
///
/// 1. Schur decomposition of the binary64 copy, reordered so that the
///    eigenvalues follow their projection on a random line (clusters become
///    neighbours).
/// 2. One double-double Newton-Schulz step on `Q̂` (2 products).
/// 3. Per iteration: `T̂ = Q^H A Q` (2 products), binary64 solve of
///    `stril(T L - L T) = -E`, `Y = Q^H Q - I` (1 product) and the merged
///    update `Q <- Q Sigma / 2` (1 product).
///
/// The run ends on the `T̂` evaluation that meets the tolerance, so `k`
/// iterations cost `2 + 4k + 2` products (one less per skipped update).
pub fn refine_mixed(
    a: &HpMatrix,
    cfg: &RefineConfig,
) -> Result<(SchurPair<DDComplex>, RefineReport)> {
    let start = Instant::now();
    cfg.validate()?;
    a.ensure_square()?;
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    crate::hp::assert_round_to_nearest();
    let lp = qr_schur_lp(&a.to_lp())?;
    let (order, theta) = order_by_random_line(&lp.t.diag(), cfg.seed);
    let lp = reorder_schur(lp, &order)?;
    refine_mixed_from(a, &lp.q.to_hp(), cfg, start, Some(theta))
}

/// The refinement part of [`refine_mixed`], starting from a given `Q̂`.
pub fn refine_mixed_from(
    a: &HpMatrix,
    qhat: &HpMatrix,
    cfg: &RefineConfig,
    start: Instant,
    theta: Option<f64>,
) -> Result<(SchurPair<DDComplex>, RefineReport)> {
    cfg.validate()?;
    let gemm = HpGemm::new(cfg.gemm);
    let q = newton_schulz_step(qhat, &gemm)?;
    Run {
        a,
        cfg,
        split: Split::Triangular,
        update: Update::Merged,
        gemm,
        start,
        theta,
    }
    .iterate(q)
}
