use std::time::Instant;

use num_complex::Complex64;

use super::driver::{Run, Split, Update};
use super::{hermitian_defect, RefineConfig, RefineReport};
use crate::error::{Error, Result};
use crate::hp::{DDComplex, HP_UNIT_ROUNDOFF};
use crate::matrix::{HpGemm, HpMatrix, LpMatrix};
use crate::orthogonalize::newton_schulz_step;
use crate::schur::{qr_schur_lp, SchurPair};
use crate::trisolve::TriEqSolution;

/// Refinement of an eigendecomposition of a Hermitian matrix.
///
/// Same iteration as [`super::refine_mixed`] with `T = diag(T̂)` and `E` the
/// whole off-diagonal part; the triangular equation then decouples into
/// `l_ij = -e_ij / (t_ii - t_jj)`. The returned `T` is real diagonal.
pub fn refine_symmetric(
    a: &HpMatrix,
    cfg: &RefineConfig,
) -> Result<(SchurPair<DDComplex>, RefineReport)> {
    let start = Instant::now();
    cfg.validate()?;
    a.ensure_square()?;
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let asymmetry = hermitian_defect(a);
    if asymmetry > 10.0 * HP_UNIT_ROUNDOFF {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let lp = qr_schur_lp(&a.to_lp())?;
    let gemm = HpGemm::new(cfg.gemm);
    let q = newton_schulz_step(&lp.q.to_hp(), &gemm)?;
    Run {
        a,
        cfg,
        split: Split::Diagonal,
        update: Update::Merged,
        gemm,
        start,
        theta: None,
    }
    .iterate(q)
}

/// Strictly lower `L` with `l_ij = -e_ij / (t_ii - t_jj)` for diagonal `T`.
pub(super) fn solve_diagonal(
    t: &LpMatrix,
    e: &LpMatrix,
    clip: Option<f64>,
) -> Result<TriEqSolution> {
    let n = t.rows();
    let mut l = LpMatrix::zeros(n, n);
    let mut clipped_count = 0;
    for j in 0..n {
        for i in j + 1..n {
            let d = t[(i, i)] - t[(j, j)];
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::Separation { i: j, j: i });
            }
            let v = -e[(i, j)] / d;
            l[(i, j)] = match clip {
                Some(c) if v.norm() > c => {
                    clipped_count += 1;
                    Complex64::new(0.0, 0.0)
                }
                _ => v,
            };
        }
    }
    if !l.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(TriEqSolution {
        l,
        clipped_count,
        sylvester_solves: 0,
    })
}
