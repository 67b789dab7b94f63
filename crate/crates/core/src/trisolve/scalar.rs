use num_complex::Complex64;

use super::{check_separation, clip_entry, ensure_finite, TriEqProblem, TriEqSolution};
use crate::error::{Error, Result};
use crate::matrix::LpMatrix;

/// Successive substitution, column by column from left to right and bottom
/// to top within each column:
///
/// `l_ij = -(e_ij + t(i, i+1:n) l(i+1:n, j) - l(i, 1:j-1) t(1:j-1, j)) / (t_ii - t_jj)`.
pub fn solve_scalar(p: &TriEqProblem) -> Result<TriEqSolution> {
    check_separation(p.t())?;
    let mut clipped_count = 0;
    let l = substitute(p.t(), p.e(), p.clip(), &mut clipped_count)?;
    ensure_finite(&l)?;
    Ok(TriEqSolution {
        l,
        clipped_count,
        sylvester_solves: 0,
    })
}

pub(super) fn substitute(
    t: &LpMatrix,
    e: &LpMatrix,
    clip: Option<f64>,
    clipped: &mut usize,
) -> Result<LpMatrix> {
    let n = t.rows();
    let mut l = LpMatrix::zeros(n, n);
    for j in 0..n.saturating_sub(1) {
        for i in (j + 1..n).rev() {
            let mut s = e[(i, j)];
            for k in i + 1..n {
                s += t[(i, k)] * l[(k, j)];
            }
            for k in 0..j {
                s -= l[(i, k)] * t[(k, j)];
            }
            let d = t[(i, i)] - t[(j, j)];
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::Separation { i: j, j: i });
            }
            l[(i, j)] = clip_entry(-s / d, clip, clipped);
        }
    }
    Ok(l)
}
