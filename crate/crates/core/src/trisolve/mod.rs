//! The triangular matrix equation `stril(T L - L T) = -E`.
//!
//! `T` is upper triangular, `E` and the unknown `L` are strictly lower
//! triangular. The solution exists and is unique exactly when the diagonal
//! entries of `T` are pairwise distinct.

mod block;
mod phi;
mod scalar;

pub use block::{solve_block, solve_sylvester_tri};
pub use phi::{phi_estimate, smallest_singular_value, PHI_DIMENSION_CAP};
pub use scalar::solve_scalar;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::LpMatrix;

/// Default recursion cutoff for [`solve_block`].
pub const DEFAULT_N_MIN: usize = 4;
/// Threshold used when clipping is switched on without an explicit value.
pub const DEFAULT_CLIP: f64 = 1e-5;

#[derive(Clone, Debug)]
pub struct TriEqProblem {
    t: LpMatrix,
    e: LpMatrix,
    clip: Option<f64>,
}

impl TriEqProblem {
    /// Validates shapes and triangular structure. With `clip = Some(c)`,
    /// every solution entry with `|l_ij| > c` is replaced by zero as soon as
    /// it is computed.
    pub fn new(t: LpMatrix, e: LpMatrix, clip: Option<f64>) -> Result<Self> {
        let n = t.ensure_square()?;
        if e.rows() != n || e.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "T is {n}x{n} but E is {}x{}",
                e.rows(),
                e.cols()
            )));
        }
        if !t.is_upper_triangular() {
            return Err(Error::InvalidInput(
                "T has non-zero entries below the diagonal".into(),
            ));
        }
        if !e.is_strictly_lower() {
            return Err(Error::InvalidInput(
                "E has non-zero entries on or above the diagonal".into(),
            ));
        }
        if let Some(c) = clip {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "clip threshold must be positive, got {c}"
                )));
            }
        }
        Ok(TriEqProblem { t, e, clip })
    }

    pub fn t(&self) -> &LpMatrix {
        &self.t
    }

    pub fn e(&self) -> &LpMatrix {
        &self.e
    }

    pub fn clip(&self) -> Option<f64> {
        self.clip
    }

    pub fn n(&self) -> usize {
        self.t.rows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriEqSolution {
    /// Strictly lower triangular solution.
    pub l: LpMatrix,
    /// Entries replaced by zero by the clipping rule.
    pub clipped_count: usize,
    /// Number of Sylvester blocks solved on the way (zero for the scalar
    /// recurrence).
    pub sylvester_solves: usize,
}

/// `stril(T L - L T) + E`, the residual of a candidate solution.
pub fn residual(t: &LpMatrix, l: &LpMatrix, e: &LpMatrix) -> Result<LpMatrix> {
    use crate::matrix::{matmul_lp, Op, TriangleKind};
    let tl = matmul_lp(t, l, Op::NoTrans, Op::NoTrans)?;
    let lt = matmul_lp(l, t, Op::NoTrans, Op::NoTrans)?;
    Ok(&(&tl - &lt).triangle(TriangleKind::StrictLower) + e)
}

/// First pair `i < j` with `t_ii = t_jj` exactly.
fn check_separation(t: &LpMatrix) -> Result<()> {
    let d = t.diag();
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| {
        d[a].re
            .total_cmp(&d[b].re)
            .then(d[a].im.total_cmp(&d[b].im))
    });
    for w in idx.windows(2) {
        if d[w[0]] == d[w[1]] {
            return Err(Error::Separation {
                i: w[0].min(w[1]),
                j: w[0].max(w[1]),
            });
        }
    }
    Ok(())
}

#[inline]
fn clip_entry(x: Complex64, clip: Option<f64>, count: &mut usize) -> Complex64 {
    match clip {
        Some(c) if x.norm() > c => {
            *count += 1;
            Complex64::new(0.0, 0.0)
        }
        _ => x,
    }
}

fn ensure_finite(l: &LpMatrix) -> Result<()> {
    if l.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}
