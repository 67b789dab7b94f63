//! Working-precision complex Schur decomposition and reordering.

mod hessenberg;
mod order;
mod qr;
pub(crate) mod rotation;

pub use hessenberg::hessenberg_reduce;
pub use order::{order_by_direction, order_by_random_line, reorder_schur, EigOrder};
pub use qr::qr_schur_lp;

use crate::error::Result;
use crate::matrix::{frobenius_norm, matmul, Matrix, Op, Scalar, TriangleKind, DEFAULT_PANEL};

/// Factors `(Q, T)` with `A ≈ Q T Q^H`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurPair<S: Scalar> {
    pub q: Matrix<S>,
    /// Upper triangular; strictly lower entries are exact zeros.
    pub t: Matrix<S>,
    /// `||Q^H Q - I||_F`.
    pub ortho_residual: f64,
    /// `||stril(Q^H A Q)||_F`, once computed by [`SchurPair::with_tri_residual`].
    pub tri_residual: Option<f64>,
}

impl<S: Scalar> SchurPair<S> {
    /// Wraps `(q, t)` and evaluates the orthogonality residual.
    pub fn new(q: Matrix<S>, t: Matrix<S>) -> Self {
        let ortho_residual = orthogonality_residual(&q).unwrap_or(f64::NAN);
        SchurPair {
            q,
            t,
            ortho_residual,
            tri_residual: None,
        }
    }

    pub fn with_tri_residual(mut self, a: &Matrix<S>) -> Result<Self> {
        let qaq = similarity(a, &self.q)?;
        self.tri_residual = Some(frobenius_norm(&qaq.triangle(TriangleKind::StrictLower)).to_f64());
        Ok(self)
    }

    pub fn eigenvalues(&self) -> Vec<S> {
        self.t.diag()
    }
}

/// `||Q^H Q - I||_F` at the precision of `S`.
pub fn orthogonality_residual<S: Scalar>(q: &Matrix<S>) -> Result<f64> {
    let mut g = matmul(q, q, Op::ConjTrans, Op::NoTrans, DEFAULT_PANEL)?;
    for i in 0..g.rows() {
        g[(i, i)] -= S::one();
    }
    Ok(frobenius_norm(&g).to_f64())
}

/// `Q^H A Q` at the precision of `S`.
pub fn similarity<S: Scalar>(a: &Matrix<S>, q: &Matrix<S>) -> Result<Matrix<S>> {
    let aq = matmul(a, q, Op::NoTrans, Op::NoTrans, DEFAULT_PANEL)?;
    matmul(q, &aq, Op::ConjTrans, Op::NoTrans, DEFAULT_PANEL)
}
