//! Refinement drivers: a Schur decomposition computed in binary64 is
//! improved to double-double accuracy.

mod driver;
mod mixed;
mod nonfinite;
mod symmetric;
mod template;

pub use mixed::{refine_mixed, refine_mixed_from};
pub use symmetric::refine_symmetric;
pub use template::refine_template;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hp::DDComplex;
use crate::matrix::{frobenius_norm, matmul_hp, GemmConfig, HpMatrix, Op, TriangleKind};
use crate::orthogonalize::OrthoStrategy;
use crate::schur::SchurPair;
use crate::trisolve::DEFAULT_N_MIN;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineConfig {
    /// Converged once `||E||_F <= tol_factor * n * u_hp * ||A||_F` and the
    /// last correction had `||W||_F <= sqrt(u_hp)`.
    pub tol_factor: f64,
    /// Maximum number of corrections applied to `Q`.
    pub max_iters: usize,
    /// Recursion cutoff of the blocked triangular solver.
    pub n_min: usize,
    /// Zero every entry of `L` above this magnitude when it is computed.
    pub clip_threshold: Option<f64>,
    pub ortho: OrthoStrategy,
    /// Replace the double-double orthogonalization product by a binary64
    /// one once `Q (I + W)` is unitary to double-double accuracy.
    pub skip_final_ortho: bool,
    /// Seed of the random line used to order the eigenvalues.
    pub seed: u64,
    /// Keep the `W^2 Y` and `W^2 Y W` terms of the merged update.
    pub restore_full_sigma: bool,
    pub gemm: GemmConfig,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            tol_factor: 10.0,
            max_iters: 20,
            n_min: DEFAULT_N_MIN,
            clip_threshold: None,
            ortho: OrthoStrategy::NewtonSchulz,
            skip_final_ortho: true,
            seed: 0,
            restore_full_sigma: false,
            gemm: GemmConfig::default(),
        }
    }
}

impl RefineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_factor > 0.0 && self.tol_factor.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "tol_factor must be positive, got {}",
                self.tol_factor
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if self.n_min < 2 {
            return Err(Error::InvalidInput(format!(
                "n_min must be at least 2, got {}",
                self.n_min
            )));
        }
        if let Some(c) = self.clip_threshold {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "clip threshold must be positive, got {c}"
                )));
            }
        }
        if self.gemm.panel == 0 {
            return Err(Error::InvalidInput(
                "GEMM panel size must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RefineStatus {
    Converged,
    MaxIters,
    Diverged,
    NonFinite,
}

/// Residuals of one evaluation of `T̂ = Q^H A Q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    /// `||E||_F`, the part of `T̂` that should vanish.
    #[serde(with = "nonfinite")]
    pub e_norm: f64,
    /// `||Q^H Q - I||_F` for the same `Q`.
    #[serde(with = "nonfinite")]
    pub ortho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineReport {
    /// Corrections applied to `Q`.
    pub iterations: usize,
    /// One entry per evaluation of `T̂`, starting with the entry state;
    /// `iterations + 1` long.
    pub residual_history: Vec<ResidualEntry>,
    /// Double-double products performed by the algorithm (diagnostics
    /// excluded).
    pub hp_matmul_count: usize,
    /// Seconds spent in those products.
    pub hp_matmul_time: f64,
    /// Seconds spent in double-double products for the reported
    /// orthogonality residuals, which the count above leaves out.
    pub diagnostic_time: f64,
    /// Total seconds, including the binary64 Schur decomposition.
    pub wall_time: f64,
    pub clipped_total: usize,
    pub sylvester_solves: usize,
    /// Iterations where the double-double orthogonalization product was
    /// replaced by a binary64 one.
    pub skips: usize,
    pub status: RefineStatus,
    /// Iteration at which the run stopped without converging.
    pub failed_iteration: Option<usize>,
    pub hint: Option<String>,
    pub seed: u64,
    /// Angle of the line used to order the eigenvalues, when ordering ran.
    pub theta: Option<f64>,
}

impl RefineReport {
    pub fn converged(&self) -> bool {
        self.status == RefineStatus::Converged
    }

    pub fn final_residuals(&self) -> Option<ResidualEntry> {
        self.residual_history.last().copied()
    }
}

/// Residuals of a double-double Schur pair, all evaluated in double-double.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairResiduals {
    /// `||Q^H Q - I||_F`.
    #[serde(with = "nonfinite")]
    pub ortho: f64,
    /// `||stril(Q^H A Q)||_F`.
    #[serde(with = "nonfinite")]
    pub tri: f64,
    /// `||Q^H A Q - T||_F`.
    #[serde(with = "nonfinite")]
    pub similarity: f64,
}

pub fn verify_pair(a: &HpMatrix, pair: &SchurPair<DDComplex>) -> Result<PairResiduals> {
    let n = a.ensure_square()?;
    if pair.q.rows() != n || pair.q.cols() != n || pair.t.rows() != n || pair.t.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A is {n}x{n}, Q is {}x{}, T is {}x{}",
            pair.q.rows(),
            pair.q.cols(),
            pair.t.rows(),
            pair.t.cols()
        )));
    }
    let mut g = matmul_hp(&pair.q, &pair.q, Op::ConjTrans, Op::NoTrans)?;
    for i in 0..n {
        g[(i, i)] -= DDComplex::ONE;
    }
    let aq = matmul_hp(a, &pair.q, Op::NoTrans, Op::NoTrans)?;
    let qaq = matmul_hp(&pair.q, &aq, Op::ConjTrans, Op::NoTrans)?;
    Ok(PairResiduals {
        ortho: frobenius_norm(&g).to_f64(),
        tri: frobenius_norm(&qaq.triangle(TriangleKind::StrictLower)).to_f64(),
        similarity: frobenius_norm(&(&qaq - &pair.t)).to_f64(),
    })
}

/// Relative non-Hermitian part `||A - A^H||_F / ||A||_F`.
pub fn hermitian_defect(a: &HpMatrix) -> f64 {
    let norm = frobenius_norm(a).to_f64();
    if norm == 0.0 {
        return 0.0;
    }
    frobenius_norm(&(a - &a.adjoint())).to_f64() / norm
}
