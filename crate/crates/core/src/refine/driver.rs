//! The iteration shared by all drivers.

use std::time::Instant;

use super::{RefineConfig, RefineReport, RefineStatus, ResidualEntry};
use crate::error::{Error, Result};
use crate::hp::{DDComplex, HP_UNIT_ROUNDOFF};
use crate::matrix::{frobenius_norm, HpGemm, HpMatrix, LpMatrix, Op, TriangleKind};
use crate::orthogonalize::{
    gram_defect, merged_update, merged_update_lp, orthogonalize, skew_from_lower, OrthoStrategy,
};
use crate::schur::SchurPair;
use crate::trisolve::{solve_block, TriEqProblem, TriEqSolution};

/// Consecutive increases of `||E||_F` that count as divergence.
const DIVERGENCE_RUN: usize = 3;

/// How `T̂` is split into the kept part `T` and the residual `E`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(super) enum Split {
    /// `E = stril(T̂)`, `T` upper triangular.
    Triangular,
    /// `E` = off-diagonal part, `T = diag(T̂)`.
    Diagonal,
}

/// How `Q (I + W)` is re-orthogonalized.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(super) enum Update {
    /// Merged Newton-Schulz update with `YW, W^2, W^3` in binary64.
    Merged,
    /// Form `Q (I + W)` and apply the given procedure.
    Explicit(OrthoStrategy),
}

pub(super) struct Run<'a> {
    pub a: &'a HpMatrix,
    pub cfg: &'a RefineConfig,
    pub split: Split,
    pub update: Update,
    pub gemm: HpGemm,
    pub start: Instant,
    pub theta: Option<f64>,
}

pub(super) fn hint_for(cfg: &RefineConfig) -> Option<String> {
    cfg.clip_threshold.is_none().then(|| {
        "non-finite values appeared in the correction L; rerun with a clip threshold \
         (for example 1e-5) to zero large entries as they are computed"
            .to_string()
    })
}

impl Run<'_> {
    /// Iterates from the (already orthogonalized) `q` until convergence or
    /// failure.
    pub fn iterate(self, mut q: HpMatrix) -> Result<(SchurPair<DDComplex>, RefineReport)> {
        let n = self.a.ensure_square()?;
        let cfg = self.cfg;
        let a_norm = frobenius_norm(self.a).to_f64();
        let tol = cfg.tol_factor * n as f64 * HP_UNIT_ROUNDOFF * a_norm;
        let diagnostics = HpGemm::new(self.gemm.config().to_owned());

        let mut history = Vec::new();
        let mut iterations = 0;
        let mut clipped_total = 0;
        let mut sylvester_solves = 0;
        let mut skips = 0;
        let mut increases = 0;
        let mut hint = None;
        let mut failed_iteration = None;
        // ||W||_F of the last correction; Q is accurate to O(||W||^2)
        let mut last_w = 0.0;

        let (status, t_hat) = loop {
            let aq = self.gemm.mul(self.a, &q, Op::NoTrans, Op::NoTrans)?;
            let t_hat = self.gemm.mul(&q, &aq, Op::ConjTrans, Op::NoTrans)?;
            let (e, t) = self.split(&t_hat);
            let e_norm = frobenius_norm(&e).to_f64();
            if history
                .last()
                .is_some_and(|h: &ResidualEntry| e_norm > h.e_norm)
            {
                increases += 1;
            } else {
                increases = 0;
            }

            let finished = if !(e_norm.is_finite() && t_hat.is_finite()) {
                Some(RefineStatus::NonFinite)
            } else if e_norm <= tol && last_w <= HP_UNIT_ROUNDOFF.sqrt() {
                Some(RefineStatus::Converged)
            } else if increases >= DIVERGENCE_RUN {
                Some(RefineStatus::Diverged)
            } else if iterations == cfg.max_iters {
                Some(RefineStatus::MaxIters)
            } else {
                None
            };
            if let Some(status) = finished {
                let ortho = frobenius_norm(&gram_defect(&q, &diagnostics)?).to_f64();
                history.push(ResidualEntry { e_norm, ortho });
                if status != RefineStatus::Converged {
                    failed_iteration = Some(iterations);
                }
                if status == RefineStatus::NonFinite {
                    hint = hint_for(cfg);
                }
                break (status, t_hat);
            }
            let sol = match self.solve(t.to_lp(), e.to_lp()) {
                Ok(sol) => sol,
                Err(Error::NonFinite) => {
                    let ortho = frobenius_norm(&gram_defect(&q, &diagnostics)?).to_f64();
                    history.push(ResidualEntry { e_norm, ortho });
                    failed_iteration = Some(iterations);
                    hint = hint_for(cfg);
                    break (RefineStatus::NonFinite, t_hat);
                }
                Err(err) => return Err(err),
            };
            clipped_total += sol.clipped_count;
            sylvester_solves += sol.sylvester_solves;
            let w = skew_from_lower(&sol.l);
            last_w = frobenius_norm(&w).to_f64();

            match self.update {
                Update::Merged => {
                    let y = gram_defect(&q, &self.gemm)?;
                    let y_norm = frobenius_norm(&y).to_f64();
                    history.push(ResidualEntry {
                        e_norm,
                        ortho: y_norm,
                    });
                    let skip = cfg.skip_final_ortho
                        && y_norm <= 10.0 * n as f64 * HP_UNIT_ROUNDOFF
                        && last_w <= HP_UNIT_ROUNDOFF.sqrt();
                    q = if skip {
                        skips += 1;
                        merged_update_lp(&q, &w, &y, cfg.restore_full_sigma)?
                    } else {
                        merged_update(&q, &w, &y, cfg.restore_full_sigma, &self.gemm)?
                    };
                }
                Update::Explicit(strategy) => {
                    let ortho = frobenius_norm(&gram_defect(&q, &diagnostics)?).to_f64();
                    history.push(ResidualEntry { e_norm, ortho });
                    q = orthogonalize(&q, &w, strategy, &self.gemm)?;
                }
            }
            iterations += 1;
        };

        let t = match self.split {
            Split::Triangular => t_hat.triangle(TriangleKind::Upper),
            Split::Diagonal => HpMatrix::from_diag(
                &t_hat
                    .diag()
                    .into_iter()
                    .map(|z| DDComplex::from_real(z.re))
                    .collect::<Vec<_>>(),
            ),
        };
        let mut pair = SchurPair::new(q, t);
        pair.tri_residual = history.last().map(|h| h.e_norm);
        let report = RefineReport {
            iterations,
            residual_history: history,
            hp_matmul_count: self.gemm.calls(),
            hp_matmul_time: self.gemm.elapsed().as_secs_f64(),
            diagnostic_time: diagnostics.elapsed().as_secs_f64(),
            wall_time: self.start.elapsed().as_secs_f64(),
            clipped_total,
            sylvester_solves,
            skips,
            status,
            failed_iteration,
            hint,
            seed: cfg.seed,
            theta: self.theta,
        };
        Ok((pair, report))
    }

    fn split(&self, t_hat: &HpMatrix) -> (HpMatrix, HpMatrix) {
        match self.split {
            Split::Triangular => (
                t_hat.triangle(TriangleKind::StrictLower),
                t_hat.triangle(TriangleKind::Upper),
            ),
            Split::Diagonal => {
                let d = t_hat.triangle(TriangleKind::Diagonal);
                (t_hat - &d, d)
            }
        }
    }

    fn solve(&self, t: LpMatrix, e: LpMatrix) -> Result<TriEqSolution> {
        match self.split {
            Split::Triangular => {
                let p = TriEqProblem::new(t, e, self.cfg.clip_threshold)?;
                solve_block(&p, self.cfg.n_min)
            }
            Split::Diagonal => super::symmetric::solve_diagonal(&t, &e, self.cfg.clip_threshold),
        }
    }
}
