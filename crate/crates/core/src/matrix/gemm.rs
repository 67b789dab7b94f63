//! Deterministic blocked matrix multiplication.
//!
//! Every entry of `op(A) * op(B)` is an inner product evaluated in one fixed
//! order: the inner dimension is cut into panels of `panel` terms, each panel
//! is accumulated left to right starting from zero, and the panel sums are
//! folded left to right. Threads only split the output columns, so the result
//! is bit-identical for any thread count.

use std::cell::Cell;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HpMatrix, LpMatrix, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::hp::DDComplex;

pub const DEFAULT_PANEL: usize = 32;

/// Optional conjugate transposition of a GEMM operand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    NoTrans,
    ConjTrans,
}

/// Algorithm used for double-double products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum HpBackend {
    /// Blocked double-double inner products in the fixed order above.
    #[default]
    Blocked,
    /// Splitting into binary64 slices whose products are exact
    /// (see [`super::ozaki`]). Same error bound, no bit-determinism promise.
    Ozaki,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GemmConfig {
    pub panel: usize,
    pub backend: HpBackend,
}

impl Default for GemmConfig {
    fn default() -> Self {
        GemmConfig {
            panel: DEFAULT_PANEL,
            backend: HpBackend::Blocked,
        }
    }
}

fn op_shape<S>(m: &Matrix<S>, op: Op) -> (usize, usize)
where
    S: Scalar,
{
    match op {
        Op::NoTrans => (m.rows(), m.cols()),
        Op::ConjTrans => (m.cols(), m.rows()),
    }
}

/// Rows of `op(a)`, each stored contiguously.
fn pack_rows<S: Scalar>(a: &Matrix<S>, op: Op) -> Vec<S> {
    match op {
        Op::ConjTrans => a.data().iter().map(|x| x.conj()).collect(),
        Op::NoTrans => {
            let (m, k) = (a.rows(), a.cols());
            let mut out = Vec::with_capacity(m * k);
            for i in 0..m {
                out.extend((0..k).map(|l| a[(i, l)]));
            }
            out
        }
    }
}

/// Columns of `op(b)`, each stored contiguously.
fn pack_cols<S: Scalar>(b: &Matrix<S>, op: Op) -> Vec<S> {
    match op {
        Op::NoTrans => b.data().to_vec(),
        Op::ConjTrans => {
            let (n, k) = (b.rows(), b.cols());
            let mut out = Vec::with_capacity(n * k);
            for j in 0..n {
                out.extend((0..k).map(|l| b[(j, l)].conj()));
            }
            out
        }
    }
}

#[inline(always)]
fn dot_blocked<S: Scalar>(a: &[S], b: &[S], panel: usize) -> S {
    let mut total = S::zero();
    for (pa, pb) in a.chunks(panel).zip(b.chunks(panel)) {
        let mut acc = S::zero();
        for (&x, &y) in pa.iter().zip(pb) {
            acc = S::mul_acc(acc, x, y);
        }
        total += acc;
    }
    total
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "fma")]
unsafe fn dot_blocked_fma(a: &[DDComplex], b: &[DDComplex], panel: usize) -> DDComplex {
    dot_blocked(a, b, panel)
}

#[cfg(target_arch = "x86_64")]
fn has_fma() -> bool {
    use std::sync::OnceLock;
    static FMA: OnceLock<bool> = OnceLock::new();
    *FMA.get_or_init(|| std::arch::is_x86_feature_detected!("fma"))
}

fn dot_hp(a: &[DDComplex], b: &[DDComplex], panel: usize) -> DDComplex {
    #[cfg(target_arch = "x86_64")]
    {
        if has_fma() {
            // SAFETY: the CPU supports FMA, checked at runtime above.
            return unsafe { dot_blocked_fma(a, b, panel) };
        }
    }
    dot_blocked(a, b, panel)
}

fn check_dims<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    op_a: Op,
    op_b: Op,
) -> Result<(usize, usize, usize)> {
    let (m, k) = op_shape(a, op_a);
    let (k2, n) = op_shape(b, op_b);
    if k != k2 {
        return Err(Error::DimensionMismatch(format!(
            "op(A) is {m}x{k} but op(B) is {k2}x{n}"
        )));
    }
    Ok((m, k, n))
}

fn gemm_with<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    op_a: Op,
    op_b: Op,
    panel: usize,
    dot: impl Fn(&[S], &[S], usize) -> S + Sync,
) -> Result<Matrix<S>> {
    let (m, k, n) = check_dims(a, b, op_a, op_b)?;
    let panel = panel.max(1);
    let mut out = Matrix::zeros(m, n);
    if m == 0 || n == 0 || k == 0 {
        return Ok(out);
    }
    let ar = pack_rows(a, op_a);
    let bc = pack_cols(b, op_b);
    out.data_mut()
        .par_chunks_mut(m)
        .enumerate()
        .for_each(|(j, col)| {
            let bj = &bc[j * k..(j + 1) * k];
            for (i, c) in col.iter_mut().enumerate() {
                *c = dot(&ar[i * k..(i + 1) * k], bj, panel);
            }
        });
    Ok(out)
}

/// `op(a) * op(b)` for any scalar type, with the fixed summation order.
pub fn matmul<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    op_a: Op,
    op_b: Op,
    panel: usize,
) -> Result<Matrix<S>> {
    gemm_with(a, b, op_a, op_b, panel, dot_blocked::<S>)
}

/// Binary64 product with the default panel size.
pub fn matmul_lp(a: &LpMatrix, b: &LpMatrix, op_a: Op, op_b: Op) -> Result<LpMatrix> {
    matmul(a, b, op_a, op_b, DEFAULT_PANEL)
}

/// Double-double product with the default panel size.
pub fn matmul_hp(a: &HpMatrix, b: &HpMatrix, op_a: Op, op_b: Op) -> Result<HpMatrix> {
    matmul_hp_with(a, b, op_a, op_b, &GemmConfig::default())
}

pub fn matmul_hp_with(
    a: &HpMatrix,
    b: &HpMatrix,
    op_a: Op,
    op_b: Op,
    cfg: &GemmConfig,
) -> Result<HpMatrix> {
    match cfg.backend {
        HpBackend::Blocked => gemm_with(a, b, op_a, op_b, cfg.panel, dot_hp),
        HpBackend::Ozaki => {
            check_dims(a, b, op_a, op_b)?;
            let a = match op_a {
                Op::NoTrans => a.clone(),
                Op::ConjTrans => a.adjoint(),
            };
            let b = match op_b {
                Op::NoTrans => b.clone(),
                Op::ConjTrans => b.adjoint(),
            };
            Ok(super::ozaki::ozaki_matmul(&a, &b))
        }
    }
}

/// Double-double multiplier that counts and times its calls.
///
/// The refinement drivers route every high-precision product through one of
/// these so the reported multiplication count and time are exact.
#[derive(Debug, Default)]
pub struct HpGemm {
    config: GemmConfig,
    calls: Cell<usize>,
    elapsed: Cell<Duration>,
}

impl HpGemm {
    pub fn new(config: GemmConfig) -> Self {
        HpGemm {
            config,
            calls: Cell::new(0),
            elapsed: Cell::new(Duration::ZERO),
        }
    }

    pub fn mul(&self, a: &HpMatrix, b: &HpMatrix, op_a: Op, op_b: Op) -> Result<HpMatrix> {
        let start = Instant::now();
        let out = matmul_hp_with(a, b, op_a, op_b, &self.config)?;
        self.calls.set(self.calls.get() + 1);
        self.elapsed.set(self.elapsed.get() + start.elapsed());
        Ok(out)
    }

    pub fn calls(&self) -> usize {
        self.calls.get()
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed.get()
    }

    pub fn config(&self) -> &GemmConfig {
        &self.config
    }
}
