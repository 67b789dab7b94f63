use num_complex::Complex64;

use super::hessenberg::hessenberg_reduce;
use super::rotation::Givens;
use super::SchurPair;
use crate::error::{Error, Result};
use crate::hp::LP_UNIT_ROUNDOFF;
use crate::matrix::LpMatrix;

/// Stalled sweeps between exceptional shifts.
const EXCEPTIONAL_PERIOD: usize = 10;
/// Sweeps allowed per eigenvalue, times `n`.
const SWEEPS_PER_DIM: usize = 30;

/// Complex Schur decomposition `A = Q T Q^H` in binary64.
///
/// Hessenberg reduction followed by single-shift implicit QR with Wilkinson
/// shifts. The subdiagonal entry `h[k, k-1]` is set to zero once
/// `|h[k, k-1]| <= u (|h[k-1, k-1]| + |h[k, k]|)`.
pub fn qr_schur_lp(a: &LpMatrix) -> Result<SchurPair<Complex64>> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let (mut q, mut h) = hessenberg_reduce(a)?;
    let n = h.rows();
    let max_sweeps = SWEEPS_PER_DIM * n.max(1);
    let zero = Complex64::new(0.0, 0.0);

    let mut ihi = n.saturating_sub(1);
    let mut stalled = 0usize;
    let mut sweeps = 0usize;
    while ihi > 0 {
        let lo = find_deflation(&mut h, ihi);
        if lo == ihi {
            ihi -= 1;
            stalled = 0;
            sweeps = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::NoConvergence { index: ihi, sweeps });
        }
        stalled += 1;
        sweeps += 1;
        let shift = if stalled.is_multiple_of(EXCEPTIONAL_PERIOD) {
            h[(ihi, ihi)] + 0.75 * h[(ihi, ihi - 1)].re.abs()
        } else {
            wilkinson_shift(&h, ihi)
        };
        sweep(&mut h, &mut q, lo, ihi, shift);
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = zero;
        }
    }
    Ok(SchurPair::new(q, h))
}

/// Largest `k <= ihi` such that `h[k, k-1]` is negligible (and zeroed), or 0.
fn find_deflation(h: &mut LpMatrix, ihi: usize) -> usize {
    let n = h.rows();
    for k in (1..=ihi).rev() {
        let sub = h[(k, k - 1)].norm();
        let mut tst = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
        if tst == 0.0 {
            if k >= 2 {
                tst += h[(k - 1, k - 2)].norm();
            }
            if k + 1 < n {
                tst += h[(k + 1, k)].norm();
            }
        }
        if sub <= LP_UNIT_ROUNDOFF * tst {
            h[(k, k - 1)] = Complex64::new(0.0, 0.0);
            return k;
        }
    }
    0
}

/// Eigenvalue of the trailing 2x2 block of the active window closest to
/// `h[ihi, ihi]`.
fn wilkinson_shift(h: &LpMatrix, ihi: usize) -> Complex64 {
    let a = h[(ihi - 1, ihi - 1)];
    let b = h[(ihi - 1, ihi)];
    let c = h[(ihi, ihi - 1)];
    let d = h[(ihi, ihi)];
    let t = (a - d) * 0.5;
    let bc = b * c;
    let disc = (t * t + bc).sqrt();
    let den = if (t + disc).norm() >= (t - disc).norm() {
        t + disc
    } else {
        t - disc
    };
    if den.norm() == 0.0 {
        d
    } else {
        d - bc / den
    }
}

/// One implicit single-shift QR sweep on rows/columns `lo..=ihi`, with the
/// transformations applied to the full matrix and accumulated into `q`.
fn sweep(h: &mut LpMatrix, q: &mut LpMatrix, lo: usize, ihi: usize, shift: Complex64) {
    let n = h.rows();
    let (mut rot, _) = Givens::zeroing(h[(lo, lo)] - shift, h[(lo + 1, lo)]);
    for k in lo..ihi {
        if k > lo {
            let (g, r) = Givens::zeroing(h[(k, k - 1)], h[(k + 1, k - 1)]);
            rot = g;
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = Complex64::new(0.0, 0.0);
        }
        rot.apply_left(h, k, k..n);
        rot.apply_right_adjoint(h, k, 0..(k + 3).min(ihi + 1));
        rot.apply_right_adjoint(q, k, 0..n);
    }
}
