use crate::error::{Error, Result};
use crate::hp::{DDComplex, DDReal, HP_UNIT_ROUNDOFF};
use crate::matrix::{frobenius_norm, HpMatrix};

/// Unitary factor of `M = Q R` with `diag(R)` real and positive, by
/// double-double Householder QR.
///
/// Fails with `RankDeficient` when some `|r_kk| <= n u_hp ||M||_F`.
pub fn qr_retract(m: &HpMatrix) -> Result<HpMatrix> {
    let n = m.ensure_square()?;
    let tol = frobenius_norm(m).mul_f64(n as f64 * HP_UNIT_ROUNDOFF);
    let mut r = m.clone();
    let mut taus = Vec::with_capacity(n);
    let mut vs: Vec<Vec<DDComplex>> = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    for k in 0..n {
        let alpha = r[(k, k)];
        let xnorm2: DDReal = r.col(k)[k + 1..].iter().map(|z| z.norm_sqr()).sum();
        let (tau, v, rkk) = if xnorm2.is_zero() {
            (DDComplex::ZERO, vec![DDComplex::ONE], alpha)
        } else {
            let norm = (alpha.norm_sqr() + xnorm2).sqrt();
            let beta = if alpha.re.is_sign_negative() {
                norm
            } else {
                -norm
            };
            let tau = DDComplex::new((beta - alpha.re) / beta, -alpha.im / beta);
            let scale = DDComplex::ONE.checked_div(alpha - DDComplex::from_real(beta))?;
            let mut v = Vec::with_capacity(n - k);
            v.push(DDComplex::ONE);
            v.extend(r.col(k)[k + 1..].iter().map(|&z| z * scale));
            (tau, v, DDComplex::from_real(beta))
        };
        let rabs = rkk.abs();
        if !rabs.is_finite() || rabs <= tol {
            return Err(Error::RankDeficient { index: k });
        }
        // R <- H^H R on the trailing columns
        let tau_c = tau.conj();
        for j in k + 1..n {
            let col = &mut r.col_mut(j)[k..];
            let mut s = DDComplex::ZERO;
            for (vi, c) in v.iter().zip(col.iter()) {
                s += vi.conj() * *c;
            }
            let f = tau_c * s;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * *vi;
            }
        }
        r[(k, k)] = rkk;
        phases.push(rkk.scale(rabs.recip()));
        taus.push(tau);
        vs.push(v);
    }
    // Q = H_1 ... H_n, applied to the identity from the right end
    let mut q = HpMatrix::identity(n);
    for k in (0..n).rev() {
        let (tau, v) = (taus[k], &vs[k]);
        if tau == DDComplex::ZERO {
            continue;
        }
        for j in k..n {
            let col = &mut q.col_mut(j)[k..];
            let mut s = DDComplex::ZERO;
            for (vi, c) in v.iter().zip(col.iter()) {
                s += vi.conj() * *c;
            }
            let f = tau * s;
            for (c, vi) in col.iter_mut().zip(v) {
                *c -= f * *vi;
            }
        }
    }
    for (j, ph) in phases.into_iter().enumerate() {
        for z in q.col_mut(j) {
            *z *= ph;
        }
    }
    Ok(q)
}
