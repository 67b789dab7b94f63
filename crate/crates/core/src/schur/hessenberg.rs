use num_complex::Complex64;

use crate::error::Result;
use crate::matrix::LpMatrix;

/// Householder reflector `H = I - tau v v^H` with `v[0] = 1` and
/// `H^H [alpha; x] = [beta; 0]`, `beta` real unless `x = 0`, in which case
/// `H = I`.
struct Reflector {
    pub tau: Complex64,
    pub beta: f64,
    /// Trailing part of `v` (the leading 1 is implicit).
    pub tail: Vec<Complex64>,
}

fn reflector(alpha: Complex64, x: &[Complex64]) -> Reflector {
    let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if xnorm == 0.0 {
        return Reflector {
            tau: Complex64::new(0.0, 0.0),
            beta: alpha.re,
            tail: x.to_vec(),
        };
    }
    let norm = alpha.norm().hypot(xnorm);
    let beta = -norm.copysign(alpha.re);
    let tau = Complex64::new((beta - alpha.re) / beta, -alpha.im / beta);
    let scale = Complex64::new(1.0, 0.0) / (alpha - beta);
    Reflector {
        tau,
        beta,
        tail: x.iter().map(|&z| z * scale).collect(),
    }
}

/// Reduces `a` to upper Hessenberg form `H = Q0^H A Q0`.
///
/// Returns `(Q0, H)`; `Q0` is the explicitly accumulated product of the
/// Householder reflectors and entries below the first subdiagonal of `H` are
/// exact zeros.
pub fn hessenberg_reduce(a: &LpMatrix) -> Result<(LpMatrix, LpMatrix)> {
    let n = a.ensure_square()?;
    let mut h = a.clone();
    let mut q = LpMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let alpha = h[(k + 1, k)];
        let x: Vec<Complex64> = h.col(k)[k + 2..].to_vec();
        let r = reflector(alpha, &x);
        if r.tau == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut v = Vec::with_capacity(n - k - 1);
        v.push(Complex64::new(1.0, 0.0));
        v.extend_from_slice(&r.tail);

        // H^H from the left on rows k+1.., columns k+1..
        let tau_c = r.tau.conj();
        for j in k + 1..n {
            let col = &mut h.col_mut(j)[k + 1..];
            let w: Complex64 = v.iter().zip(col.iter()).map(|(vi, c)| vi.conj() * c).sum();
            let f = tau_c * w;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        h[(k + 1, k)] = Complex64::new(r.beta, 0.0);
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
        apply_right(&mut h, &v, r.tau, k + 1);
        apply_right(&mut q, &v, r.tau, k + 1);
    }
    Ok((q, h))
}

/// `M[:, off..] <- M[:, off..] (I - tau v v^H)`.
fn apply_right(m: &mut LpMatrix, v: &[Complex64], tau: Complex64, off: usize) {
    let rows = m.rows();
    let mut w = vec![Complex64::new(0.0, 0.0); rows];
    for (l, &vl) in v.iter().enumerate() {
        for (wi, &x) in w.iter_mut().zip(m.col(off + l)) {
            *wi += x * vl;
        }
    }
    for (l, &vl) in v.iter().enumerate() {
        let f = tau * vl.conj();
        for (x, wi) in m.col_mut(off + l).iter_mut().zip(&w) {
            *x -= wi * f;
        }
    }
}
