use num_complex::Complex64;

use super::{LpMatrix, Matrix, Scalar};
use crate::hp::DDReal;

/// Frobenius norm, accumulated in double-double.
pub fn frobenius_norm<S: Scalar>(m: &Matrix<S>) -> DDReal {
    m.data()
        .iter()
        .map(|x| x.norm_sqr_hp())
        .sum::<DDReal>()
        .sqrt()
}

/// Largest singular value by power iteration on `M^H M`.
///
/// Stops when successive estimates agree to 1e-12 relative or after 200
/// iterations, which gives at least 1e-6 relative accuracy unless the top two
/// singular values nearly coincide.
pub fn spectral_norm_estimate(m: &LpMatrix) -> f64 {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    // A fixed, non-symmetric start vector avoids being orthogonal to the
    // dominant singular vector for structured inputs.
    let mut v: Vec<Complex64> = (0..cols)
        .map(|j| {
            Complex64::new(
                1.0 + 0.5 * ((j as f64) * 0.618_033_988_75).fract(),
                0.25 * (j % 3) as f64,
            )
        })
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut sigma = 0.0;
    for _ in 0..200 {
        let mv = apply(m, &v);
        let est = norm2(&mv);
        if est == 0.0 {
            return 0.0;
        }
        let mut w = apply_adjoint(m, &mv);
        let nw = norm2(&w);
        if nw == 0.0 {
            return est;
        }
        w.iter_mut().for_each(|x| *x /= nw);
        v = w;
        let done = (est - sigma).abs() <= 1e-12 * est;
        sigma = est;
        if done {
            break;
        }
    }
    norm2(&apply(m, &v)).max(sigma)
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn apply(m: &LpMatrix, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m.rows()];
    for (j, &vj) in v.iter().enumerate() {
        for (o, &a) in out.iter_mut().zip(m.col(j)) {
            *o += a * vj;
        }
    }
    out
}

fn apply_adjoint(m: &LpMatrix, v: &[Complex64]) -> Vec<Complex64> {
    (0..m.cols())
        .map(|j| m.col(j).iter().zip(v).map(|(a, x)| a.conj() * x).sum())
        .collect()
}
