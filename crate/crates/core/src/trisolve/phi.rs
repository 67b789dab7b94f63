use super::check_separation;
use crate::error::{Error, Result};
use crate::matrix::LpMatrix;

/// Largest `n` accepted by [`phi_estimate`].
pub const PHI_DIMENSION_CAP: usize = 64;

const JACOBI_MAX_SWEEPS: usize = 60;

/// `phi(T) = min { ||stril(T L - L T)||_F : L strictly lower, ||L||_F = 1 }`.
///
/// Builds the real `2N x 2N` matrix of the operator on the `N = n(n-1)/2`
/// strictly lower entries and returns its smallest singular value from a
/// one-sided Jacobi SVD. Exactly zero when two diagonal entries of `T`
/// coincide.
pub fn phi_estimate(t: &LpMatrix) -> Result<f64> {
    let n = t.ensure_square()?;
    if n > PHI_DIMENSION_CAP {
        return Err(Error::DimensionCap {
            n,
            cap: PHI_DIMENSION_CAP,
        });
    }
    if !t.is_upper_triangular() {
        return Err(Error::InvalidInput("T must be upper triangular".into()));
    }
    if n < 2 {
        return Ok(f64::INFINITY);
    }
    if check_separation(t).is_err() {
        return Ok(0.0);
    }
    let pos: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (j + 1..n).map(move |i| (i, j)))
        .collect();
    let nn = pos.len();
    let m = 2 * nn;
    // columns of the real representation, stored contiguously
    let mut cols = vec![0.0f64; m * m];
    for (c, &(i, j)) in pos.iter().enumerate() {
        // image of the unit matrix E_ij: (T E_ij - E_ij T)_(r, s) = t_ri [s = j] - [r = i] t_js
        for (r_idx, &(r, s)) in pos.iter().enumerate() {
            let mut v = num_complex::Complex64::new(0.0, 0.0);
            if s == j && r <= i {
                v += t[(r, i)];
            }
            if r == i && j <= s {
                v -= t[(j, s)];
            }
            // real part of the input: column c; imaginary part: column nn + c
            cols[c * m + r_idx] = v.re;
            cols[c * m + nn + r_idx] = v.im;
            cols[(nn + c) * m + r_idx] = -v.im;
            cols[(nn + c) * m + nn + r_idx] = v.re;
        }
    }
    let sv = jacobi_singular_values(&mut cols, m, m);
    Ok(sv.into_iter().fold(f64::INFINITY, f64::min))
}

/// Smallest singular value of an arbitrary complex matrix (through its real
/// representation).
pub fn smallest_singular_value(a: &LpMatrix) -> f64 {
    let (r, c) = (a.rows(), a.cols());
    let (m, k) = (2 * r, 2 * c);
    let mut cols = vec![0.0; m * k];
    for j in 0..c {
        for i in 0..r {
            let z = a[(i, j)];
            cols[j * m + i] = z.re;
            cols[j * m + r + i] = z.im;
            cols[(c + j) * m + i] = -z.im;
            cols[(c + j) * m + r + i] = z.re;
        }
    }
    jacobi_singular_values(&mut cols, m, k)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// One-sided (Hestenes) Jacobi: rotates column pairs of the `rows x ncols`
/// column-major matrix `a` until they are mutually orthogonal; the column
/// norms are then the singular values.
fn jacobi_singular_values(a: &mut [f64], rows: usize, ncols: usize) -> Vec<f64> {
    let tol = f64::EPSILON * rows as f64;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..ncols {
            for q in p + 1..ncols {
                let (head, tail) = a.split_at_mut(q * rows);
                let cp = &mut head[p * rows..(p + 1) * rows];
                let cq = &mut tail[..rows];
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for (x, y) in cp.iter().zip(cq.iter()) {
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (xv, yv) = (*x, *y);
                    *x = c * xv - s * yv;
                    *y = s * xv + c * yv;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (0..ncols)
        .map(|j| {
            a[j * rows..(j + 1) * rows]
                .iter()
                .map(|x| x * x)
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn diag(d: &[f64]) -> LpMatrix {
        LpMatrix::from_diag(
            &d.iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn two_by_two_diagonal() {
        assert!((phi_estimate(&diag(&[0.0, 1.0])).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn repeated_diagonal_is_zero() {
        assert_eq!(phi_estimate(&diag(&[0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            phi_estimate(&LpMatrix::identity(65)),
            Err(Error::DimensionCap { n: 65, .. })
        ));
    }

    #[test]
    fn singular_values_of_diagonal() {
        assert!((smallest_singular_value(&diag(&[3.0, -0.5, 2.0])) - 0.5).abs() < 1e-15);
    }
}
