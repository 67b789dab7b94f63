//! Test matrix generators. All of them are deterministic in their seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use schur_core::hp::{DDComplex, DDReal};
use schur_core::{Complex64, Error, HpMatrix, Result};
use serde::{Deserialize, Serialize};

/// Largest degree whose Wilkinson polynomial coefficients stay below 2^106.
pub const WILKINSON_MAX_N: usize = 25;

/// Coefficients of `prod_{i=1..n} (x - i)`, constant term first.
pub fn wilkinson_coefficients(n: usize) -> Result<Vec<i128>> {
    if n == 0 || n > WILKINSON_MAX_N {
        return Err(Error::InvalidInput(format!(
            "Wilkinson degree must be in 1..={WILKINSON_MAX_N}, got {n}"
        )));
    }
    let mut c = vec![1i128];
    for root in 1..=n as i128 {
        let mut next = vec![0i128; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= root * ck;
        }
        c = next;
    }
    Ok(c)
}

/// Exact double-double value of an integer below 2^106 in magnitude.
pub fn dd_from_i128(v: i128) -> DDReal {
    let hi = v as f64;
    let lo = (v - hi as i128) as f64;
    DDReal::new(hi, lo)
}

/// Companion matrix of the Wilkinson polynomial `prod_{i=1..n} (x - i)`:
/// ones on the subdiagonal and the negated coefficients `-c_0, ..., -c_{n-1}`
/// of the monic polynomial in the last column. Eigenvalues are `1..=n`.
pub fn gen_wilkinson(n: usize) -> Result<HpMatrix> {
    let c = wilkinson_coefficients(n)?;
    let mut a = HpMatrix::zeros(n, n);
    for i in 1..n {
        a[(i, i - 1)] = DDComplex::ONE;
    }
    for i in 0..n {
        a[(i, n - 1)] = DDComplex::from_real(-dd_from_i128(c[i]));
    }
    Ok(a)
}

/// Complex matrix with independent standard normal real and imaginary parts.
pub fn gen_randn_complex(n: usize, seed: u64) -> HpMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    HpMatrix::from_fn(n, n, |_, _| {
        DDComplex::from_lp(Complex64::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ))
    })
}

/// Real matrix with independent standard normal entries.
pub fn gen_randn_real(n: usize, seed: u64) -> HpMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    HpMatrix::from_fn(n, n, |_, _| {
        DDComplex::from_lp(Complex64::new(rng.sample(StandardNormal), 0.0))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub cluster_count: usize,
    pub cluster_size: usize,
    pub cluster_radius: f64,
    pub cond_x: f64,
}

/// `A = X D X^{-1}` with a clustered real spectrum.
///
/// `D` has `cluster_count` groups of `cluster_size` eigenvalues, each group
/// spread uniformly within `cluster_radius` of a center drawn uniformly from
/// `[-10, 10]`; the remaining eigenvalues are uniform in `[-10, 10]`.
/// `X = U diag(s) V^T` with Haar-distributed orthogonal `U`, `V` and
/// singular values `s` logarithmically spaced from 1 to `1 / cond_x`, so
/// `cond_2(X) = cond_x`. `A` is formed in double-double by solving
/// `A X = X D`.
pub fn gen_clustered(n: usize, p: ClusterParams, seed: u64) -> Result<HpMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if p.cluster_count * p.cluster_size > n {
        return Err(Error::InvalidInput(format!(
            "{} clusters of size {} do not fit in dimension {n}",
            p.cluster_count, p.cluster_size
        )));
    }
    if p.cluster_count > 0
        && (p.cluster_size == 0 || p.cluster_radius.is_nan() || p.cluster_radius <= 0.0)
    {
        return Err(Error::InvalidInput(
            "cluster size and radius must be positive".into(),
        ));
    }
    if !(p.cond_x >= 1.0 && p.cond_x.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "cond_x must be at least 1, got {}",
            p.cond_x
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..p.cluster_count {
        let center: f64 = rng.random_range(-10.0..10.0);
        for _ in 0..p.cluster_size {
            d.push(center + rng.random_range(-p.cluster_radius..p.cluster_radius));
        }
    }
    while d.len() < n {
        d.push(rng.random_range(-10.0..10.0));
    }
    let u = haar_orthogonal(n, &mut rng);
    let v = haar_orthogonal(n, &mut rng);
    let s: Vec<f64> = (0..n)
        .map(|k| {
            let t = if n == 1 {
                0.0
            } else {
                k as f64 / (n - 1) as f64
            };
            p.cond_x.powf(-t)
        })
        .collect();
    // X = U diag(s) V^T in double-double
    let mut x = vec![DDReal::ZERO; n * n];
    for j in 0..n {
        for i in 0..n {
            let mut acc = DDReal::ZERO;
            for k in 0..n {
                acc += DDReal::from_f64(u[k * n + i])
                    * DDReal::from_f64(s[k])
                    * DDReal::from_f64(v[k * n + j]);
            }
            x[j * n + i] = acc;
        }
    }
    // A X = X D  <=>  X^T A^T = (X D)^T
    let xt: Vec<DDReal> = (0..n * n).map(|idx| x[(idx % n) * n + idx / n]).collect();
    let rhs: Vec<DDReal> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            // (X D)^T (i, j) = x(j, i) d_i
            x[i * n + j] * DDReal::from_f64(d[i])
        })
        .collect();
    let at = lu_solve(xt, rhs, n)?;
    Ok(HpMatrix::from_fn(n, n, |i, j| {
        DDComplex::from_real(at[i * n + j])
    }))
}

/// Haar-distributed orthogonal matrix (column-major) from the QR
/// factorization of a Gaussian matrix with `diag(R) > 0`, by modified
/// Gram-Schmidt applied twice.
fn haar_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut q: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let dot: f64 = (0..n).map(|i| q[k * n + i] * q[j * n + i]).sum();
                for i in 0..n {
                    q[j * n + i] -= dot * q[k * n + i];
                }
            }
        }
        let norm = (0..n).map(|i| q[j * n + i].powi(2)).sum::<f64>().sqrt();
        for i in 0..n {
            q[j * n + i] /= norm;
        }
    }
    q
}

/// Solves `M Z = B` (column-major, `n x n` each) by double-double Gaussian
/// elimination with partial pivoting.
fn lu_solve(mut m: Vec<DDReal>, mut b: Vec<DDReal>, n: usize) -> Result<Vec<DDReal>> {
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &c| m[k * n + a].abs().partial_cmp(&m[k * n + c].abs()).unwrap())
            .unwrap();
        if m[k * n + p].is_zero() {
            return Err(Error::RankDeficient { index: k });
        }
        if p != k {
            for j in 0..n {
                m.swap(j * n + k, j * n + p);
                b.swap(j * n + k, j * n + p);
            }
        }
        let piv = m[k * n + k];
        for i in k + 1..n {
            let f = m[k * n + i] / piv;
            m[k * n + i] = f;
            for j in k + 1..n {
                let mkj = m[j * n + k];
                m[j * n + i] -= f * mkj;
            }
            for j in 0..n {
                let bkj = b[j * n + k];
                b[j * n + i] -= f * bkj;
            }
        }
    }
    for j in 0..n {
        for i in (0..n).rev() {
            let mut s = b[j * n + i];
            for k in i + 1..n {
                s -= m[k * n + i] * b[j * n + k];
            }
            b[j * n + i] = s / m[i * n + i];
        }
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilkinson_small_cases() {
        let a = gen_wilkinson(1).unwrap();
        assert_eq!(a[(0, 0)], DDComplex::ONE);
        assert_eq!(wilkinson_coefficients(2).unwrap(), vec![2, -3, 1]);
        assert!(gen_wilkinson(0).is_err() && gen_wilkinson(26).is_err());
    }

    #[test]
    fn wilkinson_constant_term_is_factorial() {
        let c = wilkinson_coefficients(20).unwrap();
        let fact: i128 = (1..=20).product();
        assert_eq!(fact, 2432902008176640000);
        assert_eq!(c[0], fact);
        let a = gen_wilkinson(20).unwrap();
        let v = a[(0, 19)].re;
        assert_eq!(v.hi() as i128 + v.lo() as i128, -fact);
    }

    #[test]
    fn large_coefficients_are_exact() {
        for &v in &wilkinson_coefficients(25).unwrap() {
            let d = dd_from_i128(v);
            assert_eq!(d.hi() as i128 + d.lo() as i128, v);
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(gen_randn_complex(4, 3), gen_randn_complex(4, 3));
        assert_ne!(gen_randn_complex(4, 3), gen_randn_complex(4, 4));
        let p = ClusterParams {
            cluster_count: 1,
            cluster_size: 3,
            cluster_radius: 1e-3,
            cond_x: 10.0,
        };
        assert_eq!(
            gen_clustered(8, p, 1).unwrap(),
            gen_clustered(8, p, 1).unwrap()
        );
    }

    #[test]
    fn cluster_parameters_are_checked() {
        let p = ClusterParams {
            cluster_count: 3,
            cluster_size: 4,
            cluster_radius: 1e-5,
            cond_x: 1.0,
        };
        assert!(gen_clustered(10, p, 0).is_err());
    }
}
