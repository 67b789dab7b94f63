#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use schur_core::{Complex64, DDComplex, HpMatrix, LpMatrix};

pub type DM = DMatrix<Complex64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn randn_complex(n: usize, r: &mut ChaCha8Rng) -> LpMatrix {
    LpMatrix::from_fn(n, n, |_, _| {
        Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
    })
}

pub fn randn_rect(m: usize, n: usize, r: &mut ChaCha8Rng) -> LpMatrix {
    LpMatrix::from_fn(m, n, |_, _| {
        Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
    })
}

pub fn frob(m: &LpMatrix) -> f64 {
    m.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frob_hp(m: &HpMatrix) -> f64 {
    schur_core::matrix::frobenius_norm(m).to_f64()
}

/// Naive triple-loop product, independent of the library GEMM.
pub fn naive_mul(a: &LpMatrix, b: &LpMatrix) -> LpMatrix {
    LpMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).map(|k| a[(i, k)] * b[(k, j)]).sum()
    })
}

pub fn naive_mul_hp(a: &HpMatrix, b: &HpMatrix) -> HpMatrix {
    HpMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut s = DDComplex::ZERO;
        for k in 0..a.cols() {
            s += a[(i, k)] * b[(k, j)];
        }
        s
    })
}

pub fn sub(a: &LpMatrix, b: &LpMatrix) -> LpMatrix {
    a - b
}

/// `||Q^H Q - I||_F` computed with the naive product.
pub fn ortho_defect(q: &LpMatrix) -> f64 {
    let mut g = naive_mul(&q.adjoint(), q);
    for i in 0..g.rows() {
        g[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    frob(&g)
}

/// Random unitary matrix from the QR factorization of a complex Gaussian
/// matrix (modified Gram-Schmidt, twice).
pub fn random_unitary(n: usize, r: &mut ChaCha8Rng) -> LpMatrix {
    let mut q = randn_complex(n, r);
    for _ in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let d: Complex64 = (0..n).map(|i| q[(i, k)].conj() * q[(i, j)]).sum();
                for i in 0..n {
                    let v = q[(i, k)];
                    q[(i, j)] -= d * v;
                }
            }
            let nrm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            for i in 0..n {
                q[(i, j)] /= nrm;
            }
        }
    }
    q
}

/// Upper triangular matrix whose diagonal entries are pairwise at least
/// `sep` apart.
pub fn separated_upper(n: usize, sep: f64, r: &mut ChaCha8Rng) -> LpMatrix {
    let mut diag: Vec<Complex64> = Vec::with_capacity(n);
    while diag.len() < n {
        let z = Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
        if diag.iter().all(|d| (d - z).norm() >= sep) {
            diag.push(z);
        }
    }
    LpMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i < j {
            Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Greedy matching distance between two multisets of complex numbers.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

pub fn lower_positions(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|j| (j + 1..n).map(move |i| (i, j)))
        .collect()
}

/// Matrix of `L -> stril(T L - L T)` on strictly lower entries, assembled
/// entry by entry from `sum_k t_ik l_kj - sum_k l_ik t_kj`.
pub fn operator_matrix(t: &LpMatrix) -> DM {
    let n = t.rows();
    let pos = lower_positions(n);
    let index = |i: usize, j: usize| pos.iter().position(|&p| p == (i, j));
    let mut m = DM::zeros(pos.len(), pos.len());
    for (row, &(i, j)) in pos.iter().enumerate() {
        for k in 0..n {
            if let Some(col) = index(k, j) {
                m[(row, col)] += t[(i, k)];
            }
            if let Some(col) = index(i, k) {
                m[(row, col)] -= t[(k, j)];
            }
        }
    }
    m
}

pub fn dense_oracle(t: &LpMatrix, e: &LpMatrix) -> LpMatrix {
    let n = t.rows();
    let pos = lower_positions(n);
    let m = operator_matrix(t);
    let rhs = DM::from_fn(pos.len(), 1, |r, _| -e[pos[r]]);
    let x = m.lu().solve(&rhs).expect("oracle system is singular");
    let mut l = LpMatrix::zeros(n, n);
    for (r, &p) in pos.iter().enumerate() {
        l[p] = x[(r, 0)];
    }
    l
}

pub fn max_diff(a: &LpMatrix, b: &LpMatrix) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn oracle_phi(t: &LpMatrix) -> f64 {
    let sv = operator_matrix(t).singular_values();
    sv.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn spectral_norm(m: &LpMatrix) -> f64 {
    let d = DM::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)]);
    d.singular_values().max()
}

/// Upper triangular matrix with `phi(T) >= phi_min`: diagonal entries at
/// least 0.5 apart in `[-4, 4]^2`, off-diagonal entries uniform in
/// `[-1, 1]^2`, resampled until the SVD oracle confirms the separation.
pub fn well_separated_upper(n: usize, phi_min: f64, r: &mut ChaCha8Rng) -> LpMatrix {
    loop {
        let mut diag: Vec<Complex64> = Vec::with_capacity(n);
        while diag.len() < n {
            let z = Complex64::new(r.random_range(-4.0..4.0), r.random_range(-4.0..4.0));
            if diag.iter().all(|d| (d - z).norm() >= 0.5) {
                diag.push(z);
            }
        }
        let t = LpMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else if i < j {
                Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        if n < 2 || oracle_phi(&t) >= phi_min {
            return t;
        }
    }
}
