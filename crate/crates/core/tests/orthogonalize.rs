mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use schur_core::hp::{HP_UNIT_ROUNDOFF, LP_UNIT_ROUNDOFF};
use schur_core::matrix::{matmul_hp, GemmConfig, HpGemm};
use schur_core::orthogonalize::{
    apply_correction, gram_defect, merged_update, merged_update_lp, newton_schulz_step,
    orthogonalize, qr_retract, skew_from_lower, OrthoStrategy,
};
use schur_core::{DDComplex, Error, HpMatrix, LpMatrix, Op};

fn gemm() -> HpGemm {
    HpGemm::new(GemmConfig::default())
}

fn defect(q: &HpMatrix) -> f64 {
    frob_hp(&gram_defect(q, &gemm()).unwrap())
}

/// Unitary to double-double accuracy.
fn hp_unitary(n: usize, seed: u64) -> HpMatrix {
    let mut q = random_unitary(n, &mut rng(seed)).to_hp();
    for _ in 0..3 {
        q = newton_schulz_step(&q, &gemm()).unwrap();
    }
    q
}

fn random_skew(n: usize, norm: f64, seed: u64) -> LpMatrix {
    let k = skew_from_lower(&randn_complex(n, &mut rng(seed)));
    k.map(|z| z * (norm / frob(&k)))
}

fn random_hermitian(n: usize, norm: f64, seed: u64) -> LpMatrix {
    let a = randn_complex(n, &mut rng(seed));
    let h = &a + &a.adjoint();
    h.map(|z| z * (norm / frob(&h)))
}

fn hp_diff(a: &HpMatrix, b: &HpMatrix) -> f64 {
    frob_hp(&(a - b))
}

#[test]
fn retract_unitary_input() {
    let u = hp_unitary(6, 1);
    let q = qr_retract(&u).unwrap();
    // R = I up to rounding, so the factor is U itself
    assert!(hp_diff(&q, &u) < 1e-29);
}

#[test]
fn retract_scaled_identity() {
    let m = HpMatrix::identity(4).map(|z| z.scale_pow2(2.0));
    assert_eq!(qr_retract(&m).unwrap(), HpMatrix::identity(4));
}

#[test]
fn retract_rank_deficient() {
    let mut m = HpMatrix::identity(3);
    m[(2, 2)] = DDComplex::ZERO;
    assert_eq!(
        qr_retract(&m).unwrap_err(),
        Error::RankDeficient { index: 2 }
    );
}

/// Unitary polar factor by the scaled-free Newton iteration
/// `X <- (X + X^{-H}) / 2`.
fn polar_oracle(m: &LpMatrix) -> LpMatrix {
    let n = m.rows();
    let mut x = DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    for _ in 0..50 {
        let inv = x.clone().try_inverse().unwrap();
        x = (&x + inv.adjoint()) * Complex64::new(0.5, 0.0);
    }
    LpMatrix::from_fn(n, n, |i, j| x[(i, j)])
}

#[test]
fn retract_close_to_polar_factor() {
    let w = random_skew(6, 1e-4, 2);
    let m = &LpMatrix::identity(6) + &w;
    let q = qr_retract(&m.to_hp()).unwrap().to_lp();
    assert!(frob(&(&q - &polar_oracle(&m))) <= 1e-8);
    assert!(defect(&qr_retract(&m.to_hp()).unwrap()) < 1e-29);
}

#[test]
fn newton_schulz_keeps_unitary() {
    let u = hp_unitary(5, 3);
    assert!(hp_diff(&newton_schulz_step(&u, &gemm()).unwrap(), &u) < 1e-29);
}

#[test]
fn newton_schulz_scalar() {
    let q = HpMatrix::from_diag(&[DDComplex::from_lp(Complex64::new(1.1, 0.0))]);
    let out = newton_schulz_step(&q, &gemm()).unwrap()[(0, 0)].to_lp();
    assert!((out.re - 0.9845).abs() < 1e-15 && out.im == 0.0);
}

#[test]
fn newton_schulz_counts_two_products() {
    let g = gemm();
    newton_schulz_step(&hp_unitary(4, 4), &g).unwrap();
    assert_eq!(g.calls(), 2);
}

#[test]
fn newton_schulz_rejects_large_norm() {
    let q = HpMatrix::identity(3).map(|z| z.scale_pow2(2.0));
    assert!(matches!(
        newton_schulz_step(&q, &gemm()),
        Err(Error::NormTooLarge { .. })
    ));
}

#[test]
fn newton_schulz_residual_identity() {
    let n = 6;
    let u = hp_unitary(n, 5);
    let w = random_skew(n, 1e-5, 6);
    let qhat = apply_correction(&u, &w, &gemm()).unwrap();
    let delta = gram_defect(&qhat, &gemm()).unwrap();
    let qn = newton_schulz_step(&qhat, &gemm()).unwrap();
    let lhs = gram_defect(&qn, &gemm()).unwrap();
    let d2 = matmul_hp(&delta, &delta, Op::NoTrans, Op::NoTrans).unwrap();
    let d3 = matmul_hp(&d2, &delta, Op::NoTrans, Op::NoTrans).unwrap();
    let rhs = &d3.scale_pow2(0.25) - &(&d2.scale_pow2(0.5) + &d2.scale_pow2(0.25));
    assert!(hp_diff(&lhs, &rhs) <= 100.0 * n as f64 * HP_UNIT_ROUNDOFF);
    assert!(frob_hp(&lhs) <= 0.75 * frob_hp(&delta).powi(2) * (1.0 + 1e-3));
}

#[test]
fn newton_schulz_converges_quadratically() {
    let n = 8;
    let s = random_hermitian(n, 0.05, 7);
    let q0 = &hp_unitary(n, 8)
        + &matmul_hp(&hp_unitary(n, 8), &s.to_hp(), Op::NoTrans, Op::NoTrans).unwrap();
    let q1 = newton_schulz_step(&q0, &gemm()).unwrap();
    let q2 = newton_schulz_step(&q1, &gemm()).unwrap();
    let (d0, d1, d2) = (defect(&q0), defect(&q1), defect(&q2));
    assert!(d1 <= d0 * d0 && d2 <= d1 * d1, "{d0:e} {d1:e} {d2:e}");
}

#[test]
fn merged_update_trivial() {
    let q = hp_unitary(4, 9);
    let out = merged_update(
        &q,
        &LpMatrix::zeros(4, 4),
        &HpMatrix::zeros(4, 4),
        false,
        &gemm(),
    )
    .unwrap();
    assert_eq!(out, q);
}

#[test]
fn merged_update_scalar() {
    let y = 1e-3;
    let q = HpMatrix::identity(1);
    let ym = HpMatrix::from_diag(&[DDComplex::from_lp(Complex64::new(y, 0.0))]);
    let out = merged_update(&q, &LpMatrix::zeros(1, 1), &ym, false, &gemm()).unwrap();
    assert!((out[(0, 0)].to_lp().re - (1.0 - y / 2.0)).abs() < 1e-16);
}

#[test]
fn merged_update_matches_explicit_step() {
    let n = 7;
    let q = hp_unitary(n, 10);
    let w = random_skew(n, 1e-4, 11);
    let g = gemm();
    let y = gram_defect(&q, &g).unwrap();
    let merged = merged_update(&q, &w, &y, false, &g).unwrap();
    let explicit = newton_schulz_step(&apply_correction(&q, &w, &g).unwrap(), &g).unwrap();
    assert!(hp_diff(&merged, &explicit) <= 1e-16 + 1e-28);
}

/// With the two dropped terms restored the merged update equals the explicit
/// step up to the binary64 rounding of the `W`-products, `O(u_lp ||W||^2)`,
/// plus double-double rounding.
#[test]
fn full_sigma_matches_composition() {
    let n = 6;
    let s = random_hermitian(n, 1e-12, 12);
    let u = hp_unitary(n, 13);
    let q = &u + &matmul_hp(&u, &s.to_hp(), Op::NoTrans, Op::NoTrans).unwrap();
    let g = gemm();
    let y = gram_defect(&q, &g).unwrap();
    for eps in [1e-6, 1e-9] {
        let w = random_skew(n, eps, 14);
        let full = merged_update(&q, &w, &y, true, &g).unwrap();
        let truncated = merged_update(&q, &w, &y, false, &g).unwrap();
        let explicit = newton_schulz_step(&apply_correction(&q, &w, &g).unwrap(), &g).unwrap();
        let bound = n as f64 * LP_UNIT_ROUNDOFF * eps * eps + 100.0 * HP_UNIT_ROUNDOFF;
        assert!(hp_diff(&full, &explicit) <= bound, "eps={eps}");
        if eps == 1e-6 {
            assert!(hp_diff(&truncated, &explicit) > 100.0 * bound);
        }
    }
}

#[test]
fn lp_form_agrees_for_tiny_corrections() {
    let n = 6;
    let q = hp_unitary(n, 15);
    let w = random_skew(n, 1e-16, 16);
    let g = gemm();
    let y = gram_defect(&q, &g).unwrap();
    let a = merged_update(&q, &w, &y, false, &g).unwrap();
    let b = merged_update_lp(&q, &w, &y, false).unwrap();
    assert!(hp_diff(&a, &b) <= 1e-30);
}

/// Entry and exit bounds: `||Q^H Q - I|| <= eps^2`, `||W|| <= eps` must give
/// `||Q_new^H Q_new - I|| <= 10 eps^4` and `||Q_new - Q(I+W)|| <= 10 eps^2`.
#[test]
fn contract_for_all_strategies() {
    let n = 10;
    for eps in [1e-3, 1e-5] {
        for seed in 0..10u64 {
            let u = hp_unitary(n, 100 + seed);
            let s = random_hermitian(n, eps * eps / 3.0, 200 + seed);
            let q = &u + &matmul_hp(&u, &s.to_hp(), Op::NoTrans, Op::NoTrans).unwrap();
            assert!(defect(&q) <= eps * eps);
            let w = random_skew(n, eps, 300 + seed);
            let g = gemm();
            let target = apply_correction(&q, &w, &g).unwrap();
            let y = gram_defect(&q, &g).unwrap();
            let outs = [
                orthogonalize(&q, &w, OrthoStrategy::QrRetraction, &g).unwrap(),
                orthogonalize(&q, &w, OrthoStrategy::NewtonSchulz, &g).unwrap(),
                merged_update(&q, &w, &y, false, &g).unwrap(),
            ];
            for out in outs {
                assert!(defect(&out) <= 10.0 * eps.powi(4), "eps={eps}");
                assert!(hp_diff(&out, &target) <= 10.0 * eps * eps, "eps={eps}");
            }
        }
    }
}
