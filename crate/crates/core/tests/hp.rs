//! Double-double arithmetic against exact rational arithmetic.

mod common;

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;
use schur_core::hp::{hp_to_lp, lp_to_hp, parse_dd, HP_UNIT_ROUNDOFF};
use schur_core::{DDComplex, DDReal};

fn exact(x: DDReal) -> BigRational {
    BigRational::from_float(x.hi()).unwrap() + BigRational::from_float(x.lo()).unwrap()
}

fn pow2(e: i32) -> BigRational {
    let one = BigRational::from_integer(BigInt::from(1));
    let two = BigRational::from_integer(BigInt::from(2));
    if e >= 0 {
        (0..e).fold(one, |acc, _| acc * &two)
    } else {
        (0..-e).fold(one, |acc, _| acc / &two)
    }
}

fn rel_err(got: &BigRational, want: &BigRational) -> f64 {
    if want.is_zero() {
        return if got.is_zero() { 0.0 } else { f64::INFINITY };
    }
    ((got - want).abs() / want.abs()).to_f64().unwrap()
}

fn is_normalized(x: DDReal) -> bool {
    x.hi() + x.lo() == x.hi()
}

/// Random normalized pair with a full-width low word.
fn random_dd(r: &mut impl Rng) -> DDReal {
    let hi = r.random_range(1.0..2.0) * 2f64.powi(r.random_range(-40..40));
    let hi = if r.random::<bool>() { -hi } else { hi };
    let lo = hi * HP_UNIT_ROUNDOFF.sqrt() * 2f64.powi(-1) * r.random_range(-1.0..1.0);
    DDReal::new(hi, lo)
}

fn arb_dd() -> impl Strategy<Value = DDReal> {
    (1.0f64..2.0, -40i32..40, -1.0f64..1.0, any::<bool>()).prop_map(|(m, e, l, neg)| {
        let hi = m * 2f64.powi(e) * if neg { -1.0 } else { 1.0 };
        DDReal::new(hi, hi * l * 2f64.powi(-54))
    })
}

#[test]
fn small_integers_add_exactly() {
    let s = DDReal::from_f64(1.0) + DDReal::from_f64(2.0);
    assert_eq!((s.hi(), s.lo()), (3.0, 0.0));
    let a = DDReal::new(1.5, 2f64.powi(-60));
    assert_eq!(a + DDReal::ZERO, a);
    assert_eq!(a * DDReal::ONE, a);
}

#[test]
fn tiny_addend_is_exact() {
    let s = DDReal::ONE + DDReal::from_f64(2f64.powi(-80));
    assert!(is_normalized(s));
    assert_eq!(exact(s), pow2(0) + pow2(-80));
}

#[test]
fn near_one_product_rounds_to_nearest_pair() {
    let a = DDReal::new(1.0, 2f64.powi(-60));
    let b = DDReal::new(1.0, -(2f64.powi(-60)));
    let p = a * b;
    // 1 - 2^-120 is not representable; the nearest pair is 1 or 1 - 2^-120
    // rounded to the 106-bit grid, both within u_hp.
    let want = pow2(0) - pow2(-120);
    assert!(rel_err(&exact(p), &want) <= HP_UNIT_ROUNDOFF);
    assert!(is_normalized(p));
}

#[test]
fn one_third_to_31_digits() {
    let q = DDReal::ONE / DDReal::from_f64(3.0);
    let want = BigRational::new(BigInt::from(1), BigInt::from(3));
    assert!(rel_err(&exact(q), &want) < 1e-31);
    assert_eq!(DDReal::from_f64(4.0).sqrt(), DDReal::from_f64(2.0));
}

#[test]
fn conversions() {
    let x = lp_to_hp(0.1);
    assert_eq!((x.hi(), x.lo()), (0.1, 0.0));
    assert_eq!(hp_to_lp(DDReal::new(1.0, 2f64.powi(-60))), 1.0);
    let mut r = common::rng(5);
    for _ in 0..1000 {
        let v: f64 = r.random_range(-1e300..1e300);
        assert_eq!(hp_to_lp(lp_to_hp(v)), v);
    }
}

#[test]
fn domain_errors() {
    assert!(DDReal::ONE.checked_div(DDReal::ZERO).is_err());
    assert!(DDReal::from_f64(-1.0).checked_sqrt().is_err());
    assert!(DDComplex::ONE.checked_div(DDComplex::ZERO).is_err());
}

#[test]
fn conj_product_is_real() {
    let z = DDComplex::new(DDReal::new(0.3, 1e-18), DDReal::new(-1.7, 3e-18));
    let p = z.conj() * z;
    assert!(p.im.is_zero());
    assert!(rel_err(&exact(p.re), &exact(z.norm_sqr())) <= 4.0 * HP_UNIT_ROUNDOFF);
}

/// 10^5 random operands per operation against the rational oracle.
#[test]
fn random_error_bounds() {
    let bound = 16.0 * HP_UNIT_ROUNDOFF;
    let mut r = common::rng(2024);
    let mut worst = [0.0f64; 4];
    for _ in 0..100_000 {
        let (a, b) = (random_dd(&mut r), random_dd(&mut r));
        let (ea, eb) = (exact(a), exact(b));

        let s = a + b;
        assert!(is_normalized(s));
        let want = &ea + &eb;
        // the sum bound is relative to |a| + |b|
        let err = ((exact(s) - &want).abs() / (ea.abs() + eb.abs()))
            .to_f64()
            .unwrap();
        worst[0] = worst[0].max(err);

        let p = a * b;
        assert!(is_normalized(p));
        worst[1] = worst[1].max(rel_err(&exact(p), &(&ea * &eb)));

        let q = a / b;
        assert!(is_normalized(q));
        worst[2] = worst[2].max(rel_err(&exact(q), &(&ea / &eb)));

        let x = a.abs();
        let root = x.sqrt();
        assert!(is_normalized(root));
        // root = sqrt(x)(1 + d)  =>  root^2 - x = x(2d + d^2)
        let er = exact(root);
        let d = ((&er * &er - exact(x)) / (exact(x) * BigRational::from_integer(2.into())))
            .to_f64()
            .unwrap()
            .abs();
        worst[3] = worst[3].max(d);
    }
    for (name, w) in ["add", "mul", "div", "sqrt"].iter().zip(worst) {
        assert!(w <= bound, "{name}: worst relative error {w:e}");
    }
}

#[test]
fn complex_ops_against_oracle() {
    let mut r = common::rng(77);
    let bound = 16.0 * HP_UNIT_ROUNDOFF;
    for _ in 0..5000 {
        let a = DDComplex::new(random_dd(&mut r), random_dd(&mut r));
        let b = DDComplex::new(random_dd(&mut r), random_dd(&mut r));
        let (ar, ai, br, bi) = (exact(a.re), exact(a.im), exact(b.re), exact(b.im));
        let norm2 = |x: &BigRational, y: &BigRational| x * x + y * y;

        let p = a * b;
        let (pr, pi) = (&ar * &br - &ai * &bi, &ar * &bi + &ai * &br);
        let err = norm2(&(exact(p.re) - &pr), &(exact(p.im) - &pi));
        // complex products are accurate normwise relative to |a||b|
        let scale = norm2(&ar, &ai) * norm2(&br, &bi);
        assert!((err / scale).to_f64().unwrap().sqrt() <= bound);

        let q = a / b;
        let den = norm2(&br, &bi);
        let (qr, qi) = (
            (&ar * &br + &ai * &bi) / &den,
            (&ai * &br - &ar * &bi) / &den,
        );
        let err = norm2(&(exact(q.re) - &qr), &(exact(q.im) - &qi));
        let scale = norm2(&qr, &qi);
        assert!((err / scale).to_f64().unwrap().sqrt() <= bound);

        let m = a.abs();
        let want = norm2(&ar, &ai);
        let got = exact(m) * exact(m);
        assert!(rel_err(&got, &want) <= 2.0 * bound);
    }
}

#[test]
fn text_round_trip() {
    let mut r = common::rng(11);
    for _ in 0..2000 {
        let x = random_dd(&mut r);
        let s = x.to_string();
        let y = parse_dd(&s).unwrap();
        assert_eq!((x.hi(), x.lo()), (y.hi(), y.lo()), "{s}");
    }
}

proptest! {
    #[test]
    fn add_and_mul_commute_bitwise(a in arb_dd(), b in arb_dd()) {
        let (s1, s2) = (a + b, b + a);
        prop_assert_eq!((s1.hi(), s1.lo()), (s2.hi(), s2.lo()));
        let (p1, p2) = (a * b, b * a);
        prop_assert_eq!((p1.hi(), p1.lo()), (p2.hi(), p2.lo()));
    }

    #[test]
    fn operations_stay_normalized(a in arb_dd(), b in arb_dd()) {
        for x in [a + b, a - b, a * b, a / b, a.abs().sqrt(), a.square()] {
            prop_assert!(is_normalized(x));
        }
    }

    #[test]
    fn integer_products_are_exact(a in -(1i64 << 50)..(1i64 << 50), b in -(1i64 << 50)..(1i64 << 50)) {
        let p = DDReal::from_f64(a as f64) * DDReal::from_f64(b as f64);
        let want = BigRational::from_integer(BigInt::from(a) * BigInt::from(b));
        prop_assert_eq!(exact(p), want);
    }

    #[test]
    fn integer_sums_are_exact(a in -(1i64 << 52)..(1i64 << 52), b in -(1i64 << 52)..(1i64 << 52)) {
        let big = DDReal::from_f64(a as f64) * DDReal::from_f64(2f64.powi(53));
        let s = big + DDReal::from_f64(b as f64);
        let want = BigRational::from_integer(BigInt::from(a) * BigInt::from(1i64 << 53) + BigInt::from(b));
        prop_assert_eq!(exact(s), want);
    }
}
