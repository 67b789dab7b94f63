use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::hp::{two_prod, DDComplex, DDReal, HP_UNIT_ROUNDOFF, LP_UNIT_ROUNDOFF};

/// Complex scalar stored in a [`Matrix`](super::Matrix).
///
/// Implemented for the working precision (`Complex64`) and the double-double
/// precision (`DDComplex`). Code that only needs ring operations, conjugation
/// and conversions is written once against this trait.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const UNIT_ROUNDOFF: f64;

    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
    fn from_lp(z: Complex64) -> Self;
    fn to_lp(self) -> Complex64;
    /// `|z|^2` accumulated in double-double.
    fn norm_sqr_hp(self) -> DDReal;
    fn is_finite(self) -> bool;
    /// Multiplication by a real power of two (exact).
    fn scale_pow2(self, s: f64) -> Self;

    /// `acc + a * b`, in the precision of the scalar.
    #[inline(always)]
    fn mul_acc(acc: Self, a: Self, b: Self) -> Self {
        acc + a * b
    }
}

impl Scalar for Complex64 {
    const UNIT_ROUNDOFF: f64 = LP_UNIT_ROUNDOFF;

    #[inline(always)]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline(always)]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline(always)]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline(always)]
    fn from_lp(z: Complex64) -> Self {
        z
    }
    #[inline(always)]
    fn to_lp(self) -> Complex64 {
        self
    }
    #[inline]
    fn norm_sqr_hp(self) -> DDReal {
        let (a, ae) = two_prod(self.re, self.re);
        let (b, be) = two_prod(self.im, self.im);
        DDReal::new(a, ae) + DDReal::new(b, be)
    }
    #[inline]
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    #[inline(always)]
    fn scale_pow2(self, s: f64) -> Self {
        self * s
    }
    #[inline(always)]
    fn mul_acc(acc: Self, a: Self, b: Self) -> Self {
        Complex64::new(
            acc.re + a.re * b.re - a.im * b.im,
            acc.im + a.re * b.im + a.im * b.re,
        )
    }
}

impl Scalar for DDComplex {
    const UNIT_ROUNDOFF: f64 = HP_UNIT_ROUNDOFF;

    #[inline(always)]
    fn zero() -> Self {
        DDComplex::ZERO
    }
    #[inline(always)]
    fn one() -> Self {
        DDComplex::ONE
    }
    #[inline(always)]
    fn conj(self) -> Self {
        DDComplex::conj(self)
    }
    #[inline(always)]
    fn from_lp(z: Complex64) -> Self {
        DDComplex::from_lp(z)
    }
    #[inline(always)]
    fn to_lp(self) -> Complex64 {
        DDComplex::to_lp(self)
    }
    #[inline]
    fn norm_sqr_hp(self) -> DDReal {
        self.norm_sqr()
    }
    #[inline]
    fn is_finite(self) -> bool {
        DDComplex::is_finite(self)
    }
    #[inline(always)]
    fn scale_pow2(self, s: f64) -> Self {
        DDComplex::scale_pow2(self, s)
    }
    #[inline(always)]
    fn mul_acc(acc: Self, a: Self, b: Self) -> Self {
        let mut re = acc.re + a.re * b.re;
        re -= a.im * b.im;
        let mut im = acc.im + a.re * b.im;
        im += a.im * b.re;
        DDComplex::new(re, im)
    }
}
