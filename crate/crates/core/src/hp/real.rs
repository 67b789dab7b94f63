use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit roundoff of binary64, `2^-53`.
pub const LP_UNIT_ROUNDOFF: f64 = 1.1102230246251565e-16;

/// Unit roundoff of the double-double format, `2^-106`.
pub const HP_UNIT_ROUNDOFF: f64 = 1.232595164407831e-32;

/// Error-free sum: `s + e == a + b` exactly.
#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free sum assuming `|a| >= |b|` (or `a == 0`).
#[inline(always)]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product through a fused multiply-add.
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Veltkamp split into two 26-bit halves.
#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134217729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Dekker's error-free product; bit-identical to [`two_prod`] for finite,
/// non-overflowing inputs.
#[inline(always)]
pub fn two_prod_dekker(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// A double-double number: the unevaluated sum `hi + lo` with
/// `hi == fl(hi + lo)`.
#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DDReal {
    hi: f64,
    lo: f64,
}

impl DDReal {
    pub const ZERO: DDReal = DDReal { hi: 0.0, lo: 0.0 };
    pub const ONE: DDReal = DDReal { hi: 1.0, lo: 0.0 };

    /// Builds `hi + lo`, renormalizing the pair.
    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = two_sum(hi, lo);
        DDReal { hi: s, lo: e }
    }

    /// Builds a pair without renormalizing. The caller guarantees
    /// `hi == fl(hi + lo)`.
    #[inline(always)]
    pub const fn from_normalized(hi: f64, lo: f64) -> Self {
        DDReal { hi, lo }
    }

    #[inline(always)]
    pub const fn from_f64(x: f64) -> Self {
        DDReal { hi: x, lo: 0.0 }
    }

    #[inline(always)]
    pub const fn hi(self) -> f64 {
        self.hi
    }

    #[inline(always)]
    pub const fn lo(self) -> f64 {
        self.lo
    }

    /// Rounds to the nearest binary64 value, which is `hi` by normalization.
    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_sign_negative() {
            -self
        } else {
            self
        }
    }

    #[inline(always)]
    pub fn square(self) -> Self {
        self * self
    }

    /// Multiplication by a binary64 value.
    #[inline(always)]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        DDReal { hi, lo }
    }

    /// Exact scaling by a power of two.
    #[inline(always)]
    pub fn scale_pow2(self, s: f64) -> Self {
        DDReal {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by zero"));
        }
        Ok(self / rhs)
    }

    pub fn checked_sqrt(self) -> Result<Self> {
        if self.is_sign_negative() && !self.is_zero() {
            return Err(Error::Domain("square root of a negative number"));
        }
        Ok(self.sqrt())
    }

    /// Square root by one Newton correction of the binary64 root.
    /// Negative input yields NaN; see [`DDReal::checked_sqrt`].
    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return DDReal::ZERO;
        }
        if self.hi < 0.0 {
            return DDReal::from_f64(f64::NAN);
        }
        if !self.hi.is_finite() {
            return DDReal::from_f64(self.hi.sqrt());
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let r = self - DDReal { hi: p, lo: e };
        let corr = r.hi / (2.0 * s);
        let (hi, lo) = two_sum(s, corr);
        DDReal { hi, lo }
    }

    pub fn recip(self) -> Self {
        DDReal::ONE / self
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<f64> for DDReal {
    #[inline(always)]
    fn from(x: f64) -> Self {
        DDReal::from_f64(x)
    }
}

impl From<DDReal> for f64 {
    fn from(x: DDReal) -> f64 {
        x.to_f64()
    }
}

impl Neg for DDReal {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        DDReal {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DDReal {
    type Output = Self;
    #[inline(always)]
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        DDReal { hi, lo }
    }
}

impl Sub for DDReal {
    type Output = Self;
    #[inline(always)]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DDReal {
    type Output = Self;
    #[inline(always)]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let cross = self.hi * b.lo + self.lo * b.hi;
        let e = (e + cross) + self.lo * b.lo;
        let (hi, lo) = quick_two_sum(p, e);
        DDReal { hi, lo }
    }
}

impl Div for DDReal {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return DDReal::from_f64(q1);
        }
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        DDReal { hi: q1, lo: q2 } + DDReal::from_f64(q3)
    }
}

impl AddAssign for DDReal {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DDReal {
    #[inline(always)]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for DDReal {
    #[inline(always)]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for DDReal {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(DDReal::ZERO, |a, b| a + b)
    }
}

impl PartialOrd for DDReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            ord => Some(ord),
        }
    }
}

impl fmt::Debug for DDReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DDReal({:e}, {:e})", self.hi, self.lo)
    }
}
