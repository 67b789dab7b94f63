use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::real::DDReal;
use crate::error::{Error, Result};

/// Complex number with double-double real and imaginary parts.
#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DDComplex {
    pub re: DDReal,
    pub im: DDReal,
}

impl DDComplex {
    pub const ZERO: DDComplex = DDComplex {
        re: DDReal::ZERO,
        im: DDReal::ZERO,
    };
    pub const ONE: DDComplex = DDComplex {
        re: DDReal::ONE,
        im: DDReal::ZERO,
    };

    #[inline(always)]
    pub const fn new(re: DDReal, im: DDReal) -> Self {
        DDComplex { re, im }
    }

    #[inline(always)]
    pub const fn from_real(re: DDReal) -> Self {
        DDComplex {
            re,
            im: DDReal::ZERO,
        }
    }

    /// Exact widening of a binary64 complex value.
    #[inline(always)]
    pub const fn from_lp(z: Complex64) -> Self {
        DDComplex {
            re: DDReal::from_f64(z.re),
            im: DDReal::from_f64(z.im),
        }
    }

    #[inline(always)]
    pub fn to_lp(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    #[inline(always)]
    pub fn conj(self) -> Self {
        DDComplex {
            re: self.re,
            im: -self.im,
        }
    }

    #[inline(always)]
    pub fn norm_sqr(self) -> DDReal {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> DDReal {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    #[inline(always)]
    pub fn scale(self, s: DDReal) -> Self {
        DDComplex {
            re: self.re * s,
            im: self.im * s,
        }
    }

    #[inline(always)]
    pub fn scale_pow2(self, s: f64) -> Self {
        DDComplex {
            re: self.re.scale_pow2(s),
            im: self.im.scale_pow2(s),
        }
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.re.is_zero() && rhs.im.is_zero() {
            return Err(Error::Domain("division by zero"));
        }
        Ok(self / rhs)
    }
}

impl From<DDReal> for DDComplex {
    fn from(x: DDReal) -> Self {
        DDComplex::from_real(x)
    }
}

impl From<Complex64> for DDComplex {
    fn from(z: Complex64) -> Self {
        DDComplex::from_lp(z)
    }
}

impl Neg for DDComplex {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        DDComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for DDComplex {
    type Output = Self;
    #[inline(always)]
    fn add(self, b: Self) -> Self {
        DDComplex {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for DDComplex {
    type Output = Self;
    #[inline(always)]
    fn sub(self, b: Self) -> Self {
        DDComplex {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Mul for DDComplex {
    type Output = Self;
    #[inline(always)]
    fn mul(self, b: Self) -> Self {
        DDComplex {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for DDComplex {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let d = b.norm_sqr();
        let n = self * b.conj();
        DDComplex {
            re: n.re / d,
            im: n.im / d,
        }
    }
}

impl AddAssign for DDComplex {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DDComplex {
    #[inline(always)]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for DDComplex {
    #[inline(always)]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl fmt::Debug for DDComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}

impl fmt::Display for DDComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.re, self.im)
    }
}
