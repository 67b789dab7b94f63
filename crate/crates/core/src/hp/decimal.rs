//! Exact decimal conversion for double-double values.
//!
//! Both directions go through exact big-integer arithmetic, so printing a
//! value and parsing it back reproduces the same `(hi, lo)` pair.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::real::{quick_two_sum, DDReal};
use crate::error::Error;

/// Minimum number of significant digits used when rendering a [`DDReal`].
pub const DD_DECIMAL_DIGITS: usize = 36;

/// `digits * 10^exp`, exactly.
#[derive(Clone, Debug)]
struct Decimal {
    digits: BigInt,
    exp: i64,
}

impl Decimal {
    fn from_f64(x: f64) -> Decimal {
        if x == 0.0 {
            return Decimal {
                digits: BigInt::zero(),
                exp: 0,
            };
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e2) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let mut digits = BigInt::from(mant);
        let exp = if e2 >= 0 {
            digits <<= e2 as usize;
            0
        } else {
            digits *= BigInt::from(5u8).pow((-e2) as u32);
            e2
        };
        if x < 0.0 {
            digits = -digits;
        }
        Decimal { digits, exp }
    }

    fn aligned(self, exp: i64) -> BigInt {
        debug_assert!(exp <= self.exp);
        self.digits * BigInt::from(10u8).pow((self.exp - exp) as u32)
    }

    fn add(self, other: Decimal) -> Decimal {
        let exp = self.exp.min(other.exp);
        Decimal {
            digits: self.aligned(exp) + other.clone().aligned(exp),
            exp,
        }
    }

    fn sub(self, other: Decimal) -> Decimal {
        self.add(Decimal {
            digits: -other.digits,
            exp: other.exp,
        })
    }

    fn to_f64(&self) -> f64 {
        // Rust's float parser rounds arbitrary-length input correctly.
        format!("{}e{}", self.digits, self.exp)
            .parse()
            .expect("integer mantissa with exponent is valid float syntax")
    }

    /// Scientific rendering rounded half-even to `sig` significant digits.
    fn render(&self, sig: usize) -> String {
        let negative = self.digits.is_negative();
        let mag = self.digits.abs().to_string();
        let len = mag.len();
        let mut exp10 = len as i64 - 1 + self.exp;
        let mut mant = if len <= sig {
            let mut m = mag;
            m.extend(std::iter::repeat_n('0', sig - len));
            m
        } else {
            let scale = BigInt::from(10u8).pow((len - sig) as u32);
            let full: BigInt = mag.parse().expect("decimal digits");
            let mut q = &full / &scale;
            let r = &full % &scale;
            let twice = &r * 2u8;
            let odd = (&q % 2u8) == BigInt::from(1u8);
            if twice > scale || (twice == scale && odd) {
                q += 1u8;
            }
            let mut m = q.to_string();
            if m.len() > sig {
                m.truncate(sig);
                exp10 += 1;
            }
            m
        };
        if mant.len() > 1 {
            mant.insert(1, '.');
        }
        format!("{}{}e{}", if negative { "-" } else { "" }, mant, exp10)
    }
}

fn dd_exact(x: DDReal) -> Decimal {
    Decimal::from_f64(x.hi()).add(Decimal::from_f64(x.lo()))
}

/// Renders `x` with at least `min_digits` significant digits, adding digits
/// only when needed for the string to parse back to the same pair.
pub fn format_dd(x: DDReal, min_digits: usize) -> String {
    let hi = x.hi();
    if hi.is_nan() || x.lo().is_nan() {
        return "NaN".to_string();
    }
    if hi.is_infinite() {
        return if hi > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if hi == 0.0 {
        return if hi.is_sign_negative() { "-0e0" } else { "0e0" }.to_string();
    }
    let exact = dd_exact(x);
    let total = exact.digits.abs().to_string().len();
    let mut sig = min_digits.max(1);
    loop {
        let s = exact.render(sig);
        if sig >= total {
            return s;
        }
        if let Ok(back) = parse_dd(&s) {
            if back.hi() == hi && back.lo() == x.lo() {
                return s;
            }
        }
        sig += 1;
    }
}

/// Parses a decimal string to the double-double nearest to it
/// (`hi = RN(v)`, `lo = RN(v - hi)`).
pub fn parse_dd(s: &str) -> Result<DDReal, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid number `{s}`"));
    match t.to_ascii_lowercase().as_str() {
        "nan" => return Ok(DDReal::from_f64(f64::NAN)),
        "inf" | "+inf" | "infinity" => return Ok(DDReal::from_f64(f64::INFINITY)),
        "-inf" | "-infinity" => return Ok(DDReal::from_f64(f64::NEG_INFINITY)),
        _ => {}
    }
    let (negative, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mant, exp_part) = match body.find(['e', 'E']) {
        Some(k) => (&body[..k], Some(&body[k + 1..])),
        None => (body, None),
    };
    let mut exp: i64 = match exp_part {
        Some(e) => e.parse().map_err(|_| bad())?,
        None => 0,
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(k) => (&mant[..k], &mant[k + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    exp -= frac_part.len() as i64;
    let mut digits: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    if negative {
        digits = -digits;
    }
    let hi: f64 = t.parse().map_err(|_| bad())?;
    if !hi.is_finite() || digits.is_zero() {
        return Ok(DDReal::from_f64(hi));
    }
    let value = Decimal { digits, exp };
    let lo = value.sub(Decimal::from_f64(hi)).to_f64();
    let (hi, lo) = quick_two_sum(hi, lo);
    Ok(DDReal::from_normalized(hi, lo))
}

impl fmt::Display for DDReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_dd(*self, DD_DECIMAL_DIGITS))
    }
}

impl FromStr for DDReal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_dd(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_36_digits() {
        let third = DDReal::ONE / DDReal::from(3.0);
        let s = third.to_string();
        assert!(s.starts_with("3.33333333333333333333333333333"), "{s}");
        assert_eq!(s.split('e').next().unwrap().len(), 37);
        assert_eq!(s.parse::<DDReal>().unwrap(), third);
    }

    #[test]
    fn integers_and_specials() {
        assert_eq!(
            DDReal::from(12.0).to_string(),
            format!("1.{}e1", "2".to_string() + &"0".repeat(34))
        );
        assert_eq!("0e0".parse::<DDReal>().unwrap(), DDReal::ZERO);
        assert!(!"inf".parse::<DDReal>().unwrap().is_finite());
        assert!("1.2.3".parse::<DDReal>().is_err());
        assert!("abc".parse::<DDReal>().is_err());
    }

    #[test]
    fn sparse_pair_gets_extra_digits() {
        let x = DDReal::new(1.0, (-100f64).exp2());
        let s = x.to_string();
        let back: DDReal = s.parse().unwrap();
        assert_eq!((back.hi(), back.lo()), (x.hi(), x.lo()));
    }

    #[test]
    fn parse_rounds_to_nearest_pair() {
        let x: DDReal = "0.1".parse().unwrap();
        assert_eq!(x.hi(), 0.1);
        // 0.1 - fl(0.1) = -5.551115123125782702118158340454101562e-18
        assert_eq!(x.lo(), -5.551115123125783e-18);
    }
}
