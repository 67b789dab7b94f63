//! High-precision scalars: double-double real and complex arithmetic built on
//! error-free transformations.

mod complex;
mod decimal;
mod real;

pub use complex::DDComplex;
pub use decimal::{format_dd, parse_dd, DD_DECIMAL_DIGITS};
pub use real::{
    quick_two_sum, two_prod, two_prod_dekker, two_sum, DDReal, HP_UNIT_ROUNDOFF, LP_UNIT_ROUNDOFF,
};

use std::sync::Once;

/// Exact widening of a binary64 value.
#[inline(always)]
pub fn lp_to_hp(x: f64) -> DDReal {
    DDReal::from_f64(x)
}

/// Round-to-nearest narrowing.
#[inline(always)]
pub fn hp_to_lp(x: DDReal) -> f64 {
    x.to_f64()
}

/// Returns true when binary64 addition rounds to nearest, ties to even.
pub fn rounds_to_nearest_even() -> bool {
    let one = std::hint::black_box(1.0f64);
    let half_ulp = std::hint::black_box(f64::EPSILON / 2.0);
    // 1 + u is a tie that must round down to the even neighbour 1,
    // (1 + 2u) + u must round up to the even neighbour 1 + 4u,
    // and -(1 + u) mirrors the first case.
    one + half_ulp == one
        && (one + f64::EPSILON) + half_ulp == one + 2.0 * f64::EPSILON
        && -one - half_ulp == -one
        && one + 1.5 * half_ulp == one + f64::EPSILON
}

static ROUNDING_CHECK: Once = Once::new();

/// Panics once per process if the floating-point environment does not round
/// to nearest even, which every error-free transformation here relies on.
pub fn assert_round_to_nearest() {
    ROUNDING_CHECK.call_once(|| {
        assert!(
            rounds_to_nearest_even(),
            "binary64 arithmetic is not rounding to nearest even"
        );
    });
}
