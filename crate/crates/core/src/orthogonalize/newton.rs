use super::lp_products;
use crate::error::{Error, Result};
use crate::hp::DDComplex;
use crate::matrix::{matmul_lp, spectral_norm_estimate, HpGemm, HpMatrix, LpMatrix, Op};

/// `Q_new = Q (3I - Q^H Q) / 2`, two counted double-double products.
///
/// Requires `||Q||_2 < sqrt(3)`, checked on the binary64 copy.
pub fn newton_schulz_step(qhat: &HpMatrix, gemm: &HpGemm) -> Result<HpMatrix> {
    qhat.ensure_square()?;
    let norm = spectral_norm_estimate(&qhat.to_lp());
    if norm.is_nan() || norm >= 3f64.sqrt() {
        return Err(Error::NormTooLarge { norm });
    }
    let mut s = gemm
        .mul(qhat, qhat, Op::ConjTrans, Op::NoTrans)?
        .map(|z| -z);
    let three = DDComplex::from_lp(num_complex::Complex64::new(3.0, 0.0));
    for i in 0..s.rows() {
        s[(i, i)] += three;
    }
    Ok(gemm
        .mul(qhat, &s, Op::NoTrans, Op::NoTrans)?
        .scale_pow2(0.5))
}

/// `Sigma - 2I = 2W - Y - YW + W^2 + W^3 [+ W^2 Y + W^2 Y W]`, with the
/// products formed in binary64 and the sum in double-double.
fn sigma_minus_2i(w: &LpMatrix, y: &HpMatrix, full: bool) -> Result<HpMatrix> {
    let n = w.ensure_square()?;
    if y.rows() != n || y.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "W is {n}x{n} but Y is {}x{}",
            y.rows(),
            y.cols()
        )));
    }
    let y_lp = y.to_lp();
    let (yw, w2, w3) = lp_products(&y_lp, w)?;
    let extra = if full {
        let w2y = matmul_lp(&w2, &y_lp, Op::NoTrans, Op::NoTrans)?;
        let w2yw = matmul_lp(&w2y, w, Op::NoTrans, Op::NoTrans)?;
        Some((w2y, w2yw))
    } else {
        None
    };
    Ok(HpMatrix::from_fn(n, n, |i, j| {
        let mut s = DDComplex::from_lp(w3[(i, j)]);
        s += DDComplex::from_lp(w2[(i, j)]);
        s -= DDComplex::from_lp(yw[(i, j)]);
        if let Some((w2y, w2yw)) = &extra {
            s += DDComplex::from_lp(w2yw[(i, j)]);
            s += DDComplex::from_lp(w2y[(i, j)]);
        }
        s -= y[(i, j)];
        s + DDComplex::from_lp(w[(i, j)]).scale_pow2(2.0)
    }))
}

/// One Newton-Schulz step applied to `Q (I + W)` without forming it:
///
/// `Q_new = Q (2I + 2W - Y - YW + W^2 + W^3) / 2`, `Y = Q^H Q - I`.
///
/// `YW`, `W^2`, `W^3` are binary64 products, `Sigma` is summed in
/// double-double and `Q Sigma` is the only double-double product (the one
/// forming `Y` belongs to the caller). With `full` the terms `W^2 Y` and
/// `W^2 Y W` are kept as well.
pub fn merged_update(
    q: &HpMatrix,
    w: &LpMatrix,
    y: &HpMatrix,
    full: bool,
    gemm: &HpGemm,
) -> Result<HpMatrix> {
    let mut sigma = sigma_minus_2i(w, y, full)?;
    let two = DDComplex::from_lp(num_complex::Complex64::new(2.0, 0.0));
    for i in 0..sigma.rows() {
        sigma[(i, i)] += two;
    }
    Ok(gemm
        .mul(q, &sigma, Op::NoTrans, Op::NoTrans)?
        .scale_pow2(0.5))
}

/// The same update as [`merged_update`] written as
/// `Q + Q (Sigma - 2I) / 2` with the product in binary64.
///
/// Only accurate to double-double level when `Sigma - 2I` is itself of
/// order `sqrt(u_hp)`, i.e. when `Q (I + W)` is already unitary in
/// double-double; costs no double-double product.
pub fn merged_update_lp(q: &HpMatrix, w: &LpMatrix, y: &HpMatrix, full: bool) -> Result<HpMatrix> {
    let d = sigma_minus_2i(w, y, full)?.to_lp();
    let qd = matmul_lp(&q.to_lp(), &d, Op::NoTrans, Op::NoTrans)?;
    Ok(q + &qd.to_hp().scale_pow2(0.5))
}
