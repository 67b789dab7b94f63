//! Double-double products through error-free splitting into binary64 slices.
//!
//! Each operand is cut into slices whose entries carry few enough bits that
//! every binary64 inner product of two slices is exact regardless of the
//! summation order. Slice products are then accumulated in double-double.
//! Pairs whose contribution lies below the double-double roundoff are
//! skipped.

use super::HpMatrix;
use crate::hp::{DDComplex, DDReal};

const MAX_SLICES: usize = 12;

/// Real matrix in column-major storage.
struct Real {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

fn exponent_ceil(mu: f64) -> i32 {
    // smallest t with 2^t >= mu (up to one extra binade, which is harmless)
    let bits = mu.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i32 - 1022;
    e.max(-1021)
}

/// Splits the exact sum `hi + lo` into slices. With `by_rows` the scale is
/// shared along each row (left operand), otherwise along each column.
fn split(hi: Real, lo: Vec<f64>, by_rows: bool, rho: i32) -> Vec<Real> {
    let (rows, cols) = (hi.rows, hi.cols);
    let groups = if by_rows { rows } else { cols };
    let idx = |g: usize, t: usize| if by_rows { g + t * rows } else { t + g * rows };
    let len = if by_rows { cols } else { rows };
    let mut out = Vec::new();
    for mut part in [hi.data, lo] {
        while out.len() < MAX_SLICES && part.iter().any(|&x| x != 0.0) {
            let mut slice = vec![0.0; rows * cols];
            for g in 0..groups {
                let mu = (0..len).map(|t| part[idx(g, t)].abs()).fold(0.0, f64::max);
                if mu == 0.0 {
                    continue;
                }
                let sigma = ((exponent_ceil(mu) + rho) as f64).exp2();
                for t in 0..len {
                    let p = idx(g, t);
                    let s = (part[p] + sigma) - sigma;
                    slice[p] = s;
                    part[p] -= s;
                }
            }
            out.push(Real {
                rows,
                cols,
                data: slice,
            });
        }
    }
    out
}

fn gemm_f64(a: &Real, b: &Real) -> Vec<f64> {
    let (m, k, n) = (a.rows, a.cols, b.cols);
    let mut c = vec![0.0; m * n];
    for j in 0..n {
        let cj = &mut c[j * m..(j + 1) * m];
        for l in 0..k {
            let blj = b.data[l + j * k];
            if blj == 0.0 {
                continue;
            }
            let al = &a.data[l * m..(l + 1) * m];
            for (ci, &ai) in cj.iter_mut().zip(al) {
                *ci += ai * blj;
            }
        }
    }
    c
}

/// `a * b` for real double-double operands given as separate hi/lo parts.
fn real_product(
    a: (Vec<f64>, Vec<f64>),
    b: (Vec<f64>, Vec<f64>),
    m: usize,
    k: usize,
    n: usize,
) -> Vec<DDReal> {
    let log2k = (k.max(1) as f64).log2().ceil() as i32;
    let rho = (53 + log2k + 1) / 2;
    let bits = (52 - rho).max(1);
    let max_level = (110 + bits - 1) / bits + 1;
    let sa = split(
        Real {
            rows: m,
            cols: k,
            data: a.0,
        },
        a.1,
        true,
        rho,
    );
    let sb = split(
        Real {
            rows: k,
            cols: n,
            data: b.0,
        },
        b.1,
        false,
        rho,
    );
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for p in 0..sa.len() {
        for q in 0..sb.len() {
            if (p + q) as i32 <= max_level {
                pairs.push((p, q));
            }
        }
    }
    // smallest contributions first
    pairs.sort_by_key(|&(p, q)| std::cmp::Reverse(p + q));
    let mut acc = vec![DDReal::ZERO; m * n];
    for (p, q) in pairs {
        let prod = gemm_f64(&sa[p], &sb[q]);
        for (c, x) in acc.iter_mut().zip(prod) {
            *c += DDReal::from_f64(x);
        }
    }
    acc
}

fn parts(m: &HpMatrix, f: impl Fn(DDComplex) -> DDReal) -> (Vec<f64>, Vec<f64>) {
    m.data().iter().map(|&z| (f(z).hi(), f(z).lo())).unzip()
}

/// `a * b` through the slice-splitting scheme. Dimensions must agree.
pub fn ozaki_matmul(a: &HpMatrix, b: &HpMatrix) -> HpMatrix {
    let (m, k, n) = (a.rows(), a.cols(), b.cols());
    assert_eq!(k, b.rows());
    let (ar, ai) = (parts(a, |z| z.re), parts(a, |z| z.im));
    let (br, bi) = (parts(b, |z| z.re), parts(b, |z| z.im));
    let rr = real_product(ar.clone(), br.clone(), m, k, n);
    let ii = real_product(ai.clone(), bi.clone(), m, k, n);
    let ri = real_product(ar, bi, m, k, n);
    let ir = real_product(ai, br, m, k, n);
    let data = (0..m * n)
        .map(|t| DDComplex::new(rr[t] - ii[t], ri[t] + ir[t]))
        .collect();
    HpMatrix::from_col_major(m, n, data).expect("shape is m x n")
}
