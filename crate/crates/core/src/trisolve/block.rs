use num_complex::Complex64;

use super::scalar::substitute;
use super::{check_separation, clip_entry, ensure_finite, TriEqProblem, TriEqSolution};
use crate::error::{Error, Result};
use crate::matrix::{matmul_lp, LpMatrix, Op, TriangleKind};

/// Size above which the two independent half problems run on separate
/// rayon tasks.
const PARALLEL_CUTOFF: usize = 128;

/// Recursive blocked solver.
///
/// With `n1 = n / 2` the off-diagonal block `L21` solves the triangular
/// Sylvester equation `T22 L21 - L21 T11 = -E21`; then
/// `E11 += stril(T12 L21)`, `E22 -= stril(L21 T12)` and the two diagonal
/// blocks are solved recursively. Problems with `n <= n_min` use
/// [`super::solve_scalar`]'s recurrence.
pub fn solve_block(p: &TriEqProblem, n_min: usize) -> Result<TriEqSolution> {
    if n_min < 2 {
        return Err(Error::InvalidInput(format!(
            "n_min must be at least 2, got {n_min}"
        )));
    }
    check_separation(p.t())?;
    let (l, stats) = recurse(p.t(), p.e().clone(), n_min, p.clip())?;
    ensure_finite(&l)?;
    Ok(TriEqSolution {
        l,
        clipped_count: stats.clipped,
        sylvester_solves: stats.sylvester,
    })
}

#[derive(Default, Clone, Copy)]
struct Stats {
    clipped: usize,
    sylvester: usize,
}

fn recurse(
    t: &LpMatrix,
    mut e: LpMatrix,
    n_min: usize,
    clip: Option<f64>,
) -> Result<(LpMatrix, Stats)> {
    let n = t.rows();
    let mut stats = Stats::default();
    if n <= n_min {
        let l = substitute(t, &e, clip, &mut stats.clipped)?;
        return Ok((l, stats));
    }
    let n1 = n / 2;
    let t11 = t.submatrix(0, n1, 0, n1);
    let t12 = t.submatrix(0, n1, n1, n);
    let t22 = t.submatrix(n1, n, n1, n);

    let rhs = e.submatrix(n1, n, 0, n1).map(|z| -z);
    let l21 = sylvester(&t22, &t11, &rhs, clip, &mut stats.clipped, (n1, 0))?;
    stats.sylvester += 1;

    let t12l21 = matmul_lp(&t12, &l21, Op::NoTrans, Op::NoTrans)?;
    let e11 = &e.submatrix(0, n1, 0, n1) + &t12l21.triangle(TriangleKind::StrictLower);
    let l21t12 = matmul_lp(&l21, &t12, Op::NoTrans, Op::NoTrans)?;
    let e22 = &e.submatrix(n1, n, n1, n) - &l21t12.triangle(TriangleKind::StrictLower);

    let (r1, r2) = if n >= PARALLEL_CUTOFF {
        rayon::join(
            || recurse(&t11, e11, n_min, clip),
            || recurse(&t22, e22, n_min, clip),
        )
    } else {
        (
            recurse(&t11, e11, n_min, clip),
            recurse(&t22, e22, n_min, clip),
        )
    };
    let (l11, s1) = r1.map_err(|err| shift_separation(err, 0))?;
    let (l22, s2) = r2.map_err(|err| shift_separation(err, n1))?;

    e = LpMatrix::zeros(n, n);
    e.set_submatrix(0, 0, &l11);
    e.set_submatrix(n1, 0, &l21);
    e.set_submatrix(n1, n1, &l22);
    stats.clipped += s1.clipped + s2.clipped;
    stats.sylvester += s1.sylvester + s2.sylvester;
    Ok((e, stats))
}

fn shift_separation(err: Error, off: usize) -> Error {
    match err {
        Error::Separation { i, j } => Error::Separation {
            i: i + off,
            j: j + off,
        },
        other => other,
    }
}

/// Solves `T22 X - X T11 = C` for upper triangular `T22` (m x m) and
/// `T11` (p x p) by column-wise back substitution:
/// `(T22 - t11_jj I) x_j = c_j + X(:, 1:j-1) T11(1:j-1, j)`.
pub fn solve_sylvester_tri(t22: &LpMatrix, t11: &LpMatrix, c: &LpMatrix) -> Result<LpMatrix> {
    let m = t22.ensure_square()?;
    let p = t11.ensure_square()?;
    if c.rows() != m || c.cols() != p {
        return Err(Error::DimensionMismatch(format!(
            "C is {}x{}, expected {m}x{p}",
            c.rows(),
            c.cols()
        )));
    }
    let mut unused = 0;
    sylvester(t22, t11, c, None, &mut unused, (0, 0))
}

/// `offsets` map local indices to positions reported in separation errors.
fn sylvester(
    t22: &LpMatrix,
    t11: &LpMatrix,
    c: &LpMatrix,
    clip: Option<f64>,
    clipped: &mut usize,
    offsets: (usize, usize),
) -> Result<LpMatrix> {
    let m = t22.rows();
    let p = t11.rows();
    let mut x = LpMatrix::zeros(m, p);
    let mut rhs = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..p {
        rhs.copy_from_slice(c.col(j));
        for k in 0..j {
            let f = t11[(k, j)];
            for (r, &xk) in rhs.iter_mut().zip(x.col(k)) {
                *r += xk * f;
            }
        }
        let shift = t11[(j, j)];
        for i in (0..m).rev() {
            let mut s = rhs[i];
            for l in i + 1..m {
                s -= t22[(i, l)] * x[(l, j)];
            }
            let d = t22[(i, i)] - shift;
            if d == Complex64::new(0.0, 0.0) {
                return Err(Error::Separation {
                    i: offsets.1 + j,
                    j: offsets.0 + i,
                });
            }
            x[(i, j)] = clip_entry(s / d, clip, clipped);
        }
    }
    Ok(x)
}
