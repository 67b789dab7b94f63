use num_complex::Complex64;

use crate::matrix::LpMatrix;

/// Plane rotation `G = [c s; -conj(s) c]` with real `c`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Givens {
    pub c: f64,
    pub s: Complex64,
}

impl Givens {
    /// Rotation with `G [f; g] = [r; 0]`.
    pub fn zeroing(f: Complex64, g: Complex64) -> (Givens, Complex64) {
        if g == Complex64::new(0.0, 0.0) {
            return (
                Givens {
                    c: 1.0,
                    s: Complex64::new(0.0, 0.0),
                },
                f,
            );
        }
        let gn = g.norm();
        if f == Complex64::new(0.0, 0.0) {
            return (
                Givens {
                    c: 0.0,
                    s: g.conj() / gn,
                },
                Complex64::new(gn, 0.0),
            );
        }
        let fn_ = f.norm();
        let d = fn_.hypot(gn);
        let phase = f / fn_;
        (
            Givens {
                c: fn_ / d,
                s: phase * g.conj() / d,
            },
            phase * d,
        )
    }

    /// Rows `k, k+1` of `m` restricted to columns `cols` become `G` times them.
    pub fn apply_left(&self, m: &mut LpMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let a = m[(k, j)];
            let b = m[(k + 1, j)];
            m[(k, j)] = a * self.c + self.s * b;
            m[(k + 1, j)] = b * self.c - self.s.conj() * a;
        }
    }

    /// Columns `k, k+1` of `m` restricted to rows `rows` become them times `G^H`.
    pub fn apply_right_adjoint(&self, m: &mut LpMatrix, k: usize, rows: std::ops::Range<usize>) {
        let (ck, ck1) = m.two_cols_mut(k, k + 1);
        for i in rows {
            let a = ck[i];
            let b = ck1[i];
            ck[i] = a * self.c + self.s.conj() * b;
            ck1[i] = b * self.c - self.s * a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeroes_second_component() {
        let f = Complex64::new(1.0, 2.0);
        let g = Complex64::new(-0.5, 3.0);
        let (rot, r) = Givens::zeroing(f, g);
        let top = f * rot.c + rot.s * g;
        let bottom = g * rot.c - rot.s.conj() * f;
        assert!((top - r).norm() < 1e-14);
        assert!(bottom.norm() < 1e-14);
        assert!((rot.c * rot.c + rot.s.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
