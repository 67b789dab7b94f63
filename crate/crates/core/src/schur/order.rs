use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rotation::Givens;
use super::SchurPair;
use crate::error::{Error, Result};

/// Target order of the diagonal of `T`: position `k` receives the eigenvalue
/// currently at `permutation[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigOrder {
    permutation: Vec<usize>,
}

impl EigOrder {
    pub fn new(permutation: Vec<usize>) -> Result<Self> {
        let n = permutation.len();
        let mut seen = vec![false; n];
        for &p in &permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{permutation:?} is not a permutation of 0..{n}"
                )));
            }
        }
        Ok(EigOrder { permutation })
    }

    pub fn identity(n: usize) -> Self {
        EigOrder {
            permutation: (0..n).collect(),
        }
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn len(&self) -> usize {
        self.permutation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutation.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(k, &p)| k == p)
    }
}

/// Stable sort of `eigs` by `Re(e^{-i theta} lambda)`.
pub fn order_by_direction(eigs: &[Complex64], theta: f64) -> EigOrder {
    let dir = Complex64::from_polar(1.0, -theta);
    let key: Vec<f64> = eigs.iter().map(|&l| (dir * l).re).collect();
    let mut permutation: Vec<usize> = (0..eigs.len()).collect();
    permutation.sort_by(|&a, &b| key[a].total_cmp(&key[b]));
    EigOrder { permutation }
}

/// Orders eigenvalues along a line whose angle is drawn from a ChaCha8 stream
/// seeded with `seed`; returns the order and the direction used.
///
/// Eigenvalues in a tight cluster project to neighbouring points, so they end
/// up on adjacent diagonal positions. Of the two orientations of the line
/// (`theta` and `theta + pi`) the one needing fewer adjacent swaps from the
/// current order is used: every swap adds rounding error, and for strongly
/// non-normal `T` a reversal can leave a Schur form that no longer refines.
pub fn order_by_random_line(eigs: &[Complex64], seed: u64) -> (EigOrder, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = rng.random::<f64>() * PI;
    let forward = order_by_direction(eigs, theta);
    let backward = order_by_direction(eigs, theta + PI);
    if inversions(backward.permutation()) < inversions(forward.permutation()) {
        (backward, theta + PI)
    } else {
        (forward, theta)
    }
}

/// Number of adjacent swaps that realize `perm`.
fn inversions(perm: &[usize]) -> usize {
    (0..perm.len())
        .map(|i| perm[i + 1..].iter().filter(|&&p| p < perm[i]).count())
        .sum()
}

/// Reorders a Schur pair so that `diag(T)` follows `order`, using adjacent
/// swaps of 1x1 blocks. Each swap is a unitary similarity by a single
/// rotation and is performed even for (nearly) equal diagonal entries.
pub fn reorder_schur(pair: SchurPair<Complex64>, order: &EigOrder) -> Result<SchurPair<Complex64>> {
    let n = pair.t.rows();
    if order.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} does not match dimension {n}",
            order.len()
        )));
    }
    if order.is_identity() {
        return Ok(pair);
    }
    let SchurPair { mut q, mut t, .. } = pair;
    // current[k] = original index of the eigenvalue at position k
    let mut current: Vec<usize> = (0..n).collect();
    for (k, &target) in order.permutation().iter().enumerate() {
        let mut p = current[k..].iter().position(|&c| c == target).unwrap() + k;
        while p > k {
            swap_adjacent(&mut t, &mut q, p - 1);
            current.swap(p - 1, p);
            p -= 1;
        }
    }
    Ok(SchurPair::new(q, t))
}

/// Exchanges `t[k, k]` and `t[k+1, k+1]`.
fn swap_adjacent(t: &mut crate::LpMatrix, q: &mut crate::LpMatrix, k: usize) {
    let n = t.rows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let (rot, _) = Givens::zeroing(t[(k, k + 1)], t22 - t11);
    rot.apply_left(t, k, k + 2..n);
    rot.apply_right_adjoint(t, k, 0..k);
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    rot.apply_right_adjoint(q, k, 0..n);
}
