//! Conjugates of elementary matrices by permutation matrices, and the search for
//! permutation flags that a one-parameter unipotent subgroup moves off `Hess(S, h)`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GkmError, Result};
use crate::hessenberg::HessenbergFunction;
use crate::linalg::Matrix;
use crate::perm::Perm;
use crate::rational::{self, Rational};

/// Matrices `(b_ab)` with `b_ab = 0` whenever `a > h(b)`.
#[derive(Clone, Debug)]
pub struct HessSpace {
    pub h: HessenbergFunction,
}

impl HessSpace {
    pub fn new(h: HessenbergFunction) -> Self {
        HessSpace { h }
    }

    /// First (row-major) nonzero entry outside the allowed pattern, 0-based.
    pub fn violation(&self, m: &Matrix) -> Option<(usize, usize)> {
        let n = self.h.n();
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| a + 1 > self.h.at(b + 1) && !m.get(a, b).is_zero())
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        m.rows() == self.h.n() && m.cols() == self.h.n() && self.violation(m).is_none()
    }
}

/// The permutation matrix of `w`, with a 1 at `(w(k), k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermMatrix(pub Perm);

impl PermMatrix {
    pub fn to_matrix(&self) -> Matrix {
        let n = self.0.len();
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(self.0.apply(k), k, Rational::one());
        }
        m
    }
}

/// `E_ij` (1-based) of size `n`.
pub fn elementary(n: usize, i: usize, j: usize) -> Result<Matrix> {
    check_pair(n, i, j)?;
    let mut m = Matrix::zeros(n, n);
    m.set(i - 1, j - 1, Rational::one());
    Ok(m)
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(GkmError::InvalidIndexPair(i, j));
    }
    Ok(())
}

/// `g^{-1} E_ij g` for an invertible matrix `g`.
pub fn conjugate_elementary(g: &Matrix, i: usize, j: usize) -> Result<Matrix> {
    let e = elementary(g.rows(), i, j)?;
    g.inverse()?.mul(&e)?.mul(g)
}

/// A witness for the pair `(i, j)`: the permutation and the 1-based entry of
/// `g^{-1} E_ij g` that violates the Hessenberg pattern.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub perm: Perm,
    pub entry: (usize, usize),
}

/// Exhaustive search over `S_n` in lexicographic order; returns the first
/// permutation matrix `g` with `g^{-1} E_ij g` outside `HessSpace(h)`.
pub fn find_witness(h: &HessenbergFunction, i: usize, j: usize) -> Result<Option<Witness>> {
    let n = h.n();
    check_pair(n, i, j)?;
    let space = HessSpace::new(h.clone());
    for w in Perm::all(n) {
        let c = conjugate_elementary(&PermMatrix(w.clone()).to_matrix(), i, j)?;
        if let Some((a, b)) = space.violation(&c) {
            return Ok(Some(Witness { perm: w, entry: (a + 1, b + 1) }));
        }
    }
    Ok(None)
}

/// `ã_in · a_j1`, where `ã_in` is the cofactor of `a_in` (1-based indices).
/// For `det g = 1` this is the `(n, 1)` entry of `g^{-1} E_ij g`.
pub fn cofactor_entry(g: &Matrix, i: usize, j: usize) -> Result<Rational> {
    let n = g.rows();
    check_pair(n, i, j)?;
    if n != g.cols() || g.determinant().is_zero() {
        return Err(GkmError::Singular);
    }
    Ok(g.cofactor(i - 1, n - 1) * g.get(j - 1, 0))
}

/// A determinant-one integer matrix built from `steps` elementary row operations
/// `row_a += c · row_b` with `c` in `[-3, 3]`.
pub fn random_sl(n: usize, steps: usize, rng: &mut impl Rng) -> Matrix {
    let mut m = Matrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let c = rational::int(rng.gen_range(-3..=3));
        for col in 0..n {
            let v = m.get(a, col) + &c * m.get(b, col);
            m.set(a, col, v);
        }
    }
    m
}

/// Checks the cofactor formula against direct conjugation on `samples` random
/// matrices for every ordered pair; returns the number of failures.
pub fn cofactor_check(n: usize, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats: Vec<Matrix> = (0..samples).map(|_| random_sl(n, 4 * n, &mut rng)).collect();
    let failures = mats
        .par_iter()
        .map(|g| -> Result<usize> {
            debug_assert!(g.determinant().is_one());
            let mut bad = 0;
            for i in 1..=n {
                for j in (1..=n).filter(|&j| j != i) {
                    if &cofactor_entry(g, i, j)? != conjugate_elementary(g, i, j)?.get(n - 1, 0) {
                        bad += 1;
                    }
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(failures.into_iter().sum())
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Certificate {
    pub h: Vec<usize>,
    pub i: usize,
    pub j: usize,
    pub witness: Option<String>,
    pub violating_entry: Option<(usize, usize)>,
}

/// One certificate per Hessenberg function `h != (n, ..., n)` and ordered pair `(i, j)`.
pub fn sweep(n: usize) -> Result<Vec<Certificate>> {
    let jobs: Vec<(HessenbergFunction, usize, usize)> = HessenbergFunction::all(n)
        .into_iter()
        .filter(|h| !h.is_full())
        .flat_map(|h| {
            (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j))).map(move |(i, j)| (h.clone(), i, j))
        })
        .collect();
    jobs.par_iter()
        .map(|(h, i, j)| {
            let w = find_witness(h, *i, *j)?;
            Ok(Certificate {
                h: h.values().to_vec(),
                i: *i,
                j: *j,
                witness: w.as_ref().map(|w| w.perm.to_string()),
                violating_entry: w.map(|w| w.entry),
            })
        })
        .collect()
}
