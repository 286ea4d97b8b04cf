//! Exact linear algebra over the rationals.
//!
//! [`Matrix`] is a small dense matrix used for lattice maps, determinants and
//! action matrices. Large sparse systems (the congruence constraints of graph
//! cohomology) go through [`Echelon`], an incremental fraction-free row echelon
//! form over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{GkmError, Result};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rational::int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rational> {
        self.data.iter()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(GkmError::ArityMismatch { left: self.cols, right: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.cols != v.len() {
            return Err(GkmError::ArityMismatch { left: self.cols, right: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| *self.get(i, j) == if i == j { Rational::one() } else { Rational::zero() }))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else { return Rational::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &pivot;
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(GkmError::Singular);
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(GkmError::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    /// Cofactor `(-1)^(i+j) * minor(i, j)`.
    pub fn cofactor(&self, i: usize, j: usize) -> Rational {
        let n = self.rows;
        let minor = Matrix::from_rows(
            (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| self.get(r, c).clone()).collect())
                .collect(),
        );
        let d = if n == 1 { Rational::one() } else { minor.determinant() };
        if (i + j).is_multiple_of(2) {
            d
        } else {
            -d
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(rational::to_text).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Basis of the null space `{x : m x = 0}`.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let mut e = Echelon::new(m.cols());
    for i in 0..m.rows() {
        let row: Vec<(usize, Rational)> =
            m.row(i).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
        e.insert_rational(&row);
    }
    e.kernel_basis()
        .into_iter()
        .map(|sparse| {
            let mut dense = vec![Rational::zero(); m.cols()];
            for (j, v) in sparse {
                dense[j] = v;
            }
            dense
        })
        .collect()
}

/// Sparse integer vector with strictly increasing column indices and no zero entries.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Scales a sparse rational vector to a primitive integer vector.
pub fn integer_row(v: &[(usize, Rational)]) -> SparseRow {
    let den = v.iter().fold(BigInt::one(), |a, (_, c)| a.lcm(c.denom()));
    let mut row: SparseRow = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (*j, (c * Rational::from_integer(den.clone())).to_integer()))
        .collect();
    row.sort_by_key(|(j, _)| *j);
    row
}

fn make_primitive(row: &mut SparseRow) {
    let g = row.iter().fold(BigInt::zero(), |a, (_, c)| a.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
}

/// `a * x + b * y`, dropping cancelled entries.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) => p.0.cmp(&q.0),
            (Some(_), None) => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Greater,
        };
        match take {
            std::cmp::Ordering::Less => {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((y[j].0, b * &y[j].1));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a * &x[i].1 + b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Eliminates column `col` of `r` using `pivot` (whose entry at `col` is nonzero).
fn eliminate(r: &SparseRow, pivot: &SparseRow, col: usize) -> SparseRow {
    let pv = &pivot.iter().find(|(j, _)| *j == col).expect("pivot column").1;
    let rv = &r.iter().find(|(j, _)| *j == col).expect("entry present").1;
    let g = pv.gcd(rv);
    let mut out = combine(&(pv / &g), r, &-(rv / &g), pivot);
    make_primitive(&mut out);
    out
}

/// Incremental row echelon form over the integers. Every stored row is primitive
/// with a positive leading entry, and no two rows share a leading column.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_row: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Clears leading entries of `v` against stored rows until the leading column
    /// has no pivot (or `v` vanishes).
    pub fn reduce(&self, mut v: SparseRow) -> SparseRow {
        make_primitive(&mut v);
        while let Some(&(c, _)) = v.first() {
            match self.pivot_row[c] {
                Some(r) => v = eliminate(&v, &self.rows[r], c),
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseRow) -> bool {
        debug_assert!(v.iter().all(|(j, _)| *j < self.ncols));
        let mut v = self.reduce(v);
        let Some(&(c, ref lead)) = v.first() else { return false };
        if lead.is_negative() {
            for (_, x) in v.iter_mut() {
                *x = -&*x;
            }
        }
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn insert_rational(&mut self, v: &[(usize, Rational)]) -> bool {
        self.insert(integer_row(v))
    }

    pub fn contains(&self, v: SparseRow) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_row[c].is_some()).collect()
    }

    /// Reduced rows, each with zeros in every other pivot column, ordered by pivot.
    pub fn reduced_rows(&self) -> Vec<SparseRow> {
        let pivots = self.pivot_columns();
        let mut reduced: Vec<Option<SparseRow>> = vec![None; self.ncols];
        for &c in pivots.iter().rev() {
            let mut row = self.rows[self.pivot_row[c].unwrap()].clone();
            loop {
                let next = row.iter().skip(1).find(|(j, _)| reduced[*j].is_some()).map(|(j, _)| *j);
                match next {
                    Some(j) => row = eliminate(&row, reduced[j].as_ref().unwrap(), j),
                    None => break,
                }
            }
            reduced[c] = Some(row);
        }
        pivots.into_iter().map(|c| reduced[c].take().unwrap()).collect()
    }

    /// Basis of the null space of the stored rows, one vector per free column,
    /// with entry 1 at that free column.
    pub fn kernel_basis(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut is_pivot = vec![false; self.ncols];
        for c in self.pivot_columns() {
            is_pivot[c] = true;
        }
        let mut slot = vec![usize::MAX; self.ncols];
        let mut basis: Vec<Vec<(usize, Rational)>> = Vec::new();
        for f in (0..self.ncols).filter(|&f| !is_pivot[f]) {
            slot[f] = basis.len();
            basis.push(vec![(f, Rational::one())]);
        }
        for row in self.reduced_rows() {
            let (c, lead) = &row[0];
            for (f, v) in row.iter().skip(1) {
                basis[slot[*f]].push((*c, -Rational::new(v.clone(), lead.clone())));
            }
        }
        for v in basis.iter_mut() {
            v.sort_by_key(|(j, _)| *j);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn apply(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
        m.mul_vec(v).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        assert_eq!(kernel_basis(&Matrix::zeros(2, 3)).len(), 3);
    }

    #[test]
    fn kernel_of_small_system() {
        let m = Matrix::from_i64(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![int(1), int(-1), int(1)]]);
    }

    #[test]
    fn kernel_with_fractions() {
        let m = Matrix::from_i64(&[vec![2, 3, 0, 1], vec![4, 6, 1, 0]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(Zero::is_zero));
        }
        assert_eq!(k.len() + m.rank(), 4);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), int(1));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let s = Matrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.determinant(), int(0));
        assert_eq!(s.inverse(), Err(GkmError::Singular));
        let h = Matrix::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(3), int(4)]]);
        assert_eq!(h.determinant(), int(2));
    }

    #[test]
    fn cofactors_give_adjugate() {
        let m = Matrix::from_i64(&[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]);
        let det = m.determinant();
        let inv = m.inverse().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(inv.get(j, i) * &det, m.cofactor(i, j));
            }
        }
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new(3);
        assert!(e.insert(vec![(0, BigInt::from(2)), (1, BigInt::from(4))]));
        assert!(e.insert(vec![(1, BigInt::from(1)), (2, BigInt::from(1))]));
        assert!(!e.insert(vec![(0, BigInt::from(1)), (1, BigInt::from(3)), (2, BigInt::from(1))]));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(vec![(0, BigInt::from(1)), (2, BigInt::from(-2))]));
        assert!(!e.contains(vec![(2, BigInt::from(1))]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = Matrix> {
            (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r).prop_map(|rows| Matrix::from_i64(&rows))
            })
        }

        proptest! {
            #[test]
            fn kernel_is_annihilated_and_rank_nullity_holds(m in small_matrix()) {
                let k = kernel_basis(&m);
                for v in &k {
                    prop_assert!(apply(&m, v).iter().all(Zero::is_zero));
                }
                prop_assert_eq!(k.len() + m.rank(), m.cols());
                let km = Matrix::from_rows(k.clone());
                if !k.is_empty() {
                    prop_assert_eq!(km.rank(), k.len());
                }
            }
        }
    }
}
