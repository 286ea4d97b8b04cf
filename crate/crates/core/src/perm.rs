//! Permutations of `{1..n}` in one-line notation (0-based internally).

use std::fmt;

use itertools::Itertools;

use crate::error::{GkmError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// From 0-based images; fails unless `images` is a bijection of `0..n`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(GkmError::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm(images))
    }

    /// From 1-based images, e.g. `[2, 3, 1]`.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        if values.contains(&0) {
            return Err(GkmError::NotAPermutation(format!("{values:?}")));
        }
        Self::from_images(values.iter().map(|v| v - 1).collect())
    }

    /// The transposition swapping `a` and `b` (0-based).
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.0.swap(a, b);
        p
    }

    /// The longest element `i -> n+1-i`.
    pub fn longest(n: usize) -> Self {
        Perm((0..n).rev().collect())
    }

    /// Parses compact one-line notation such as `"231"` (n ≤ 9).
    pub fn parse(s: &str) -> Result<Self> {
        let digits: Option<Vec<usize>> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        let digits = digits.ok_or_else(|| GkmError::NotAPermutation(s.to_string()))?;
        Self::from_one_line(&digits).map_err(|_| GkmError::NotAPermutation(s.to_string()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Image of the 0-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// All permutations of `n` points in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Perm> {
        (0..n).permutations(n).map(Perm).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Compact one-line notation: digits for n ≤ 9, comma separated above that.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() <= 9 {
            for x in &self.0 {
                write!(f, "{}", x + 1)?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.0.iter().map(|x| x + 1).join(","))
        }
    }
}
