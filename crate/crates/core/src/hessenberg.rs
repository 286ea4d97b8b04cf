//! Hessenberg functions and the GKM graphs of regular semisimple Hessenberg varieties.

use std::fmt;
use std::str::FromStr;

use crate::error::{GkmError, Result};
use crate::gkm::GkmGraph;
use crate::perm::Perm;
use crate::poly::LinearForm;

/// Largest `n` accepted by [`build_gkm_graph`] without an explicit override.
pub const GRAPH_GUARD: usize = 6;

/// A nondecreasing `h: [n] -> [n]` with `h(j) >= j`, stored 1-based as `(h(1), ..., h(n))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HessenbergFunction(Vec<usize>);

impl HessenbergFunction {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let err = |reason: String| GkmError::InvalidHessenberg { values: values.clone(), reason };
        if n == 0 {
            return Err(err("empty".into()));
        }
        for (j, &h) in values.iter().enumerate() {
            if h == 0 || h > n {
                return Err(err(format!("h({}) = {h} is outside [1, {n}]", j + 1)));
            }
            if h < j + 1 {
                return Err(err(format!("h({}) = {h} < {}", j + 1, j + 1)));
            }
        }
        if let Some(j) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(err(format!("non-monotone at j = {}", j + 1)));
        }
        Ok(HessenbergFunction(values))
    }

    /// `(n, ..., n)`, the full flag variety.
    pub fn full(n: usize) -> Self {
        HessenbergFunction(vec![n; n])
    }

    /// `(1, 2, ..., n)`, the discrete case.
    pub fn minimal(n: usize) -> Self {
        HessenbergFunction((1..=n).collect())
    }

    /// Every Hessenberg function of size `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(n: usize, cur: &mut Vec<usize>, out: &mut Vec<HessenbergFunction>) {
            let j = cur.len() + 1;
            if j > n {
                out.push(HessenbergFunction(cur.clone()));
                return;
            }
            let lo = cur.last().copied().unwrap_or(1).max(j);
            for h in lo..=n {
                cur.push(h);
                rec(n, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_connected(n: usize) -> Vec<Self> {
        Self::all(n).into_iter().filter(Self::is_connected).collect()
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `h(j)` for 1-based `j`.
    pub fn at(&self, j: usize) -> usize {
        self.0[j - 1]
    }

    pub fn is_full(&self) -> bool {
        self.0.iter().all(|&h| h == self.n())
    }

    /// Whether `(i, j)` (1-based) is a staircase box, i.e. `j < i <= h(j)`.
    pub fn contains_box(&self, i: usize, j: usize) -> bool {
        j >= 1 && j <= self.n() && j < i && i <= self.at(j)
    }

    /// Staircase boxes `(i, j)` with `j < i <= h(j)`, 1-based, column by column.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (1..=n).flat_map(|j| (j + 1..=self.at(j)).map(move |i| (i, j))).collect()
    }

    /// `sum_j (h(j) - j)`.
    pub fn complex_dimension(&self) -> usize {
        self.0.iter().enumerate().map(|(j, &h)| h - (j + 1)).sum()
    }

    /// `h(j) >= j + 1` for every `j < n`.
    pub fn is_connected(&self) -> bool {
        self.0.iter().enumerate().take(self.n() - 1).all(|(j, &h)| h > j + 1)
    }

    /// Invariance of the staircase under the anti-diagonal flip `(i, j) -> (n+1-j, n+1-i)`.
    pub fn star_condition(&self) -> bool {
        let n = self.n();
        self.boxes().into_iter().all(|(i, j)| self.contains_box(n + 1 - j, n + 1 - i))
    }

    /// The same condition computed as `h = h'` with `h'(n-j) = n - #{i : h(i) < j+1}`.
    pub fn star_condition_by_transpose(&self) -> bool {
        let n = self.n();
        (0..n).all(|j| {
            let below = self.0.iter().filter(|&&h| h < j + 1).count();
            self.at(n - j) == n - below
        })
    }
}

impl fmt::Display for HessenbergFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Parses `"2,3,3"`.
impl FromStr for HessenbergFunction {
    type Err = GkmError;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| GkmError::Parse(format!("bad Hessenberg function `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// The GKM graph of `Hess(S, h)`: vertices are the permutations of `[n]` in
/// one-line notation; for every `w` and box `(i, j)` there is an edge
/// `w -> w·(i j)` labelled `t_{w(i)} - t_{w(j)}`.
pub fn build_gkm_graph(h: &HessenbergFunction) -> Result<GkmGraph> {
    build_gkm_graph_with_limit(h, GRAPH_GUARD)
}

pub fn build_gkm_graph_with_limit(h: &HessenbergFunction, limit: usize) -> Result<GkmGraph> {
    let n = h.n();
    if n > limit {
        return Err(GkmError::SizeGuard { n, limit });
    }
    let perms = Perm::all(n);
    let index: std::collections::HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let boxes = h.boxes();
    let mut edges = Vec::with_capacity(perms.len() * boxes.len() / 2);
    for (a, w) in perms.iter().enumerate() {
        for &(i, j) in &boxes {
            let v = w.compose(&Perm::transposition(n, i - 1, j - 1));
            let b = index[&v];
            if a < b {
                edges.push((a, b, LinearForm::root(n, w.apply(i - 1), w.apply(j - 1))));
            }
        }
    }
    GkmGraph::from_unordered_edges(n, perms.iter().map(ToString::to_string).collect(), edges)
}

/// Interprets every vertex id of a Hessenberg graph as a permutation.
pub fn vertex_perms(g: &GkmGraph) -> Result<Vec<Perm>> {
    g.vertices().iter().map(|v| Perm::parse(v)).collect()
}
