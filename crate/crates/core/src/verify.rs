//! The acceptance checks, each run over every relevant Hessenberg function up to a size bound.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::{act_on_map, aut_star_with, dot_action, enumerate_aut, expected_automorphisms, phi_sigma, phi_zero};
use crate::cohomology::{
    betti_numbers, binomial, equivariant_basis, equivariant_dimension, x_classes, EquivariantClass, GraphCohomology, Lattice,
};
use crate::error::Result;
use crate::gkm::{Axiom, GkmGraph};
use crate::hessenberg::{build_gkm_graph, build_gkm_graph_with_limit, HessenbergFunction};
use crate::linalg::{Echelon, Matrix};
use crate::perm::Perm;
use crate::poly::{LinearForm, Polynomial};
use crate::unipotent::{cofactor_check, find_witness};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CriterionReport {
    fn new(id: u8, name: &'static str) -> Self {
        CriterionReport { id, name, cases: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb(&mut self, r: Result<(bool, String)>) {
        match r {
            Ok((ok, msg)) => self.record(ok, || msg),
            Err(e) => self.record(false, || e.to_string()),
        }
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "[{verdict}] {} {} ({} cases", self.id, self.name, self.cases)?;
        if !self.passed() {
            write!(f, "; first failure: {}", self.failures[0])?;
        }
        write!(f, ")")
    }
}

fn connected_up_to(ns: impl IntoIterator<Item = usize>) -> Vec<HessenbergFunction> {
    ns.into_iter().flat_map(HessenbergFunction::all_connected).collect()
}

fn range(lo: usize, cap: usize) -> std::ops::RangeInclusive<usize> {
    lo..=cap
}

/// `Aut(Γ_h)` equals `{Φ_σ} ∪ {Φ_σ ∘ Φ_0}` with order `2·n!` or `n!`.
pub fn aut_classification(n_max: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(1, "automorphism classification");
    let results: Vec<_> = connected_up_to(range(3, n_max))
        .par_iter()
        .map(|h| -> Result<(bool, String)> {
            let g = build_gkm_graph(h)?;
            let found = enumerate_aut(&g)?;
            let expected = expected_automorphisms(&g, h)?;
            let order: usize = (1..=h.n()).product::<usize>() * if h.star_condition() { 2 } else { 1 };
            let ok = found == expected && found.len() == order;
            Ok((ok, format!("h = ({h}): found {}, expected {order}", found.len())))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    rep
}

/// Automorphisms acting trivially on ordinary cohomology: `{Φ_σ}` for the full
/// flag variety and only the identity otherwise.
pub fn aut_star_triviality(n_max: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(2, "Aut* triviality");
    let results: Vec<_> = connected_up_to(range(3, n_max))
        .par_iter()
        .map(|h| -> Result<(bool, String)> {
            let g = build_gkm_graph(h)?;
            let auts = enumerate_aut(&g)?;
            let coh = GraphCohomology::compute(&g, h.complex_dimension() as u32)?;
            let star = aut_star_with(&g, &auts, &coh)?;
            let expected: Vec<_> = if h.is_full() {
                let mut v: Vec<_> = Perm::all(h.n()).iter().map(|s| phi_sigma(&g, s)).collect::<Result<_>>()?;
                v.sort();
                v
            } else {
                vec![crate::automorphism::GkmAutomorphism::identity(&g)]
            };
            Ok((star == expected, format!("h = ({h}): |Aut*| = {}, expected {}", star.len(), expected.len())))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    rep
}

/// `#{w : #{boxes (i, j) with w(j) > w(i)} = k}`, the Poincaré polynomial coefficients.
pub fn betti_by_inversions(h: &HessenbergFunction) -> Vec<usize> {
    let boxes = h.boxes();
    let mut b = vec![0; h.complex_dimension() + 1];
    for w in Perm::all(h.n()) {
        let k = boxes.iter().filter(|&&(i, j)| w.apply(j - 1) > w.apply(i - 1)).count();
        b[k] += 1;
    }
    b
}

pub fn betti_numbers_check(n_max: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(3, "Betti numbers");
    let results: Vec<_> = connected_up_to(range(2, n_max))
        .par_iter()
        .map(|h| -> Result<(bool, String)> {
            let b = betti_numbers(&build_gkm_graph(h)?)?;
            let oracle = betti_by_inversions(h);
            let total: usize = b.iter().sum();
            let palindromic = b.iter().eq(b.iter().rev());
            let n_fact: usize = (1..=h.n()).product();
            let ok = b == oracle && b[0] == 1 && b.last() == Some(&1) && palindromic && total == n_fact;
            Ok((ok, format!("h = ({h}): {b:?} vs {oracle:?}")))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    rep
}

/// `dim H_T^{2k} = Σ_j b_{2(k-j)} · C(j + n - 2, n - 2)` for `k <= d + 2`.
pub fn hilbert_identity(n_max: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(4, "equivariant Hilbert series");
    let jobs: Vec<(HessenbergFunction, u32)> = connected_up_to(range(2, n_max))
        .into_iter()
        .flat_map(|h| {
            let d = h.complex_dimension() as u32;
            (0..=d + 2).map(move |k| (h.clone(), k))
        })
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(h, k)| -> Result<(bool, String)> {
            let g = build_gkm_graph(h)?;
            let b = betti_by_inversions(h);
            let n = h.n();
            let k = *k as usize;
            let expected: usize =
                (0..=k).filter(|&j| k - j < b.len()).map(|j| b[k - j] * binomial(j + n - 2, n - 2)).sum();
            let got = equivariant_dimension(&g, Lattice::T, k as u32)?;
            Ok((got == expected, format!("h = ({h}), k = {k}: {got} vs {expected}")))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    rep
}

/// Span membership of the `x̂_i` in `H^2_{T̂}`, `Σ x̂_i = Σ t_i`, `Φ_σ x̂_i = x̂_i`, `Φ_0 x̂_i = -x̂_{n+1-i}`
/// (equivariant level, up to `n_equivariant`), and rank `n - 1` of the ordinary
/// images (up to `n_ordinary`).
pub fn x_class_identities(n_equivariant: usize, n_ordinary: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(5, "x-class identities");
    let results: Vec<_> = connected_up_to(range(2, n_equivariant.max(n_ordinary)))
        .par_iter()
        .map(|h| -> Result<(bool, String)> {
            let n = h.n();
            let g = build_gkm_graph_with_limit(h, n)?;
            let xs = x_classes(&g)?;
            let mut ok = true;
            let mut why = Vec::new();
            if n <= n_equivariant {
                let basis = equivariant_basis(&g, Lattice::THat, 2)?;
                let span = class_span(&g, Lattice::THat, 1, &basis);
                if !xs.iter().all(|x| span.contains(class_row(&g, Lattice::THat, 1, x))) {
                    ok = false;
                    why.push("x̂_i outside H^2_T̂");
                }
                let sum = xs.iter().skip(1).try_fold(xs[0].clone(), |a, x| a.add(x))?;
                let total = (0..n).fold(Polynomial::zero(n), |a, i| &a + &Polynomial::var(n, i));
                if sum != EquivariantClass::constant(&g, Lattice::THat, &total)? {
                    ok = false;
                    why.push("Σ x̂_i is not constant");
                }
                for sigma in Perm::all(n) {
                    let phi = phi_sigma(&g, &sigma)?;
                    if xs.iter().map(|x| act_on_map(&g, &phi, x)).collect::<Result<Vec<_>>>()? != xs {
                        ok = false;
                        why.push("Φ_σ moves some x̂_i");
                        break;
                    }
                }
                if h.star_condition() {
                    let p0 = phi_zero(&g, h)?;
                    for i in 0..n {
                        if act_on_map(&g, &p0, &xs[i])? != xs[n - 1 - i].neg() {
                            ok = false;
                            why.push("Φ_0 x̂_i ≠ -x̂_{n+1-i}");
                            break;
                        }
                    }
                }
            }
            if n <= n_ordinary {
                let coh = GraphCohomology::compute(&g, 1)?;
                let h2 = coh.degree(1).expect("degree 1 computed");
                let rows = xs.iter().map(|x| h2.project(x)).collect::<Result<Vec<_>>>()?;
                if Matrix::from_rows(rows).rank() != n - 1 {
                    ok = false;
                    why.push("ordinary rank ≠ n - 1");
                }
            }
            Ok((ok, format!("h = ({h}): {}", why.join(", "))))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    rep
}

fn class_row(g: &GkmGraph, lattice: Lattice, k: u32, xi: &EquivariantClass) -> crate::linalg::SparseRow {
    let mons = crate::poly::monomials(g.n_vars(), lattice.active_vars(g.n_vars()), k);
    let m = mons.len();
    let v: Vec<_> = xi
        .values
        .iter()
        .enumerate()
        .flat_map(|(p, poly)| {
            let mons = &mons;
            poly.terms().map(move |(e, c)| (p * m + mons.iter().position(|x| x == e).expect("homogeneous"), c.clone()))
        })
        .collect();
    crate::linalg::integer_row(&v)
}

fn class_span(g: &GkmGraph, lattice: Lattice, k: u32, basis: &[EquivariantClass]) -> Echelon {
    let m = crate::poly::monomials(g.n_vars(), lattice.active_vars(g.n_vars()), k).len();
    let mut e = Echelon::new(g.num_vertices() * m);
    for b in basis {
        e.insert(class_row(g, lattice, k, b));
    }
    e
}

/// `τ·ξ = Φ_{τ^{-1}}^* ξ` on a full basis of `H_T^{2k}`, `2k <= 4`, for every `τ`.
pub fn dot_action_identity(n_max: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(6, "dot action");
    let results: Vec<_> = connected_up_to(range(2, n_max))
        .par_iter()
        .map(|h| -> Result<(bool, String)> {
            let g = build_gkm_graph(h)?;
            let taus = Perm::all(h.n());
            let phis = taus.iter().map(|t| phi_sigma(&g, &t.inverse())).collect::<Result<Vec<_>>>()?;
            for deg in [0, 2, 4] {
                for xi in equivariant_basis(&g, Lattice::T, deg)? {
                    for (tau, phi) in taus.iter().zip(&phis) {
                        let dot = dot_action(&g, tau, &xi)?;
                        if dot != act_on_map(&g, phi, &xi)? || !dot.satisfies_congruences(&g)? {
                            return Ok((false, format!("h = ({h}), τ = {tau}, degree {deg}")));
                        }
                    }
                }
            }
            Ok((true, String::new()))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    rep
}

/// Permutation witnesses for every `h != (n, ..., n)` and `(i, j)`, none for the
/// full flag variety, and the cofactor formula on random determinant-one matrices.
pub fn unipotent_witnesses(n_witness: usize, n_full: usize, cofactor_ns: &[usize], samples: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(7, "unipotent non-invariance");
    let mut jobs = Vec::new();
    for n in 2..=n_witness.max(n_full) {
        for h in HessenbergFunction::all(n) {
            if (h.is_full() && n <= n_full) || (!h.is_full() && n <= n_witness) {
                for i in 1..=n {
                    for j in (1..=n).filter(|&j| j != i) {
                        jobs.push((h.clone(), i, j));
                    }
                }
            }
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(h, i, j)| -> Result<(bool, String)> {
            let w = find_witness(h, *i, *j)?;
            Ok((w.is_some() != h.is_full(), format!("h = ({h}), (i, j) = ({i}, {j}): witness {:?}", w.map(|w| w.perm.to_string()))))
        })
        .collect();
    results.into_iter().for_each(|r| rep.absorb(r));
    for &n in cofactor_ns {
        let r = cofactor_check(n, samples, 0x5eed + n as u64).map(|bad| (bad == 0, format!("n = {n}: {bad} cofactor mismatches")));
        rep.absorb(r);
    }
    rep
}

/// For every box `(i, j)` with `i >= j + 2`, the component of `12..n` in the
/// subgraph of labels spanned by `t_{i-1} - t_i` and `t_i - t_j` is `K_{3,3}`.
pub fn k33_subgraphs(n_max: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(8, "K_{3,3} fixed subgraphs");
    for h in connected_up_to(range(3, n_max)) {
        let n = h.n();
        let g = match build_gkm_graph(&h) {
            Ok(g) => g,
            Err(e) => {
                rep.record(false, || e.to_string());
                continue;
            }
        };
        let base = Perm::identity(n).to_string();
        for (i, j) in h.boxes().into_iter().filter(|&(i, j)| i >= j + 2) {
            let span = [LinearForm::root(n, i - 2, i - 1), LinearForm::root(n, i - 1, j - 1)];
            let r = g.fixed_subgraph(&span, &base).map(|s| {
                (s.num_vertices() == 6 && s.is_k33(), format!("h = ({h}), box ({i}, {j}): {} vertices", s.num_vertices()))
            });
            rep.absorb(r);
        }
    }
    let r = build_gkm_graph(&HessenbergFunction::full(3)).map(|g| (g.is_k33(), "Γ_(3,3,3) is not K_{3,3}".to_string()));
    rep.absorb(r);
    rep
}

/// Ways of corrupting a valid graph, each expected to break the named axiom.
pub fn inject_violation(g: &GkmGraph, axiom: Axiom) -> Result<GkmGraph> {
    let mut edges: Vec<(usize, usize, LinearForm)> = g.edges().iter().map(|e| (e.src, e.dst, e.label.clone())).collect();
    let (first, e0) = g.unordered_edges().next().map(|(i, e)| (i, e.clone())).expect("graph has edges");
    let rev = e0.reverse.expect("paired");
    match axiom {
        Axiom::Regular => {
            let (a, b) = (first.min(rev), first.max(rev));
            edges.remove(b);
            edges.remove(a);
        }
        Axiom::Reversal => edges[rev].2 = e0.label.clone(),
        Axiom::PairwiseIndependent => {
            let other = g.out_edges(e0.src).iter().copied().find(|&e| e != first).expect("degree at least two");
            let twice = g.edge(other).label.scale(&crate::rational::int(2));
            edges[first].2 = twice.clone();
            edges[rev].2 = -&twice;
        }
        Axiom::Congruence => {
            let n = g.n_vars();
            let mut c = vec![crate::rational::int(0); n];
            c[0] = crate::rational::int(3);
            c[n - 1] = crate::rational::int(5);
            let skew = &e0.label + &LinearForm::new(c);
            edges[first].2 = skew.clone();
            edges[rev].2 = -&skew;
        }
    }
    GkmGraph::from_oriented_edges(g.n_vars(), g.vertices().to_vec(), edges)
}

/// Every `Γ_h` passes validation, and each injected violation is caught with a witness.
pub fn validation_check(n_max: usize, n_inject: usize) -> CriterionReport {
    let mut rep = CriterionReport::new(9, "GKM axiom validation");
    let all: Vec<_> = (1..=n_max).flat_map(HessenbergFunction::all).collect();
    let results: Vec<_> = all
        .par_iter()
        .map(|h| -> Result<Vec<(bool, String)>> {
            let g = build_gkm_graph(h)?;
            let report = g.validate();
            let mut out = vec![(report.all_passed(), format!("h = ({h}) fails validation"))];
            if h.n() <= n_inject && h.is_connected() && g.degree().unwrap_or(0) >= 2 {
                for axiom in [Axiom::Regular, Axiom::Reversal, Axiom::PairwiseIndependent, Axiom::Congruence] {
                    let bad = inject_violation(&g, axiom)?.validate();
                    let check = bad.check(axiom);
                    out.push((!check.passed && check.witness.is_some(), format!("h = ({h}): injected {axiom:?} not detected")));
                }
            }
            Ok(out)
        })
        .collect();
    for r in results {
        match r {
            Ok(v) => v.into_iter().for_each(|(ok, msg)| rep.record(ok, || msg)),
            Err(e) => rep.record(false, || e.to_string()),
        }
    }
    rep
}

/// Size bounds for [`run_all`].
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub aut: usize,
    pub cohomology: usize,
    pub x_equivariant: usize,
    pub unipotent: usize,
    pub unipotent_full: usize,
    pub validate: usize,
    pub cofactor_samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { aut: 4, cohomology: 4, x_equivariant: 5, unipotent: 5, unipotent_full: 4, validate: 5, cofactor_samples: 1000 }
    }
}

impl Bounds {
    /// Caps every bound at `n`.
    pub fn capped(n: usize) -> Self {
        let d = Self::default();
        Bounds {
            aut: d.aut.min(n),
            cohomology: d.cohomology.min(n),
            x_equivariant: d.x_equivariant.min(n),
            unipotent: d.unipotent.min(n),
            unipotent_full: d.unipotent_full.min(n),
            validate: d.validate.min(n),
            cofactor_samples: d.cofactor_samples,
        }
    }
}

pub fn run_criterion(id: u8, b: &Bounds) -> Option<CriterionReport> {
    let cofactor_ns: Vec<usize> = [3, 4, 5].into_iter().filter(|&n| n <= b.unipotent).collect();
    Some(match id {
        1 => aut_classification(b.aut),
        2 => aut_star_triviality(b.aut),
        3 => betti_numbers_check(b.cohomology),
        4 => hilbert_identity(b.cohomology),
        5 => x_class_identities(b.x_equivariant, b.cohomology),
        6 => dot_action_identity(b.cohomology),
        7 => unipotent_witnesses(b.unipotent, b.unipotent_full, &cofactor_ns, b.cofactor_samples),
        8 => k33_subgraphs(b.aut),
        9 => validation_check(b.validate, b.validate.min(4)),
        _ => return None,
    })
}

pub fn run_all(b: &Bounds) -> Vec<CriterionReport> {
    (1..=9).filter_map(|id| run_criterion(id, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_oracle_examples() {
        assert_eq!(betti_by_inversions(&"2,3,3".parse().unwrap()), vec![1, 4, 1]);
        assert_eq!(betti_by_inversions(&"3,3,3".parse().unwrap()), vec![1, 2, 2, 1]);
    }

    #[test]
    fn small_runs_pass() {
        let b = Bounds::capped(3);
        for r in run_all(&b) {
            assert!(r.passed(), "{r}");
            assert!(r.cases > 0, "{r}");
        }
    }
}
