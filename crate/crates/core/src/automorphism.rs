//! Automorphisms of GKM graphs: pairs `(φ, ϕ)` of a graph automorphism and a
//! lattice automorphism with `α(φ(e)) = ϕ(α(e))` on every oriented edge.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cohomology::{EquivariantClass, GraphCohomology};
use crate::error::{GkmError, Result};
use crate::gkm::GkmGraph;
use crate::hessenberg::{vertex_perms, HessenbergFunction};
use crate::linalg::Matrix;
use crate::perm::Perm;
use crate::poly::{LatticeMap, LinearForm};
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct GkmAutomorphism {
    vertex_map: Vec<usize>,
    lattice_map: LatticeMap,
}

impl GkmAutomorphism {
    /// Checks the compatibility conditions against `g` before accepting the pair.
    pub fn new(g: &GkmGraph, vertex_map: Vec<usize>, lattice_map: LatticeMap) -> Result<Self> {
        let a = GkmAutomorphism { vertex_map, lattice_map };
        if !a.is_automorphism_of(g) {
            return Err(GkmError::MalformedGraph("pair is not an automorphism of the graph".into()));
        }
        Ok(a)
    }

    pub fn identity(g: &GkmGraph) -> Self {
        GkmAutomorphism { vertex_map: (0..g.num_vertices()).collect(), lattice_map: LatticeMap::identity(g.n_vars()) }
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn lattice_map(&self) -> &LatticeMap {
        &self.lattice_map
    }

    pub fn image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GkmAutomorphism) -> GkmAutomorphism {
        GkmAutomorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            lattice_map: self.lattice_map.compose(&other.lattice_map),
        }
    }

    pub fn inverse(&self) -> Result<GkmAutomorphism> {
        let mut inv = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            inv[w] = v;
        }
        Ok(GkmAutomorphism { vertex_map: inv, lattice_map: self.lattice_map.inverse()? })
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v) && self.lattice_map.sum_zero_matrix().is_identity()
    }

    /// `φ` bijective, `ϕ` an automorphism of the sum-zero lattice, and every edge
    /// `p -> q` labelled `λ` sent to an edge `φ(p) -> φ(q)` labelled `ϕ(λ)`.
    pub fn is_automorphism_of(&self, g: &GkmGraph) -> bool {
        let nv = g.num_vertices();
        if self.vertex_map.len() != nv || self.lattice_map.n_vars() != g.n_vars() {
            return false;
        }
        let mut seen = vec![false; nv];
        for &v in &self.vertex_map {
            if v >= nv || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        if !self.lattice_map.is_lattice_automorphism() {
            return false;
        }
        g.edges().iter().all(|e| {
            let label = self.lattice_map.apply_linear(&e.label);
            g.find_edge(self.vertex_map[e.src], self.vertex_map[e.dst], &label).is_some()
        })
    }

    /// Identity of the pair: the vertex map and the restriction of `ϕ` to the sum-zero lattice.
    fn key(&self) -> (&[usize], Matrix) {
        (&self.vertex_map, self.lattice_map.sum_zero_matrix())
    }

    /// `{"vertex_map": {v: v'}, "lattice_map": [[...]]}` with the `n × n` matrix of `ϕ`
    /// on `t_1..t_n`; integral entries are numbers, others strings.
    pub fn to_json_value(&self, g: &GkmGraph) -> Value {
        let vertex_map: BTreeMap<&str, &str> = self
            .vertex_map
            .iter()
            .enumerate()
            .map(|(v, &w)| (g.vertices()[v].as_str(), g.vertices()[w].as_str()))
            .collect();
        let matrix: Vec<Vec<Value>> = self
            .lattice_map
            .matrix()
            .iter()
            .map(|row| {
                row.iter().map(|c| rational::to_i64(c).map_or_else(|| Value::String(rational::to_text(c)), Value::from)).collect()
            })
            .collect();
        json!({ "vertex_map": vertex_map, "lattice_map": matrix })
    }
}

impl PartialEq for GkmAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for GkmAutomorphism {}

impl PartialOrd for GkmAutomorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered by the image of the first vertex, then the rest of the vertex map,
/// then the sum-zero matrix entries.
impl Ord for GkmAutomorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        let (va, ma) = self.key();
        let (vb, mb) = other.key();
        va.cmp(vb).then_with(|| ma.entries().cmp(mb.entries()))
    }
}

/// `Φ_σ`: `w -> σw` and `t_i -> t_{σ(i)}`.
pub fn phi_sigma(g: &GkmGraph, sigma: &Perm) -> Result<GkmAutomorphism> {
    let perms = vertex_perms(g)?;
    if sigma.len() != g.n_vars() {
        return Err(GkmError::ArityMismatch { left: g.n_vars(), right: sigma.len() });
    }
    let vertex_map = perms
        .iter()
        .map(|w| {
            let id = sigma.compose(w).to_string();
            g.vertex_index(&id).ok_or(GkmError::UnknownVertex(id))
        })
        .collect::<Result<_>>()?;
    GkmAutomorphism::new(g, vertex_map, LatticeMap::permutation(sigma.images()))
}

/// `Φ_0`: `w -> w_0 w w_0` and `t_i -> -t_{n+1-i}`. Requires the staircase of `h`
/// to be symmetric under the anti-diagonal flip.
pub fn phi_zero(g: &GkmGraph, h: &HessenbergFunction) -> Result<GkmAutomorphism> {
    if !h.star_condition() {
        return Err(GkmError::StarConditionFails(h.values().to_vec()));
    }
    let n = g.n_vars();
    let w0 = Perm::longest(n);
    let vertex_map = vertex_perms(g)?
        .iter()
        .map(|w| {
            let id = w0.compose(w).compose(&w0).to_string();
            g.vertex_index(&id).ok_or(GkmError::UnknownVertex(id))
        })
        .collect::<Result<_>>()?;
    GkmAutomorphism::new(g, vertex_map, LatticeMap::negated_reversal(n))
}

/// The expected group: `{Φ_σ}` together with `{Φ_σ ∘ Φ_0}` when `Φ_0` exists, sorted.
pub fn expected_automorphisms(g: &GkmGraph, h: &HessenbergFunction) -> Result<Vec<GkmAutomorphism>> {
    let mut out: Vec<GkmAutomorphism> = Perm::all(h.n()).iter().map(|s| phi_sigma(g, s)).collect::<Result<_>>()?;
    if h.star_condition() {
        let p0 = phi_zero(g, h)?;
        let twisted: Vec<_> = out.iter().map(|a| a.compose(&p0)).collect();
        out.extend(twisted);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Coordinates of a sum-zero form in the basis `e_k = t_k - t_n`.
fn sum_zero_coords(l: &LinearForm) -> Vec<Rational> {
    l.coeffs()[..l.n_vars() - 1].to_vec()
}

fn from_sum_zero_coords(c: &[Rational]) -> LinearForm {
    let mut v = c.to_vec();
    v.push(-c.iter().sum::<Rational>());
    LinearForm::new(v)
}

/// All automorphisms of a connected full-rank GKM graph, sorted.
///
/// A base vertex `p0` and `n - 1` independent labels `B` at `p0` are fixed. For
/// every target vertex `q` and every injective assignment of `B` into the star of
/// `q`, the linear map determined by the assignment is tested for integrality,
/// unimodularity and `ϕ(Λ_{p0}) = Λ_q`, then propagated along edges, where each
/// step is forced by the labels.
pub fn enumerate_aut(g: &GkmGraph) -> Result<Vec<GkmAutomorphism>> {
    if !g.is_full_rank() {
        return Err(GkmError::NotFullRank);
    }
    let components = g.component_indices();
    if components.len() > 1 {
        return Err(GkmError::Disconnected(components.len()));
    }
    let n = g.n_vars();
    let r = n - 1;
    let p0 = (0..g.num_vertices()).min_by(|&a, &b| g.vertices()[a].cmp(&g.vertices()[b])).expect("nonempty graph");

    let star0 = g.star(p0);
    let mut basis = Vec::new();
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    for (i, l) in star0.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(sum_zero_coords(l));
        if Matrix::from_rows(trial.clone()).rank() == trial.len() {
            chosen = trial;
            basis.push(i);
        }
        if basis.len() == r {
            break;
        }
    }
    // columns of `b` are the basis labels in sum-zero coordinates
    let b_inv = Matrix::from_rows(chosen).transpose().inverse()?;

    let label_maps: Vec<HashMap<&LinearForm, usize>> = (0..g.num_vertices())
        .map(|v| g.out_edges(v).iter().map(|&e| (&g.edge(e).label, g.edge(e).dst)).collect())
        .collect();
    let d0 = star0.len();

    let mut found: Vec<GkmAutomorphism> = (0..g.num_vertices())
        .into_par_iter()
        .flat_map_iter(|q| {
            let star_q = g.star(q);
            let mut local = Vec::new();
            if star_q.len() != d0 {
                return local;
            }
            let mut pick = Vec::with_capacity(r);
            let mut used = vec![false; d0];
            assign(&mut pick, &mut used, r, &mut |pick: &[usize]| {
                let images = Matrix::from_rows(pick.iter().map(|&j| sum_zero_coords(star_q[j])).collect()).transpose();
                let m = images.mul(&b_inv).expect("square");
                if let Some(a) = try_candidate(g, p0, q, &m, &label_maps) {
                    local.push(a);
                }
            });
            local
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found)
}

/// Calls `f` on every injective sequence of length `k` drawn from `0..used.len()`.
fn assign(pick: &mut Vec<usize>, used: &mut [bool], k: usize, f: &mut impl FnMut(&[usize])) {
    if pick.len() == k {
        f(pick);
        return;
    }
    for j in 0..used.len() {
        if !used[j] {
            used[j] = true;
            pick.push(j);
            assign(pick, used, k, f);
            pick.pop();
            used[j] = false;
        }
    }
}

fn try_candidate(
    g: &GkmGraph,
    p0: usize,
    q: usize,
    m: &Matrix,
    label_maps: &[HashMap<&LinearForm, usize>],
) -> Option<GkmAutomorphism> {
    if !m.entries().all(|c| c.is_integer()) || !rational::is_unit(&m.determinant()) {
        return None;
    }
    let n = g.n_vars();
    let apply = |l: &LinearForm| -> LinearForm {
        from_sum_zero_coords(&m.mul_vec(&sum_zero_coords(l)).expect("dimensions agree"))
    };
    let mut hit = vec![false; g.out_edges(q).len()];
    for &e in g.out_edges(p0) {
        let img = apply(&g.edge(e).label);
        let j = g.out_edges(q).iter().position(|&f| g.edge(f).label == img)?;
        if std::mem::replace(&mut hit[j], true) {
            return None;
        }
    }

    let nv = g.num_vertices();
    let mut phi = vec![usize::MAX; nv];
    phi[p0] = q;
    let mut queue = VecDeque::from([p0]);
    while let Some(p) = queue.pop_front() {
        for &e in g.out_edges(p) {
            let edge = g.edge(e);
            let target = *label_maps[phi[p]].get(&apply(&edge.label))?;
            if phi[edge.dst] == usize::MAX {
                phi[edge.dst] = target;
                queue.push_back(edge.dst);
            } else if phi[edge.dst] != target {
                return None;
            }
        }
    }
    let images: Vec<LinearForm> = (0..n - 1).map(|k| apply(&LinearForm::root(n, k, n - 1))).collect();
    let lattice_map = LatticeMap::from_sum_zero_images(&images).ok()?;
    let a = GkmAutomorphism { vertex_map: phi, lattice_map };
    a.is_automorphism_of(g).then_some(a)
}

/// `a^* ξ`, given by `p -> ϕ^{-1}(ξ(φ(p)))`. This is a right action:
/// acting by `a ∘ b` equals acting by `a` and then by `b`.
pub fn act_on_map(g: &GkmGraph, a: &GkmAutomorphism, xi: &EquivariantClass) -> Result<EquivariantClass> {
    if xi.values.len() != g.num_vertices() || a.vertex_map.len() != g.num_vertices() {
        return Err(GkmError::ClassMismatch("automorphism and class live on different graphs".into()));
    }
    let inv = a.lattice_map.inverse()?;
    let values = (0..g.num_vertices())
        .map(|p| inv.apply(&xi.values[a.vertex_map[p]]).map(|v| xi.lattice.prepare(&v)))
        .collect::<Result<_>>()?;
    Ok(EquivariantClass { lattice: xi.lattice, degree: xi.degree, values })
}

/// The dot action `(τ·ξ)(w) = τ(ξ(τ^{-1} w))` on a Hessenberg graph, computed directly.
pub fn dot_action(g: &GkmGraph, tau: &Perm, xi: &EquivariantClass) -> Result<EquivariantClass> {
    let perms = vertex_perms(g)?;
    let tau_inv = tau.inverse();
    let map = LatticeMap::permutation(tau.images());
    let values = perms
        .iter()
        .map(|w| {
            let id = tau_inv.compose(w).to_string();
            let src = g.vertex_index(&id).ok_or(GkmError::UnknownVertex(id))?;
            map.apply(&xi.values[src]).map(|v| xi.lattice.prepare(&v))
        })
        .collect::<Result<_>>()?;
    Ok(EquivariantClass { lattice: xi.lattice, degree: xi.degree, values })
}

/// The automorphisms in `auts` that act trivially on ordinary `H^{2k}` for every `k <= max_degree`.
pub fn aut_star(g: &GkmGraph, auts: &[GkmAutomorphism], max_degree: u32) -> Result<Vec<GkmAutomorphism>> {
    let coh = GraphCohomology::compute(g, max_degree)?;
    aut_star_with(g, auts, &coh)
}

pub fn aut_star_with(g: &GkmGraph, auts: &[GkmAutomorphism], coh: &GraphCohomology) -> Result<Vec<GkmAutomorphism>> {
    let flags: Vec<bool> = auts
        .par_iter()
        .map(|a| {
            for basis in &coh.degrees {
                if !crate::cohomology::action_matrix(g, a, basis)?.is_identity() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(auts.iter().zip(flags).filter(|(_, keep)| *keep).map(|(a, _)| a.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hessenberg::build_gkm_graph;

    fn setup(s: &str) -> (HessenbergFunction, GkmGraph) {
        let h: HessenbergFunction = s.parse().unwrap();
        let g = build_gkm_graph(&h).unwrap();
        (h, g)
    }

    #[test]
    fn phi_maps_are_automorphisms() {
        let (h, g) = setup("2,3,3");
        for s in Perm::all(3) {
            assert!(phi_sigma(&g, &s).unwrap().is_automorphism_of(&g));
        }
        let p0 = phi_zero(&g, &h).unwrap();
        assert!(p0.compose(&p0).is_identity());
    }

    #[test]
    fn phi_zero_needs_symmetry() {
        let (h, g) = setup("3,3,4,4");
        assert!(matches!(phi_zero(&g, &h), Err(GkmError::StarConditionFails(_))));
    }

    #[test]
    fn hexagon_group_has_order_twelve() {
        let (h, g) = setup("2,3,3");
        let auts = enumerate_aut(&g).unwrap();
        assert_eq!(auts.len(), 12);
        assert_eq!(auts, expected_automorphisms(&g, &h).unwrap());
    }

    #[test]
    fn full_flag_three() {
        let (h, g) = setup("3,3,3");
        let auts = enumerate_aut(&g).unwrap();
        assert_eq!(auts, expected_automorphisms(&g, &h).unwrap());
        assert_eq!(auts.len(), 12);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let (_, g) = setup("1,3,3");
        assert!(matches!(enumerate_aut(&g), Err(GkmError::NotFullRank | GkmError::Disconnected(_))));
    }

    #[test]
    fn action_is_contravariant() {
        let (h, g) = setup("2,3,3");
        let auts = expected_automorphisms(&g, &h).unwrap();
        let xi = crate::cohomology::x_classes(&g).unwrap()[0].to_lattice(crate::cohomology::Lattice::T).unwrap();
        for a in &auts {
            for b in auts.iter().step_by(3) {
                let lhs = act_on_map(&g, &a.compose(b), &xi).unwrap();
                let rhs = act_on_map(&g, b, &act_on_map(&g, a, &xi).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn json_shape() {
        let (_, g) = setup("2,3,3");
        let a = phi_sigma(&g, &Perm::parse("213").unwrap()).unwrap();
        let v = a.to_json_value(&g);
        assert_eq!(v["vertex_map"]["123"], "213");
        assert_eq!(v["lattice_map"][0], json!([0, 1, 0]));
    }
}
