//! Equivariant and ordinary graph cohomology over the rationals.
//!
//! A degree-`2k` equivariant class assigns to each vertex a homogeneous polynomial
//! of degree `k`; along every edge the difference of the endpoint values must be
//! divisible by the edge label. Two coefficient rings are supported:
//!
//! * [`Lattice::T`]: `H*(BT)` for the sum-zero lattice, represented by normal forms
//!   in `t_1..t_{n-1}` (`t_n = -(t_1 + ... + t_{n-1})`);
//! * [`Lattice::THat`]: all of `Q[t_1..t_n]`.
//!
//! Ordinary cohomology is computed degree by degree as the quotient of the
//! `T`-equivariant classes by the span of `t_a · ξ` for classes `ξ` one degree lower.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::automorphism::{act_on_map, GkmAutomorphism};
use crate::error::{GkmError, Result};
use crate::gkm::GkmGraph;
use crate::hessenberg::vertex_perms;
use crate::linalg::{integer_row, Echelon, Matrix};
use crate::poly::{monomials, Exponent, LinearForm, Polynomial};
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Lattice {
    /// Sum-zero characters, i.e. `H^2(BT)`.
    T,
    /// All characters `t_1..t_n`, i.e. `H^2(BT̂)`.
    THat,
}

impl Lattice {
    /// Number of free variables used for coefficients.
    pub fn active_vars(self, n: usize) -> usize {
        match self {
            Lattice::T => n - 1,
            Lattice::THat => n,
        }
    }

    /// Brings a polynomial into this lattice's coordinates.
    pub fn prepare(self, p: &Polynomial) -> Polynomial {
        match self {
            Lattice::T => p.normal_form_t(),
            Lattice::THat => p.clone(),
        }
    }

    pub fn prepare_form(self, l: &LinearForm) -> LinearForm {
        match self {
            Lattice::T => l.normal_form_t(),
            Lattice::THat => l.clone(),
        }
    }

    /// `C(k + m - 1, m - 1)` with `m` free variables.
    pub fn dimension_of_degree(self, n: usize, k: u32) -> usize {
        let m = self.active_vars(n);
        if m == 0 {
            return usize::from(k == 0);
        }
        binomial(k as usize + m - 1, m - 1)
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// A map from vertices to homogeneous polynomials of degree `degree` (cohomological degree `2·degree`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivariantClass {
    pub lattice: Lattice,
    pub degree: u32,
    pub values: Vec<Polynomial>,
}

impl EquivariantClass {
    pub fn new(lattice: Lattice, degree: u32, values: Vec<Polynomial>) -> Result<Self> {
        for p in &values {
            if let Some(d) = p.homogeneous_degree()? {
                if d != degree {
                    return Err(GkmError::ClassMismatch(format!("value of degree {d} in a degree-{degree} class")));
                }
            }
        }
        let values = values.iter().map(|p| lattice.prepare(p)).collect();
        Ok(EquivariantClass { lattice, degree, values })
    }

    /// The constant class with value `p` at every vertex.
    pub fn constant(g: &GkmGraph, lattice: Lattice, p: &Polynomial) -> Result<Self> {
        let degree = p.homogeneous_degree()?.unwrap_or(0);
        Self::new(lattice, degree, vec![p.clone(); g.num_vertices()])
    }

    pub fn zero(g: &GkmGraph, lattice: Lattice, degree: u32) -> Self {
        EquivariantClass { lattice, degree, values: vec![Polynomial::zero(g.n_vars()); g.num_vertices()] }
    }

    pub fn cohomological_degree(&self) -> u32 {
        2 * self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Polynomial::is_zero)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.lattice != other.lattice || self.values.len() != other.values.len() {
            return Err(GkmError::ClassMismatch("classes live on different graphs or lattices".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(GkmError::ClassMismatch("degrees differ".into()));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(EquivariantClass { lattice: self.lattice, degree, values })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        EquivariantClass { lattice: self.lattice, degree: self.degree, values: self.values.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    /// Multiplication by a constant homogeneous polynomial.
    pub fn mul_constant(&self, p: &Polynomial) -> Result<Self> {
        let d = p.homogeneous_degree()?.unwrap_or(0);
        let values = self.values.iter().map(|v| v.checked_mul(p).map(|x| self.lattice.prepare(&x))).collect::<Result<_>>()?;
        Ok(EquivariantClass { lattice: self.lattice, degree: self.degree + d, values })
    }

    /// Re-expresses the class in another coefficient lattice (`THat -> T` applies the normal form).
    pub fn to_lattice(&self, lattice: Lattice) -> Result<Self> {
        match (self.lattice, lattice) {
            (a, b) if a == b => Ok(self.clone()),
            (Lattice::THat, Lattice::T) => Ok(EquivariantClass {
                lattice,
                degree: self.degree,
                values: self.values.iter().map(Polynomial::normal_form_t).collect(),
            }),
            _ => Err(GkmError::ClassMismatch("cannot lift a T-class to T̂ canonically".into())),
        }
    }

    /// Checks every edge congruence directly by polynomial divisibility.
    pub fn satisfies_congruences(&self, g: &GkmGraph) -> Result<bool> {
        if self.values.len() != g.num_vertices() {
            return Err(GkmError::ClassMismatch(format!("{} values for {} vertices", self.values.len(), g.num_vertices())));
        }
        for (_, e) in g.unordered_edges() {
            let diff = self.values[e.src].checked_sub(&self.values[e.dst])?;
            if !self.lattice.prepare(&diff).divisible_by_linear(&self.lattice.prepare_form(&e.label))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(vertex, value)` rows in canonical text form.
    pub fn table(&self, g: &GkmGraph) -> Vec<(String, String)> {
        g.vertices().iter().cloned().zip(self.values.iter().map(ToString::to_string)).collect()
    }
}

type SparseVector = Vec<(usize, Rational)>;

/// Monomial coordinates for degree-`k` values in a lattice; vectors are indexed vertex-major.
#[derive(Clone, Debug)]
struct Coordinates {
    lattice: Lattice,
    n: usize,
    degree: u32,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl Coordinates {
    fn new(lattice: Lattice, n: usize, degree: u32) -> Self {
        let monomials = monomials(n, lattice.active_vars(n), degree);
        let index = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Coordinates { lattice, n, degree, monomials, index }
    }

    fn width(&self) -> usize {
        self.monomials.len()
    }

    fn to_vector(&self, xi: &EquivariantClass) -> Result<Vec<(usize, Rational)>> {
        if xi.lattice != self.lattice {
            return Err(GkmError::ClassMismatch("lattice mismatch".into()));
        }
        let m = self.width();
        let mut out = Vec::new();
        for (v, p) in xi.values.iter().enumerate() {
            for (e, c) in p.terms() {
                let j = self
                    .index
                    .get(e)
                    .ok_or_else(|| GkmError::ClassMismatch(format!("monomial {e:?} is not of degree {}", self.degree)))?;
                out.push((v * m + j, c.clone()));
            }
        }
        out.sort_by_key(|(j, _)| *j);
        Ok(out)
    }

    fn to_class(&self, num_vertices: usize, v: &[(usize, Rational)]) -> EquivariantClass {
        let m = self.width();
        let mut values = vec![Polynomial::zero(self.n); num_vertices];
        for (j, c) in v {
            values[j / m].add_term(self.monomials[j % m].clone(), c.clone());
        }
        EquivariantClass { lattice: self.lattice, degree: self.degree, values }
    }
}

/// Rows expressing "the difference across each edge vanishes on the hyperplane of its label".
fn congruence_rows(g: &GkmGraph, coords: &Coordinates) -> Vec<Vec<(usize, Rational)>> {
    let m = coords.width();
    let mut cache: HashMap<LinearForm, Vec<Polynomial>> = HashMap::new();
    let mut rows = Vec::new();
    for (_, e) in g.unordered_edges() {
        let label = coords.lattice.prepare_form(&e.label);
        let key = label.direction();
        let restricted = cache.entry(key.clone()).or_insert_with(|| {
            let images = key.hyperplane_substitution().expect("labels are nonzero");
            coords
                .monomials
                .iter()
                .map(|mono| Polynomial::monomial(mono.clone(), Rational::from_integer(1.into())).substitute(&images).unwrap())
                .collect()
        });
        let mut by_output: HashMap<&Exponent, Vec<(usize, Rational)>> = HashMap::new();
        for (j, poly) in restricted.iter().enumerate() {
            for (out, c) in poly.terms() {
                let entry = by_output.entry(out).or_default();
                entry.push((e.src * m + j, c.clone()));
                entry.push((e.dst * m + j, -c.clone()));
            }
        }
        let mut edge_rows: Vec<_> = by_output.into_iter().collect();
        edge_rows.sort_by(|a, b| a.0.cmp(b.0));
        for (_, mut row) in edge_rows {
            row.sort_by_key(|(j, _)| *j);
            rows.push(row);
        }
    }
    rows
}

fn solve_degree(g: &GkmGraph, lattice: Lattice, k: u32) -> Result<(Coordinates, Vec<SparseVector>)> {
    if g.edges().iter().any(|e| lattice.prepare_form(&e.label).is_zero()) {
        return Err(GkmError::ZeroLinearForm);
    }
    let coords = Coordinates::new(lattice, g.n_vars(), k);
    let mut echelon = Echelon::new(g.num_vertices() * coords.width());
    for row in congruence_rows(g, &coords) {
        echelon.insert(integer_row(&row));
    }
    let kernel = echelon.kernel_basis();
    Ok((coords, kernel))
}

/// A `Q`-basis of `H^{degree_2k}_T(Γ, α)`; odd degrees give an empty basis.
pub fn equivariant_basis(g: &GkmGraph, lattice: Lattice, degree_2k: usize) -> Result<Vec<EquivariantClass>> {
    if degree_2k % 2 == 1 {
        return Ok(Vec::new());
    }
    let (coords, kernel) = solve_degree(g, lattice, (degree_2k / 2) as u32)?;
    Ok(kernel.iter().map(|v| coords.to_class(g.num_vertices(), v)).collect())
}

/// `dim H^{2k}_T` without materialising the classes.
pub fn equivariant_dimension(g: &GkmGraph, lattice: Lattice, k: u32) -> Result<usize> {
    Ok(solve_degree(g, lattice, k)?.1.len())
}

/// Degree-`2k` data: the `T`-equivariant basis and a projection onto ordinary cohomology.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: u32,
    pub equivariant_basis: Vec<EquivariantClass>,
    pub ordinary_dimension: usize,
    /// Indices into `equivariant_basis` whose images form the basis of `H^{2k}`.
    pub representatives: Vec<usize>,
    coords: Coordinates,
    num_vertices: usize,
    projector: Echelon,
    main: usize,
}

impl CohomologyBasis {
    fn build(g: &GkmGraph, degree: u32, basis: Vec<EquivariantClass>, lower: Option<&[EquivariantClass]>) -> Result<Self> {
        let n = g.n_vars();
        let coords = Coordinates::new(Lattice::T, n, degree);
        let main = g.num_vertices() * coords.width();
        let dim = basis.len();
        let mut projector = Echelon::new(main + dim + 1);
        if let Some(lower) = lower {
            for xi in lower {
                for a in 0..Lattice::T.active_vars(n) {
                    let moved = xi.mul_constant(&Polynomial::var(n, a))?;
                    projector.insert(integer_row(&coords.to_vector(&moved)?));
                }
            }
        }
        let mut representatives = Vec::new();
        for (i, xi) in basis.iter().enumerate() {
            let mut row = coords.to_vector(xi)?;
            row.push((main + i, Rational::from_integer(1.into())));
            let reduced = projector.reduce(integer_row(&row));
            if reduced.first().is_some_and(|(c, _)| *c < main) {
                projector.insert(reduced);
                representatives.push(i);
            }
        }
        Ok(CohomologyBasis {
            degree,
            ordinary_dimension: representatives.len(),
            equivariant_basis: basis,
            representatives,
            coords,
            num_vertices: g.num_vertices(),
            projector,
            main,
        })
    }

    /// Classes whose images form the chosen basis of ordinary `H^{2k}`.
    pub fn representative_classes(&self) -> Vec<&EquivariantClass> {
        self.representatives.iter().map(|&i| &self.equivariant_basis[i]).collect()
    }

    /// Coordinates of the image of `xi` in ordinary cohomology.
    pub fn project(&self, xi: &EquivariantClass) -> Result<Vec<Rational>> {
        let xi = xi.to_lattice(Lattice::T)?;
        if xi.values.len() != self.num_vertices {
            return Err(GkmError::ClassMismatch("class lives on a different graph".into()));
        }
        if xi.is_zero() {
            return Ok(vec![Rational::zero(); self.ordinary_dimension]);
        }
        if xi.degree != self.degree {
            return Err(GkmError::ClassMismatch(format!("degree {} class projected in degree {}", xi.degree, self.degree)));
        }
        let self_col = self.main + self.equivariant_basis.len();
        let mut row = self.coords.to_vector(&xi)?;
        row.push((self_col, Rational::from_integer(1.into())));
        let reduced = self.projector.reduce(integer_row(&row));
        if reduced.first().is_some_and(|(c, _)| *c < self.main) {
            return Err(GkmError::ClassMismatch("not an equivariant class of this graph".into()));
        }
        let alpha = reduced.iter().find(|(c, _)| *c == self_col).map(|(_, v)| v.clone()).expect("scale column survives");
        let mut out = vec![Rational::zero(); self.ordinary_dimension];
        for (slot, &i) in self.representatives.iter().enumerate() {
            if let Some((_, v)) = reduced.iter().find(|(c, _)| *c == self.main + i) {
                out[slot] = -Rational::new(v.clone(), alpha.clone());
            }
        }
        Ok(out)
    }
}

/// Ordinary cohomology `H^{2k}(Γ, α) ⊗ Q` for `k = 0..=max_degree`.
#[derive(Clone, Debug)]
pub struct GraphCohomology {
    pub degrees: Vec<CohomologyBasis>,
}

impl GraphCohomology {
    pub fn compute(g: &GkmGraph, max_degree: u32) -> Result<Self> {
        let bases: Vec<Vec<EquivariantClass>> = (0..=max_degree)
            .into_par_iter()
            .map(|k| equivariant_basis(g, Lattice::T, 2 * k as usize))
            .collect::<Result<_>>()?;
        let degrees = (0..=max_degree as usize)
            .into_par_iter()
            .map(|k| {
                let lower = (k > 0).then(|| bases[k - 1].as_slice());
                CohomologyBasis::build(g, k as u32, bases[k].clone(), lower)
            })
            .collect::<Result<_>>()?;
        Ok(GraphCohomology { degrees })
    }

    pub fn degree(&self, k: u32) -> Option<&CohomologyBasis> {
        self.degrees.get(k as usize)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.ordinary_dimension).collect()
    }
}

/// `(b_0, b_2, ..., b_{2d})` up to the top nonvanishing degree.
pub fn betti_numbers(g: &GkmGraph) -> Result<Vec<usize>> {
    let components = g.component_indices();
    if components.len() > 1 {
        return Err(GkmError::Disconnected(components.len()));
    }
    let top = g.degree().ok_or_else(|| GkmError::MalformedGraph("graph is not regular".into()))?;
    let mut b = GraphCohomology::compute(g, top as u32)?.betti();
    while b.len() > 1 && b.last() == Some(&0) {
        b.pop();
    }
    Ok(b)
}

/// The classes `x̂_i(w) = t_{w(i)}` on a Hessenberg graph, in the `T̂` lattice.
pub fn x_classes(g: &GkmGraph) -> Result<Vec<EquivariantClass>> {
    let perms = vertex_perms(g)?;
    let n = g.n_vars();
    (0..n)
        .map(|i| EquivariantClass::new(Lattice::THat, 1, perms.iter().map(|w| Polynomial::var(n, w.apply(i))).collect()))
        .collect()
}

/// Matrix of the induced action of `a` on ordinary `H^{2k}` in the basis of `basis`;
/// column `c` holds the coordinates of `a^*` applied to representative `c`.
pub fn action_matrix(g: &GkmGraph, a: &GkmAutomorphism, basis: &CohomologyBasis) -> Result<Matrix> {
    let d = basis.ordinary_dimension;
    let mut m = Matrix::zeros(d, d);
    for (c, xi) in basis.representative_classes().into_iter().enumerate() {
        let image = act_on_map(g, a, xi)?;
        for (r, v) in basis.project(&image)?.into_iter().enumerate() {
            m.set(r, c, v);
        }
    }
    Ok(m)
}
