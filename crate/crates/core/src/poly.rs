//! Multivariate polynomials over the rationals in `t_1, ..., t_n`, linear forms,
//! and linear substitutions of the generators (lattice maps).
//!
//! Variables are 0-based internally: variable `i` prints as `t{i+1}`.
//! Polynomial degree `k` corresponds to cohomological degree `2k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{GkmError, Result};
use crate::rational::{self, Rational};

/// Upper bound on the number of variables.
pub const MAX_VARS: usize = 8;

pub type Exponent = Vec<u32>;

fn check_arity(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VARS {
        return Err(GkmError::TooManyVariables(n, MAX_VARS));
    }
    Ok(())
}

/// Graded lexicographic comparison; `Greater` means "comes first" when printing.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// Exponent vectors of total degree `degree` in the first `active` of `n` variables,
/// in decreasing graded-lex order.
pub fn monomials(n: usize, active: usize, degree: u32) -> Vec<Exponent> {
    fn rec(pos: usize, active: usize, left: u32, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if pos + 1 == active {
            cur[pos] = left;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[pos] = e;
            rec(pos + 1, active, left - e, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if active == 0 {
        if degree == 0 {
            out.push(vec![0; n]);
        }
        return out;
    }
    rec(0, active, degree, &mut vec![0; n], &mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    n_vars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn zero(n_vars: usize) -> Self {
        Polynomial { n_vars, terms: BTreeMap::new() }
    }

    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rational::one())
    }

    /// The generator `t_{i+1}`.
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable index {i} out of range");
        let mut e = vec![0; n_vars];
        e[i] = 1;
        let mut p = Self::zero(n_vars);
        p.add_term(e, Rational::one());
        p
    }

    pub fn monomial(exponent: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exponent.len());
        p.add_term(exponent, c);
        p
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Result<Self> {
        check_arity(n_vars)?;
        let mut p = Self::zero(n_vars);
        for (e, c) in terms {
            if e.len() != n_vars {
                return Err(GkmError::ArityMismatch { left: n_vars, right: e.len() });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * t^e` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        debug_assert_eq!(e.len(), self.n_vars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree when all terms share it; `None` for the zero polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let Some(d) = degs.next() else { return Ok(None) };
        if degs.all(|x| x == d) {
            Ok(Some(d))
        } else {
            Err(GkmError::NotHomogeneous)
        }
    }

    fn same_arity(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(GkmError::ArityMismatch { left: self.n_vars, right: other.n_vars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_arity(other)?;
        let mut out = Self::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        Polynomial {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Ring homomorphism sending `t_i` to `images[i]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self> {
        if images.len() != self.n_vars {
            return Err(GkmError::ArityMismatch { left: self.n_vars, right: images.len() });
        }
        let target = images.first().map_or(self.n_vars, |p| p.n_vars);
        if let Some(bad) = images.iter().find(|p| p.n_vars != target) {
            return Err(GkmError::ArityMismatch { left: target, right: bad.n_vars });
        }
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][k as usize];
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        Ok(out)
    }

    /// Canonical representative modulo `t_1 + ... + t_n`, obtained by substituting
    /// `t_n -> -(t_1 + ... + t_{n-1})`.
    pub fn normal_form_t(&self) -> Self {
        let n = self.n_vars;
        if self.terms.keys().all(|e| e[n - 1] == 0) {
            return self.clone();
        }
        let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
        let mut last = Polynomial::zero(n);
        for i in 0..n - 1 {
            last.add_term(unit_exponent(n, i), -Rational::one());
        }
        images[n - 1] = last;
        self.substitute(&images).expect("arity checked")
    }

    /// Whether the linear form `l` divides `self` in `Q[t_1..t_n]`.
    ///
    /// Restricts to the hyperplane `l = 0` by eliminating one variable and tests
    /// whether the result vanishes identically.
    pub fn divisible_by_linear(&self, l: &LinearForm) -> Result<bool> {
        if l.n_vars() != self.n_vars {
            return Err(GkmError::ArityMismatch { left: self.n_vars, right: l.n_vars() });
        }
        let images = l.hyperplane_substitution()?;
        Ok(self.substitute(&images)?.is_zero())
    }

    /// Linear part as a `LinearForm` if the polynomial is homogeneous of degree one (or zero).
    pub fn to_linear_form(&self) -> Option<LinearForm> {
        let mut coeffs = vec![Rational::zero(); self.n_vars];
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() != 1 {
                return None;
            }
            let i = e.iter().position(|&x| x == 1)?;
            coeffs[i] = c.clone();
        }
        Some(LinearForm { coeffs })
    }
}

fn unit_exponent(n: usize, i: usize) -> Exponent {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial arity mismatch")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial arity mismatch")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32]) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "t{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

/// Canonical text: terms in decreasing graded-lex order, e.g. `t1^2 - t2^2`, `-1/2*t1*t3`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let constant = e.iter().all(|&k| k == 0);
            if constant {
                f.write_str(&rational::to_text(&abs))?;
            } else {
                if !abs.is_one() {
                    write!(f, "{}*", rational::to_text(&abs))?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

/// A linear form `sum_i c_i t_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinearForm { coeffs: coeffs.iter().map(|&c| rational::int(c)).collect() }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![Rational::zero(); n] }
    }

    /// `t_{a+1} - t_{b+1}`.
    pub fn root(n: usize, a: usize, b: usize) -> Self {
        let mut l = Self::zero(n);
        l.coeffs[a] += Rational::one();
        l.coeffs[b] -= Rational::one();
        l
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut l = Self::zero(n);
        l.coeffs[i] = Rational::one();
        l
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_sum_zero(&self) -> bool {
        self.coeffs.iter().fold(Rational::zero(), |a, c| a + c).is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LinearForm { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Whether `self` and `other` are linearly dependent (a zero form is dependent on anything).
    pub fn is_proportional(&self, other: &LinearForm) -> bool {
        let n = self.coeffs.len();
        for i in 0..n {
            for j in i + 1..n {
                let det = &self.coeffs[i] * &other.coeffs[j] - &self.coeffs[j] * &other.coeffs[i];
                if !det.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let n = self.coeffs.len();
        let mut p = Polynomial::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            p.add_term(unit_exponent(n, i), c.clone());
        }
        p
    }

    pub fn normal_form_t(&self) -> Self {
        let n = self.coeffs.len();
        let last = self.coeffs[n - 1].clone();
        let mut coeffs: Vec<Rational> = self.coeffs[..n - 1].iter().map(|c| c - &last).collect();
        coeffs.push(Rational::zero());
        LinearForm { coeffs }
    }

    /// Rescaled so the first nonzero coefficient is positive and the form is a
    /// primitive integer vector; equal for proportional nonzero forms.
    pub fn direction(&self) -> LinearForm {
        use num_integer::Integer;
        let Some(first) = self.coeffs.iter().find(|c| !c.is_zero()) else {
            return self.clone();
        };
        let den = self.coeffs.iter().fold(num_bigint::BigInt::one(), |a, c| a.lcm(c.denom()));
        let ints: Vec<num_bigint::BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::zero(), |a, c| a.gcd(c));
        let sign = if first.is_negative() { -num_bigint::BigInt::one() } else { num_bigint::BigInt::one() };
        LinearForm { coeffs: ints.into_iter().map(|c| Rational::from_integer(c * &sign / &g)).collect() }
    }

    /// Index of the variable solved for when restricting to the hyperplane `self = 0`:
    /// the last variable with a unit coefficient, else the last nonzero one.
    pub fn pivot_variable(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(rational::is_unit)
            .or_else(|| self.coeffs.iter().rposition(|c| !c.is_zero()))
    }

    /// Images of the generators under the parametrisation of `{self = 0}` that
    /// solves for `pivot_variable`.
    pub fn hyperplane_substitution(&self) -> Result<Vec<Polynomial>> {
        let m = self.pivot_variable().ok_or(GkmError::ZeroLinearForm)?;
        let n = self.coeffs.len();
        let mut images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(n, i)).collect();
        let lead = self.coeffs[m].clone();
        let mut solved = Polynomial::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i != m {
                solved.add_term(unit_exponent(n, i), -(c / &lead));
            }
        }
        images[m] = solved;
        Ok(images)
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl<'a> Add<&'a LinearForm> for &'a LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &'a LinearForm) -> LinearForm {
        assert_eq!(self.n_vars(), rhs.n_vars());
        LinearForm { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a LinearForm> for &'a LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &'a LinearForm) -> LinearForm {
        assert_eq!(self.n_vars(), rhs.n_vars());
        LinearForm { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_polynomial().fmt(f)
    }
}

/// A linear substitution of the generators `t_1..t_n`, stored as the matrix whose
/// column `j` holds the coefficients of the image of `t_{j+1}`.
///
/// Automorphisms of the sum-zero lattice are extended to all of `t_1..t_n` by
/// [`LatticeMap::from_sum_zero_images`].
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LatticeMap {
    columns: Vec<LinearForm>,
}

impl LatticeMap {
    pub fn from_images(images: Vec<LinearForm>) -> Result<Self> {
        let n = images.len();
        check_arity(n)?;
        if let Some(bad) = images.iter().find(|l| l.n_vars() != n) {
            return Err(GkmError::ArityMismatch { left: n, right: bad.n_vars() });
        }
        Ok(LatticeMap { columns: images })
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap { columns: (0..n).map(|i| LinearForm::var(n, i)).collect() }
    }

    /// `t_i -> t_{sigma(i)}` (0-based one-line `sigma`).
    pub fn permutation(sigma: &[usize]) -> Self {
        let n = sigma.len();
        LatticeMap { columns: sigma.iter().map(|&s| LinearForm::var(n, s)).collect() }
    }

    /// `t_i -> -t_{n+1-i}`.
    pub fn negated_reversal(n: usize) -> Self {
        LatticeMap { columns: (0..n).map(|i| -&LinearForm::var(n, n - 1 - i)).collect() }
    }

    /// Extends a map given on the basis `e_k = t_k - t_n` (k < n) of the sum-zero
    /// lattice. The image of `t_1 + ... + t_n` is chosen as `+-(t_1 + ... + t_n)`,
    /// preferring the sign that keeps the matrix integral (plus when both or neither do).
    pub fn from_sum_zero_images(images: &[LinearForm]) -> Result<Self> {
        let n = images.len() + 1;
        check_arity(n)?;
        let sum_images = images.iter().fold(LinearForm::zero(n), |a, l| &a + l);
        let all = LinearForm::new(vec![Rational::one(); n]);
        let build = |sign: i64| -> LatticeMap {
            let last = (&all.scale(&rational::int(sign)) - &sum_images).scale(&rational::frac(1, n as i64));
            let mut columns: Vec<LinearForm> = images.iter().map(|f| f + &last).collect();
            columns.push(last);
            LatticeMap { columns }
        };
        let plus = build(1);
        if plus.is_integral() {
            return Ok(plus);
        }
        let minus = build(-1);
        if minus.is_integral() {
            return Ok(minus);
        }
        Ok(plus)
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    /// Image of `t_{j+1}`.
    pub fn image(&self, j: usize) -> &LinearForm {
        &self.columns[j]
    }

    /// Row-major matrix entries: `entry(i, j)` is the coefficient of `t_i` in the image of `t_j`.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let n = self.n_vars();
        (0..n).map(|i| (0..n).map(|j| self.columns[j].coeffs()[i].clone()).collect()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.columns.iter().all(LinearForm::is_integral)
    }

    pub fn apply_linear(&self, l: &LinearForm) -> LinearForm {
        let n = self.n_vars();
        let mut out = LinearForm::zero(n);
        for (j, c) in l.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out = &out + &self.columns[j].scale(c);
            }
        }
        out
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let images: Vec<Polynomial> = self.columns.iter().map(LinearForm::to_polynomial).collect();
        p.substitute(&images)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        LatticeMap { columns: other.columns.iter().map(|c| self.apply_linear(c)).collect() }
    }

    pub fn inverse(&self) -> Result<LatticeMap> {
        let m = crate::linalg::Matrix::from_rows(self.matrix());
        let inv = m.inverse()?;
        let n = self.n_vars();
        Ok(LatticeMap { columns: (0..n).map(|j| LinearForm::new((0..n).map(|i| inv.get(i, j).clone()).collect())).collect() })
    }

    /// Whether sum-zero forms map to sum-zero forms.
    pub fn preserves_sum_zero(&self) -> bool {
        let n = self.n_vars();
        (0..n.saturating_sub(1)).all(|k| self.apply_linear(&LinearForm::root(n, k, n - 1)).is_sum_zero())
    }

    /// Matrix of the restriction to the sum-zero lattice in the basis `e_k = t_k - t_n`;
    /// column `k` holds the coordinates of the image of `e_k`.
    pub fn sum_zero_matrix(&self) -> crate::linalg::Matrix {
        let n = self.n_vars();
        let mut m = crate::linalg::Matrix::zeros(n - 1, n - 1);
        for k in 0..n - 1 {
            let img = self.apply_linear(&LinearForm::root(n, k, n - 1));
            for i in 0..n - 1 {
                m.set(i, k, img.coeffs()[i].clone());
            }
        }
        m
    }

    /// Whether the restriction to the sum-zero lattice is a group automorphism
    /// (integral with determinant ±1).
    pub fn is_lattice_automorphism(&self) -> bool {
        if !self.preserves_sum_zero() {
            return false;
        }
        let m = self.sum_zero_matrix();
        if !m.entries().all(|c| c.is_integer()) {
            return false;
        }
        rational::is_unit(&m.determinant())
    }
}
