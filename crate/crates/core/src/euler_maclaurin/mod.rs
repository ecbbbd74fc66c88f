//! Local Euler–Maclaurin formula: `Σ_{x ∈ p ∩ Λ} h(x) = Σ_f ∫_f D(p, f)·h`,
//! where `D(p, f)` is the constant-coefficient operator whose symbol is the
//! μ-function of the transverse cone of `p` along `f`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::exactlin::{big, factorial, intersect_lattice, Lattice, QMatrix, QVector, Rational};
use crate::germ::{format_terms, MultiIndex, TruncSeries, MAX_VARS};
use crate::mu::{default_engine, MuEngine};
use crate::polycone::{enum_cap, transverse_cone, FaceHandle, Polytope};
use crate::{Error, Result};

/// A polynomial with exact coefficients in `dim` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_VARS, "too many variables");
        Polynomial { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    /// `c x^e`.
    pub fn monomial(dim: usize, e: &[usize], c: Rational) -> Self {
        assert!(e.len() <= dim);
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::from_slice(e), c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &MultiIndex) -> Rational {
        self.terms.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, a: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(a).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut r = self.clone();
        for (a, c) in &other.terms {
            r.add_term(*a, c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut r = Self::zero(self.dim);
        for (a, x) in &self.terms {
            r.add_term(*a, x * c);
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut r = Self::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                r.add_term(a.add(b), x * y);
            }
        }
        r
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.to_series().eval(x)
    }

    /// `∂^a`.
    pub fn derivative(&self, a: &MultiIndex) -> Self {
        let mut r = Self::zero(self.dim);
        for (b, c) in &self.terms {
            if let Some(rest) = b.checked_sub(a) {
                r.add_term(rest, c * falling(b, &rest));
            }
        }
        r
    }

    /// `x ↦ h(t x)`.
    pub fn dilate_argument(&self, t: &Rational) -> Self {
        let mut r = Self::zero(self.dim);
        for (a, c) in &self.terms {
            r.add_term(*a, c * num_traits::pow(t.clone(), a.degree()));
        }
        r
    }

    /// The same polynomial as a series known through its degree.
    pub fn to_series(&self) -> TruncSeries {
        let mut s = TruncSeries::zero(self.dim, self.degree());
        for (a, c) in &self.terms {
            s.add_term(*a, c.clone());
        }
        s
    }

    /// Drops the truncation order of a series.
    pub fn from_series(s: &TruncSeries) -> Self {
        let mut p = Self::zero(s.nvars());
        for (a, c) in s.terms() {
            p.add_term(*a, c.clone());
        }
        p
    }

    /// Terms sorted by degree, then by exponents in decreasing lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(MultiIndex, Rational)> {
        let mut v: Vec<(MultiIndex, Rational)> = self.terms.iter().map(|(a, c)| (*a, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then(b.cmp(a)));
        v
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, &self.sorted_terms(), self.dim)
    }
}

/// `b! / r!` for `r <= b` componentwise.
fn falling(b: &MultiIndex, r: &MultiIndex) -> BigInt {
    let mut x = BigInt::one();
    for i in 0..MAX_VARS {
        for k in r.get(i) + 1..=b.get(i) {
            x *= k;
        }
    }
    x
}

/// The operator `D(p, f)`, stored as its symbol in ambient dual coordinates.
#[derive(Clone, Debug)]
pub struct FaceOperator {
    pub face: FaceHandle,
    pub symbol: TruncSeries,
    pub order: usize,
}

impl FaceOperator {
    /// The constant term `ν(p, f)`.
    pub fn nu(&self) -> Rational {
        self.symbol.constant_term()
    }
}

pub fn face_operator(p: &Polytope, f: &FaceHandle, order: usize) -> Result<FaceOperator> {
    face_operator_with(default_engine(), p, f, order)
}

pub fn face_operator_with(engine: &MuEngine, p: &Polytope, f: &FaceHandle, order: usize) -> Result<FaceOperator> {
    let t = transverse_cone(p, f)?;
    let symbol = engine.mu_cone(&t, order)?.series;
    Ok(FaceOperator { face: f.clone(), symbol, order })
}

/// `Σ_A c_A ∂^A h` for the symbol `Σ_A c_A ξ^A`.
pub fn apply_operator(op: &FaceOperator, h: &Polynomial) -> Result<Polynomial> {
    apply_symbol(&op.symbol, op.order, h)
}

pub(crate) fn apply_symbol(symbol: &TruncSeries, order: usize, h: &Polynomial) -> Result<Polynomial> {
    if symbol.nvars() != h.dim() {
        return Err(Error::DimensionMismatch { expected: symbol.nvars(), got: h.dim() });
    }
    let deg = h.degree();
    if order < deg {
        return Err(Error::OrderUnderflow { requested: deg as i64, available: order as i64 });
    }
    let mut r = Polynomial::zero(h.dim());
    for (a, c) in symbol.terms() {
        if a.degree() > deg {
            continue;
        }
        for (b, x) in h.terms() {
            if let Some(rest) = b.checked_sub(a) {
                r.add_term(rest, c * x * big(&falling(b, &rest)));
            }
        }
    }
    Ok(r)
}

/// `∫_f g` against the Lebesgue measure normalised by `Λ ∩ lin(f)`; a vertex
/// carries the point mass.
pub fn integrate_over_face(p: &Polytope, f: &FaceHandle, g: &Polynomial) -> Result<Rational> {
    if g.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: g.dim() });
    }
    if f.dim == 0 {
        return Ok(g.eval(&p.vertices[f.members[0]].0));
    }
    let lat = intersect_lattice(&p.space, &f.affine_basis)?;
    let mut total = Rational::zero();
    for simplex in p.triangulate_face(f)? {
        let pts: Vec<QVector> = simplex.iter().map(|&i| p.vertices[i].clone()).collect();
        total += integrate_over_simplex(&lat, &pts, g)?;
    }
    Ok(total)
}

/// `∫_Δ g` over the simplex with the given vertices, measure normalised by `lat`.
/// Uses `∫_Δ λ^a = j! vol(Δ) ∏ a_i! / (|a| + j)!` in barycentric coordinates.
pub fn integrate_over_simplex(lat: &Lattice, pts: &[QVector], g: &Polynomial) -> Result<Rational> {
    let j = pts.len() - 1;
    if j == 0 {
        return Ok(g.eval(&pts[0].0));
    }
    if j + 1 > MAX_VARS {
        return Err(Error::TooManyVariables(j + 1));
    }
    let edges: Vec<QVector> = pts[1..]
        .iter()
        .map(|x| lat.coords(&x.sub(&pts[0])).ok_or(Error::NotInSpan))
        .collect::<Result<_>>()?;
    if edges.iter().any(|e| e.dim() != j) {
        return Err(Error::DimensionMismatch { expected: j, got: lat.rank() });
    }
    // j! vol(Δ)
    let det = QMatrix::from_columns(j, &edges).det().abs();
    let forms: Vec<Vec<Rational>> = (0..g.dim()).map(|k| pts.iter().map(|x| x[k].clone()).collect()).collect();
    let bary = g.to_series().substitute_linear(&forms, j + 1);
    let facts: Vec<BigInt> = (0..=g.degree() + j).map(factorial).collect();
    let mut s = Rational::zero();
    for (a, c) in bary.terms() {
        let num: BigInt = (0..=j).map(|i| &facts[a.get(i)]).product();
        s += c * Rational::new(num, facts[a.degree() + j].clone());
    }
    Ok(s * det)
}

/// One face's share of the local Euler–Maclaurin sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceContribution {
    pub face: usize,
    pub dim: usize,
    /// Vertex indices of the face.
    pub members: Vec<usize>,
    /// Constant term of the operator.
    pub nu: Rational,
    /// `∫_f D(p, f)·h`.
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionReport {
    /// Ordered by dimension, then by vertex set.
    pub faces: Vec<FaceContribution>,
    pub total: Rational,
}

impl ContributionReport {
    pub fn of_dim(&self, d: usize) -> Vec<&FaceContribution> {
        self.faces.iter().filter(|f| f.dim == d).collect()
    }

    pub fn by_members(&self, members: &[usize]) -> Option<&FaceContribution> {
        let mut m = members.to_vec();
        m.sort_unstable();
        self.faces.iter().find(|f| f.members == m)
    }
}

/// Faces by dimension, then vertex set.
pub(crate) fn ordered_faces(p: &Polytope) -> Vec<&FaceHandle> {
    let mut faces: Vec<&FaceHandle> = p.faces().iter().collect();
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.members.cmp(&b.members)));
    faces
}

/// `Σ_{x ∈ p ∩ Λ} h(x)` split into face contributions, with the scalar product of `p.space`.
pub fn em_sum(p: &Polytope, h: &Polynomial) -> Result<ContributionReport> {
    em_sum_with(default_engine(), p, h)
}

pub fn em_sum_with(engine: &MuEngine, p: &Polytope, h: &Polynomial) -> Result<ContributionReport> {
    let order = h.degree();
    let faces = ordered_faces(p);
    let contributions: Vec<FaceContribution> = faces
        .par_iter()
        .map(|f| {
            let op = face_operator_with(engine, p, f, order)?;
            let g = apply_operator(&op, h)?;
            let value = integrate_over_face(p, f, &g)?;
            log::debug!("face {:?}: {}", f.members, value);
            Ok(FaceContribution { face: f.index, dim: f.dim, members: f.members.clone(), nu: op.nu(), value })
        })
        .collect::<Result<_>>()?;
    let total = contributions.iter().map(|c| &c.value).sum();
    Ok(ContributionReport { faces: contributions, total })
}

/// Direct summation over the lattice points, capped by `EMLATTICE_MAX_ENUM`.
pub fn brute_force_sum(p: &Polytope, h: &Polynomial) -> Result<Rational> {
    brute_force_sum_capped(p, h, enum_cap())
}

pub fn brute_force_sum_capped(p: &Polytope, h: &Polynomial, cap: u64) -> Result<Rational> {
    if h.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: h.dim() });
    }
    let s = h.to_series();
    Ok(p.lattice_points(cap)?.iter().map(|x| s.eval(&x.0)).sum())
}

#[cfg(test)]
mod tests;
