//! Ehrhart quasipolynomials `t ↦ Σ_{x ∈ tp ∩ Λ} h(x)` assembled face by face.
//!
//! The face `f` contributes `∫_{tf} D(p, f, t)·h`, a polynomial in `t` on each
//! residue class modulo the period `q_f` of the face. Each such polynomial is
//! recovered by exact interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::euler_maclaurin::{apply_operator, integrate_over_face, ordered_faces, FaceOperator, Polynomial};
use crate::exactlin::{big, int, lcm_denominators, QMatrix, QVector, Rational};
use crate::mu::{default_engine, MuEngine};
use crate::polycone::{lattice_point_in_affine_span, transverse_cone, AffineCone, FaceHandle, Polytope};
use crate::{Error, Result};

/// Coefficient tables in `t`, one per residue class modulo `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPolynomial {
    pub period: u64,
    pub degree: usize,
    /// `residues[r][i]` is the coefficient of `t^i` for `t ≡ r`.
    pub residues: Vec<Vec<Rational>>,
}

impl QuasiPolynomial {
    pub fn coefficients(&self, t: &BigInt) -> &[Rational] {
        let r = t.mod_floor(&BigInt::from(self.period)).to_usize().unwrap();
        &self.residues[r]
    }

    pub fn coefficient(&self, i: usize, t: &BigInt) -> Rational {
        self.coefficients(t).get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &BigInt) -> Rational {
        let x = big(t);
        self.coefficients(t).iter().rev().fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    /// Whether the coefficient of `t^i` is the same in every residue class.
    pub fn is_constant(&self, i: usize) -> bool {
        self.residues.windows(2).all(|w| w[0][i] == w[1][i])
    }
}

/// The share of one face in the quasipolynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceQuasiContribution {
    pub face: usize,
    pub dim: usize,
    pub members: Vec<usize>,
    pub period: u64,
    /// `residues[r][i]`: coefficient of `t^i` for `t ≡ r (mod period)`.
    pub residues: Vec<Vec<Rational>>,
}

/// Smallest `q >= 1` such that `q·aff(f)` contains a lattice point.
pub fn face_period(p: &Polytope, f: &FaceHandle) -> Result<u64> {
    let x0 = &f.span_point;
    let bound = lcm_denominators(p.space.lattice_coords(x0)?.0.iter());
    let bound = bound.to_u64().ok_or_else(|| Error::InvalidArgument("face period too large".into()))?;
    for q in 1..bound {
        if lattice_point_in_affine_span(&p.space, &x0.scale(&int(q as i64)), &f.affine_basis)?.is_some() {
            return Ok(q);
        }
    }
    Ok(bound)
}

/// `D(p, f, t)`: the operator of the transverse cone of `tp` along `tf`.
/// For `t = 0` this is the cone of directions.
pub fn dilated_face_operator(p: &Polytope, f: &FaceHandle, t: u64, order: usize) -> Result<FaceOperator> {
    dilated_face_operator_with(default_engine(), p, f, t, order)
}

pub fn dilated_face_operator_with(
    engine: &MuEngine,
    p: &Polytope,
    f: &FaceHandle,
    t: u64,
    order: usize,
) -> Result<FaceOperator> {
    let c = transverse_cone(p, f)?;
    let vertex = c.vertex.scale(&Rational::from_integer(t.into()));
    let c = AffineCone::new(c.space.clone(), vertex, &c.rays)?;
    let symbol = engine.mu_cone(&c, order)?.series;
    Ok(FaceOperator { face: f.clone(), symbol, order })
}

/// `∫_{tf} D(p, f, t)·h` for `t >= 1`.
fn face_value(engine: &MuEngine, p: &Polytope, f: &FaceHandle, h: &Polynomial, t: u64) -> Result<Rational> {
    let op = dilated_face_operator_with(engine, p, f, t, h.degree())?;
    let g = apply_operator(&op, h)?;
    // ∫_{tf} g = t^{dim f} ∫_f g(t y) dy
    let tr = Rational::from_integer(t.into());
    let v = integrate_over_face(p, f, &g.dilate_argument(&tr))?;
    Ok(v * num_traits::pow(tr, f.dim))
}

/// Coefficients of the polynomial of degree `< xs.len()` through the points.
fn interpolate(xs: &[u64], ys: &[Rational]) -> Result<Vec<Rational>> {
    let n = xs.len();
    let rows: Vec<Vec<Rational>> = xs
        .iter()
        .map(|&x| {
            let x = Rational::from_integer(x.into());
            let mut row = Vec::with_capacity(n);
            let mut pw = Rational::one();
            for _ in 0..n {
                row.push(pw.clone());
                pw *= &x;
            }
            row
        })
        .collect();
    QMatrix::from_rows(rows)
        .solve(&QVector(ys.to_vec()))
        .map(|c| c.0)
        .ok_or_else(|| Error::InvalidArgument("interpolation nodes are not distinct".into()))
}

fn face_quasi(
    engine: &MuEngine,
    p: &Polytope,
    f: &FaceHandle,
    h: &Polynomial,
    total_degree: usize,
) -> Result<FaceQuasiContribution> {
    let q = face_period(p, f)?;
    let deg = f.dim + h.degree();
    let mut residues = Vec::with_capacity(q as usize);
    for r in 0..q {
        // t = 0 lies in every class and is never a node
        let start = if r == 0 { 1 } else { 0 };
        let ts: Vec<u64> = (start..start + deg as u64 + 1).map(|j| r + q * j).collect();
        let ys: Vec<Rational> = ts.iter().map(|&t| face_value(engine, p, f, h, t)).collect::<Result<_>>()?;
        let mut c = interpolate(&ts, &ys)?;
        c.resize(total_degree + 1, Rational::zero());
        residues.push(c);
    }
    Ok(FaceQuasiContribution { face: f.index, dim: f.dim, members: f.members.clone(), period: q, residues })
}

/// The quasipolynomial `t ↦ Σ_{x ∈ tp ∩ Λ} h(x)` for integers `t >= 1`, and
/// its face contributions ordered by dimension and vertex set.
pub fn ehrhart_quasipoly(p: &Polytope, h: &Polynomial) -> Result<(QuasiPolynomial, Vec<FaceQuasiContribution>)> {
    ehrhart_quasipoly_with(default_engine(), p, h)
}

pub fn ehrhart_quasipoly_with(
    engine: &MuEngine,
    p: &Polytope,
    h: &Polynomial,
) -> Result<(QuasiPolynomial, Vec<FaceQuasiContribution>)> {
    if h.dim() != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: h.dim() });
    }
    let degree = p.dim() + h.degree();
    let faces = ordered_faces(p);
    let contributions: Vec<FaceQuasiContribution> = faces
        .par_iter()
        .map(|f| face_quasi(engine, p, f, h, degree))
        .collect::<Result<_>>()?;
    let period = contributions.iter().fold(1u64, |acc, c| acc.lcm(&c.period));
    let residues = (0..period)
        .map(|r| {
            let mut c = vec![Rational::zero(); degree + 1];
            for fc in &contributions {
                for (ci, x) in c.iter_mut().zip(&fc.residues[(r % fc.period) as usize]) {
                    *ci += x;
                }
            }
            c
        })
        .collect();
    Ok((QuasiPolynomial { period, degree, residues }, contributions))
}

/// `Σ_{x ∈ tp ∩ Λ} h(x)` through the dilated face operators; `h(0)` for `t = 0`.
pub fn sum_dilate(p: &Polytope, h: &Polynomial, t: u64) -> Result<Rational> {
    if t == 0 {
        return Ok(h.eval(&vec![Rational::zero(); h.dim()]));
    }
    let engine = default_engine();
    ordered_faces(p)
        .par_iter()
        .map(|f| face_value(engine, p, f, h, t))
        .try_reduce(Rational::zero, |a, b| Ok(a + b))
}

/// Number of lattice points of `tp`.
pub fn count_dilate(p: &Polytope, t: u64) -> Result<BigInt> {
    let v = sum_dilate(p, &Polynomial::one(p.ambient_dim()), t)?;
    if !v.is_integer() {
        return Err(Error::InvalidArgument(format!("non-integral count {v}")));
    }
    Ok(v.to_integer())
}
