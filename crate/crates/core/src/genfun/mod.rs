//! Exponential sums `S(a)` and integrals `I(a)` of affine cones as germs.
//!
//! Germs are written in the coordinates `z = F^T ξ` of a frame `F`, a matrix
//! whose columns are a basis of a subspace containing the cone. With the
//! standard frame this is plain `ξ`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::exactlin::{
    intersect_lattice, QMatrix, QVector, Rational, RationalSpace,
};
use crate::germ::{MeroGerm, TruncSeries};
use crate::mu::todd_coeffs;
use crate::polycone::{
    half_open_decomposition, lattice_point_in_affine_span, signed_unimodular_decomposition, tangent_cone, triangulate_cone, box_points,
    AffineCone, Polytope,
};
use crate::{Error, Result};

/// Largest simplicial index that [`SStrategy::Auto`] enumerates directly.
pub const AUTO_DIRECT_MAX_INDEX: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SStrategy {
    /// Half-open triangulation and fundamental parallelepiped enumeration.
    Direct,
    /// Signed unimodular decomposition.
    Barvinok,
    #[default]
    Auto,
}

/// Coordinates with respect to a fixed basis of a subspace.
#[derive(Clone, Debug)]
pub struct Frame {
    pub basis: QMatrix,
    left_inverse: QMatrix,
}

impl Frame {
    pub fn new(basis: QMatrix) -> Result<Self> {
        let left_inverse = if basis.cols() == 0 {
            QMatrix::zeros(0, basis.rows())
        } else {
            let bt = basis.transpose();
            bt.mul(&basis).inverse().ok_or(Error::DependentVectors)?.mul(&bt)
        };
        Ok(Frame { basis, left_inverse })
    }

    pub fn standard(d: usize) -> Self {
        Frame { basis: QMatrix::identity(d), left_inverse: QMatrix::identity(d) }
    }

    /// The lattice basis of a space.
    pub fn of_space(space: &RationalSpace) -> Self {
        Self::new(space.subspace_basis.clone()).expect("lattice basis is independent")
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `c` with `F c = x`.
    pub fn coords(&self, x: &QVector) -> Result<Vec<Rational>> {
        let c = self.left_inverse.mul_vec(x);
        if self.basis.mul_vec(&c) != *x {
            return Err(Error::NotInSpan);
        }
        Ok(c.0)
    }
}

fn exp_sum(points: &[QVector], frame: &Frame, order: usize) -> Result<TruncSeries> {
    let mut s = TruncSeries::zero(frame.dim(), order);
    for x in points {
        let c = frame.coords(x)?;
        s.add_assign(&TruncSeries::exp_linear(&c, order));
    }
    Ok(s)
}

/// `Σ_{x ∈ points} e^{⟨ξ,x⟩} / ∏ (1 - e^{⟨ξ,v⟩})` over the given rays.
fn box_germ(points: &[QVector], rays: &[QVector], frame: &Frame, order: usize) -> Result<MeroGerm> {
    let k = rays.len();
    let n = order + k;
    let num = exp_sum(points, frame, n)?;
    let t = todd_coeffs(n);
    let mut forms = Vec::with_capacity(k);
    let mut todd = TruncSeries::one(frame.dim(), n);
    for v in rays {
        let c = frame.coords(v)?;
        todd = todd.mul_to(&TruncSeries::compose_univariate(&t, &c, n), n);
        forms.push(c);
    }
    MeroGerm::new(num.mul_to(&todd, n), &forms)
}

/// A lattice point of the affine hull of a pointed cone, if any.
pub(crate) fn lattice_point_in_hull(a: &AffineCone) -> Result<Option<QVector>> {
    lattice_point_in_affine_span(&a.space, &a.vertex, &a.rays)
}

/// The cone `a - x0` in the subspace it spans, with the intersected lattice.
pub(crate) fn restrict_to_span(a: &AffineCone, x0: &QVector) -> Result<AffineCone> {
    let lat = intersect_lattice(&a.space, &a.rays)?;
    let sub = RationalSpace::from_lattice(lat, a.space.q.clone());
    AffineCone::new(sub, a.vertex.sub(x0), &a.rays)
}

/// `S(a) = Σ_{x ∈ a ∩ Λ} e^{⟨ξ,x⟩}` as a germ with precision at least `order`.
pub fn s_cone(a: &AffineCone, order: usize, strategy: SStrategy) -> Result<MeroGerm> {
    s_cone_in(a, &Frame::of_space(&a.space), order, strategy)
}

pub fn s_cone_in(a: &AffineCone, frame: &Frame, order: usize, strategy: SStrategy) -> Result<MeroGerm> {
    if a.contains_line() {
        return Ok(MeroGerm::zero(frame.dim(), order));
    }
    if !a.is_solid() {
        let Some(x0) = lattice_point_in_hull(a)? else {
            return Ok(MeroGerm::zero(frame.dim(), order));
        };
        let b = restrict_to_span(a, &x0)?;
        let g = s_cone_in(&b, frame, order, strategy)?;
        return Ok(g.mul_exp(&frame.coords(&x0)?));
    }
    let use_direct = match strategy {
        SStrategy::Direct => true,
        SStrategy::Barvinok => false,
        SStrategy::Auto => {
            let limit = BigInt::from(AUTO_DIRECT_MAX_INDEX);
            triangulate_cone(a)?.iter().all(|p| p.index().is_ok_and(|i| i <= limit))
        }
    };
    let mut total = MeroGerm::zero(frame.dim(), order + a.rays.len());
    if use_direct {
        for (piece, open) in half_open_decomposition(a)? {
            let pts = box_points(&piece, &open)?;
            total = total.add(&box_germ(&pts, &piece.rays, frame, order)?);
        }
    } else {
        for (sign, piece) in signed_unimodular_decomposition(a)? {
            let pts = box_points(&piece, &vec![false; piece.rays.len()])?;
            let g = box_germ(&pts, &piece.rays, frame, order)?;
            total = if sign > 0 { total.add(&g) } else { total.sub(&g) };
        }
    }
    Ok(total)
}

/// `I(a) = ∫_a e^{⟨ξ,x⟩} dx` (Lebesgue measure of `Λ ∩ lin(a)`) as a germ.
pub fn i_cone(a: &AffineCone, order: usize) -> Result<MeroGerm> {
    i_cone_in(a, &Frame::of_space(&a.space), order)
}

pub fn i_cone_in(a: &AffineCone, frame: &Frame, order: usize) -> Result<MeroGerm> {
    if a.contains_line() {
        return Ok(MeroGerm::zero(frame.dim(), order));
    }
    let j = a.dim();
    let e = frame.coords(&a.vertex)?;
    if j == 0 {
        return Ok(MeroGerm::analytic(TruncSeries::exp_linear(&e, order)));
    }
    let lat = intersect_lattice(&a.space, &a.rays)?;
    let sub = RationalSpace::from_lattice(lat.clone(), a.space.q.clone());
    let sign = if j.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let n = order + j;
    let ex = TruncSeries::exp_linear(&e, n);
    let mut total = MeroGerm::zero(frame.dim(), order + a.rays.len());
    let flat = AffineCone::new(sub.clone(), QVector::zeros(a.ambient_dim()), &a.rays)?;
    for piece in triangulate_cone(&flat)? {
        let coords: Vec<QVector> = piece
            .rays
            .iter()
            .map(|v| sub.lattice_coords(v))
            .collect::<Result<_>>()?;
        let vol = QMatrix::from_columns(j, &coords).det().abs();
        let forms: Vec<Vec<Rational>> = piece.rays.iter().map(|v| frame.coords(v)).collect::<Result<_>>()?;
        let g = MeroGerm::new(ex.scale(&(&sign * vol)), &forms)?;
        total = total.add(&g);
    }
    Ok(total)
}

/// `Σ_v S(tangent cone at v)`, a germ that is analytic and equals the
/// exponential sum over the lattice points of `p`.
pub fn brion_sum_s(p: &Polytope, order: usize, strategy: SStrategy) -> Result<MeroGerm> {
    let frame = Frame::of_space(&p.space);
    let mut total = MeroGerm::zero(frame.dim(), order + 64);
    for v in 0..p.vertices.len() {
        let c = tangent_cone(p, v)?;
        total = total.add(&s_cone_in(&c, &frame, order, strategy)?);
    }
    Ok(total)
}

/// `Σ_v I(tangent cone at v)`, analytic, equal to `∫_p e^{⟨ξ,x⟩} dx`.
pub fn brion_sum_i(p: &Polytope, order: usize) -> Result<MeroGerm> {
    let frame = Frame::of_space(&p.space);
    let mut total = MeroGerm::zero(frame.dim(), order + 64);
    for v in 0..p.vertices.len() {
        let c = tangent_cone(p, v)?;
        total = total.add(&i_cone_in(&c, &frame, order)?);
    }
    Ok(total)
}
