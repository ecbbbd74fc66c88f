use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dd::IVec;
use super::lattice_cone::{cone_structure, int_det, to_qvec, FaceLattice};
use super::{dual_generators, enum_cap, AffineCone};
use crate::exactlin::{big, hnf_diagonal, lll_reduce, Lattice, QMatrix, QVector, Rational, ScalarProduct};
use crate::{Error, Result};

/// Cones with signs `±1`; the signed sum of indicator functions equals the
/// original cone's modulo cones containing lines or of lower dimension,
/// depending on the producer.
pub type SignedConeList = Vec<(i32, AffineCone)>;

fn int_matrix_cols(cols: &[IVec], k: usize) -> QMatrix {
    QMatrix::from_columns(k, &cols.iter().map(|c| to_qvec(c)).collect::<Vec<_>>())
}

/// Triangulation of a pointed cone into simplicial cones of the same dimension,
/// using its own rays only.
pub fn triangulate_cone(a: &AffineCone) -> Result<Vec<AffineCone>> {
    let fl = a.face_lattice()?;
    let top = fl.faces.len() - 1;
    fl.pulling_triangulation(top)
        .into_iter()
        .map(|s| {
            let rays: Vec<QVector> = s.iter().map(|&i| a.rays[i].clone()).collect();
            AffineCone::new(a.space.clone(), a.vertex.clone(), &rays)
        })
        .collect()
}

/// Lattice points `x` with `x - vertex = Σ λ_i v_i` and each `λ_i` in `[0, 1)`,
/// or in `(0, 1]` where `open[i]`. The cone must be solid and simplicial.
pub fn box_points(a: &AffineCone, open: &[bool]) -> Result<Vec<QVector>> {
    if !a.is_simplicial() || !a.is_solid() {
        return Err(Error::NonSimplicial);
    }
    let k = a.space.dim();
    let rays = a.lattice_rays();
    let idx = int_det(rays).abs();
    let cap = enum_cap();
    if idx > BigInt::from(cap) {
        return Err(Error::CapExceeded { needed: idx.to_string(), cap });
    }
    let m = int_matrix_cols(rays, k);
    let minv = m.inverse().ok_or(Error::DependentVectors)?;
    let sigma = a.vertex_coords();
    let diag = hnf_diagonal(&m)?;
    let mut out = Vec::with_capacity(idx.to_usize().unwrap_or(0));
    let mut c = vec![BigInt::zero(); k];
    loop {
        let r = QVector(c.iter().map(big).collect());
        let lambda = minv.mul_vec(&r.sub(&sigma));
        let shift = QVector(
            lambda
                .0
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    let open_i = open.get(i).copied().unwrap_or(false);
                    if open_i {
                        l.ceil() - Rational::one()
                    } else {
                        l.floor()
                    }
                })
                .collect(),
        );
        let x = r.sub(&m.mul_vec(&shift));
        out.push(a.space.lattice.from_coords(&x));
        // odometer over 0 <= c_i < diag_i
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            c[i] += 1;
            if c[i] < diag[i] {
                break;
            }
            c[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Splits a solid pointed cone into half-open simplicial cones whose indicator
/// functions sum exactly to the cone's. `open[i]` marks the facet opposite ray `i`.
pub fn half_open_decomposition(a: &AffineCone) -> Result<Vec<(AffineCone, Vec<bool>)>> {
    if !a.is_solid() {
        return Err(Error::NotSolid);
    }
    let pieces = triangulate_cone(a)?;
    if pieces.len() == 1 {
        let k = pieces[0].rays.len();
        return Ok(vec![(pieces.into_iter().next().unwrap(), vec![false; k])]);
    }
    let k = a.space.dim();
    let inverses: Vec<QMatrix> = pieces
        .iter()
        .map(|p| int_matrix_cols(p.lattice_rays(), k).inverse().unwrap())
        .collect();
    let base = a
        .lattice_rays()
        .iter()
        .fold(QVector::zeros(k), |acc, r| acc.add(&to_qvec(r)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    for attempt in 0u32.. {
        let scale = Rational::from_integer(BigInt::from(1000u64) << attempt.min(200));
        let z = QVector((0..k).map(|_| Rational::from_integer(rng.gen_range(-997i64..=997).into())).collect());
        let y = base.scale(&scale).add(&z);
        let inside = a.lattice_facets().iter().all(|f| to_qvec(f).dot(&y).is_positive());
        let lambdas: Vec<QVector> = inverses.iter().map(|inv| inv.mul_vec(&y)).collect();
        if !inside || lambdas.iter().any(|l| l.0.iter().any(Zero::is_zero)) {
            continue;
        }
        return Ok(pieces
            .into_iter()
            .zip(lambdas)
            .map(|(p, l)| {
                let open = l.0.iter().map(|x| !x.is_positive()).collect();
                (p, open)
            })
            .collect());
    }
    unreachable!()
}

fn linf(v: &QVector) -> Rational {
    v.max_abs()
}

/// `λ ∈ U^{-1} Z^k`, nonzero, with `max |λ_i| < 1`.
fn short_vector(u: &QMatrix, uinv: &QMatrix) -> Result<QVector> {
    let k = u.rows();
    let lat = Lattice::new(k, uinv.columns())?;
    let red = lll_reduce(&lat, &ScalarProduct::standard(k));
    let best = red
        .basis
        .iter()
        .min_by(|a, b| linf(a).cmp(&linf(b)).then_with(|| a.cmp(b)))
        .cloned()
        .unwrap();
    if linf(&best) < Rational::one() {
        return Ok(best);
    }
    // fall back to the centred coset representatives
    let diag = hnf_diagonal(u)?;
    let count: BigInt = diag.iter().product();
    let cap = enum_cap();
    if count > BigInt::from(cap) {
        return Err(Error::CapExceeded { needed: count.to_string(), cap });
    }
    let half = Rational::new(1.into(), 2.into());
    let mut best: Option<QVector> = None;
    let mut c = vec![BigInt::zero(); k];
    loop {
        let z = QVector(c.iter().map(big).collect());
        let l = uinv.mul_vec(&z);
        let centred = QVector(l.0.iter().map(|x| x - (x + &half).floor()).collect());
        if !centred.is_zero()
            && best
                .as_ref()
                .is_none_or(|b| linf(&centred).cmp(&linf(b)).then_with(|| centred.cmp(b)).is_lt())
        {
            best = Some(centred);
        }
        let mut i = 0;
        loop {
            if i == k {
                return best.ok_or(Error::NotUnimodular);
            }
            c[i] += 1;
            if c[i] < diag[i] {
                break;
            }
            c[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// Signed decomposition of a simplicial full-rank integer cone into unimodular
/// ones, modulo lower-dimensional cones.
pub(crate) fn unimodular_signed(u: Vec<IVec>) -> Result<Vec<(i32, Vec<IVec>)>> {
    let k = u.len();
    let mut out = Vec::new();
    let mut stack = vec![(1i32, u)];
    while let Some((sign, u)) = stack.pop() {
        let det = int_det(&u).abs();
        if det.is_zero() {
            return Err(Error::DependentVectors);
        }
        if det.is_one() {
            out.push((sign, u));
            continue;
        }
        let um = int_matrix_cols(&u, k);
        let uinv = um.inverse().unwrap();
        let mut lambda = short_vector(&um, &uinv)?;
        if lambda.0.iter().all(|x| !x.is_positive()) {
            lambda = lambda.neg();
        }
        let w = um.mul_vec(&lambda).to_ints().expect("integral combination");
        for i in 0..k {
            let s = lambda[i].signum();
            if s.is_zero() {
                continue;
            }
            let mut child = u.clone();
            child[i] = w.clone();
            let si = if s.is_positive() { 1 } else { -1 };
            stack.push((sign * si, child));
        }
    }
    Ok(out)
}

/// The primal basis dual to a unimodular basis `u`: `⟨u_i, v_j⟩ = δ_ij`.
pub(crate) fn dual_basis(u: &[IVec]) -> Vec<IVec> {
    let k = u.len();
    let v = int_matrix_cols(u, k).transpose().inverse().expect("unimodular");
    v.columns().iter().map(|c| c.to_ints().expect("unimodular")).collect()
}

/// Barvinok decomposition of a solid simplicial cone into unimodular cones
/// with the same vertex, exact modulo cones containing lines.
pub fn barvinok_decompose(a: &AffineCone) -> Result<SignedConeList> {
    if !a.is_simplicial() || !a.is_solid() {
        return Err(Error::NonSimplicial);
    }
    signed_unimodular_decomposition(a)
}

/// Signed unimodular cones (lattice coordinates) for a solid pointed cone given
/// by its facet normals: triangulate the dual, decompose, dualise back.
pub(crate) fn unimodular_from_facets(facets: &[IVec], k: usize) -> Result<Vec<(i32, Vec<IVec>)>> {
    if k == 0 {
        return Ok(vec![(1, vec![])]);
    }
    let ds = cone_structure(facets, k);
    let fl = FaceLattice::new(&ds.rays, &ds.facets, k);
    let top = fl.faces.len() - 1;
    let mut out = Vec::new();
    for simplex in fl.pulling_triangulation(top) {
        let u: Vec<IVec> = simplex.iter().map(|&i| ds.rays[i].clone()).collect();
        for (s, uu) in unimodular_signed(u)? {
            out.push((s, dual_basis(&uu)));
        }
    }
    Ok(out)
}

/// Signed unimodular cones with the vertex of `a`, exact modulo cones
/// containing lines. `a` must be solid and pointed.
pub fn signed_unimodular_decomposition(a: &AffineCone) -> Result<SignedConeList> {
    if !a.is_solid() {
        return Err(Error::NotSolid);
    }
    if !a.is_pointed() {
        return Err(Error::NotPointed);
    }
    let k = a.space.dim();
    unimodular_from_facets(a.lattice_facets(), k)?
        .into_iter()
        .map(|(s, v)| {
            let rays: Vec<QVector> = v.iter().map(|c| a.space.lattice.from_coords(&to_qvec(c))).collect();
            Ok((s, AffineCone::new(a.space.clone(), a.vertex.clone(), &rays)?))
        })
        .collect()
}

/// Generators of `{ξ : ⟨ξ, g⟩ >= 0 for all g}` in `Q^dim`; a lineality space is
/// listed with both signs of each basis vector.
pub fn dual_cone(gens: &[QVector], dim: usize) -> Vec<QVector> {
    let ints: Vec<IVec> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| crate::exactlin::primitive_direction(&g.0))
        .collect();
    dual_generators(&ints, dim).iter().map(|v| to_qvec(v)).collect()
}
