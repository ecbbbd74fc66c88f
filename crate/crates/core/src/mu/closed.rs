use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{
    big, ceil_gap, int, orthogonal_projection, quotient_lattice, rat, QMatrix, QVector, Rational, RationalSpace,
    ScalarProduct,
};
use crate::germ::{MeroGerm, TruncSeries};
use crate::polycone::{dual_cone, AffineCone};
use crate::{Error, Result};

use super::{bernoulli_poly, default_engine, shifted_todd_coeffs, todd_coeffs};

/// `B(y, t) = e^{ty}/(1 - e^y) + 1/y = -Σ b(n+1, t) y^n / (n+1)!`, through `order`.
fn b_series(t: &Rational, order: usize) -> Vec<Rational> {
    let mut u = shifted_todd_coeffs(t, order + 1);
    u.remove(0);
    u.to_vec()
}

/// `μ(-t v + ℝ₊ v)` for a primitive `v` and `0 <= t < 1`, in ambient coordinates.
pub fn mu_dim1_closed(t: &Rational, v: &QVector, order: usize) -> TruncSeries {
    TruncSeries::compose_univariate(&b_series(t, order), &v.0, order)
}

fn sawtooth(a: &Rational) -> Rational {
    a - a.floor() - rat(1, 2)
}

/// The Fourier–Dedekind sum `D(q, 1, p, r) = (1/q) Σ_{k=1}^{q-1} ζ^{kr} / ((1 - ζ^k)(1 - ζ^{kp}))`,
/// evaluated by the sawtooth formula with `((a)) = a - ⌊a⌋ - 1/2` at every `a`, integers included.
pub fn dedekind_sum(q: i64, p: i64, r: i64) -> Result<Rational> {
    if q < 1 || p.gcd(&q) != 1 {
        return Err(Error::NotCoprime);
    }
    let qr = int(q);
    let mut s = Rational::zero();
    for k in 0..q {
        let a = -Rational::new(BigInt::from(k * p + r), BigInt::from(q));
        s += sawtooth(&a) * sawtooth(&(int(k) / &qr));
    }
    Ok(s - Rational::one() / (int(4) * qr))
}

struct Dim2 {
    v: [QVector; 2],
    q: BigInt,
    p: BigInt,
    t: [Rational; 2],
    r: BigInt,
    c1: Rational,
    c2: Rational,
}

fn dim2_data(a: &AffineCone) -> Result<Dim2> {
    if a.space.dim() != 2 || !a.is_solid() || !a.is_pointed() {
        return Err(Error::DimensionUnsupported(a.dim()));
    }
    let mut l: Vec<QVector> = a.rays.iter().map(|r| a.space.lattice_coords(r)).collect::<Result<_>>()?;
    let mut v = [a.rays[0].clone(), a.rays[1].clone()];
    let det = |x: &QVector, y: &QVector| &x[0] * &y[1] - &x[1] * &y[0];
    if det(&l[0], &l[1]).is_negative() {
        l.swap(0, 1);
        v.swap(0, 1);
    }
    let q = det(&l[0], &l[1]).to_integer();
    let sigma = a.vertex_coords();
    let s = QMatrix::from_columns(2, &l).inverse().unwrap().mul_vec(&sigma);
    // w with det(l0, w) = 1
    let (x, y) = (l[0][0].to_integer(), l[0][1].to_integer());
    let eg = x.extended_gcd(&y);
    let w = QVector(vec![big(&-eg.y), big(&eg.x)]);
    debug_assert!(det(&l[0], &w).is_one());
    let p = det(&l[1], &w).to_integer();
    let qs: Vec<Rational> = s.0.iter().map(|si| si * big(&q)).collect();
    let t = [ceil_gap(&qs[0]), ceil_gap(&qs[1])];
    let r = (&qs[0] + &t[0]).to_integer() + &p * (&qs[1] + &t[1]).to_integer();
    let g = a.space.q.gram(&QMatrix::from_columns(a.ambient_dim(), &v));
    let c1 = &g[(0, 1)] / &g[(0, 0)];
    let c2 = &g[(0, 1)] / &g[(1, 1)];
    Ok(Dim2 { v, q, p, t, r, c1, c2 })
}

/// Closed form of `μ(a)(0)` for a pointed two-dimensional cone:
/// `(1/q)(1/2 - t₁)(1/2 - t₂) + (C₁/q) b(2,t₂)/2 + (C₂/q) b(2,t₁)/2 + D(q, 1, p, r)`
/// with `t_i = [[q s_i]]`.
pub fn mu_dim2_value0(a: &AffineCone) -> Result<Rational> {
    let d = dim2_data(a)?;
    let to_i64 = |x: &BigInt| i64::try_from(x).map_err(|_| Error::InvalidArgument("cone index too large".into()));
    let q = to_i64(&d.q)?;
    let p = to_i64(&d.p.mod_floor(&d.q))?;
    let r = to_i64(&d.r.mod_floor(&d.q))?;
    let qr = big(&d.q);
    let half = rat(1, 2);
    let b2 = bernoulli_poly(2);
    Ok((&half - &d.t[0]) * (&half - &d.t[1]) / &qr
        + &d.c1 * b2.eval(&d.t[1]) / (int(2) * &qr)
        + &d.c2 * b2.eval(&d.t[0]) / (int(2) * &qr)
        + dedekind_sum(q, p, r)?)
}

/// `μ(a)` of a unimodular two-dimensional cone from the explicit formula
/// `e^{t₁y₁+t₂y₂}/((1-e^{y₁})(1-e^{y₂})) + B(y₂-C₁y₁, t₂)/y₁ + B(y₁-C₂y₂, t₁)/y₂ - 1/(y₁y₂)`,
/// in ambient coordinates.
pub fn mu_dim2_unimodular_series(a: &AffineCone, order: usize) -> Result<TruncSeries> {
    let d = dim2_data(a)?;
    if !d.q.is_one() {
        return Err(Error::NotUnimodular);
    }
    let n = order + 2;
    let one = Rational::one();
    let zero = Rational::zero();
    let e1 = vec![one.clone(), zero.clone()];
    let e2 = vec![zero.clone(), one.clone()];
    let todd = todd_coeffs(n);
    let main = TruncSeries::exp_linear(&[d.t[0].clone(), d.t[1].clone()], n)
        .mul_to(&TruncSeries::compose_univariate(&todd, &e1, n), n)
        .mul_to(&TruncSeries::compose_univariate(&todd, &e2, n), n);
    let mut g = MeroGerm::new(main, &[e1.clone(), e2.clone()])?;
    let f1 = TruncSeries::compose_univariate(&b_series(&d.t[1], n), &[-d.c1.clone(), one.clone()], n);
    g = g.add(&MeroGerm::new(f1, std::slice::from_ref(&e1))?);
    let f2 = TruncSeries::compose_univariate(&b_series(&d.t[0], n), &[one.clone(), -d.c2.clone()], n);
    g = g.add(&MeroGerm::new(f2, std::slice::from_ref(&e2))?);
    g = g.sub(&MeroGerm::new(TruncSeries::one(2, n), &[e1, e2])?);
    let y = g.to_analytic_order(order)?;
    let forms = vec![d.v[0].0.clone(), d.v[1].0.clone()];
    Ok(y.substitute_linear(&forms, a.ambient_dim()))
}

/// `μ*_s(σ) = μ(π(s + σ*))` for a cone `σ = cone(gens)` in the dual space, where `π`
/// projects along `⟨σ⟩^⊥`. The lattice is `ℤ^d`; the result is in ambient coordinates.
pub fn mu_star(gens: &[QVector], s: &QVector, q: &ScalarProduct, order: usize) -> Result<TruncSeries> {
    let d = s.dim();
    let space = RationalSpace::with_scalar_product(q.clone());
    let dual = dual_cone(gens, d);
    let perp: Vec<QVector> = if gens.is_empty() {
        (0..d).map(|i| QVector::unit(d, i)).collect()
    } else {
        let rows: Vec<Vec<Rational>> = gens.iter().map(|g| g.0.clone()).collect();
        QMatrix::from_rows(rows).nullspace()
    };
    let cone = if perp.is_empty() {
        AffineCone::new(space, s.clone(), &dual)?
    } else {
        let proj = orthogonal_projection(&space, &perp)?;
        let qs = quotient_lattice(&space, &perp)?;
        let rays: Vec<QVector> = dual.iter().map(|g| proj.mul_vec(g)).filter(|g| !g.is_zero()).collect();
        AffineCone::new(qs, proj.mul_vec(s), &rays)?
    };
    Ok(default_engine().mu_cone(&cone, order)?.series)
}
