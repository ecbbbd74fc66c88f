//! Randomized property suites, each driven by its own fixed seed.

use emlattice::exactlin::{ceil_gap, int, orthogonal_projection, quotient_lattice, rat, RationalSpace, ScalarProduct};
use emlattice::genfun::{brion_sum_s, i_cone_in, s_cone, s_cone_in, Frame, SStrategy};
use emlattice::germ::{hyperplane_parametrisation, LinearForm, MeroGerm, TruncSeries};
use emlattice::mu::{dedekind_sum, mu_cone, mu_dim1_closed, mu_dim2_unimodular_series, mu_dim2_value0, MuEngine, MuStrategy};
use emlattice::polycone::{build_polytope, tangent_cone, triangulate_cone, AffineCone, Cut, Polytope};
use emlattice::{QMatrix, QVector, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::fourier_dedekind;

pub const CASES: usize = 50;

type Check = Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn vi(xs: &[i64]) -> QVector {
    QVector::from_ints(xs)
}

fn rand_rat(r: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

fn rand_point(r: &mut ChaCha8Rng, d: usize, num: i64, den: i64) -> QVector {
    QVector((0..d).map(|_| rand_rat(r, num, den)).collect())
}

fn rand_q2(r: &mut ChaCha8Rng) -> ScalarProduct {
    loop {
        let (a, b, c) = (r.gen_range(1..5), r.gen_range(-2..3), r.gen_range(1..5));
        if let Ok(q) = ScalarProduct::new(QMatrix::from_int_rows(&[&[a, b], &[b, c]])) {
            return q;
        }
    }
}

fn space(d: usize, q: Option<ScalarProduct>) -> RationalSpace {
    q.map_or_else(|| RationalSpace::standard(d), RationalSpace::with_scalar_product)
}

fn small_index(a: &AffineCone, max: i64) -> bool {
    triangulate_cone(a).is_ok_and(|ps| ps.iter().all(|p| p.index().is_ok_and(|i| i <= BigInt::from(max))))
}

/// A solid pointed cone in dimension 2 or 3 with small simplicial indices.
/// In dimension 3 all rays lie in the upper half space, which keeps it pointed.
fn rand_cone(r: &mut ChaCha8Rng, d: usize, q: Option<ScalarProduct>, max_index: i64) -> AffineCone {
    loop {
        let rays: Vec<QVector> = if d == 2 {
            (0..2).map(|_| vi(&[r.gen_range(-5..=5), r.gen_range(-5..=5)])).collect()
        } else {
            let n = r.gen_range(3..=4);
            (0..n).map(|_| vi(&[r.gen_range(-3..=3), r.gen_range(-3..=3), r.gen_range(1..=3)])).collect()
        };
        let vertex = rand_point(r, d, 9, 6);
        if let Ok(a) = AffineCone::new(space(d, q.clone()), vertex, &rays) {
            if a.is_solid() && a.is_pointed() && small_index(&a, max_index) {
                return a;
            }
        }
    }
}

fn rand_polygon(r: &mut ChaCha8Rng, npts: usize, num: i64, den: i64) -> Polytope {
    loop {
        let pts: Vec<QVector> = (0..npts).map(|_| rand_point(r, 2, num, den)).collect();
        if let Ok(p) = build_polytope(RationalSpace::standard(2), &pts) {
            return p;
        }
    }
}

fn mu(a: &AffineCone, order: usize) -> Result<TruncSeries, String> {
    mu_cone(a, order).map(|m| m.series).map_err(|e| e.to_string())
}

fn run(cases: usize, mut f: impl FnMut(usize) -> Check) -> Result<usize, String> {
    for i in 0..cases {
        f(i).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok(cases)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn is_zero_function(g: &MeroGerm) -> bool {
    g.to_analytic().map(|s| s.is_zero()).unwrap_or(false)
}

pub fn translation_invariance() -> Result<usize, String> {
    let mut r = rng(0x7a11);
    run(CASES, |i| {
        let d = 2 + i % 2;
        let q = (d == 2).then(|| rand_q2(&mut r));
        let a = rand_cone(&mut r, d, q, 12);
        let m = vi(&(0..d).map(|_| r.gen_range(-6..=6)).collect::<Vec<_>>());
        let b = a.translate(&m).map_err(|e| e.to_string())?;
        ensure(mu(&a, 3)? == mu(&b, 3)?, || format!("{a:?} shifted by {m}"))
    })
}

pub fn signed_permutations() -> Result<usize, String> {
    let mut r = rng(0x5167);
    run(CASES, |i| {
        let d = 2 + i % 2;
        let a = rand_cone(&mut r, d, None, 12);
        let mut perm: Vec<usize> = (0..d).collect();
        for k in (1..d).rev() {
            perm.swap(k, r.gen_range(0..=k));
        }
        let mut g = QMatrix::zeros(d, d);
        for k in 0..d {
            g[(perm[k], k)] = if r.gen_bool(0.5) { int(-1) } else { int(1) };
        }
        let rays: Vec<QVector> = a.rays.iter().map(|x| g.mul_vec(x)).collect();
        let ga = AffineCone::new(RationalSpace::standard(d), g.mul_vec(&a.vertex), &rays).map_err(|e| e.to_string())?;
        // μ(ga)(η) = μ(a)(gᵀη)
        let forms: Vec<Vec<Rational>> = (0..d).map(|j| (0..d).map(|k| g[(k, j)].clone()).collect()).collect();
        ensure(mu(&ga, 3)? == mu(&a, 3)?.substitute_linear(&forms, d), || format!("{a:?}"))
    })
}

pub fn orthogonal_sums() -> Result<usize, String> {
    let mut r = rng(0x0e7f);
    run(CASES, |_| {
        // Q = diag(c, B) makes span(e1) and span(e2, e3) orthogonal
        let c = r.gen_range(1..4);
        let b = rand_q2(&mut r);
        let mut qm = QMatrix::zeros(3, 3);
        qm[(0, 0)] = int(c);
        for i in 0..2 {
            for j in 0..2 {
                qm[(i + 1, j + 1)] = b.matrix[(i, j)].clone();
            }
        }
        let q = ScalarProduct::new(qm).unwrap();
        let sp = RationalSpace::with_scalar_product(q);
        let e1 = vi(&[if r.gen_bool(0.5) { 1 } else { -1 }, 0, 0]);
        let (u, w) = loop {
            let u = vi(&[0, r.gen_range(-4..=4), r.gen_range(-4..=4)]);
            let w = vi(&[0, r.gen_range(-4..=4), r.gen_range(-4..=4)]);
            let det = &u[1] * &w[2] - &u[2] * &w[1];
            if !det.is_zero() && det.abs() <= int(15) {
                break (u, w);
            }
        };
        let s = rand_point(&mut r, 3, 9, 6);
        let s1 = QVector(vec![s[0].clone(), int(0), int(0)]);
        let s23 = QVector(vec![int(0), s[1].clone(), s[2].clone()]);
        let mk = |v: QVector, rays: &[QVector]| AffineCone::new(sp.clone(), v, rays).map_err(|e| e.to_string());
        let a1 = mk(s1, std::slice::from_ref(&e1))?;
        let a2 = mk(s23, &[u.clone(), w.clone()])?;
        let a = mk(s, &[e1, u, w])?;
        ensure(mu(&a, 3)? == mu(&a1, 3)?.mul_to(&mu(&a2, 3)?, 3), || format!("{a:?}"))
    })
}

pub fn cut_valuation() -> Result<usize, String> {
    let mut r = rng(0xc075);
    run(CASES, |i| {
        let d = 2 + i % 2;
        let q = (d == 2).then(|| rand_q2(&mut r));
        let a = rand_cone(&mut r, d, q, 10);
        let n = loop {
            let n = vi(&(0..d).map(|_| r.gen_range(-2..=2)).collect::<Vec<_>>());
            if !n.is_zero() {
                break n;
            }
        };
        let part = |how| a.cut(&n, how).map_err(|e| e.to_string()).and_then(|c| mu(&c, 2));
        let rhs = part(Cut::Ge)?.add(&part(Cut::Le)?).sub(&part(Cut::Eq)?);
        ensure(mu(&a, 2)? == rhs, || format!("{a:?} cut by {n}"))
    })
}

/// A unimodular integer matrix from random elementary operations.
fn rand_unimodular(r: &mut ChaCha8Rng, d: usize) -> QMatrix {
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..2 * d {
        let (i, j) = (r.gen_range(0..d), r.gen_range(0..d));
        if i != j {
            let k = r.gen_range(-2..=2);
            for c in 0..d {
                m[i][c] += k * m[j][c];
            }
        }
    }
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    QMatrix::from_int_rows(&rows)
}

pub fn lattice_free_spans() -> Result<usize, String> {
    let mut r = rng(0x1f5e);
    run(CASES, |i| {
        let d = 2 + i % 2;
        let k = 1 + r.gen_range(0..d - 1);
        // a cone in {x_d = c} with c not an integer, moved by a unimodular map
        let g = rand_unimodular(&mut r, d);
        let c = rat(2 * r.gen_range(-4..=4) + 1, 2 * r.gen_range(1..=3));
        let mut vertex = rand_point(&mut r, d, 9, 5);
        vertex.0[d - 1] = c;
        let rays: Vec<QVector> = (0..k)
            .map(|_| {
                let mut v: Vec<i64> = (0..d).map(|_| r.gen_range(-3..=3)).collect();
                v[d - 1] = 0;
                if v.iter().all(|x| *x == 0) {
                    v[0] = 1;
                }
                vi(&v)
            })
            .collect();
        let rays: Vec<QVector> = rays.iter().map(|v| g.mul_vec(v)).collect();
        let a = AffineCone::new(RationalSpace::standard(d), g.mul_vec(&vertex), &rays).map_err(|e| e.to_string())?;
        ensure(mu(&a, 3)?.is_zero(), || format!("{a:?}"))
    })
}

pub fn vertex_sum_indicator() -> Result<usize, String> {
    let mut r = rng(0x1d1c);
    run(CASES, |i| {
        let p = rand_polygon(&mut r, 3 + i % 3, 30, 4);
        let s = if i % 2 == 0 { vi(&[r.gen_range(-9..=9), r.gen_range(-9..=9)]) } else { rand_point(&mut r, 2, 30, 4) };
        let mut total = TruncSeries::zero(2, 2);
        for v in 0..p.vertices.len() {
            let t = tangent_cone(&p, v).map_err(|e| e.to_string())?;
            let c = AffineCone::new(t.space.clone(), s.clone(), &t.rays).map_err(|e| e.to_string())?;
            total.add_assign(&mu(&c, 2)?);
        }
        let want = if s.is_integral() { Rational::one() } else { Rational::zero() };
        ensure(total == TruncSeries::constant(2, 2, want), || format!("s = {s}, total {total}"))
    })
}

pub fn brion_identity() -> Result<usize, String> {
    let mut r = rng(0xb710);
    run(CASES, |i| {
        let p = rand_polygon(&mut r, 3 + i % 3, 12, 5);
        let pts = p.lattice_points(10_000).map_err(|e| e.to_string())?;
        let mut want = TruncSeries::zero(2, 3);
        for x in &pts {
            want.add_assign(&TruncSeries::exp_linear(&x.0, 3));
        }
        let strategy = if i % 2 == 0 { SStrategy::Direct } else { SStrategy::Barvinok };
        let got = brion_sum_s(&p, 3, strategy).and_then(|g| g.to_analytic_order(3)).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{:?}", p.vertices))
    })
}

fn residue_defect(a: &AffineCone, integral: bool) -> Result<bool, String> {
    let e = |e: emlattice::Error| e.to_string();
    let d = a.ambient_dim();
    let frame = Frame::standard(d);
    let v1 = a.rays[0].clone();
    let proj = orthogonal_projection(&a.space, std::slice::from_ref(&v1)).map_err(e)?;
    let qs = quotient_lattice(&a.space, std::slice::from_ref(&v1)).map_err(e)?;
    let rest: Vec<QVector> = a.rays[1..].iter().map(|x| proj.mul_vec(x)).collect();
    let pa = AffineCone::new(qs, proj.mul_vec(&a.vertex), &rest).map_err(e)?;
    let (f, g) = if integral {
        (i_cone_in(a, &frame, 3).map_err(e)?, i_cone_in(&pa, &frame, 4).map_err(e)?)
    } else {
        (
            s_cone_in(a, &frame, 3, SStrategy::Direct).map_err(e)?,
            s_cone_in(&pa, &frame, 4, SStrategy::Direct).map_err(e)?,
        )
    };
    let (res, p) = f.residue_along(&v1.0).map_err(e)?;
    let (l, _) = LinearForm::canonicalize(&v1.0).map_err(e)?;
    let g_on = g.substitute_linear(&hyperplane_parametrisation(&l, p), d - 1).map_err(e)?;
    Ok(is_zero_function(&res.add(&g_on)))
}

pub fn residue_laws() -> Result<usize, String> {
    let mut r = rng(0x7e51);
    run(CASES, |i| {
        let d = 2 + i % 2;
        let a = loop {
            let g = rand_unimodular(&mut r, d);
            let rays: Vec<QVector> = (0..d).map(|k| QVector((0..d).map(|j| g[(j, k)].clone()).collect())).collect();
            let q = (d == 2 && i % 4 == 0).then(|| rand_q2(&mut r));
            if let Ok(a) = AffineCone::new(space(d, q), rand_point(&mut r, d, 9, 4), &rays) {
                break a;
            }
        };
        ensure(residue_defect(&a, false)? && residue_defect(&a, true)?, || format!("{a:?}"))
    })
}

pub fn strategy_agreement() -> Result<usize, String> {
    let mut r = rng(0x5a9e);
    run(CASES, |i| {
        let d = 2 + i % 2;
        let a = rand_cone(&mut r, d, None, 40);
        let e = |e: emlattice::Error| e.to_string();
        let direct = s_cone(&a, 3, SStrategy::Direct).map_err(e)?;
        let barvinok = s_cone(&a, 3, SStrategy::Barvinok).map_err(e)?;
        ensure(is_zero_function(&direct.sub(&barvinok)), || format!("{a:?}"))
    })
}

pub fn closed_forms() -> Result<usize, String> {
    let mut r = rng(0xc105);
    let rec = MuEngine::new(MuStrategy::Recursion);
    let dec = MuEngine::new(MuStrategy::Decomposition);
    let e = |e: emlattice::Error| e.to_string();
    let n = run(CASES, |_| {
        let s = rand_rat(&mut r, 40, 9);
        let v: i64 = if r.gen_bool(0.5) { 1 } else { -1 };
        let a = AffineCone::new(RationalSpace::standard(1), QVector(vec![s.clone()]), &[vi(&[v])]).map_err(e)?;
        let want = mu_dim1_closed(&ceil_gap(&(&s * int(v))), &vi(&[v]), 6);
        ensure(rec.mu_cone(&a, 6).map_err(e)?.series == want && dec.mu_cone(&a, 6).map_err(e)?.series == want, || {
            format!("{a:?}")
        })
    })?;
    let m = run(CASES, |_| {
        let q = rand_q2(&mut r);
        let a = rand_cone(&mut r, 2, Some(q), 30);
        let recursion = rec.mu_cone(&a, 4).map_err(e)?.series;
        ensure(mu_dim2_value0(&a).map_err(e)? == recursion.constant_term(), || format!("value {a:?}"))?;
        if a.index().map_err(e)?.is_one() {
            ensure(mu_dim2_unimodular_series(&a, 4).map_err(e)? == recursion, || format!("series {a:?}"))?;
        }
        Ok(())
    })?;
    // unimodular two-dimensional cones for the series formula
    let u = run(CASES, |_| {
        let g = rand_unimodular(&mut r, 2);
        let rays = [QVector(vec![g[(0, 0)].clone(), g[(1, 0)].clone()]), QVector(vec![g[(0, 1)].clone(), g[(1, 1)].clone()])];
        let a = AffineCone::new(space(2, Some(rand_q2(&mut r))), rand_point(&mut r, 2, 9, 7), &rays).map_err(e)?;
        ensure(mu_dim2_unimodular_series(&a, 4).map_err(e)? == rec.mu_cone(&a, 4).map_err(e)?.series, || format!("{a:?}"))
    })?;
    Ok(n + m + u)
}

pub fn dedekind_sawtooth() -> Result<usize, String> {
    let mut r = rng(0xded0);
    let mut n = 0;
    // every q up to 30 at least twice, then random extra cases
    let mut qs: Vec<usize> = (1..=30).chain(1..=30).collect();
    qs.extend((0..40).map(|_| r.gen_range(1..=30)));
    for q in qs {
        let p = loop {
            let p = r.gen_range(0..q.max(2));
            if p.gcd(&q) == 1 {
                break p % q.max(1);
            }
        };
        let rr = r.gen_range(0..2 * q);
        let got = dedekind_sum(q as i64, p as i64, rr as i64).map_err(|e| e.to_string())?;
        let want = fourier_dedekind(q, p, rr);
        if got != want {
            return Err(format!("D({q}, 1, {p}, {rr}) = {got}, oracle {want}"));
        }
        n += 1;
    }
    Ok(n)
}
