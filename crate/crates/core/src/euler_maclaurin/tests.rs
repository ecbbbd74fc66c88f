use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::exactlin::{int, rat, RationalSpace};
use crate::mu::bernoulli_poly;
use crate::polycone::build_polytope;

fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn polygon(pts: &[(Rational, Rational)]) -> Polytope {
    let v: Vec<QVector> = pts.iter().map(|(x, y)| QVector(vec![x.clone(), y.clone()])).collect();
    build_polytope(RationalSpace::standard(2), &v).unwrap()
}

fn vertex_index(p: &Polytope, x: &(Rational, Rational)) -> usize {
    p.vertices.iter().position(|v| v.0 == [x.0.clone(), x.1.clone()]).unwrap()
}

fn contribution(r: &ContributionReport, p: &Polytope, pts: &[&(Rational, Rational)]) -> Rational {
    let m: Vec<usize> = pts.iter().map(|x| vertex_index(p, x)).collect();
    r.by_members(&m).unwrap().value.clone()
}

fn dull() -> Vec<(Rational, Rational)> {
    vec![(int(0), int(0)), (int(1), int(0)), (int(0), int(1))]
}

fn tri357() -> Vec<(Rational, Rational)> {
    vec![(q(1, 3), q(1, 5)), (q(16, 3), q(1, 7)), (q(37, 5), q(92, 7))]
}

fn x1_20_x2() -> Polynomial {
    Polynomial::monomial(2, &[20, 1], int(1))
}

#[test]
fn polynomial_basics() {
    let mut h = Polynomial::monomial(2, &[2, 1], rat(3, 2));
    h.add_term(MultiIndex::from_slice(&[1, 0]), int(-1));
    assert_eq!(h.to_string(), "-x1 + 3/2*x1^2*x2");
    assert_eq!(h.degree(), 3);
    assert_eq!(h.eval(&[int(2), int(5)]), int(28));
    let d = h.derivative(&MultiIndex::from_slice(&[1, 0]));
    assert_eq!(d.to_string(), "-1 + 3*x1*x2");
    assert_eq!(h.dilate_argument(&int(2)).eval(&[int(1), int(1)]), int(10));
    assert_eq!(Polynomial::from_series(&h.to_series()), h);
}

#[test]
fn apply_operator_examples() {
    let f = FaceHandle { index: 0, dim: 0, members: vec![0], affine_basis: vec![], span_point: QVector::zeros(1) };
    let h = Polynomial::monomial(1, &[2], int(1));
    let id = FaceOperator { face: f.clone(), symbol: TruncSeries::one(1, 4), order: 4 };
    assert_eq!(apply_operator(&id, &h).unwrap(), h);
    let d1 = FaceOperator { face: f.clone(), symbol: TruncSeries::var(1, 4, 0), order: 4 };
    assert_eq!(apply_operator(&d1, &h).unwrap(), Polynomial::monomial(1, &[1], int(2)));
    let low = FaceOperator { face: f, symbol: TruncSeries::one(1, 1), order: 1 };
    assert!(matches!(apply_operator(&low, &h), Err(Error::OrderUnderflow { .. })));
}

#[test]
fn half_line_operator_on_x() {
    // [0, ∞) at the vertex: symbol 1/2 - ξ/12 + ..., so D x = x/2 - 1/12
    let p = build_polytope(RationalSpace::standard(1), &[QVector::from_ints(&[0]), QVector::from_ints(&[5])]).unwrap();
    let v = p.find_face(&[vertex_index1(&p, 0)]).unwrap();
    let op = face_operator(&p, v, 1).unwrap();
    let g = apply_operator(&op, &Polynomial::monomial(1, &[1], int(1))).unwrap();
    assert_eq!(g.to_string(), "-1/12 + 1/2*x1");
}

fn vertex_index1(p: &Polytope, x: i64) -> usize {
    p.vertices.iter().position(|v| v.0 == [int(x)]).unwrap()
}

#[test]
fn integration_examples() {
    let seg = build_polytope(RationalSpace::standard(2), &[QVector::from_ints(&[0, 0]), QVector::from_ints(&[3, 0]), QVector::from_ints(&[0, 1])]).unwrap();
    let a = vertex_index(&seg, &(int(0), int(0)));
    let b = vertex_index(&seg, &(int(3), int(0)));
    let e = seg.find_face(&[a, b]).unwrap();
    assert_eq!(integrate_over_face(&seg, e, &Polynomial::one(2)).unwrap(), int(3));

    let p = polygon(&tri357());
    let top = p.faces_of_dim(2)[0];
    assert_eq!(integrate_over_face(&p, top, &Polynomial::one(2)).unwrap(), rat(34187, 1050));

    let p = polygon(&dull());
    let top = p.faces_of_dim(2)[0];
    assert_eq!(integrate_over_face(&p, top, &x1_20_x2()).unwrap(), rat(1, 10626));
}

#[test]
fn edge_measure_uses_the_edge_lattice() {
    // the edge from (0,0) to (2,2) has lattice length 2
    let p = build_polytope(RationalSpace::standard(2), &[QVector::from_ints(&[0, 0]), QVector::from_ints(&[2, 2]), QVector::from_ints(&[2, 0])]).unwrap();
    let a = vertex_index(&p, &(int(0), int(0)));
    let b = vertex_index(&p, &(int(2), int(2)));
    let e = p.find_face(&[a, b]).unwrap();
    assert_eq!(integrate_over_face(&p, e, &Polynomial::one(2)).unwrap(), int(2));
    assert_eq!(integrate_over_face(&p, e, &Polynomial::monomial(2, &[1], int(1))).unwrap(), int(2));
}

#[test]
fn face_operator_examples() {
    let p = polygon(&[(int(0), int(0)), (int(1), int(0)), (int(1), int(1)), (int(0), int(1))]);
    let top = p.faces_of_dim(2)[0];
    let op = face_operator(&p, top, 3).unwrap();
    assert_eq!(op.symbol, TruncSeries::one(2, 3));
    let v = p.faces_of_dim(0)[0];
    assert_eq!(face_operator(&p, v, 0).unwrap().nu(), rat(1, 4));

    let p = polygon(&tri357());
    let i = vertex_index(&p, &(q(16, 3), q(1, 7)));
    let v = p.find_face(&[i]).unwrap();
    assert_eq!(face_operator(&p, v, 0).unwrap().nu(), rat(-4281800310619, 2106396270216));
}

#[test]
fn dull_triangle() {
    let pts = dull();
    let p = polygon(&pts);
    let r = em_sum(&p, &x1_20_x2()).unwrap();
    assert_eq!(r.total, int(0));
    let [o, a, b] = [&pts[0], &pts[1], &pts[2]];
    assert_eq!(contribution(&r, &p, &[o]), int(0));
    assert_eq!(contribution(&r, &p, &[a]), rat(-28224572717107, 66853011456));
    assert_eq!(contribution(&r, &p, &[b]), rat(5131761430387, 12155092992));
    assert_eq!(contribution(&r, &p, &[o, a]), rat(-1, 252));
    assert_eq!(contribution(&r, &p, &[a, b]), rat(287696501, 133706022912));
    assert_eq!(contribution(&r, &p, &[o, b]), int(0));
    assert_eq!(contribution(&r, &p, &[o, a, b]), rat(1, 10626));
    assert_eq!(brute_force_sum(&p, &x1_20_x2()).unwrap(), int(0));
}

#[test]
fn triangle_357() {
    let pts = tri357();
    let p = polygon(&pts);
    let r = em_sum(&p, &Polynomial::one(2)).unwrap();
    assert_eq!(r.total, int(31));
    let [s1, s2, s3] = [&pts[0], &pts[1], &pts[2]];
    assert_eq!(contribution(&r, &p, &[s1]), rat(89133678169939, 66088208614500));
    assert_eq!(contribution(&r, &p, &[s2]), rat(-4281800310619, 2106396270216));
    assert_eq!(contribution(&r, &p, &[s3]), rat(-401172431621091, 457987274773000));
    assert_eq!(contribution(&r, &p, &[s1, s2]), rat(1, 210));
    assert_eq!(contribution(&r, &p, &[s2, s3]), rat(-1, 210));
    assert_eq!(contribution(&r, &p, &[s1, s3]), rat(1, 1050));
    assert_eq!(contribution(&r, &p, &[s1, s2, s3]), rat(34187, 1050));
    assert_eq!(brute_force_sum(&p, &Polynomial::one(2)).unwrap(), int(31));
    // report order: vertices, edges, the triangle
    let dims: Vec<usize> = r.faces.iter().map(|f| f.dim).collect();
    assert_eq!(dims, vec![0, 0, 0, 1, 1, 1, 2]);
}

#[test]
fn quadrangle_357_and_locality() {
    let mut pts = tri357();
    pts.push((int(3), int(10)));
    let p = polygon(&pts);
    let r = em_sum(&p, &Polynomial::one(2)).unwrap();
    assert_eq!(r.total, int(49));
    let [s1, s2, s3, s4] = [&pts[0], &pts[1], &pts[2], &pts[3]];
    assert_eq!(contribution(&r, &p, &[s1]), rat(210849514883, 127956322980));
    assert_eq!(contribution(&r, &p, &[s2]), rat(-4281800310619, 2106396270216));
    assert_eq!(contribution(&r, &p, &[s3]), rat(-179008247, 706816180));
    assert_eq!(contribution(&r, &p, &[s4]), rat(-4382929, 6869864));
    assert_eq!(contribution(&r, &p, &[s1, s2]), rat(1, 210));
    assert_eq!(contribution(&r, &p, &[s2, s3]), rat(-1, 210));
    assert_eq!(contribution(&r, &p, &[s3, s4]), rat(11, 35));
    assert_eq!(contribution(&r, &p, &[s4, s1]), rat(1, 30));
    assert_eq!(contribution(&r, &p, &[s1, s2, s3, s4]), rat(699, 14));

    // the shared vertex has the same operator in both polygons
    let t = polygon(&tri357());
    let ft = t.find_face(&[vertex_index(&t, s2)]).unwrap();
    let fq = p.find_face(&[vertex_index(&p, s2)]).unwrap();
    assert_eq!(face_operator(&t, ft, 5).unwrap().symbol, face_operator(&p, fq, 5).unwrap().symbol);
}

#[test]
fn locality_under_lattice_translation() {
    let pts = tri357();
    let moved: Vec<(Rational, Rational)> = pts.iter().map(|(x, y)| (x + int(3), y - int(2))).collect();
    let a = polygon(&pts);
    let b = polygon(&moved);
    for i in 0..3 {
        let fa = a.find_face(&[vertex_index(&a, &pts[i])]).unwrap();
        let fb = b.find_face(&[vertex_index(&b, &moved[i])]).unwrap();
        assert_eq!(face_operator(&a, fa, 4).unwrap().symbol, face_operator(&b, fb, 4).unwrap().symbol);
    }
}

#[test]
fn symbol_ignores_directions_along_the_face() {
    // with a skew scalar product Q the symbol of an edge only depends on ξ
    // modulo Q·lin(f)
    use crate::exactlin::ScalarProduct;
    let qm = QMatrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(3)]]);
    let space = RationalSpace::with_scalar_product(ScalarProduct::new(qm.clone()).unwrap());
    let pts: Vec<QVector> = tri357().iter().map(|(x, y)| QVector(vec![x.clone(), y.clone()])).collect();
    let p = build_polytope(space, &pts).unwrap();
    for f in p.faces_of_dim(1) {
        let op = face_operator(&p, f, 5).unwrap();
        let u = &f.affine_basis[0];
        let dir = qm.mul_vec(u);
        let mut d = TruncSeries::zero(2, 4);
        for k in 0..2 {
            let dk = Polynomial::from_series(&op.symbol).derivative(&MultiIndex::unit(k));
            d.add_assign(&dk.to_series().scale(&dir[k]).with_order(4));
        }
        assert!(d.is_zero(), "symbol varies along the edge");
    }
}

/// Fan triangulation of a convex polygon from its last vertex in angular order.
fn fan_integral(p: &Polytope, g: &Polynomial) -> Rational {
    let n = p.vertices.len();
    let c: Vec<Rational> = (0..2).map(|k| p.vertices.iter().map(|v| v[k].clone()).sum::<Rational>() / int(n as i64)).collect();
    let mut idx: Vec<usize> = (0..n).collect();
    // sort by angle with exact half-plane and cross-product comparisons
    let half = |i: usize| {
        let (x, y) = (&p.vertices[i][0] - &c[0], &p.vertices[i][1] - &c[1]);
        (y < Rational::zero() || (y.is_zero() && x < Rational::zero())) as u8
    };
    idx.sort_by(|&i, &j| {
        half(i).cmp(&half(j)).then_with(|| {
            let (xi, yi) = (&p.vertices[i][0] - &c[0], &p.vertices[i][1] - &c[1]);
            let (xj, yj) = (&p.vertices[j][0] - &c[0], &p.vertices[j][1] - &c[1]);
            (xj * yi).cmp(&(xi * yj))
        })
    });
    let lat = Lattice::standard(2);
    let apex = idx[n - 1];
    (0..n - 2)
        .map(|k| {
            let pts = [p.vertices[apex].clone(), p.vertices[idx[k]].clone(), p.vertices[idx[k + 1]].clone()];
            integrate_over_simplex(&lat, &pts, g).unwrap()
        })
        .sum()
}

/// `Σ_{a₁ <= x <= a₂} h(x)` from Bernoulli polynomials, independent of the cone machinery.
fn interval_formula(a1: &Rational, a2: &Rational, h: &[Rational]) -> Rational {
    let eval = |c: &[Rational], x: &Rational| c.iter().rev().fold(Rational::zero(), |acc, ci| acc * x + ci);
    let deriv = |c: &[Rational]| -> Vec<Rational> { c.iter().enumerate().skip(1).map(|(i, ci)| ci * int(i as i64)).collect() };
    let anti: Vec<Rational> = std::iter::once(Rational::zero()).chain(h.iter().enumerate().map(|(i, ci)| ci / int(i as i64 + 1))).collect();
    let t1 = a1.ceil() - a1;
    let t2 = a2 - a2.floor();
    let mut s = eval(&anti, a2) - eval(&anti, a1);
    let mut d = h.to_vec();
    let mut n = 0usize;
    let mut fact = Rational::one();
    while !d.is_empty() {
        fact *= int(n as i64 + 1);
        let b = bernoulli_poly(n + 1);
        let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
        s -= b.eval(&t1) / &fact * eval(&d, a1);
        s -= sign * b.eval(&t2) / &fact * eval(&d, a2);
        d = deriv(&d);
        n += 1;
    }
    s
}

fn interval(a1: &Rational, a2: &Rational) -> Polytope {
    build_polytope(RationalSpace::standard(1), &[QVector(vec![a1.clone()]), QVector(vec![a2.clone()])]).unwrap()
}

fn poly1(h: &[Rational]) -> Polynomial {
    let mut p = Polynomial::zero(1);
    for (i, c) in h.iter().enumerate() {
        p.add_term(MultiIndex::from_slice(&[i]), c.clone());
    }
    p
}

#[test]
fn classical_formula_on_integral_interval() {
    // Σ_{k=0}^{10} k^5 = 220825 against ∫ + (h(a)+h(b))/2 + Σ b_{2k}/(2k)! (h^{(2k-1)}(b) - h^{(2k-1)}(a))
    let h = poly1(&[int(0), int(0), int(0), int(0), int(0), int(1)]);
    let p = interval(&int(0), &int(10));
    assert_eq!(em_sum(&p, &h).unwrap().total, int(220825));
    assert_eq!(interval_formula(&int(0), &int(10), &[int(0), int(0), int(0), int(0), int(0), int(1)]), int(220825));
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn rational_point(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-120i64..=120, 1i64..=12).prop_map(|(n, d)| rat(n, d).clamp(int(-10), int(10))), d)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn interval_matches_bernoulli_formula(a in small_rational(), len in (1i64..=40, 1i64..=12), h in prop::collection::vec(-5i64..=5, 1..=9)) {
        let a2 = &a + rat(len.0, len.1);
        let h: Vec<Rational> = h.into_iter().map(int).collect();
        let r = em_sum(&interval(&a, &a2), &poly1(&h)).unwrap();
        prop_assert_eq!(&r.total, &interval_formula(&a, &a2, &h));
        prop_assert_eq!(r.total, brute_force_sum(&interval(&a, &a2), &poly1(&h)).unwrap());
    }

    #[test]
    fn polygons_match_enumeration(pts in prop::collection::vec(rational_point(2), 3..=6), e in (0usize..=6, 0usize..=6)) {
        let v: Vec<QVector> = pts.into_iter().map(QVector).collect();
        let p = build_polytope(RationalSpace::standard(2), &v);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let e1 = e.0.min(6);
        let e2 = e.1.min(6 - e1);
        let h = Polynomial::monomial(2, &[e1, e2], int(1));
        let r = em_sum(&p, &h).unwrap();
        prop_assert_eq!(&r.total, &brute_force_sum(&p, &h).unwrap());
        let sum: Rational = r.faces.iter().map(|f| &f.value).sum();
        prop_assert_eq!(sum, r.total);
        let top = p.faces_of_dim(2)[0];
        prop_assert_eq!(integrate_over_face(&p, top, &h).unwrap(), fan_integral(&p, &h));
    }
}

fn small_point(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-24i64..=24, 1i64..=4).prop_map(|(n, d)| rat(n, d).clamp(int(-6), int(6))), d)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, ..ProptestConfig::default() })]

    #[test]
    fn tetrahedra_match_enumeration(pts in prop::collection::vec(small_point(3), 4), e in prop::collection::vec(0usize..=3, 3)) {
        let v: Vec<QVector> = pts.into_iter().map(QVector).collect();
        let p = build_polytope(RationalSpace::standard(3), &v);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let e1 = e[0];
        let e2 = e[1].min(3 - e1);
        let e3 = e[2].min(3 - e1 - e2);
        let h = Polynomial::monomial(3, &[e1, e2, e3], int(1));
        prop_assert_eq!(em_sum(&p, &h).unwrap().total, brute_force_sum(&p, &h).unwrap());
    }
}
