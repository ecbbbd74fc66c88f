//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run a subset with `cargo test --release --test acceptance -- 2 4`.

mod cyclotomic;
mod properties;

use std::time::{Duration, Instant};

use emlattice::ehrhart::{ehrhart_quasipoly, face_period};
use emlattice::euler_maclaurin::{brute_force_sum, em_sum, ContributionReport, Polynomial};
use emlattice::exactlin::{int, rat, RationalSpace};
use emlattice::germ::MultiIndex;
use emlattice::mu::bernoulli_poly;
use emlattice::polycone::{build_polytope, Polytope};
use emlattice::{QVector, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Suite = fn() -> Result<usize, String>;

/// Printed with the triangle dilated by 11^5 and h = x1^48 x2^48.
const LARGE_SUM: &str = concat!(
    "5596924745873549327126836861523807112133597426233788226141836362189704055956429496253759473056373507",
    "4512535220213441881151876476078455543117220292375694082426524766308884776342943657033518870232506644",
    "9699658412578227118050564472189215506691462635826618766307832135767161126206529390198386855725246445",
    "9832189159990869820527095536468716549148000057530594220665762047819234548239344752429600344219904125",
    "3798398004263030681714027295470241663946228744550160085438566242393777021077464925790142755630171678",
    "1314405269376338556975239252588060279466314599314734680953729093269435217987689840619074008924244401",
    "4302",
);

type Pt = (Rational, Rational);

fn polygon(pts: &[Pt]) -> Polytope {
    let v: Vec<QVector> = pts.iter().map(|(x, y)| QVector(vec![x.clone(), y.clone()])).collect();
    build_polytope(RationalSpace::standard(2), &v).unwrap()
}

fn s() -> [Pt; 4] {
    [(rat(1, 3), rat(1, 5)), (rat(16, 3), rat(1, 7)), (rat(37, 5), rat(92, 7)), (int(3), int(10))]
}

fn members(p: &Polytope, pts: &[&Pt]) -> Vec<usize> {
    let mut m: Vec<usize> = pts
        .iter()
        .map(|(x, y)| p.vertices.iter().position(|v| v.0 == [x.clone(), y.clone()]).expect("vertex"))
        .collect();
    m.sort();
    m
}

fn check_faces(p: &Polytope, r: &ContributionReport, expect: &[(Vec<&Pt>, Rational)]) -> Result<(), String> {
    for (f, want) in expect {
        let got = &r.by_members(&members(p, f)).ok_or("missing face")?.value;
        if got != want {
            return Err(format!("face {f:?}: got {got}, expected {want}"));
        }
    }
    Ok(())
}

fn equal<T: PartialEq + std::fmt::Display>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn dull_triangle() -> Outcome {
    let o = (int(0), int(0));
    let a = (int(1), int(0));
    let b = (int(0), int(1));
    let p = polygon(&[o.clone(), a.clone(), b.clone()]);
    let r = em_sum(&p, &Polynomial::monomial(2, &[20, 1], int(1))).map_err(|e| e.to_string())?;
    check_faces(
        &p,
        &r,
        &[
            (vec![&o], int(0)),
            (vec![&a], rat(-28224572717107, 66853011456)),
            (vec![&b], rat(5131761430387, 12155092992)),
            (vec![&o, &a], rat(-1, 252)),
            (vec![&a, &b], rat(287696501, 133706022912)),
            (vec![&o, &b], int(0)),
            (vec![&o, &a, &b], rat(1, 10626)),
        ],
    )?;
    equal("total", r.total, int(0))?;
    Ok("7 face contributions, total 0".into())
}

fn triangle() -> Outcome {
    let [s1, s2, s3, _] = s();
    let p = polygon(&[s1.clone(), s2.clone(), s3.clone()]);
    let r = em_sum(&p, &Polynomial::one(2)).map_err(|e| e.to_string())?;
    check_faces(
        &p,
        &r,
        &[
            (vec![&s1], rat(89133678169939, 66088208614500)),
            (vec![&s2], rat(-4281800310619, 2106396270216)),
            (vec![&s3], rat(-401172431621091, 457987274773000)),
            (vec![&s1, &s2], rat(1, 210)),
            (vec![&s2, &s3], rat(-1, 210)),
            (vec![&s1, &s3], rat(1, 1050)),
            (vec![&s1, &s2, &s3], rat(34187, 1050)),
        ],
    )?;
    equal("count", r.total, int(31))?;
    Ok("count 31".into())
}

fn quadrangle() -> Outcome {
    let [s1, s2, s3, s4] = s();
    let t = polygon(&[s1.clone(), s2.clone(), s3.clone()]);
    let shared = em_sum(&t, &Polynomial::one(2)).map_err(|e| e.to_string())?;
    let shared = shared.by_members(&members(&t, &[&s2])).unwrap().value.clone();
    let p = polygon(&[s1.clone(), s2.clone(), s3.clone(), s4.clone()]);
    let r = em_sum(&p, &Polynomial::one(2)).map_err(|e| e.to_string())?;
    check_faces(
        &p,
        &r,
        &[
            (vec![&s2], shared),
            (vec![&s1, &s2], rat(1, 210)),
            (vec![&s2, &s3], rat(-1, 210)),
            (vec![&s3, &s4], rat(11, 35)),
            (vec![&s1, &s4], rat(1, 30)),
        ],
    )?;
    equal("count", r.total, int(49))?;
    Ok("count 49, shared vertex agrees".into())
}

fn ehrhart() -> Outcome {
    let [s1, s2, s3, _] = s();
    let p = polygon(&[s1.clone(), s2.clone(), s3.clone()]);
    let (qp, faces) = ehrhart_quasipoly(&p, &Polynomial::one(2)).map_err(|e| e.to_string())?;
    if !qp.is_constant(2) {
        return Err("E2 depends on t".into());
    }
    equal("E2", qp.coefficient(2, &BigInt::one()), rat(34187, 1050))?;
    // edge E1: c - a·(k t mod q)
    let edges = [
        (vec![&s1, &s2], rat(1, 70), rat(1, 105), 1u64, 3u64),
        (vec![&s2, &s3], rat(1, 30), rat(1, 105), 4, 7),
        (vec![&s1, &s3], rat(1, 210), rat(1, 525), 2, 5),
    ];
    for (e, c, a, k, q) in edges {
        let m = members(&p, &e);
        let f = faces.iter().find(|f| f.members == m).ok_or("missing edge")?;
        equal("edge period", f.period, q)?;
        equal("edge period", face_period(&p, p.find_face(&m).unwrap()).map_err(|e| e.to_string())?, q)?;
        for r in 0..q {
            equal("edge residue", f.residues[r as usize][1].clone(), &c - &a * int(((k * r) % q) as i64))?;
        }
    }
    for (v, q) in [(&s1, 15u64), (&s2, 21), (&s3, 35)] {
        let m = members(&p, &[v]);
        equal("vertex period", faces.iter().find(|f| f.members == m).unwrap().period, q)?;
    }
    equal("period divides 105", 105 % qp.period, 0)?;
    Ok(format!("period {}, edge periods 3 7 5, vertex periods 15 21 35", qp.period))
}

fn large_dilation() -> Outcome {
    let [s1, s2, s3, _] = s();
    let p = polygon(&[s1, s2, s3]).dilate(&int(161051)).map_err(|e| e.to_string())?;
    let r = em_sum(&p, &Polynomial::monomial(2, &[48, 48], int(1))).map_err(|e| e.to_string())?;
    let want: BigInt = LARGE_SUM.parse().unwrap();
    if !r.total.is_integer() || r.total.to_integer() != want {
        return Err(format!("got {}", r.total));
    }
    Ok(format!("{} digits agree", LARGE_SUM.len()))
}

fn rand_vertex(r: &mut ChaCha8Rng, d: usize) -> QVector {
    // denominators <= 12, |coordinates| <= 10
    QVector(
        (0..d)
            .map(|_| {
                let den = r.gen_range(1..=12);
                rat(r.gen_range(-10 * den..=10 * den), den)
            })
            .collect(),
    )
}

fn rand_monomial(r: &mut ChaCha8Rng, d: usize, max_degree: usize) -> Polynomial {
    let deg = r.gen_range(0..=max_degree);
    let mut e = vec![0; d];
    for _ in 0..deg {
        e[r.gen_range(0..d)] += 1;
    }
    Polynomial::monomial(d, &e, int(1))
}

fn oracle_suite(d: usize, cases: usize, max_degree: usize, seed: u64) -> Result<(), String> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < cases {
        let n = if d == 2 { r.gen_range(3..=6) } else { 4 };
        let pts: Vec<QVector> = (0..n).map(|_| rand_vertex(&mut r, d)).collect();
        let Ok(p) = build_polytope(RationalSpace::standard(d), &pts) else { continue };
        let h = rand_monomial(&mut r, d, max_degree);
        let got = em_sum(&p, &h).map_err(|e| e.to_string())?.total;
        let want = brute_force_sum(&p, &h).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("{:?} with {h}: {got} vs {want}", p.vertices));
        }
        done += 1;
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    oracle_suite(2, 200, 6, 0x9017)?;
    oracle_suite(3, 50, 3, 0x7e7a)?;
    Ok("200 polygons, 50 tetrahedra".into())
}

fn property_suites() -> Outcome {
    let suites: [(&str, Suite); 11] = [
        ("translation invariance", properties::translation_invariance),
        ("signed permutation equivariance", properties::signed_permutations),
        ("orthogonal sums", properties::orthogonal_sums),
        ("hyperplane cut valuation", properties::cut_valuation),
        ("lattice-free spans", properties::lattice_free_spans),
        ("vertex-sum indicator", properties::vertex_sum_indicator),
        ("Brion germ identity", properties::brion_identity),
        ("residue laws", properties::residue_laws),
        ("direct vs Barvinok", properties::strategy_agreement),
        ("dim-1 and dim-2 closed forms", properties::closed_forms),
        ("Dedekind sawtooth vs cyclotomic", properties::dedekind_sawtooth),
    ];
    let mut failures = Vec::new();
    let mut total = 0;
    for (name, f) in suites {
        let t = Instant::now();
        let r = f();
        match &r {
            Ok(n) => {
                total += n;
                println!("      {name}: {n} cases ({:.1} s)", t.elapsed().as_secs_f64());
            }
            Err(e) => {
                println!("      {name}: failed: {e}");
                failures.push(name);
            }
        }
        if let Ok(n) = r {
            if n < properties::CASES {
                failures.push(name);
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("11 suites, {total} cases"))
    } else {
        Err(format!("failing suites: {}", failures.join(", ")))
    }
}

/// `Σ_{a₁ <= x <= a₂} h(x)` split as vertex, vertex, integral from Bernoulli polynomials.
fn interval_parts(a1: &Rational, a2: &Rational, h: &[Rational]) -> [Rational; 3] {
    let eval = |c: &[Rational], x: &Rational| c.iter().rev().fold(Rational::zero(), |acc, ci| acc * x + ci);
    let deriv = |c: &[Rational]| -> Vec<Rational> { c.iter().enumerate().skip(1).map(|(i, ci)| ci * int(i as i64)).collect() };
    let anti: Vec<Rational> =
        std::iter::once(Rational::zero()).chain(h.iter().enumerate().map(|(i, ci)| ci / int(i as i64 + 1))).collect();
    let t1 = a1.ceil() - a1;
    let t2 = a2 - a2.floor();
    let (mut left, mut right) = (Rational::zero(), Rational::zero());
    let mut d = h.to_vec();
    let mut fact = Rational::one();
    let mut n = 0usize;
    while !d.is_empty() {
        fact *= int(n as i64 + 1);
        let b = bernoulli_poly(n + 1);
        let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
        left -= b.eval(&t1) / &fact * eval(&d, a1);
        right -= sign * b.eval(&t2) / &fact * eval(&d, a2);
        d = deriv(&d);
        n += 1;
    }
    [left, right, eval(&anti, a2) - eval(&anti, a1)]
}

fn interval_check() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(0x1a7e);
    for _ in 0..25 {
        let a1 = rat(r.gen_range(-120..=120), r.gen_range(1..=12));
        let a2 = &a1 + rat(r.gen_range(1..=240), r.gen_range(1..=12));
        let deg = r.gen_range(0..=8);
        let h: Vec<Rational> = (0..=deg).map(|_| rat(r.gen_range(-9..=9), r.gen_range(1..=4))).collect();
        let mut poly = Polynomial::zero(1);
        for (i, c) in h.iter().enumerate() {
            poly.add_term(MultiIndex::from_slice(&[i]), c.clone());
        }
        let p = build_polytope(RationalSpace::standard(1), &[QVector(vec![a1.clone()]), QVector(vec![a2.clone()])])
            .map_err(|e| e.to_string())?;
        let report = em_sum(&p, &poly).map_err(|e| e.to_string())?;
        let [left, right, integral] = interval_parts(&a1, &a2, &h);
        let pl = &report.by_members(&[p.vertices.iter().position(|v| v[0] == a1).unwrap()]).unwrap().value;
        let pr = &report.by_members(&[p.vertices.iter().position(|v| v[0] == a2).unwrap()]).unwrap().value;
        let pi = &report.of_dim(1)[0].value;
        if (pl, pr, pi) != (&left, &right, &integral) {
            return Err(format!("[{a1}, {a2}]: face values differ"));
        }
        equal("total", report.total.clone(), &left + &right + &integral)?;
        equal("enumeration", report.total, brute_force_sum(&p, &poly).map_err(|e| e.to_string())?)?;
    }
    Ok("25 intervals, degree <= 8".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "dull triangle golden", limit: Duration::from_secs(10), run: dull_triangle },
        Criterion { id: 2, name: "357 triangle golden", limit: Duration::from_secs(10), run: triangle },
        Criterion { id: 3, name: "357 quadrangle golden", limit: Duration::from_secs(10), run: quadrangle },
        Criterion { id: 4, name: "Ehrhart golden", limit: Duration::from_secs(60), run: ehrhart },
        Criterion { id: 5, name: "large dilation", limit: Duration::from_secs(30 * 60), run: large_dilation },
        Criterion { id: 6, name: "oracle equivalence", limit: Duration::from_secs(10 * 60), run: oracle_equivalence },
        Criterion { id: 7, name: "property suites", limit: Duration::MAX, run: property_suites },
        Criterion { id: 8, name: "interval check", limit: Duration::MAX, run: interval_check },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let t = Instant::now();
        let outcome = (c.run)();
        let elapsed = t.elapsed();
        let limit = if c.limit == Duration::MAX { String::new() } else { format!(" < {} s", c.limit.as_secs()) };
        let timing = format!("{:.1} s{limit}", elapsed.as_secs_f64());
        let outcome = match outcome {
            Ok(msg) if elapsed > c.limit => Err(format!("{msg}, but over the time limit")),
            o => o,
        };
        match outcome {
            Ok(msg) => println!("PASS {}. {}: {msg} ({timing})", c.id, c.name),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {}: {msg} ({timing})", c.id, c.name);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
