//! Golden values for the triangles and quadrangle used as running examples.

use emlattice::ehrhart::{ehrhart_quasipoly, face_period};
use emlattice::euler_maclaurin::{em_sum, ContributionReport, Polynomial};
use emlattice::exactlin::{int, rat, RationalSpace};
use emlattice::mu::mu_cone;
use emlattice::polycone::{build_polytope, AffineCone, Polytope};
use emlattice::{QVector, Rational, Result};
use num_bigint::BigInt;
use serde_json::json;

use crate::commands::Report;

type Check = fn() -> Result<bool>;

fn polygon(pts: &[(Rational, Rational)]) -> Result<Polytope> {
    let v: Vec<QVector> = pts.iter().map(|(x, y)| QVector(vec![x.clone(), y.clone()])).collect();
    build_polytope(RationalSpace::standard(2), &v)
}

fn s() -> [(Rational, Rational); 4] {
    [(rat(1, 3), rat(1, 5)), (rat(16, 3), rat(1, 7)), (rat(37, 5), rat(92, 7)), (int(3), int(10))]
}

/// Contribution of the face spanned by the given vertices, located by coordinates.
fn value(p: &Polytope, r: &ContributionReport, pts: &[&(Rational, Rational)]) -> Option<Rational> {
    let mut m: Vec<usize> = pts
        .iter()
        .map(|(x, y)| p.vertices.iter().position(|v| v.0 == [x.clone(), y.clone()]))
        .collect::<Option<_>>()?;
    m.sort();
    r.by_members(&m).map(|f| f.value.clone())
}

fn dull() -> Result<bool> {
    let o = (int(0), int(0));
    let a = (int(1), int(0));
    let b = (int(0), int(1));
    let p = polygon(&[o.clone(), a.clone(), b.clone()])?;
    let r = em_sum(&p, &Polynomial::monomial(2, &[20, 1], int(1)))?;
    let expect = [
        (vec![&o], int(0)),
        (vec![&a], rat(-28224572717107, 66853011456)),
        (vec![&b], rat(5131761430387, 12155092992)),
        (vec![&o, &a], rat(-1, 252)),
        (vec![&a, &b], rat(287696501, 133706022912)),
        (vec![&o, &b], int(0)),
        (vec![&o, &a, &b], rat(1, 10626)),
    ];
    Ok(expect.iter().all(|(f, v)| value(&p, &r, f).as_ref() == Some(v)) && r.total == int(0))
}

fn triangle() -> Result<bool> {
    let [s1, s2, s3, _] = s();
    let p = polygon(&[s1.clone(), s2.clone(), s3.clone()])?;
    let r = em_sum(&p, &Polynomial::one(2))?;
    let expect = [
        (vec![&s1], rat(89133678169939, 66088208614500)),
        (vec![&s2], rat(-4281800310619, 2106396270216)),
        (vec![&s3], rat(-401172431621091, 457987274773000)),
        (vec![&s1, &s2], rat(1, 210)),
        (vec![&s2, &s3], rat(-1, 210)),
        (vec![&s1, &s3], rat(1, 1050)),
        (vec![&s1, &s2, &s3], rat(34187, 1050)),
    ];
    Ok(expect.iter().all(|(f, v)| value(&p, &r, f).as_ref() == Some(v)) && r.total == int(31))
}

fn quadrangle() -> Result<bool> {
    let [s1, s2, s3, s4] = s();
    let p = polygon(&[s1.clone(), s2.clone(), s3.clone(), s4.clone()])?;
    let r = em_sum(&p, &Polynomial::one(2))?;
    let expect = [
        (vec![&s2], rat(-4281800310619, 2106396270216)),
        (vec![&s1, &s2], rat(1, 210)),
        (vec![&s2, &s3], rat(-1, 210)),
        (vec![&s3, &s4], rat(11, 35)),
        (vec![&s1, &s4], rat(1, 30)),
    ];
    Ok(expect.iter().all(|(f, v)| value(&p, &r, f).as_ref() == Some(v)) && r.total == int(49))
}

fn periods() -> Result<bool> {
    let [s1, s2, s3, _] = s();
    let p = polygon(&[s1.clone(), s2.clone(), s3.clone()])?;
    let find = |pts: &[&(Rational, Rational)]| {
        let mut m: Vec<usize> = pts
            .iter()
            .map(|(x, y)| p.vertices.iter().position(|v| v.0 == [x.clone(), y.clone()]).unwrap())
            .collect();
        m.sort();
        p.find_face(&m).unwrap().clone()
    };
    let expect: [(Vec<&(Rational, Rational)>, u64); 6] = [
        (vec![&s1], 15),
        (vec![&s2], 21),
        (vec![&s3], 35),
        (vec![&s1, &s2], 3),
        (vec![&s2, &s3], 7),
        (vec![&s1, &s3], 5),
    ];
    for (f, q) in expect {
        if face_period(&p, &find(&f))? != q {
            return Ok(false);
        }
    }
    let (qp, _) = ehrhart_quasipoly(&p, &Polynomial::one(2))?;
    let one = BigInt::from(1);
    Ok(105 % qp.period == 0 && qp.is_constant(2) && qp.coefficient(2, &one) == rat(34187, 1050) && qp.eval(&one) == int(31))
}

fn half_line() -> Result<bool> {
    let c = AffineCone::new(RationalSpace::standard(1), QVector(vec![int(0)]), &[QVector(vec![int(1)])])?;
    Ok(mu_cone(&c, 3)?.series.to_string() == "1/2 - 1/12*x1 + 1/720*x1^3")
}

pub fn run() -> Report {
    let checks: [(&str, Check); 5] = [
        ("dull triangle, h = x1^20*x2", dull),
        ("357 triangle, h = 1", triangle),
        ("357 quadrangle, h = 1", quadrangle),
        ("357 triangle periods and E2", periods),
        ("half-line mu, order 3", half_line),
    ];
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failed = 0;
    for (name, f) in checks {
        let ok = matches!(f(), Ok(true));
        if !ok {
            failed += 1;
        }
        text.push_str(&format!("{} {name}\n", if ok { "PASS" } else { "FAIL" }));
        rows.push(json!({ "name": name, "pass": ok }));
    }
    Report { text, json: json!({ "checks": rows, "failed": failed }), status: if failed == 0 { 0 } else { 4 } }
}
