//! Arithmetic in `ℚ[x] / Φ_q`, used to evaluate root-of-unity sums exactly.

use emlattice::exactlin::int;
use emlattice::Rational;
use num_traits::Zero;

type Poly = Vec<Rational>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect())
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

fn divmod(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        let mut t = vec![Rational::zero(); shift];
        t.extend(b.iter().map(|x| x * &c));
        q[shift] += c;
        r = sub(&r, &t);
    }
    (trim(q), r)
}

fn phi(q: usize) -> Poly {
    let mut p = vec![Rational::zero(); q + 1];
    p[0] = int(-1);
    p[q] = int(1);
    for d in (1..q).filter(|d| q.is_multiple_of(*d)) {
        p = divmod(&p, &phi(d)).0;
    }
    p
}

fn monomial(k: usize, q: usize) -> Poly {
    let mut p = vec![Rational::zero(); k % q + 1];
    p[k % q] = int(1);
    p
}

fn reduce(a: &Poly, m: &Poly) -> Poly {
    divmod(a, m).1
}

fn mulmod(a: &Poly, b: &Poly, m: &Poly) -> Poly {
    reduce(&mul(a, b), m)
}

/// Inverse modulo an irreducible `m`, by the extended Euclidean algorithm.
fn inverse(a: &Poly, m: &Poly) -> Poly {
    let (mut r0, mut r1) = (m.clone(), reduce(a, m));
    let (mut s0, mut s1): (Poly, Poly) = (vec![], vec![int(1)]);
    while !r1.is_empty() {
        let (q, r) = divmod(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    assert_eq!(r0.len(), 1, "not invertible");
    let c = r0[0].recip();
    reduce(&s0.iter().map(|x| x * &c).collect(), m)
}

fn add(a: &Poly, b: &Poly) -> Poly {
    sub(a, &b.iter().map(|x| -x).collect())
}

/// `(1/q) Σ_{k=1}^{q-1} ζ^{kr} / ((1 - ζ^k)(1 - ζ^{kp}))`.
pub fn fourier_dedekind(q: usize, p: usize, r: usize) -> Rational {
    if q == 1 {
        return Rational::zero();
    }
    let m = phi(q);
    let one = vec![int(1)];
    let mut total: Poly = vec![];
    for k in 1..q {
        let den = mulmod(&sub(&one, &monomial(k, q)), &sub(&one, &monomial(k * p, q)), &m);
        let term = mulmod(&reduce(&monomial(k * r, q), &m), &inverse(&den, &m), &m);
        total = add(&total, &term);
    }
    assert!(total.len() <= 1, "sum is not rational");
    total.first().cloned().unwrap_or_default() / int(q as i64)
}
