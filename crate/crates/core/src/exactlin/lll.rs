use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{big, lcm_denominators, Lattice, QVector, Rational, ScalarProduct};

/// Nearest integer to `a / b` for `b > 0`, halves rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// LLL reduction with `δ = 3/4` under the scalar product `q`.
///
/// Runs the integral variant on `D·basis` with the Gram form `E·q`, where `D`
/// and `E` clear denominators; both scalings leave reducedness unchanged.
pub fn lll_reduce(lat: &Lattice, q: &ScalarProduct) -> Lattice {
    let n = lat.basis.len();
    if n <= 1 {
        return lat.clone();
    }
    let dim = lat.ambient_dim;
    let d = lcm_denominators(lat.basis.iter().flat_map(|v| v.0.iter()));
    let entries: Vec<Rational> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| q.matrix[(i, j)].clone()).collect();
    let e = lcm_denominators(entries.iter());
    let gram_q: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| (0..dim).map(|j| (&q.matrix[(i, j)] * big(&e)).to_integer()).collect())
        .collect();
    let mut b: Vec<Vec<BigInt>> = lat
        .basis
        .iter()
        .map(|v| v.0.iter().map(|x| (x * big(&d)).to_integer()).collect())
        .collect();
    let dot = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        let mut s = BigInt::zero();
        for i in 0..dim {
            if x[i].is_zero() {
                continue;
            }
            let mut t = BigInt::zero();
            for j in 0..dim {
                if !y[j].is_zero() {
                    t += &gram_q[i][j] * &y[j];
                }
            }
            s += &x[i] * t;
        }
        s
    };
    // dd[i + 1] = d_i, with dd[0] = 1; lam[k][j] for j < k
    let mut dd = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    dd[0] = BigInt::one();
    dd[1] = dot(&b[0], &b[0]);
    let mut k = 1;
    let mut kmax = 0;
    let red = |b: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, dd: &[BigInt], k: usize, l: usize| {
        if (&lam[k][l] * BigInt::from(2)).abs() > dd[l + 1] {
            let r = round_div(&lam[k][l], &dd[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &r * y;
            }
            lam[k][l] -= &r * &dd[l + 1];
            for i in 0..l {
                let t = &r * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&dd[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &dd[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "lattice basis is dependent");
                    dd[k + 1] = u;
                }
            }
        }
        loop {
            red(&mut b, &mut lam, &dd, k, k - 1);
            let lhs: BigInt = &dd[k + 1] * &dd[k - 1] * 4u32;
            let rhs: BigInt = &dd[k] * &dd[k] * 3u32 - &lam[k][k - 1] * &lam[k][k - 1] * 4u32;
            if lhs >= rhs {
                break;
            }
            // swap b_k and b_{k-1}
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = std::mem::take(&mut lam[k][j]);
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let l = lam[k][k - 1].clone();
            let bb = (&dd[k - 1] * &dd[k + 1] + &l * &l) / &dd[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&dd[k + 1] * &lam[i][k - 1] - &l * &t) / &dd[k];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &dd[k + 1];
            }
            dd[k] = bb;
            if k > 1 {
                k -= 1;
            }
        }
        for l in (0..k - 1).rev() {
            red(&mut b, &mut lam, &dd, k, l);
        }
        k += 1;
    }
    let dr = big(&d);
    let basis = b
        .into_iter()
        .map(|v| QVector(v.into_iter().map(|x| big(&x) / &dr).collect()))
        .collect();
    Lattice { ambient_dim: lat.ambient_dim, basis }
}
