use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactlin::{big, binomial, factorial, Rational};

/// Bernoulli numbers `b_0..=b_n` with `b_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut b = cache.lock().unwrap();
    while b.len() <= n {
        // Σ_{k<=m} C(m+1, k) b_k = 0
        let m = b.len();
        let s = (0..m).fold(Rational::zero(), |acc, k| acc + big(&binomial(m + 1, k)) * &b[k]);
        b.push(-s / big(&BigInt::from(m + 1)));
    }
    b[..=n].to_vec()
}

/// `b(n, t) = Σ_k C(n, k) b_k t^{n-k}`, coefficients in increasing powers of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliPoly {
    pub n: usize,
    pub coeffs: Vec<Rational>,
}

impl BernoulliPoly {
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }
}

pub fn bernoulli_poly(n: usize) -> BernoulliPoly {
    static CACHE: OnceLock<Mutex<Vec<BernoulliPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut polys = cache.lock().unwrap();
    while polys.len() <= n {
        let m = polys.len();
        let b = bernoulli_numbers(m);
        let mut coeffs = vec![Rational::zero(); m + 1];
        for (k, bk) in b.iter().enumerate() {
            coeffs[m - k] = big(&binomial(m, k)) * bk;
        }
        polys.push(BernoulliPoly { n: m, coeffs });
    }
    polys[n].clone()
}

/// Coefficients of `T(y) = y / (1 - e^y) = -Σ b_n y^n / n!` through `order`.
pub fn todd_coeffs(order: usize) -> Vec<Rational> {
    bernoulli_numbers(order)
        .iter()
        .enumerate()
        .map(|(n, b)| -b / big(&factorial(n)))
        .collect()
}

/// Coefficients of `T_t(y) = e^{t y} y / (1 - e^y) = -Σ b(n, t) y^n / n!`.
pub fn shifted_todd_coeffs(t: &Rational, order: usize) -> Vec<Rational> {
    let mut f = BigInt::one();
    (0..=order)
        .map(|n| {
            if n > 0 {
                f *= n;
            }
            -bernoulli_poly(n).eval(t) / big(&f)
        })
        .collect()
}
