//! Exact rational linear algebra and lattices.

mod hnf;
mod lattice;
mod lll;
mod matrix;

pub use hnf::{hermite_normal_form, hnf_diagonal, integer_kernel, solve_integral, IntMatrix};
pub use lattice::{
    covolume_squared, intersect_lattice, orthogonal_projection, primitive_vector, quotient_lattice, Lattice,
    RationalSpace, ScalarProduct,
};
pub use lll::lll_reduce;
pub use matrix::{QMatrix, QVector};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((a, b)) = s.split_once('.') {
        if b.is_empty() || !b.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = a.starts_with('-');
        let a = if a.is_empty() || a == "-" || a == "+" { "0" } else { a };
        let whole: BigInt = a.parse().ok()?;
        let frac: BigInt = b.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), b.len());
        let mut r = big(&whole.abs()) + Rational::new(frac, scale);
        if neg {
            r = -r;
        }
        return Some(r);
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// `ceil(x) - x`, in `[0, 1)`.
pub fn ceil_gap(x: &Rational) -> Rational {
    x.ceil() - x
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Divides an integer vector by the gcd of its entries. Zero stays zero.
pub fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and divides out the content. Keeps the direction.
pub fn primitive_direction(v: &[Rational]) -> Vec<BigInt> {
    let d = lcm_denominators(v.iter());
    let ints: Vec<BigInt> = v.iter().map(|x| (x * big(&d)).to_integer()).collect();
    primitive_int(&ints)
}
