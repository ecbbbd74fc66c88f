use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::series::TruncSeries;
use crate::exactlin::{big, primitive_direction, Rational};
use crate::{Error, Result};

/// Primitive integer linear form with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm(pub Vec<BigInt>);

impl LinearForm {
    /// Canonical form `ℓ` and scalar `c` with `v = c ℓ`.
    pub fn canonicalize(v: &[Rational]) -> Result<(LinearForm, Rational)> {
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroVector);
        }
        let mut dir = primitive_direction(v);
        let lead = dir.iter().position(|x| !x.is_zero()).unwrap();
        if dir[lead].is_negative() {
            dir.iter_mut().for_each(|x| *x = -x.clone());
        }
        let c = &v[lead] / big(&dir[lead]);
        Ok((LinearForm(dir), c))
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        self.0.iter().map(big).collect()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `Some(i)` if the form is the coordinate `x_i`.
    pub fn as_coordinate(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect();
        (nz.len() == 1 && self.0[nz[0]].is_one()).then(|| nz[0])
    }
}

/// `num / ∏ den`, a meromorphic germ at the origin with hyperplane singularities.
/// The numerator is known through `num.order()`; the germ therefore has
/// precision `num.order() - den.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeroGerm {
    pub num: TruncSeries,
    /// Sorted multiset.
    pub den: Vec<LinearForm>,
}

impl MeroGerm {
    pub fn analytic(num: TruncSeries) -> Self {
        MeroGerm { num, den: vec![] }
    }

    pub fn zero(nvars: usize, order: usize) -> Self {
        Self::analytic(TruncSeries::zero(nvars, order))
    }

    /// `num / ∏ ⟨ξ, v⟩` over the given (not necessarily canonical) vectors.
    pub fn new(num: TruncSeries, forms: &[Vec<Rational>]) -> Result<Self> {
        let mut den = Vec::with_capacity(forms.len());
        let mut scale = Rational::one();
        for v in forms {
            if v.len() != num.nvars() {
                return Err(Error::DimensionMismatch { expected: num.nvars(), got: v.len() });
            }
            let (l, c) = LinearForm::canonicalize(v)?;
            scale *= c;
            den.push(l);
        }
        den.sort();
        Ok(MeroGerm { num: num.scale(&scale.recip()), den })
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn precision(&self) -> i64 {
        self.num.order() as i64 - self.den.len() as i64
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MeroGerm { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Rewrites the germ over a larger denominator multiset.
    fn expand_to(&self, den: &[LinearForm]) -> TruncSeries {
        let mut num = self.num.clone();
        let mut mine = self.den.clone();
        for l in den {
            if let Some(p) = mine.iter().position(|m| m == l) {
                mine.remove(p);
            } else {
                num = num.mul_linear(&l.coeffs());
            }
        }
        debug_assert!(mine.is_empty());
        num
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = multiset_max(&self.den, &other.den);
        let a = self.expand_to(&den);
        let b = other.expand_to(&den);
        MeroGerm { num: a.add(&b), den }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den = self.den.clone();
        den.extend(other.den.iter().cloned());
        den.sort();
        MeroGerm { num: self.num.mul(&other.num), den }
    }

    pub fn mul_analytic(&self, f: &TruncSeries) -> Self {
        MeroGerm { num: self.num.mul(f), den: self.den.clone() }
    }

    /// Multiplies by `exp(⟨ξ, c⟩)`.
    pub fn mul_exp(&self, c: &[Rational]) -> Self {
        if c.iter().all(Zero::is_zero) {
            return self.clone();
        }
        let e = TruncSeries::exp_linear(c, self.num.order());
        self.mul_analytic(&e)
    }

    /// Linear change of variables `ξ_j = Σ_i m[j][i] η_i` (one row per old variable).
    pub fn substitute_linear(&self, m: &[Vec<Rational>], new_nvars: usize) -> Result<Self> {
        let num = self.num.substitute_linear(m, new_nvars);
        let forms: Vec<Vec<Rational>> = self
            .den
            .iter()
            .map(|l| {
                (0..new_nvars)
                    .map(|i| {
                        l.0.iter()
                            .zip(m)
                            .fold(Rational::zero(), |acc, (lj, row)| acc + big(lj) * &row[i])
                    })
                    .collect()
            })
            .collect();
        Self::new(num, &forms)
    }

    /// The analytic series, if the germ is analytic, through `precision()`.
    pub fn to_analytic(&self) -> Result<TruncSeries> {
        let mut s = self.num.clone();
        for l in &self.den {
            s = divide_by_linear_form(&s, l)?;
        }
        Ok(s)
    }

    /// Like [`to_analytic`](Self::to_analytic) but truncated at `order`.
    pub fn to_analytic_order(&self, order: usize) -> Result<TruncSeries> {
        if (order as i64) > self.precision() {
            return Err(Error::OrderUnderflow {
                requested: order as i64,
                available: self.precision(),
            });
        }
        Ok(self.to_analytic()?.truncate(order))
    }

    /// Restriction of `⟨ξ, v⟩ g` to the hyperplane `⟨ξ, v⟩ = 0`. The hyperplane is
    /// parametrised by dropping the coordinate `p` of largest `|v_p|`; returns the
    /// germ in the remaining variables and `p`.
    pub fn residue_along(&self, v: &[Rational]) -> Result<(MeroGerm, usize)> {
        let (l, c) = LinearForm::canonicalize(v)?;
        let n = self.nvars();
        let p = (0..n).max_by_key(|&i| l.0[i].abs()).unwrap();
        let param = hyperplane_parametrisation(&l, p);
        let mut den = self.den.clone();
        let Some(pos) = den.iter().position(|m| m == &l) else {
            return Ok((MeroGerm::zero(n - 1, self.precision().max(0) as usize), p));
        };
        den.remove(pos);
        // ⟨ξ, v⟩ = c ℓ and one factor ℓ cancels
        let g = MeroGerm { num: self.num.scale(&c), den };
        let num = g.num.substitute_linear(&param, n - 1);
        let mut forms = Vec::with_capacity(g.den.len());
        for m in &g.den {
            let f: Vec<Rational> = (0..n - 1)
                .map(|i| {
                    m.0.iter()
                        .zip(&param)
                        .fold(Rational::zero(), |acc, (mj, row)| acc + big(mj) * &row[i])
                })
                .collect();
            if f.iter().all(Zero::is_zero) {
                return Err(Error::InvalidArgument("pole of order two along hyperplane".into()));
            }
            forms.push(f);
        }
        // the numerator lost one denominator's worth of order: it stays known
        // through the same degree, and the residue has precision one higher
        Ok((MeroGerm::new(num, &forms)?, p))
    }
}

/// Rows express the old coordinates through the `n - 1` coordinates other
/// than `p` on the hyperplane `ℓ = 0`.
pub fn hyperplane_parametrisation(l: &LinearForm, p: usize) -> Vec<Vec<Rational>> {
    let n = l.nvars();
    let lp = big(&l.0[p]);
    (0..n)
        .map(|j| {
            let mut row = vec![Rational::zero(); n - 1];
            if j == p {
                for (i, k) in (0..n).filter(|&k| k != p).enumerate() {
                    row[i] = -big(&l.0[k]) / &lp;
                }
            } else {
                let i = if j < p { j } else { j - 1 };
                row[i] = Rational::one();
            }
            row
        })
        .collect()
}

fn multiset_max(a: &[LinearForm], b: &[LinearForm]) -> Vec<LinearForm> {
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push(a[i].clone());
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact division of a series by a linear form; the order drops by one.
pub fn divide_by_linear_form(s: &TruncSeries, l: &LinearForm) -> Result<TruncSeries> {
    if let Some(i) = l.as_coordinate() {
        return s.divide_by_var(i);
    }
    let n = s.nvars();
    let p = (0..n).max_by_key(|&i| l.0[i].abs()).unwrap();
    let lp = big(&l.0[p]);
    // u_p = ℓ(x), u_j = x_j otherwise; so x_p = (u_p - Σ_{j≠p} ℓ_j u_j) / ℓ_p
    let to_u: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut row = vec![Rational::zero(); n];
            if j == p {
                for k in 0..n {
                    row[k] = if k == p { lp.recip() } else { -big(&l.0[k]) / &lp };
                }
            } else {
                row[j] = Rational::one();
            }
            row
        })
        .collect();
    let in_u = s.substitute_linear(&to_u, n);
    let q = in_u.divide_by_var(p)?;
    let back: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            if j == p {
                l.coeffs()
            } else {
                let mut row = vec![Rational::zero(); n];
                row[j] = Rational::one();
                row
            }
        })
        .collect();
    Ok(q.substitute_linear(&back, n))
}

impl fmt::Display for MeroGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        for l in &self.den {
            let t = TruncSeries::linear(1, &l.coeffs());
            write!(f, " / ({t})")?;
        }
        Ok(())
    }
}
