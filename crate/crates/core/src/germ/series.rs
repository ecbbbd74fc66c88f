use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{big, factorial, lcm_denominators, Rational};
use crate::{Error, Result};

pub const MAX_VARS: usize = 8;

/// Exponent vector. Unused trailing slots stay zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u16; MAX_VARS]);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex([0; MAX_VARS])
    }

    pub fn from_slice(e: &[usize]) -> Self {
        assert!(e.len() <= MAX_VARS);
        let mut m = [0u16; MAX_VARS];
        for (i, &x) in e.iter().enumerate() {
            m[i] = u16::try_from(x).expect("exponent overflow");
        }
        MultiIndex(m)
    }

    pub fn unit(i: usize) -> Self {
        let mut m = Self::zero();
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&x| x as usize).sum()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] += other.0[i];
        }
        m
    }

    /// `self - other`, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.0[i] = m.0[i].checked_sub(other.0[i])?;
        }
        Some(m)
    }

    /// `∏ α_i!`
    pub fn factorial(&self) -> num_bigint::BigInt {
        self.0.iter().map(|&x| factorial(x as usize)).product()
    }
}

/// All exponent vectors in `nvars` variables of total degree exactly `deg`.
pub fn monomials_of_degree(nvars: usize, deg: usize) -> Vec<MultiIndex> {
    fn rec(i: usize, nvars: usize, left: usize, cur: &mut [usize], out: &mut Vec<MultiIndex>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(MultiIndex::from_slice(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, nvars, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(MultiIndex::zero());
        }
        return out;
    }
    let mut cur = vec![0; nvars];
    rec(0, nvars, deg, &mut cur, &mut out);
    out
}

/// Multivariate power series known through total degree `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    nvars: usize,
    order: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl TruncSeries {
    pub fn zero(nvars: usize, order: usize) -> Self {
        assert!(nvars <= MAX_VARS, "too many variables");
        TruncSeries { nvars, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: usize, c: Rational) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(MultiIndex::zero(), c);
        s
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::constant(nvars, order, Rational::one())
    }

    pub fn var(nvars: usize, order: usize, i: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(MultiIndex::unit(i), Rational::one());
        s
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(order: usize, c: &[Rational]) -> Self {
        let mut s = Self::zero(c.len(), order);
        for (i, ci) in c.iter().enumerate() {
            s.add_term(MultiIndex::unit(i), ci.clone());
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, a: &MultiIndex) -> Rational {
        self.coeffs.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c x^a`; terms above the order are dropped.
    pub fn add_term(&mut self, a: MultiIndex, c: Rational) {
        if c.is_zero() || a.degree() > self.order {
            return;
        }
        match self.coeffs.entry(a) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries {
            nvars: self.nvars,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.degree() <= order)
                .map(|(a, c)| (*a, c.clone()))
                .collect(),
        }
    }

    /// Same coefficients with a larger nominal order. Only valid when the
    /// caller knows the higher terms vanish (e.g. polynomials).
    pub fn with_order(mut self, order: usize) -> Self {
        if order < self.order {
            return self.truncate(order);
        }
        self.order = order;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut r = self.truncate(self.order.min(other.order));
        for (a, c) in &other.coeffs {
            r.add_term(*a, c.clone());
        }
        r
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.nvars, other.nvars);
        if other.order < self.order {
            *self = self.truncate(other.order);
        }
        for (a, c) in &other.coeffs {
            self.add_term(*a, c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        TruncSeries {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(a, x)| (*a, x * c)).collect(),
        }
    }

    /// Lowest degree of a nonzero term (`order + 1` for the zero series).
    pub fn valuation(&self) -> usize {
        self.coeffs.keys().map(MultiIndex::degree).min().unwrap_or(self.order + 1)
    }

    /// Product, known through `min(ord_a + val_b, ord_b + val_a)`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let order = (self.order + other.valuation()).min(other.order + self.valuation());
        let order = order.max(self.order.min(other.order));
        self.mul_to(other, order)
    }

    /// Product truncated at `order`; the caller is responsible for validity.
    pub fn mul_to(&self, other: &Self, order: usize) -> Self {
        let mut acc: HashMap<MultiIndex, Rational> = HashMap::new();
        let mut b_by_deg: Vec<(&MultiIndex, &Rational, usize)> =
            other.coeffs.iter().map(|(a, c)| (a, c, a.degree())).collect();
        b_by_deg.sort_by_key(|t| t.2);
        for (a, ca) in &self.coeffs {
            let da = a.degree();
            if da > order {
                continue;
            }
            for (b, cb, db) in &b_by_deg {
                if da + db > order {
                    break;
                }
                let e = acc.entry(a.add(b)).or_insert_with(Rational::zero);
                *e += ca * *cb;
            }
        }
        let mut r = Self::zero(self.nvars, order);
        for (a, c) in acc {
            if !c.is_zero() {
                r.coeffs.insert(a, c);
            }
        }
        r
    }

    /// Multiplies by `x^a` exactly; the known order grows by `|a|`.
    pub fn shift(&self, a: &MultiIndex) -> Self {
        TruncSeries {
            nvars: self.nvars,
            order: self.order + a.degree(),
            coeffs: self.coeffs.iter().map(|(b, c)| (b.add(a), c.clone())).collect(),
        }
    }

    /// Multiplies by the homogeneous linear form `Σ c_i x_i`; order grows by one.
    pub fn mul_linear(&self, c: &[Rational]) -> Self {
        let mut r = Self::zero(self.nvars, self.order + 1);
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let u = MultiIndex::unit(i);
            for (a, x) in &self.coeffs {
                r.add_term(a.add(&u), x * ci);
            }
        }
        r
    }

    /// Divides by `x_i`; fails unless every known term free of `x_i` vanishes.
    pub fn divide_by_var(&self, i: usize) -> Result<Self> {
        if let Some((a, _)) = self.coeffs.iter().find(|(a, _)| a.0[i] == 0) {
            return Err(Error::NotDivisible { degree: a.degree() });
        }
        if self.order == 0 {
            return Err(Error::OrderUnderflow { requested: 0, available: -1 });
        }
        let u = MultiIndex::unit(i);
        Ok(TruncSeries {
            nvars: self.nvars,
            order: self.order - 1,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (a.checked_sub(&u).unwrap(), c.clone()))
                .collect(),
        })
    }

    /// Homogeneous linear substitution `x_j -> Σ_i forms[j][i] y_i` into a series
    /// in `new_nvars` variables. The order is preserved.
    pub fn substitute_linear(&self, forms: &[Vec<Rational>], new_nvars: usize) -> Self {
        self.substitute_linear_raw(forms, new_nvars).to_series()
    }

    pub(crate) fn substitute_linear_raw(&self, forms: &[Vec<Rational>], new_nvars: usize) -> RawSeries {
        assert_eq!(forms.len(), self.nvars);
        let mut r = RawSeries::zero(new_nvars, self.order);
        if self.coeffs.is_empty() {
            return r;
        }
        // Substitution keeps degrees, so with integral forms `d·forms` each output
        // degree is an integer combination over one common denominator.
        let d = lcm_denominators(forms.iter().flatten());
        let iforms: Vec<Vec<(usize, BigInt)>> = forms
            .iter()
            .map(|f| {
                f.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, (c * big(&d)).to_integer()))
                    .collect()
            })
            .collect();
        let mut powers: HashMap<MultiIndex, Vec<(MultiIndex, BigInt)>> = HashMap::new();
        powers.insert(MultiIndex::zero(), vec![(MultiIndex::zero(), BigInt::one())]);
        fn build(
            a: MultiIndex,
            forms: &[Vec<(usize, BigInt)>],
            powers: &mut HashMap<MultiIndex, Vec<(MultiIndex, BigInt)>>,
        ) {
            if powers.contains_key(&a) {
                return;
            }
            let j = (0..MAX_VARS).rfind(|&j| a.0[j] > 0).unwrap();
            let prev = a.checked_sub(&MultiIndex::unit(j)).unwrap();
            build(prev, forms, powers);
            let mut acc: HashMap<MultiIndex, BigInt> = HashMap::new();
            for (b, x) in &powers[&prev] {
                for (i, c) in &forms[j] {
                    *acc.entry(b.add(&MultiIndex::unit(*i))).or_insert_with(BigInt::zero) += x * c;
                }
            }
            powers.insert(a, acc.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        }
        let mut by_degree: BTreeMap<usize, Vec<(&MultiIndex, &Rational)>> = BTreeMap::new();
        for (a, c) in &self.coeffs {
            by_degree.entry(a.degree()).or_default().push((a, c));
        }
        for (n, terms) in by_degree {
            let den = lcm_denominators(terms.iter().map(|(_, c)| *c));
            let mut acc: HashMap<MultiIndex, BigInt> = HashMap::new();
            for (a, c) in terms {
                build(*a, &iforms, &mut powers);
                let num = (c * big(&den)).to_integer();
                for (b, x) in &powers[a] {
                    *acc.entry(*b).or_insert_with(BigInt::zero) += x * &num;
                }
            }
            r.degrees.insert(n, (den * num_traits::pow(d.clone(), n), acc));
        }
        r
    }

    /// `Σ_n u[n] ℓ^n` for a univariate series `u` and a linear form `ℓ`.
    pub fn compose_univariate(u: &[Rational], form: &[Rational], order: usize) -> Self {
        let nvars = form.len();
        let mut r = Self::zero(nvars, order);
        let mut pw = Self::one(nvars, order);
        for (n, un) in u.iter().enumerate().take(order + 1) {
            if n > 0 {
                pw = pw.mul_linear(form).truncate(order);
            }
            if un.is_zero() {
                continue;
            }
            for (a, x) in &pw.coeffs {
                r.add_term(*a, x * un);
            }
        }
        r
    }

    /// `∏_i u_i(x_i)` for univariate series `u_i`.
    pub fn separable_product(us: &[Vec<Rational>], order: usize) -> Self {
        let nvars = us.len();
        let mut r = Self::zero(nvars, order);
        fn rec(
            i: usize,
            us: &[Vec<Rational>],
            left: usize,
            cur: &mut [usize],
            c: Rational,
            out: &mut TruncSeries,
        ) {
            if i == us.len() {
                out.add_term(MultiIndex::from_slice(cur), c);
                return;
            }
            for e in 0..=left.min(us[i].len().saturating_sub(1)) {
                if us[i][e].is_zero() {
                    continue;
                }
                cur[i] = e;
                rec(i + 1, us, left - e, cur, &c * &us[i][e], out);
            }
            cur[i] = 0;
        }
        let mut cur = vec![0; nvars];
        rec(0, us, order, &mut cur, Rational::one(), &mut r);
        r
    }

    /// `exp(Σ c_i x_i)` through `order`.
    pub fn exp_linear(c: &[Rational], order: usize) -> Self {
        let u: Vec<Rational> = (0..=order).map(|n| Rational::new(1.into(), factorial(n))).collect();
        Self::compose_univariate(&u, c, order)
    }

    /// Evaluates the polynomial part at a point.
    pub fn eval(&self, x: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (a, c) in &self.coeffs {
            let mut t = c.clone();
            for (i, xi) in x.iter().enumerate() {
                let e = a.get(i);
                if e > 0 {
                    t *= num_traits::pow(xi.clone(), e);
                }
            }
            s += t;
        }
        s
    }

    /// Terms sorted by degree, then by exponents in decreasing lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(MultiIndex, Rational)> {
        let mut v: Vec<(MultiIndex, Rational)> =
            self.coeffs.iter().map(|(a, c)| (*a, c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then(b.cmp(a)));
        v
    }

    /// Coefficient of `x^a / a!` (the derivative at the origin).
    pub fn derivative_at_zero(&self, a: &MultiIndex) -> Rational {
        self.coeff(a) * big(&a.factorial())
    }
}

/// A series stored degree by degree as integer numerators over one
/// denominator, so that sums need no reduction until [`RawSeries::to_series`].
#[derive(Clone, Debug)]
pub(crate) struct RawSeries {
    nvars: usize,
    order: usize,
    degrees: BTreeMap<usize, (BigInt, HashMap<MultiIndex, BigInt>)>,
}

impl RawSeries {
    pub(crate) fn zero(nvars: usize, order: usize) -> Self {
        RawSeries { nvars, order, degrees: BTreeMap::new() }
    }

    pub(crate) fn from_series(s: &TruncSeries) -> Self {
        let mut r = Self::zero(s.nvars, s.order);
        let mut by_degree: BTreeMap<usize, Vec<(&MultiIndex, &Rational)>> = BTreeMap::new();
        for (a, c) in &s.coeffs {
            by_degree.entry(a.degree()).or_default().push((a, c));
        }
        for (n, terms) in by_degree {
            let den = lcm_denominators(terms.iter().map(|(_, c)| *c));
            let nums = terms.iter().map(|(a, c)| (**a, (*c * big(&den)).to_integer())).collect();
            r.degrees.insert(n, (den, nums));
        }
        r
    }

    /// Multiplies by `x^a`; the order grows by `|a|`.
    pub(crate) fn shift(self, a: &MultiIndex) -> Self {
        let k = a.degree();
        RawSeries {
            nvars: self.nvars,
            order: self.order + k,
            degrees: self
                .degrees
                .into_iter()
                .map(|(n, (den, nums))| (n + k, (den, nums.into_iter().map(|(b, x)| (b.add(a), x)).collect())))
                .collect(),
        }
    }

    /// `self += sign · other`, truncated to the smaller order.
    pub(crate) fn add_signed(&mut self, other: &RawSeries, negate: bool) {
        assert_eq!(self.nvars, other.nvars);
        self.order = self.order.min(other.order);
        let order = self.order;
        self.degrees.retain(|n, _| *n <= order);
        for (n, (oden, onums)) in other.degrees.range(..=order) {
            let (den, nums) = self.degrees.entry(*n).or_insert_with(|| (oden.clone(), HashMap::new()));
            let g = num_integer::Integer::gcd(&*den, oden);
            let mine = oden / &g;
            let theirs = &*den / &g;
            if !mine.is_one() {
                for x in nums.values_mut() {
                    *x *= &mine;
                }
                *den *= &mine;
            }
            for (b, x) in onums {
                let y = if theirs.is_one() { x.clone() } else { x * &theirs };
                let e = nums.entry(*b).or_insert_with(BigInt::zero);
                if negate {
                    *e -= y;
                } else {
                    *e += y;
                }
            }
        }
    }

    pub(crate) fn to_series(&self) -> TruncSeries {
        let mut r = TruncSeries::zero(self.nvars, self.order);
        for (n, (den, nums)) in &self.degrees {
            if *n > self.order {
                continue;
            }
            for (b, x) in nums {
                if !x.is_zero() {
                    r.coeffs.insert(*b, Rational::new(x.clone(), den.clone()));
                }
            }
        }
        r
    }
}

pub(crate) fn format_monomial(a: &MultiIndex, nvars: usize) -> String {
    let mut parts = Vec::new();
    for i in 0..nvars {
        match a.get(i) {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            e => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

/// Writes `Σ c_a x^a` as `1/2 - 1/12*x1 + x1^2*x2`.
pub(crate) fn format_terms(
    f: &mut fmt::Formatter<'_>,
    terms: &[(MultiIndex, Rational)],
    nvars: usize,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (a, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        let m = format_monomial(a, nvars);
        if m.is_empty() {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{m}")?;
        } else {
            write!(f, "{abs}*{m}")?;
        }
    }
    Ok(())
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_terms(f, &self.sorted_terms(), self.nvars)
    }
}
