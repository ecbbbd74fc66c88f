use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactlin::{ceil_gap, primitive_direction, QMatrix, QVector, Rational};
use crate::genfun::{i_cone_in, lattice_point_in_hull, restrict_to_span, s_cone_in, Frame, SStrategy};
use crate::germ::{MeroGerm, MultiIndex, RawSeries, TruncSeries};
use crate::polycone::{signed_unimodular_decomposition, AffineCone};
use crate::Result;

use super::shifted_todd_coeffs;

/// How [`MuEngine`] evaluates solid cones. Both give identical series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MuStrategy {
    /// `μ(a) = e^{-⟨ξ,s⟩} (S(a) - Σ_{dim f > 0} μ(t(a,f)) I(f))` over the faces of `a`.
    Recursion,
    /// Signed unimodular decomposition, then the unimodular recursion on Gram data.
    #[default]
    Decomposition,
}

/// A series in the variables `z_j = ⟨ξ, frame_j⟩`.
#[derive(Clone, Debug)]
pub struct FramedSeries {
    pub frame: Vec<QVector>,
    pub series: Arc<TruncSeries>,
}

impl FramedSeries {
    fn zero(order: usize) -> Self {
        FramedSeries { frame: vec![], series: Arc::new(TruncSeries::zero(0, order)) }
    }

    /// The lift to `ξ ∈ (ℝ^d)*`.
    pub fn to_ambient(&self, d: usize) -> TruncSeries {
        let forms: Vec<Vec<Rational>> = self.frame.iter().map(|b| b.0.clone()).collect();
        self.series.substitute_linear(&forms, d)
    }

    /// Rewritten in the coordinates of a frame whose span contains this one.
    pub fn in_frame(&self, f: &Frame) -> Result<TruncSeries> {
        let forms: Vec<Vec<Rational>> = self.frame.iter().map(|b| f.coords(b)).collect::<Result<_>>()?;
        Ok(self.series.substitute_linear(&forms, f.dim()))
    }
}

/// `μ(a)` as a Taylor series.
#[derive(Clone, Debug)]
pub struct MuResult {
    /// Canonical representative: lattice basis in Hermite form, vertex reduced modulo the lattice.
    pub cone: AffineCone,
    pub framed: FramedSeries,
    /// In ambient dual coordinates.
    pub series: TruncSeries,
    pub order: usize,
}

/// Cones that differ by a lattice translation share a key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub basis: Vec<QVector>,
    pub q: QMatrix,
    /// Lattice coordinates of the vertex, reduced into `[0, 1)`.
    pub vertex: Vec<Rational>,
    /// Lattice coordinates of the rays, sorted.
    pub rays: Vec<Vec<BigInt>>,
    pub order: usize,
}

impl CacheKey {
    /// The key of a pointed cone and its canonical representative.
    pub fn of(a: &AffineCone, order: usize) -> Result<(CacheKey, AffineCone)> {
        let space = a.space.canonical();
        let c = space.lattice_coords(&a.vertex)?;
        let vertex: Vec<Rational> = c.0.iter().map(|x| x - x.floor()).collect();
        let mut rays: Vec<Vec<BigInt>> = a
            .rays
            .iter()
            .map(|r| space.lattice_coords(r).map(|c| primitive_direction(&c.0)))
            .collect::<Result<_>>()?;
        rays.sort();
        let vx = space.lattice.from_coords(&QVector(vertex.clone()));
        let gens: Vec<QVector> = rays.iter().map(|r| space.lattice.from_coords(&QVector::from_bigints(r))).collect();
        let cone = AffineCone::new(space.clone(), vx, &gens)?;
        let key = CacheKey {
            basis: space.lattice.basis.clone(),
            q: space.q.matrix.clone(),
            vertex,
            rays,
            order,
        };
        Ok((key, cone))
    }

    /// Stable text form, used as the persisted cache key.
    pub fn fingerprint(&self) -> String {
        let mut s = String::from("mu1;b=");
        for b in &self.basis {
            write!(s, "{b}").unwrap();
        }
        write!(s, ";q={};s=(", self.q).unwrap();
        for (i, x) in self.vertex.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{x}").unwrap();
        }
        s.push_str(");r=");
        for r in &self.rays {
            s.push('(');
            for (i, x) in r.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{x}").unwrap();
            }
            s.push(')');
        }
        write!(s, ";m={}", self.order).unwrap();
        s.retain(|c| !c.is_whitespace());
        s
    }
}

type UniKey = (Vec<Rational>, Vec<Rational>, usize);

/// Computes and memoises `μ`. Safe to share between threads.
#[derive(Debug, Default)]
pub struct MuEngine {
    strategy: MuStrategy,
    cache: RwLock<HashMap<String, Arc<TruncSeries>>>,
    uni: RwLock<HashMap<UniKey, Arc<TruncSeries>>>,
}

/// The process-wide engine behind [`mu_cone`].
pub fn default_engine() -> &'static MuEngine {
    static ENGINE: OnceLock<MuEngine> = OnceLock::new();
    ENGINE.get_or_init(MuEngine::default)
}

/// `μ(a)` through total degree `order`, using the shared engine.
pub fn mu_cone(a: &AffineCone, order: usize) -> Result<MuResult> {
    default_engine().mu_cone(a, order)
}

impl MuEngine {
    pub fn new(strategy: MuStrategy) -> Self {
        MuEngine { strategy, ..Default::default() }
    }

    pub fn strategy(&self) -> MuStrategy {
        self.strategy
    }

    pub fn mu_cone(&self, a: &AffineCone, order: usize) -> Result<MuResult> {
        let framed = self.mu_framed(a, order)?;
        let series = framed.to_ambient(a.ambient_dim());
        let cone = match self.representative(a)? {
            Some(b) => CacheKey::of(&b, order)?.1,
            None => a.clone(),
        };
        Ok(MuResult { cone, framed, series, order })
    }

    /// The solid cone whose `μ` lifts to `μ(a)`, or `None` when `μ(a) = 0`.
    fn representative(&self, a: &AffineCone) -> Result<Option<AffineCone>> {
        if a.contains_line() {
            return Ok(None);
        }
        if a.is_solid() {
            return Ok(Some(a.clone()));
        }
        match lattice_point_in_hull(a)? {
            None => Ok(None),
            Some(x0) => Ok(Some(restrict_to_span(a, &x0)?)),
        }
    }

    /// `μ(a)` in the coordinates of the canonical lattice basis of its span.
    pub fn mu_framed(&self, a: &AffineCone, order: usize) -> Result<FramedSeries> {
        let Some(b) = self.representative(a)? else {
            return Ok(FramedSeries::zero(order));
        };
        let (key, canon) = CacheKey::of(&b, order)?;
        let fp = key.fingerprint();
        let frame = canon.space.lattice.basis.clone();
        if let Some(s) = self.cache.read().unwrap().get(&fp) {
            return Ok(FramedSeries { frame, series: s.clone() });
        }
        let s = match self.strategy {
            MuStrategy::Decomposition => self.by_decomposition(&canon, order)?,
            MuStrategy::Recursion => self.by_recursion(&canon, order)?,
        };
        let s = Arc::new(s);
        self.cache.write().unwrap().insert(fp, s.clone());
        Ok(FramedSeries { frame, series: s })
    }

    fn by_decomposition(&self, a: &AffineCone, m: usize) -> Result<TruncSeries> {
        let k = a.space.dim();
        if k == 0 {
            return Ok(TruncSeries::one(0, m));
        }
        let sigma = a.vertex_coords();
        let mut total = RawSeries::zero(k, m);
        for (sign, u) in signed_unimodular_decomposition(a)? {
            let cols: Vec<QVector> = u.rays.iter().map(|r| a.space.lattice_coords(r)).collect::<Result<_>>()?;
            let l = QMatrix::from_columns(k, &cols);
            let c = l.inverse().expect("unimodular rays are independent").mul_vec(&sigma);
            let t: Vec<Rational> = c.0.iter().map(ceil_gap).collect();
            let g = a.space.q.gram(&QMatrix::from_columns(a.ambient_dim(), &u.rays));
            let s = self.mu_unimodular(&g, &t, m)?;
            let forms: Vec<Vec<Rational>> = cols.iter().map(|c| c.0.clone()).collect();
            total.add_signed(&s.substitute_linear_raw(&forms, k), sign < 0);
        }
        Ok(total.to_series())
    }

    fn by_recursion(&self, a: &AffineCone, m: usize) -> Result<TruncSeries> {
        let k = a.space.dim();
        if k == 0 {
            return Ok(TruncSeries::one(0, m));
        }
        let frame = Frame::of_space(&a.space);
        let mut total = s_cone_in(a, &frame, m, SStrategy::Auto)?;
        for f in a.faces()?.iter().filter(|f| f.dim > 0) {
            let t = a.transverse_cone(f)?;
            let mu_t = self.mu_framed(&t, m + f.dim)?.in_frame(&frame)?;
            let i_f = i_cone_in(&a.face_cone(f)?, &frame, m)?;
            total = total.sub(&MeroGerm::analytic(mu_t).mul(&i_f));
        }
        let s = frame.coords(&a.vertex)?;
        let neg: Vec<Rational> = s.iter().map(|x| -x).collect();
        total.mul_exp(&neg).to_analytic_order(m)
    }

    /// `μ` of the unimodular cone with Gram matrix `g` of its rays and vertex
    /// `-Σ t_i v_i`, `0 <= t_i < 1`, in the variables `y_i = ⟨ξ, v_i⟩`.
    ///
    /// With `N = ∏ y_i · μ`, the face expansion reads
    /// `N = ∏ T_{t_i}(y_i) - Σ_{J ≠ ∅} (-1)^{|J|} μ(G/J, t_{J^c})(y') ∏_{i ∉ J} y_i`,
    /// where `G/J` is the Schur complement and `y'_i = y_i - Σ_j (G_JJ^{-1} G_{J,i})_j y_j`.
    pub fn mu_unimodular(&self, g: &QMatrix, t: &[Rational], m: usize) -> Result<Arc<TruncSeries>> {
        let k = t.len();
        let key: UniKey = (
            (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| g[(i, j)].clone()).collect(),
            t.to_vec(),
            m,
        );
        if let Some(s) = self.uni.read().unwrap().get(&key) {
            return Ok(s.clone());
        }
        if k == 0 {
            return Ok(Arc::new(TruncSeries::one(0, m)));
        }
        let n = m + k;
        let todd: Vec<Vec<Rational>> = t.iter().map(|ti| shifted_todd_coeffs(ti, n)).collect();
        let mut num = RawSeries::from_series(&TruncSeries::separable_product(&todd, n));
        for mask in 1u32..(1 << k) {
            let jset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let rest: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).collect();
            let term = if rest.is_empty() {
                RawSeries::from_series(&TruncSeries::one(k, n))
            } else {
                let gjj = g.select(&jset, &jset);
                let inv = gjj.inverse().expect("Gram matrix is definite");
                // alpha[a] = G_JJ^{-1} G_{J, rest[a]}
                let alpha: Vec<QVector> = rest.iter().map(|&i| inv.mul_vec(&g.select(&jset, &[i]).column(0))).collect();
                let mut schur = QMatrix::zeros(rest.len(), rest.len());
                for (a, &i) in rest.iter().enumerate() {
                    for (b, &j) in rest.iter().enumerate() {
                        let mut x = g[(i, j)].clone();
                        for (l, &jj) in jset.iter().enumerate() {
                            x -= &g[(i, jj)] * &alpha[b][l];
                        }
                        schur[(a, b)] = x;
                    }
                }
                let t_rest: Vec<Rational> = rest.iter().map(|&i| t[i].clone()).collect();
                let sub = self.mu_unimodular(&schur, &t_rest, m + jset.len())?;
                let forms: Vec<Vec<Rational>> = rest
                    .iter()
                    .enumerate()
                    .map(|(a, &i)| {
                        let mut f = vec![Rational::zero(); k];
                        f[i] = Rational::one();
                        for (l, &j) in jset.iter().enumerate() {
                            f[j] = -alpha[a][l].clone();
                        }
                        f
                    })
                    .collect();
                let mut e = [0usize; crate::germ::MAX_VARS];
                for &i in &rest {
                    e[i] = 1;
                }
                sub.substitute_linear_raw(&forms, k).shift(&MultiIndex::from_slice(&e[..k]))
            };
            num.add_signed(&term, jset.len().is_multiple_of(2));
        }
        let mut num = num.to_series();
        for i in 0..k {
            num = num.divide_by_var(i)?;
        }
        let s = Arc::new(num.truncate(m));
        self.uni.write().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// Cached entries as `(fingerprint, series)`, sorted by fingerprint.
    pub fn cache_entries(&self) -> Vec<(String, TruncSeries)> {
        let mut v: Vec<(String, TruncSeries)> = self
            .cache
            .read()
            .unwrap()
            .iter()
            .map(|(k, s)| (k.clone(), (**s).clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Seeds the cache, e.g. from a persisted file.
    pub fn preload(&self, fingerprint: String, series: TruncSeries) {
        self.cache.write().unwrap().insert(fingerprint, Arc::new(series));
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}
