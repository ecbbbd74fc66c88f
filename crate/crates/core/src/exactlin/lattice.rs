use num_traits::{One, Signed, Zero};

use super::hnf::{hnf_int, integer_kernel};
use super::{big, lcm_denominators, primitive_direction, QMatrix, QVector, Rational};
use crate::{Error, Result};

/// A lattice given by a basis of ambient rational vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub ambient_dim: usize,
    pub basis: Vec<QVector>,
}

impl Lattice {
    pub fn new(ambient_dim: usize, basis: Vec<QVector>) -> Result<Self> {
        for b in &basis {
            if b.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: b.dim() });
            }
        }
        if QMatrix::from_columns(ambient_dim, &basis).rank() != basis.len() {
            return Err(Error::DependentVectors);
        }
        Ok(Lattice { ambient_dim, basis })
    }

    pub fn standard(d: usize) -> Self {
        Lattice {
            ambient_dim: d,
            basis: (0..d).map(|i| QVector::unit(d, i)).collect(),
        }
    }

    /// Lattice generated by arbitrary (possibly dependent) rational vectors.
    pub fn from_generators(ambient_dim: usize, gens: &[QVector]) -> Self {
        let basis = hnf_basis(ambient_dim, gens);
        Lattice { ambient_dim, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_columns(self.ambient_dim, &self.basis)
    }

    /// Coordinates of `x` in the basis, `None` if `x` is outside the span.
    pub fn coords(&self, x: &QVector) -> Option<QVector> {
        if self.basis.is_empty() {
            return x.is_zero().then(|| QVector(vec![]));
        }
        self.basis_matrix().solve(x)
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.coords(x).is_some_and(|c| c.is_integral())
    }

    pub fn from_coords(&self, c: &QVector) -> QVector {
        let mut x = QVector::zeros(self.ambient_dim);
        for (b, ci) in self.basis.iter().zip(&c.0) {
            if !ci.is_zero() {
                x = x.add(&b.scale(ci));
            }
        }
        x
    }

    /// Canonical basis (HNF of the basis matrix); equal lattices give equal results.
    pub fn canonical(&self) -> Lattice {
        Lattice {
            ambient_dim: self.ambient_dim,
            basis: hnf_basis(self.ambient_dim, &self.basis),
        }
    }
}

fn hnf_basis(d: usize, gens: &[QVector]) -> Vec<QVector> {
    if gens.is_empty() {
        return vec![];
    }
    let den = lcm_denominators(gens.iter().flat_map(|g| g.0.iter()));
    let denr = big(&den);
    let im: Vec<Vec<_>> = (0..d)
        .map(|i| gens.iter().map(|g| (&g[i] * &denr).to_integer()).collect())
        .collect();
    let (h, _, piv) = hnf_int(&im, gens.len());
    (0..piv.len())
        .map(|j| QVector((0..d).map(|i| big(&h[i][j]) / &denr).collect()))
        .collect()
}

/// Symmetric positive definite bilinear form on the ambient space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarProduct {
    pub matrix: QMatrix,
}

impl ScalarProduct {
    pub fn standard(d: usize) -> Self {
        ScalarProduct { matrix: QMatrix::identity(d) }
    }

    pub fn new(matrix: QMatrix) -> Result<Self> {
        let n = matrix.rows();
        if matrix.cols() != n || matrix.transpose() != matrix {
            return Err(Error::InvalidScalarProduct);
        }
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            if !matrix.select(&idx, &idx).det().is_positive() {
                return Err(Error::InvalidScalarProduct);
            }
        }
        Ok(ScalarProduct { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_standard(&self) -> bool {
        self.matrix == QMatrix::identity(self.dim())
    }

    pub fn dot(&self, x: &QVector, y: &QVector) -> Rational {
        x.dot(&self.matrix.mul_vec(y))
    }

    /// Gram matrix `X^T Q X` of the columns of `x`.
    pub fn gram(&self, x: &QMatrix) -> QMatrix {
        x.transpose().mul(&self.matrix).mul(x)
    }
}

/// A rational subspace of the ambient space with a lattice spanning it and a
/// scalar product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalSpace {
    pub ambient_dim: usize,
    /// Columns span the subspace; equal to the lattice basis.
    pub subspace_basis: QMatrix,
    pub lattice: Lattice,
    pub q: ScalarProduct,
}

impl RationalSpace {
    pub fn standard(d: usize) -> Self {
        Self::with_scalar_product(ScalarProduct::standard(d))
    }

    pub fn with_scalar_product(q: ScalarProduct) -> Self {
        let d = q.dim();
        Self::from_lattice(Lattice::standard(d), q)
    }

    pub fn from_lattice(lattice: Lattice, q: ScalarProduct) -> Self {
        RationalSpace {
            ambient_dim: lattice.ambient_dim,
            subspace_basis: lattice.basis_matrix(),
            lattice,
            q,
        }
    }

    pub fn dim(&self) -> usize {
        self.lattice.rank()
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.lattice.coords(x).is_some()
    }

    pub fn lattice_coords(&self, x: &QVector) -> Result<QVector> {
        self.lattice.coords(x).ok_or(Error::NotInSpan)
    }

    /// Same space with a canonical lattice basis.
    pub fn canonical(&self) -> RationalSpace {
        Self::from_lattice(self.lattice.canonical(), self.q.clone())
    }
}

/// Primitive lattice vector on the ray through `v`.
pub fn primitive_vector(v: &QVector, space: &RationalSpace) -> Result<QVector> {
    let c = space.lattice_coords(v)?;
    if c.is_zero() {
        return Err(Error::ZeroVector);
    }
    let dir = primitive_direction(&c.0);
    Ok(space.lattice.from_coords(&QVector::from_bigints(&dir)))
}

fn projector(q: &ScalarProduct, x: &QMatrix) -> Result<QMatrix> {
    let d = q.dim();
    if x.cols() == 0 {
        return Ok(QMatrix::zeros(d, d));
    }
    let g = q.gram(x).inverse().ok_or(Error::DependentVectors)?;
    Ok(x.mul(&g).mul(&x.transpose()).mul(&q.matrix))
}

/// Ambient matrix of the `Q`-orthogonal projection onto the complement of
/// `span(l)` inside the space.
pub fn orthogonal_projection(space: &RationalSpace, l: &[QVector]) -> Result<QMatrix> {
    for v in l {
        if !space.contains(v) {
            return Err(Error::NotInSpan);
        }
    }
    let lm = QMatrix::from_columns(space.ambient_dim, l);
    let pw = projector(&space.q, &space.subspace_basis)?;
    let pl = projector(&space.q, &lm)?;
    Ok(pw.sub(&pl))
}

/// `Λ ∩ span(u)` for vectors `u` in the space.
pub fn intersect_lattice(space: &RationalSpace, u: &[QVector]) -> Result<Lattice> {
    let k = space.dim();
    let coords: Vec<QVector> = u
        .iter()
        .map(|v| space.lattice_coords(v))
        .collect::<Result<_>>()?;
    let a = QMatrix::from_columns(k, &coords);
    // rows n with n^T a = 0 cut out span(u) inside the lattice coordinates
    let normals = a.transpose().nullspace();
    let mut nm = QMatrix::zeros(normals.len(), k);
    for (i, n) in normals.iter().enumerate() {
        for j in 0..k {
            nm[(i, j)] = n[j].clone();
        }
    }
    let ker = integer_kernel(&nm);
    let basis = ker.iter().map(|c| space.lattice.from_coords(c)).collect();
    Ok(Lattice { ambient_dim: space.ambient_dim, basis })
}

/// The quotient of the space by `span(l)`, realised as the `Q`-orthogonal
/// complement of `span(l)` with the projected lattice.
pub fn quotient_lattice(space: &RationalSpace, l: &[QVector]) -> Result<RationalSpace> {
    let p = orthogonal_projection(space, l)?;
    let lrank = QMatrix::from_columns(space.ambient_dim, l).rank();
    if intersect_lattice(space, l)?.rank() != lrank {
        return Err(Error::NotRational);
    }
    let gens: Vec<QVector> = space.lattice.basis.iter().map(|b| p.mul_vec(b)).collect();
    let lattice = Lattice::from_generators(space.ambient_dim, &gens);
    debug_assert_eq!(lattice.rank(), space.dim() - lrank);
    Ok(RationalSpace::from_lattice(lattice, space.q.clone()))
}

/// Squared covolume `det(B^T Q B)` of a lattice.
pub fn covolume_squared(lat: &Lattice, q: &ScalarProduct) -> Rational {
    if lat.rank() == 0 {
        return Rational::one();
    }
    q.gram(&lat.basis_matrix()).det()
}
