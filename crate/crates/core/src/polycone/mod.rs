//! Rational polyhedral cones and polytopes: face lattices, transverse cones,
//! triangulations, lattice points of fundamental parallelepipeds and signed
//! unimodular decompositions.

mod dd;
mod decomp;
mod lattice_cone;

pub use decomp::{
    barvinok_decompose, box_points, dual_cone, half_open_decomposition, signed_unimodular_decomposition,
    triangulate_cone, SignedConeList,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactlin::{
    big, lcm_denominators, orthogonal_projection, primitive_direction, primitive_vector, quotient_lattice,
    solve_integral, QMatrix, QVector, Rational, RationalSpace,
};
use crate::{Error, Result};
use dd::{dd, IVec};
use lattice_cone::{cone_structure, to_qvec, ConeStructure, FaceLattice};

pub(crate) use lattice_cone::int_det;

/// Enumeration cap, `EMLATTICE_MAX_ENUM` or `10^7`.
pub fn enum_cap() -> u64 {
    std::env::var("EMLATTICE_MAX_ENUM")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(10_000_000)
}

/// A face of a cone or polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceHandle {
    /// Position in the owner's face list.
    pub index: usize,
    pub dim: usize,
    /// Ray indices (cones) or vertex indices (polytopes).
    pub members: Vec<usize>,
    /// Basis of the linear space parallel to the face.
    pub affine_basis: Vec<QVector>,
    pub span_point: QVector,
}

/// `vertex + cone(rays)` inside a rational space.
#[derive(Clone, Debug)]
pub struct AffineCone {
    pub space: RationalSpace,
    pub vertex: QVector,
    /// Primitive lattice vectors; the extreme rays when the cone is pointed.
    pub rays: Vec<QVector>,
    structure: ConeStructure,
}

/// How [`AffineCone::cut`] intersects with `{x : ⟨n, x - vertex⟩ ⋈ 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cut {
    Ge,
    Le,
    Eq,
}

impl AffineCone {
    pub fn new(space: RationalSpace, vertex: QVector, gens: &[QVector]) -> Result<Self> {
        let d = space.ambient_dim;
        if vertex.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: vertex.dim() });
        }
        if !space.contains(&vertex) {
            return Err(Error::NotInSpan);
        }
        let mut coords: Vec<IVec> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: g.dim() });
            }
            let c = space.lattice_coords(g)?;
            if c.is_zero() {
                return Err(Error::ZeroVector);
            }
            coords.push(primitive_direction(&c.0));
        }
        let structure = cone_structure(&coords, space.dim());
        let rays = structure
            .rays
            .iter()
            .map(|c| space.lattice.from_coords(&to_qvec(c)))
            .collect();
        Ok(AffineCone { space, vertex, rays, structure })
    }

    /// Builds from lattice coordinates without re-deriving the structure.
    fn from_lattice_rays(space: RationalSpace, vertex: QVector, rays: Vec<IVec>) -> Result<Self> {
        let gens: Vec<QVector> = rays.iter().map(|c| space.lattice.from_coords(&to_qvec(c))).collect();
        Self::new(space, vertex, &gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim
    }

    /// Dimension of the cone (rank of its rays).
    pub fn dim(&self) -> usize {
        self.structure.dim
    }

    pub fn is_solid(&self) -> bool {
        self.dim() == self.space.dim()
    }

    pub fn is_pointed(&self) -> bool {
        self.structure.is_pointed()
    }

    pub fn contains_line(&self) -> bool {
        !self.is_pointed()
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.rays.len() == self.dim()
    }

    /// Integer lattice coordinates of the rays.
    pub(crate) fn lattice_rays(&self) -> &[IVec] {
        &self.structure.rays
    }

    pub fn vertex_coords(&self) -> QVector {
        self.space.lattice_coords(&self.vertex).expect("vertex lies in the space")
    }

    /// Inner facet normals in lattice coordinates.
    pub(crate) fn lattice_facets(&self) -> &[IVec] {
        &self.structure.facets
    }

    /// `|det|` of the rays of a solid simplicial cone in lattice coordinates.
    pub fn index(&self) -> Result<BigInt> {
        if !self.is_simplicial() || !self.is_solid() {
            return Err(Error::NonSimplicial);
        }
        Ok(int_det(self.lattice_rays()).abs())
    }

    pub fn translate(&self, x: &QVector) -> Result<Self> {
        let v = self.vertex.add(x);
        if !self.space.contains(&v) {
            return Err(Error::NotInSpan);
        }
        Ok(AffineCone { vertex: v, ..self.clone() })
    }

    /// Whether the ambient point `x` lies in the cone.
    pub fn contains_point(&self, x: &QVector) -> bool {
        let Ok(c) = self.space.lattice_coords(&x.sub(&self.vertex)) else {
            return false;
        };
        self.structure.equations.iter().all(|e| to_qvec(e).dot(&c).is_zero())
            && self.structure.facets.iter().all(|f| !to_qvec(f).dot(&c).is_negative())
    }

    pub(crate) fn face_lattice(&self) -> Result<FaceLattice> {
        if !self.is_pointed() {
            return Err(Error::NotPointed);
        }
        Ok(FaceLattice::new(&self.structure.rays, &self.structure.facets, self.space.dim()))
    }

    /// All faces, sorted by dimension; index 0 is the vertex.
    pub fn faces(&self) -> Result<Vec<FaceHandle>> {
        let fl = self.face_lattice()?;
        Ok(fl
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| FaceHandle {
                index: i,
                dim: f.dim,
                members: f.members.clone(),
                affine_basis: independent(&f.members.iter().map(|&m| self.rays[m].clone()).collect::<Vec<_>>()),
                span_point: self.vertex.clone(),
            })
            .collect())
    }

    /// The face as a cone with the same vertex.
    pub fn face_cone(&self, f: &FaceHandle) -> Result<AffineCone> {
        let rays: Vec<QVector> = f.members.iter().map(|&m| self.rays[m].clone()).collect();
        AffineCone::new(self.space.clone(), self.vertex.clone(), &rays)
    }

    /// Transverse cone along a face: the projection of the cone to the
    /// `Q`-orthogonal complement of the face, with the projected lattice.
    pub fn transverse_cone(&self, f: &FaceHandle) -> Result<AffineCone> {
        let fl = self.face_lattice()?;
        let fi = fl.find(&f.members).ok_or(Error::NotAFace)?;
        let p = orthogonal_projection(&self.space, &f.affine_basis)?;
        let qs = quotient_lattice(&self.space, &f.affine_basis)?;
        let mut rays = Vec::new();
        for g in fl.cofacets_of(fi) {
            let extra = fl.faces[g].members.iter().find(|m| !f.members.contains(m)).unwrap();
            rays.push(primitive_vector(&p.mul_vec(&self.rays[*extra]), &qs)?);
        }
        AffineCone::new(qs, p.mul_vec(&self.vertex), &rays)
    }

    /// `self ∩ {x : ⟨n, x - vertex⟩ ⋈ 0}` for an ambient dual vector `n`.
    pub fn cut(&self, n: &QVector, how: Cut) -> Result<AffineCone> {
        let k = self.space.dim();
        let nl = primitive_direction(&self.space.subspace_basis.transpose().mul_vec(n).0);
        let mut ineqs: Vec<IVec> = self.structure.facets.clone();
        for e in &self.structure.equations {
            ineqs.push(e.clone());
            ineqs.push(e.iter().map(|x| -x).collect());
        }
        let neg: IVec = nl.iter().map(|x| -x).collect();
        match how {
            Cut::Ge => ineqs.push(nl),
            Cut::Le => ineqs.push(neg),
            Cut::Eq => {
                ineqs.push(nl);
                ineqs.push(neg);
            }
        }
        let g = dd(&ineqs, k);
        let mut gens = g.rays;
        for l in g.lineality {
            gens.push(l.iter().map(|x| -x).collect());
            gens.push(l);
        }
        Self::from_lattice_rays(self.space.clone(), self.vertex.clone(), gens)
    }
}

fn independent(vs: &[QVector]) -> Vec<QVector> {
    if vs.is_empty() {
        return vec![];
    }
    let m = QMatrix::from_columns(vs[0].dim(), vs);
    m.independent_columns().into_iter().map(|j| vs[j].clone()).collect()
}

/// Convex hull of finitely many points, full dimensional in its space.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub space: RationalSpace,
    pub vertices: Vec<QVector>,
    /// Homogenised inner facet normals `(b, a)` with `b + a·c >= 0` in lattice coordinates `c`.
    facets: Vec<IVec>,
    lattice: FaceLattice,
    faces: Vec<FaceHandle>,
}

pub fn build_polytope(space: RationalSpace, points: &[QVector]) -> Result<Polytope> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = space.dim();
    let mut hom: Vec<IVec> = Vec::with_capacity(points.len());
    for p in points {
        if p.dim() != space.ambient_dim {
            return Err(Error::DimensionMismatch { expected: space.ambient_dim, got: p.dim() });
        }
        let c = space.lattice_coords(p)?;
        let mut h = vec![Rational::one()];
        h.extend(c.0);
        hom.push(primitive_direction(&h));
    }
    let cs = cone_structure(&hom, k + 1);
    if cs.dim != k + 1 {
        return Err(Error::NotFullDimensional);
    }
    let vertices: Vec<QVector> = cs
        .rays
        .iter()
        .map(|h| {
            let c = QVector(h[1..].iter().map(|x| big(x) / big(&h[0])).collect());
            space.lattice.from_coords(&c)
        })
        .collect();
    let lattice = FaceLattice::new(&cs.rays, &cs.facets, k + 1);
    let faces = lattice
        .faces
        .iter()
        .skip(1)
        .enumerate()
        .map(|(i, f)| {
            let x0 = vertices[f.members[0]].clone();
            let diffs: Vec<QVector> = f.members[1..].iter().map(|&m| vertices[m].sub(&x0)).collect();
            FaceHandle {
                index: i,
                dim: f.dim - 1,
                members: f.members.clone(),
                affine_basis: independent(&diffs),
                span_point: x0,
            }
        })
        .collect();
    Ok(Polytope { space, vertices, facets: cs.facets, lattice, faces })
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim
    }

    pub fn faces(&self) -> &[FaceHandle] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &FaceHandle {
        &self.faces[i]
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<&FaceHandle> {
        self.faces.iter().filter(|f| f.dim == d).collect()
    }

    /// Face with exactly these vertex indices.
    pub fn find_face(&self, members: &[usize]) -> Option<&FaceHandle> {
        let mut m = members.to_vec();
        m.sort_unstable();
        self.lattice.find(&m).and_then(|i| i.checked_sub(1)).map(|i| &self.faces[i])
    }

    fn check_face(&self, f: &FaceHandle) -> Result<usize> {
        match self.lattice.find(&f.members) {
            Some(i) if i > 0 => Ok(i),
            _ => Err(Error::NotAFace),
        }
    }

    /// Vertices of the faces one dimension up that contain `f`.
    pub fn cofacets(&self, f: &FaceHandle) -> Result<Vec<&FaceHandle>> {
        let i = self.check_face(f)?;
        Ok(self.lattice.cofacets_of(i).into_iter().map(|g| &self.faces[g - 1]).collect())
    }

    /// Pulling triangulation of a face into simplices (vertex-index lists).
    pub fn triangulate_face(&self, f: &FaceHandle) -> Result<Vec<Vec<usize>>> {
        let i = self.check_face(f)?;
        Ok(self.lattice.pulling_triangulation(i))
    }

    pub fn contains(&self, x: &QVector) -> bool {
        let Ok(c) = self.space.lattice_coords(x) else {
            return false;
        };
        self.facets.iter().all(|f| {
            let mut s = big(&f[0]);
            for (a, ci) in f[1..].iter().zip(&c.0) {
                s += big(a) * ci;
            }
            !s.is_negative()
        })
    }

    /// Inequalities `b + a·c >= 0` in lattice coordinates, as `(a, b)`.
    pub fn inequalities(&self) -> Vec<(QVector, Rational)> {
        self.facets
            .iter()
            .map(|f| (to_qvec(&f[1..]), big(&f[0])))
            .collect()
    }

    /// `t p` for rational `t > 0`; face indices are preserved.
    pub fn dilate(&self, t: &Rational) -> Result<Polytope> {
        if !t.is_positive() {
            return Err(Error::InvalidArgument("dilation factor must be positive".into()));
        }
        let pts: Vec<QVector> = self.vertices.iter().map(|v| v.scale(t)).collect();
        build_polytope(self.space.clone(), &pts)
    }

    /// Smallest positive integer `q` with `q p` a lattice polytope.
    pub fn denominator(&self) -> BigInt {
        lcm_denominators(
            self.vertices
                .iter()
                .flat_map(|v| self.space.lattice_coords(v).unwrap().0)
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    /// All lattice points, by scanning the bounding box in lattice coordinates.
    /// Fails if the box holds more than `cap` points.
    pub fn lattice_points(&self, cap: u64) -> Result<Vec<QVector>> {
        let k = self.dim();
        let coords: Vec<QVector> = self
            .vertices
            .iter()
            .map(|v| self.space.lattice_coords(v).unwrap())
            .collect();
        let lo: Vec<BigInt> = (0..k).map(|i| coords.iter().map(|c| c[i].ceil().to_integer()).min().unwrap()).collect();
        let hi: Vec<BigInt> = (0..k).map(|i| coords.iter().map(|c| c[i].floor().to_integer()).max().unwrap()).collect();
        let mut size = BigInt::one();
        for i in 0..k {
            let w: BigInt = &hi[i] - &lo[i] + 1;
            if !w.is_positive() {
                return Ok(vec![]);
            }
            size *= w;
        }
        if size > BigInt::from(cap) {
            return Err(Error::CapExceeded { needed: size.to_string(), cap });
        }
        let mut out = Vec::new();
        let mut c = lo.clone();
        loop {
            let x = self.space.lattice.from_coords(&QVector::from_bigints(&c));
            if self.contains(&x) {
                out.push(x);
            }
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(out);
                }
                c[i] += 1;
                if c[i] <= hi[i] {
                    break;
                }
                c[i] = lo[i].clone();
                i += 1;
            }
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces.iter().map(|f| if f.dim % 2 == 0 { 1 } else { -1 }).sum()
    }
}

/// A lattice point of `x + span(dirs)`, if there is one.
pub fn lattice_point_in_affine_span(space: &RationalSpace, x: &QVector, dirs: &[QVector]) -> Result<Option<QVector>> {
    let k = space.dim();
    let sigma = space.lattice_coords(x)?;
    let gens: Vec<QVector> = dirs.iter().map(|d| space.lattice_coords(d)).collect::<Result<_>>()?;
    // integer c with E c = E sigma, where the rows of E cut out span(dirs)
    let normals = if gens.is_empty() {
        (0..k).map(|i| QVector::unit(k, i)).collect()
    } else {
        QMatrix::from_columns(k, &gens).transpose().nullspace()
    };
    if normals.is_empty() {
        return Ok(Some(space.lattice.from_coords(&QVector(sigma.0.iter().map(|x| x.floor()).collect()))));
    }
    let mut e = QMatrix::zeros(normals.len(), k);
    for (i, n) in normals.iter().enumerate() {
        let d = big(&lcm_denominators(n.0.iter()));
        for j in 0..k {
            e[(i, j)] = &n[j] * &d;
        }
    }
    let rhs = e.mul_vec(&sigma);
    Ok(solve_integral(&e, &rhs)?.map(|c| space.lattice.from_coords(&c)))
}

/// Tangent cone at a vertex.
pub fn tangent_cone(p: &Polytope, vertex: usize) -> Result<AffineCone> {
    let f = p.find_face(&[vertex]).ok_or(Error::NotAFace)?.clone();
    transverse_cone(p, &f)
}

/// Transverse cone of a polytope along a face.
pub fn transverse_cone(p: &Polytope, f: &FaceHandle) -> Result<AffineCone> {
    p.check_face(f)?;
    let x0 = &f.span_point;
    let proj = orthogonal_projection(&p.space, &f.affine_basis)?;
    let qs = quotient_lattice(&p.space, &f.affine_basis)?;
    let mut rays = Vec::new();
    for g in p.cofacets(f)? {
        let extra = g.members.iter().find(|m| !f.members.contains(m)).unwrap();
        rays.push(primitive_vector(&proj.mul_vec(&p.vertices[*extra].sub(x0)), &qs)?);
    }
    AffineCone::new(qs, proj.mul_vec(x0), &rays)
}

/// The rays of the dual cone `{ξ : ⟨ξ, r⟩ >= 0}` of `cone(gens)` in `R^dim`,
/// with a lineality space listed as both directions of each basis vector.
pub(crate) fn dual_generators(gens: &[IVec], dim: usize) -> Vec<IVec> {
    let d = dd(gens, dim);
    let mut out = d.rays;
    for l in d.lineality {
        out.push(l.iter().map(|x| -x).collect());
        out.push(l);
    }
    out
}
