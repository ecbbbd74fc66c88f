//! Cones given by integer generators in lattice coordinates.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::dd::{dd, idot, IVec};
use crate::exactlin::{big, primitive_int, QMatrix, QVector};

pub(crate) fn int_rank(vs: &[IVec], dim: usize) -> usize {
    if vs.is_empty() {
        return 0;
    }
    QMatrix::from_columns(dim, &vs.iter().map(|v| QVector::from_bigints(v)).collect::<Vec<_>>())
        .rank()
}

/// Facet normals, equations and lineality of `cone(gens)`.
#[derive(Clone, Debug)]
pub(crate) struct ConeStructure {
    /// Extreme rays when pointed (a subset of the primitive generators), else
    /// the primitive generators.
    pub rays: Vec<IVec>,
    pub lineality: Vec<IVec>,
    /// Basis of the orthogonal complement of `span(gens)`.
    pub equations: Vec<IVec>,
    /// Inner facet normals, defined modulo `equations`.
    pub facets: Vec<IVec>,
    pub dim: usize,
}

impl ConeStructure {
    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

pub(crate) fn cone_structure(gens: &[IVec], k: usize) -> ConeStructure {
    let mut prim: Vec<IVec> = Vec::new();
    for g in gens {
        if g.iter().all(Zero::is_zero) {
            continue;
        }
        let p = primitive_int(g);
        if !prim.contains(&p) {
            prim.push(p);
        }
    }
    let d1 = dd(&prim, k);
    let equations = d1.lineality;
    let facets = d1.rays;
    let mut ineqs = facets.clone();
    for e in &equations {
        ineqs.push(e.clone());
        ineqs.push(e.iter().map(|x| -x).collect());
    }
    let d2 = dd(&ineqs, k);
    let dim = k - equations.len();
    if !d2.lineality.is_empty() {
        return ConeStructure { rays: prim, lineality: d2.lineality, equations, facets, dim };
    }
    let rays: Vec<IVec> = prim.into_iter().filter(|g| d2.rays.contains(g)).collect();
    debug_assert_eq!(rays.len(), d2.rays.len());
    ConeStructure { rays, lineality: vec![], equations, facets, dim }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LatticeFace {
    pub members: Vec<usize>,
    /// Dimension of the linear span of the member rays.
    pub dim: usize,
}

/// Faces of a pointed cone as sets of extreme-ray indices, sorted by
/// dimension and then lexicographically. Index 0 is the apex.
#[derive(Clone, Debug)]
pub(crate) struct FaceLattice {
    pub faces: Vec<LatticeFace>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    pub fn new(rays: &[IVec], facets: &[IVec], k: usize) -> Self {
        let full: Vec<usize> = (0..rays.len()).collect();
        let facet_sets: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| (0..rays.len()).filter(|&i| idot(f, &rays[i]).is_zero()).collect())
            .collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(full.clone());
        let mut queue = vec![full];
        while let Some(f) = queue.pop() {
            for s in &facet_sets {
                let g: Vec<usize> = f.iter().copied().filter(|i| s.contains(i)).collect();
                if g.len() < f.len() && seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
        }
        let mut faces: Vec<LatticeFace> = seen
            .into_iter()
            .map(|m| {
                let vs: Vec<IVec> = m.iter().map(|&i| rays[i].clone()).collect();
                LatticeFace { dim: int_rank(&vs, k), members: m }
            })
            .collect();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.members.cmp(&b.members)));
        let index = faces.iter().enumerate().map(|(i, f)| (f.members.clone(), i)).collect();
        FaceLattice { faces, index }
    }

    pub fn find(&self, members: &[usize]) -> Option<usize> {
        self.index.get(members).copied()
    }

    /// Faces of dimension one less contained in face `f`.
    pub fn facets_of(&self, f: usize) -> Vec<usize> {
        let face = &self.faces[f];
        (0..self.faces.len())
            .filter(|&g| {
                let gf = &self.faces[g];
                gf.dim + 1 == face.dim && gf.members.iter().all(|m| face.members.contains(m))
            })
            .collect()
    }

    /// Faces of dimension one more containing face `f`.
    pub fn cofacets_of(&self, f: usize) -> Vec<usize> {
        let face = &self.faces[f];
        (0..self.faces.len())
            .filter(|&g| {
                let gf = &self.faces[g];
                gf.dim == face.dim + 1 && face.members.iter().all(|m| gf.members.contains(m))
            })
            .collect()
    }

    /// Pulling triangulation of face `f`: simplices as sorted ray-index lists,
    /// each with exactly `dim(f)` members.
    pub fn pulling_triangulation(&self, f: usize) -> Vec<Vec<usize>> {
        let face = &self.faces[f];
        if face.members.len() == face.dim {
            return vec![face.members.clone()];
        }
        let r0 = face.members[0];
        let mut out = Vec::new();
        for g in self.facets_of(f) {
            if self.faces[g].members.contains(&r0) {
                continue;
            }
            for mut s in self.pulling_triangulation(g) {
                s.push(r0);
                s.sort_unstable();
                out.push(s);
            }
        }
        out
    }
}

/// `det` of a square integer matrix given by columns.
pub(crate) fn int_det(cols: &[IVec]) -> BigInt {
    let k = cols.len();
    if k == 0 {
        return BigInt::from(1);
    }
    QMatrix::from_columns(k, &cols.iter().map(|v| QVector::from_bigints(v)).collect::<Vec<_>>())
        .det()
        .to_integer()
}

pub(crate) fn to_qvec(v: &[BigInt]) -> QVector {
    QVector(v.iter().map(big).collect())
}
