//! Exact local Euler-Maclaurin machinery for rational polyhedra.
//!
//! Everything is computed over the rationals. The main entry points are
//! [`euler_maclaurin::em_sum`] (sum of a polynomial over the lattice points of a
//! polytope, split into face contributions), [`mu::MuEngine::mu_cone`] (the
//! local symbol attached to an affine cone) and
//! [`ehrhart::ehrhart_quasipoly`].

pub mod ehrhart;
pub mod error;
pub mod euler_maclaurin;
pub mod exactlin;
pub mod genfun;
pub mod germ;
pub mod mu;
pub mod polycone;

pub use error::{Error, Result};
pub use exactlin::{QMatrix, QVector, Rational};
