//! Truncated power series and meromorphic germs with hyperplane poles.

mod mero;
mod series;

pub use mero::{divide_by_linear_form, hyperplane_parametrisation, LinearForm, MeroGerm};
pub use series::{monomials_of_degree, MultiIndex, TruncSeries, MAX_VARS};
pub(crate) use series::{format_terms, RawSeries};
