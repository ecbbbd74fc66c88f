//! The analytic function `μ(a)` attached to a rational affine cone, with its
//! closed forms in dimensions one and two.

mod bernoulli;
mod closed;
mod engine;

pub use bernoulli::{bernoulli_numbers, bernoulli_poly, shifted_todd_coeffs, todd_coeffs, BernoulliPoly};
pub use closed::{dedekind_sum, mu_dim1_closed, mu_dim2_unimodular_series, mu_dim2_value0, mu_star};
pub use engine::{default_engine, mu_cone, CacheKey, FramedSeries, MuEngine, MuResult, MuStrategy};
