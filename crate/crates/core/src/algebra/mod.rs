//! Exact algebra: rationals, sparse Laurent polynomials, truncated series
//! in an auxiliary variable and Laurent roots in `x^{-1}`.

pub mod division;
pub mod json;
pub mod laurent;
mod parse;
pub mod poly;
pub mod rational;
pub mod series;
pub mod univariate;

pub use laurent::{laurent_root, LaurentSeriesX};
pub use poly::{ExactPoly, Exps, Ring, Window};
pub use rational::Q;
pub use series::{SeriesCoeff, TruncSeries};
pub use division::{divide_by_binomial_power, divisible_by_binomial_power};
pub use univariate::UniPoly;
