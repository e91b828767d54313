//! Exact computer algebra for planar polynomial pairs with trapezoidal
//! Newton polygons: sparse Laurent polynomials over the rationals, Newton
//! polygon geometry, graded decompositions, Tschirnhausen decompositions,
//! a generalized Magnus-formula engine and an experiment harness.

pub mod algebra;
pub mod cli;
pub mod error;

pub use error::{Error, Result};
pub mod geometry;
pub mod grading;
pub mod harness;
pub mod magnus;
pub mod tschirnhausen;
