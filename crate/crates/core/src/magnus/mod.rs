//! Magnus coefficients, the homogenized engine and the supported-set checks.

pub mod engine;
pub mod modp;
pub mod params;
pub mod quotient;
pub mod solver;
pub mod supported;
pub mod symbolic;
