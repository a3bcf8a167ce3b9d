//! Exact and numeric tools for positivity in matrix groups.

pub mod cli;
pub mod error;
pub mod exactmat;
pub mod flags;
pub mod liealg;
pub mod siegel;
pub mod symplectic;
pub mod thetapos;
pub mod totpos;

pub use error::{Error, Result};
pub use exactmat::{RatMatrix, Rational};
