//! Von Neumann type algorithms for conic feasibility with a warm-started
//! minimum-norm-point subproblem.

pub mod bench;
pub mod bracketing;
pub mod cone;
pub mod error;
pub mod hull;
pub mod linalg;
pub mod separation;
pub mod solver;

pub use error::{Error, Result};
