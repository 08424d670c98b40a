//! Numerical toolkit for the fully fractional heat operator
//! (d/dt - Laplacian)^s, 0 < s < 1.

pub mod error;
pub mod field;
pub mod gamma;
pub mod greens;
pub mod grid;
pub mod kernel;
pub mod operator;
pub mod quadrature;
pub mod regularity;
pub mod rescale;
pub mod selftest;

pub use error::{FracError, Result};
