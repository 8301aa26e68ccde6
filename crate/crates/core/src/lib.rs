//! Exact lattice point counting in integer dilates of rational polygons.
pub mod cli;
pub mod dedekind;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod lattice;
pub mod polygon;

pub use error::{Error, Result};
pub use exact::{Integer, Rational};
