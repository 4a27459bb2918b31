//! Exact enumeration and numerics for lattice self-avoiding walks.

pub mod enumerate;
pub mod error;
pub mod golden;
pub mod hitting;
pub mod honeycomb;
pub mod lattice;
pub mod pivot;
pub mod series;
pub mod thermo;

pub use error::{Error, Result};
