use thiserror::Error;

use crate::lattice::Point;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex {0} is already occupied by the walk")]
    Occupied(Point),

    #[error("vertex {0} lies outside the active domain")]
    OutsideDomain(Point),

    #[error("walk ending at {0} cannot be closed into a polygon")]
    NotClosable(Point),

    #[error("estimated {estimate:.3e} search nodes exceeds the ceiling of {ceiling:.3e}")]
    Budget { estimate: f64, ceiling: f64 },

    #[error("perimeters up to {available} cannot cover areas up to {requested}")]
    Coverage { requested: usize, available: usize },

    #[error("need data up to index {required}, table stops at {available}")]
    InsufficientData { required: usize, available: usize },

    #[error("perimeter {0} is not present in the table")]
    AbsentPerimeter(usize),

    #[error("no walk attains end-to-end displacement {0}")]
    AbsentDisplacement(i64),

    #[error("length {0} is not present in the table")]
    AbsentLength(usize),

    #[error("vertex {0} is not an interior vertex of the domain")]
    BoundaryVertex(usize),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("quadrature did not reach tolerance: estimate {estimate:.3e}, requested {requested:.3e}")]
    Tolerance { estimate: f64, requested: f64 },

    #[error("chain for n = {n} accepted only {rate:.4} of pivot attempts")]
    Convergence { n: usize, rate: f64 },
}
