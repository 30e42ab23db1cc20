//! Exact rational scalars, vectors and the linear feasibility solver every
//! other module builds on.

mod lp;
mod scalar;
mod vector;

pub use lp::{kernel_direction, lp_feasible, rank, LinearSystem, Relation, Row};
pub use scalar::{ParseScalarError, Scalar};
pub use vector::Vector;
