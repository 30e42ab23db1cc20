//! Exact computation of the polytope-family duality operator: each nonzero
//! direction `d` selects, from every member, the vertices maximizing `⟨·, d⟩`,
//! and the hulls of these selections over all directions form the dual family.
//!
//! All arithmetic is rational. Directions are handled through the finitely
//! many weak orderings they induce on the ground points, which makes the dual
//! family, its iterates and the cycle they fall into exactly computable.

pub mod analysis;
pub mod converter;
pub mod error;
pub mod exact;
pub mod family;
pub mod harness;
pub mod reorder;

pub use converter::{dual_family, iterate_until_cycle, omega_of_direction, Converter, CycleReport};
pub use error::{Error, Result};
pub use exact::{Scalar, Vector};
pub use family::{CanonicalFamily, Family, GroundSet, Polytope};
