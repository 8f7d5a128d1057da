//! Convex polytopes in two and three dimensions.

mod json;
mod linalg;
pub mod lp;
pub mod partition;
mod polytope;
pub mod shapes;
pub mod simplex;

pub use json::{HalfspaceJson, PolytopeJson};
pub use partition::{cell_height, facet_partition, triangulate_cell, FacetCell};
pub use polytope::{DistanceQuery, Halfspace, Polytope};
pub use simplex::{triangulate, Simplex};
