//! Sharp lower bounds for generalized principal frequencies `λ_{p,q}` of
//! convex bodies, and the numerics that audit them.
//!
//! - [`constants`]: `π_{p,q}`, `C_{p,q}` and one-dimensional quotient oracles.
//! - [`geometry`]: convex polytopes, inradius, the nearest-facet partition.
//! - [`measure`]: exact moments `∫ d^α` and the Makai / Hersch–Protter bounds.
//! - [`spectral`]: meshed upper bounds for `λ_{p,q}` and the audits.
//! - [`normal_coords`]: smooth convex bodies in normal coordinates.
//!
//! The geometric and measure layers are generic over [`Real`]; the aliases
//! below fix the scalar to `f64` (or `f32` where noted). Meshing, eigen
//! solvers and normal coordinates work in `f64` only.

pub mod constants;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod normal_coords;
pub mod optim;
pub mod report;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use report::{Direction, InequalityReport};
pub use scalar::Real;

pub type ExponentPair = constants::ExponentPair<f64>;
pub type Polytope = geometry::Polytope<f64>;
pub type Polytope32 = geometry::Polytope<f32>;
pub type Halfspace = geometry::Halfspace<f64>;
pub type FacetCell = geometry::FacetCell<f64>;
pub type Simplex = geometry::Simplex<f64>;
pub type MomentResult = measure::MomentResult<f64>;

pub use normal_coords::SmoothBody2D;
pub use spectral::{DiscreteField, TriangleMesh};
