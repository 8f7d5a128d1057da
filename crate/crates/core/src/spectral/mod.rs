//! Upper bounds for `λ_{p,q}` of planar domains from piecewise linear test
//! functions, and the audits built on them.

pub mod annulus;
pub mod eigen;
pub mod fem;
pub mod mesh;
pub mod mesher;
mod quotient;
mod solve;
pub mod sparse;
mod verify;

pub use mesh::{DiscreteField, MeshQuality, TriangleMesh};
pub use mesher::{mesh_domain, mesh_polygon, MeshOptions, PlanarDomain};
pub use quotient::{abs_power_integral, gradient_energy, rayleigh_pq};
pub use solve::{minimize_lambda, LambdaEstimate, LambdaMethod, LambdaOptions};
pub use verify::{
    mesh_polytope, slab, slab_limit_constant, slab_moment_asymptotic, slab_moment_ratio, slab_sharpness, verify_hersch_protter,
    verify_makai, SlabRow,
};
pub use annulus::{counterexample_annulus_tooth, ritz_certificate, slit_annulus_control, CounterexampleReport, RitzCertificate, RitzOptions};
pub use crate::report::{Direction, InequalityReport};
