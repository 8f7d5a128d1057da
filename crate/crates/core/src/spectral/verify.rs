//! End-to-end audits: a lower bound from `measure` against an upper bound
//! from a meshed test function.

use serde::{Deserialize, Serialize};

use crate::constants::{c_pq, pi_p, ExponentPair};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::measure::{distance_moment, hersch_protter_bound, makai_lower_bound};
use crate::report::{Direction, InequalityReport};
use crate::spectral::mesh::TriangleMesh;
use crate::spectral::mesher::mesh_polygon;
use crate::spectral::solve::{minimize_lambda, LambdaOptions};

/// Conforming mesh of a planar polytope with the given target edge length.
pub fn mesh_polytope(p: &Polytope<f64>, h: f64) -> Result<TriangleMesh> {
    if p.dim() != 2 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    let ring: Vec<[f64; 2]> = p.vertices().iter().map(|v| [v[0], v[1]]).collect();
    mesh_polygon(&ring, &[], h)
}

fn pair_label(e: &ExponentPair<f64>) -> String {
    format!("({}, {})", e.p(), e.q())
}

/// `makai_lower_bound(P) ≤ λ_upper(mesh(P, h))`.
pub fn verify_makai(p: &Polytope<f64>, e: &ExponentPair<f64>, h: f64, opts: &LambdaOptions) -> Result<InequalityReport> {
    let left = makai_lower_bound(p, e)?;
    let mesh = mesh_polytope(p, h)?;
    let est = minimize_lambda(&mesh, e, opts)?;
    Ok(InequalityReport::new(
        format!("makai {}", pair_label(e)),
        left,
        Direction::LessEq,
        est.lambda_upper,
        1e-9,
        "C_pq / (∫ d^α)^((p-q)/q), exact moment",
        format!("P1 quotient on {} nodes ({:?})", mesh.n_nodes(), est.method),
    )
    .with_detail("h", h)
    .with_detail("iterations", est.iterations as f64)
    .with_detail("converged", est.converged as u8 as f64))
}

/// `hersch_protter_bound(P) ≤ λ_upper(mesh(P, h))`; for `q = p` this is
/// `(π_p/2)^p / r^p`.
pub fn verify_hersch_protter(p: &Polytope<f64>, e: &ExponentPair<f64>, h: f64, opts: &LambdaOptions) -> Result<InequalityReport> {
    let left = hersch_protter_bound(p, e)?;
    let mesh = mesh_polytope(p, h)?;
    let est = minimize_lambda(&mesh, e, opts)?;
    Ok(InequalityReport::new(
        format!("hersch-protter {}", pair_label(e)),
        left,
        Direction::LessEq,
        est.lambda_upper,
        1e-9,
        "(π_pq/2)^p / (|Ω|^((p-q)/q) r^p)",
        format!("P1 quotient on {} nodes ({:?})", mesh.n_nodes(), est.method),
    )
    .with_detail("h", h)
    .with_detail("converged", est.converged as u8 as f64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlabRow {
    pub length: f64,
    pub lambda_upper: f64,
    /// Makai (or, on the diagonal, inradius) lower bound.
    pub lower_bound: f64,
    /// `lambda_upper / lower_bound`, always ≥ 1.
    pub ratio: f64,
    pub nodes: usize,
}

/// `(-L/2, L/2) × (0, 1)`.
pub fn slab(length: f64) -> Result<Polytope<f64>> {
    let a = 0.5 * length;
    Polytope::from_vertices(&[vec![-a, 0.0], vec![a, 0.0], vec![a, 1.0], vec![-a, 1.0]])
}

/// Ratio of the quotient upper bound to the Makai lower bound along the
/// slab family, on structured meshes of spacing `≈ h`.
pub fn slab_sharpness(e: &ExponentPair<f64>, lengths: &[f64], h: f64, opts: &LambdaOptions) -> Result<Vec<SlabRow>> {
    lengths
        .iter()
        .map(|&length| {
            if !(length >= 1.0) {
                return Err(Error::Precondition(format!("slab length must be ≥ 1, got {length}")));
            }
            let p = slab(length)?;
            let lower_bound = makai_lower_bound(&p, e)?;
            let nx = (length / h).round().max(2.0) as usize;
            let ny = (1.0 / h).round().max(2.0) as usize;
            let mesh = TriangleMesh::rectangle(-0.5 * length, 0.5 * length, 0.0, 1.0, nx, ny)?;
            let est = minimize_lambda(&mesh, e, opts)?;
            Ok(SlabRow { length, lambda_upper: est.lambda_upper, lower_bound, ratio: est.lambda_upper / lower_bound, nodes: mesh.n_nodes() })
        })
        .collect()
}

/// Leading-order slab moment `L (1/2)^α / (α + 1)` in the plane.
pub fn slab_moment_asymptotic(length: f64, alpha: f64) -> f64 {
    length * 0.5f64.powf(alpha) / (alpha + 1.0)
}

/// Exact slab moment over its leading-order asymptotic; tends to 1 from
/// below as the slab grows.
pub fn slab_moment_ratio(length: f64, e: &ExponentPair<f64>) -> Result<f64> {
    let alpha = e
        .moment_exponent()
        .ok_or_else(|| Error::Precondition("moment exponent is infinite on the diagonal".into()))?;
    Ok(distance_moment(&slab(length)?, alpha)?.value / slab_moment_asymptotic(length, alpha))
}

/// The sharp one-dimensional constant the slab ratios approach.
pub fn slab_limit_constant(e: &ExponentPair<f64>) -> Result<f64> {
    if e.is_diagonal() {
        Ok((pi_p(e.p())? / 2.0).powf(e.p()))
    } else {
        c_pq(e)
    }
}
