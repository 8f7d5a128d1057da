//! Standard test bodies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Polytope;

/// Regular `n`-gon with circumradius `r`, one vertex on the positive x-axis.
pub fn regular_ngon(n: usize, r: f64) -> Result<Polytope<f64>> {
    if n < 3 || !(r > 0.0) {
        return Err(Error::Precondition(format!("regular polygon needs n ≥ 3 and r > 0, got n={n}, r={r}")));
    }
    let v: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            vec![r * a.cos(), r * a.sin()]
        })
        .collect();
    Polytope::from_vertices(&v)
}

/// Convex hull of `k` uniform points in the unit disk; hulls with fewer than
/// five vertices are redrawn from the same stream. Deterministic in `seed`.
pub fn random_convex(k: usize, seed: u64) -> Result<Polytope<f64>> {
    if k < 5 {
        return Err(Error::Precondition(format!("need at least 5 points, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let pts: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                let r = rng.gen::<f64>().sqrt();
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                vec![r * a.cos(), r * a.sin()]
            })
            .collect();
        if let Ok(p) = Polytope::from_vertices(&pts) {
            if p.vertices().len() >= 5 {
                return Ok(p);
            }
        }
    }
    Err(Error::Internal("no hull with five vertices after 1000 draws".into()))
}

/// Axis-aligned box `∏ (0, s_i)`.
pub fn axis_box(sides: &[f64]) -> Result<Polytope<f64>> {
    if sides.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::Precondition("box sides must be positive".into()));
    }
    let n = sides.len();
    let v: Vec<Vec<f64>> = (0..1usize << n)
        .map(|mask| (0..n).map(|d| if mask >> d & 1 == 1 { sides[d] } else { 0.0 }).collect())
        .collect();
    Polytope::from_vertices(&v)
}

/// Standard simplex `conv{0, e_1, …, e_N}`.
pub fn standard_simplex(dim: usize) -> Result<Polytope<f64>> {
    let mut v = vec![vec![0.0; dim]];
    for d in 0..dim {
        let mut e = vec![0.0; dim];
        e[d] = 1.0;
        v.push(e);
    }
    Polytope::from_vertices(&v)
}
