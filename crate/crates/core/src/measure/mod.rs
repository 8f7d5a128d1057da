//! Integrals of powers of the distance function over polytopes and the
//! lower-bound functionals built from them.

pub mod kernel;
mod monte_carlo;

pub use monte_carlo::{monte_carlo_moments, MonteCarloOptions};

use crate::constants::{c_pq, pi_p, pi_pq, ExponentPair};
use crate::error::{Error, Result};
use crate::geometry::{facet_partition, triangulate, FacetCell, Polytope, Simplex};
use crate::scalar::{pairwise_sum, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentMethod {
    Exact,
    Quadrature,
    MonteCarlo,
}

/// `∫ d^α` with how it was obtained; `error` is zero for exact values and a
/// standard error for Monte Carlo estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentResult<T> {
    pub alpha: T,
    pub value: T,
    pub method: MomentMethod,
    pub error: T,
}

/// `∫_S l^α` where `l` is affine on `S` with vertex values `values`.
pub fn simplex_linear_power<T: Real>(s: &Simplex<T>, values: &[T], alpha: T) -> Result<T> {
    if values.len() != s.vertices().len() {
        return Err(Error::Precondition(format!(
            "{} vertex values for a simplex with {} vertices",
            values.len(),
            s.vertices().len()
        )));
    }
    if alpha < T::zero() {
        return Err(Error::UnsupportedExponent(format!("moment exponent {alpha} < 0")));
    }
    kernel::linear_power_integral(s.volume(), values, alpha)
}

/// Exact `∫_P d_P^α`: on the cell of facet `i` the distance is the affine
/// function `b_i − a_i·x`.
pub fn distance_moment<T: Real>(p: &Polytope<T>, alpha: T) -> Result<MomentResult<T>> {
    let cells = facet_partition(p)?;
    distance_moment_cells(&cells, alpha)
}

/// [`distance_moment`] on a precomputed partition.
pub fn distance_moment_cells<T: Real>(cells: &[FacetCell<T>], alpha: T) -> Result<MomentResult<T>> {
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::UnsupportedExponent(format!("moment exponent {alpha} must be finite and >= 0")));
    }
    let mut terms = Vec::new();
    for cell in cells {
        for s in triangulate(cell.cell()) {
            let values: Vec<T> = s.vertices().iter().map(|v| cell.base_slack(v).max(T::zero())).collect();
            terms.push(simplex_linear_power(&s, &values, alpha)?);
        }
    }
    Ok(MomentResult { alpha, value: pairwise_sum(&terms), method: MomentMethod::Exact, error: T::zero() })
}

/// `|P| r^α / (α + 1)`, an upper bound for `∫ d^α` on convex bodies.
pub fn moment_upper_bound<T: Real>(p: &Polytope<T>, alpha: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::UnsupportedExponent(format!("moment exponent {alpha} must be > 0")));
    }
    let r = p.inradius().0;
    Ok(p.volume() * r.powf(alpha) / (alpha + T::one()))
}

/// Makai-type lower bound for `λ_{p,q}`:
/// `C_{p,q} / (∫ d^{pq/(p−q)})^{(p−q)/q}` for `q < p`, `(π_p/2)^p / r^p` on
/// the diagonal (also used when the moment exponent would overflow).
pub fn makai_lower_bound<T: Real>(p: &Polytope<T>, e: &ExponentPair<T>) -> Result<T> {
    let (pe, qe) = (e.p(), e.q());
    match e.moment_exponent() {
        Some(alpha) => {
            let m = distance_moment(p, alpha)?.value;
            Ok(c_pq(e)? / m.powf((pe - qe) / qe))
        }
        None => {
            let r = p.inradius().0;
            let two = T::one() + T::one();
            Ok((pi_p(pe)? / (two * r)).powf(pe))
        }
    }
}

/// Hersch–Protter-type bound `(π_{p,q}/2)^p / (|P|^{(p−q)/q} r^p)`.
pub fn hersch_protter_bound<T: Real>(p: &Polytope<T>, e: &ExponentPair<T>) -> Result<T> {
    let (pe, qe) = (e.p(), e.q());
    let r = p.inradius().0;
    let two = T::one() + T::one();
    let lead = (pi_pq(e)? / (two * r)).powf(pe);
    Ok(lead / p.volume().powf((pe - qe) / qe))
}
