//! One-dimensional sharp constants.
//!
//! * `π_{p,q}`: the best constant in `‖u'‖_p >= π_{p,q} ‖u‖_q` for `u`
//!   vanishing at both ends of `(0, 1)`, with the closed form
//!   `(2/q)(1 + q/p')^{1/q} (1 + p'/q)^{-1/p} B(1/q, 1/p')`.
//! * `C_{p,q} = (π_{p,q}/2)^p ((p-q)/(pq+p-q))^{(p-q)/q}`, the constant of the
//!   distance-moment lower bound for `λ_{p,q}` on convex sets; at `q = p` it is
//!   the continuous limit `(π_p/2)^p`.
//!
//! The numeric counterparts in [`numeric`] minimize discrete quotients over
//! piecewise-linear functions and serve as independent oracles.

pub mod numeric;
mod special;

pub use numeric::{mu_p_numeric, pi_pq_numeric, NumericEstimate, OneDimOptions, Weight1D};
pub use special::{beta, ln_beta, ln_gamma};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Moment exponent above which `q` is treated as equal to `p`.
pub const MAX_MOMENT_EXPONENT: f64 = 1e6;

/// An admissible exponent pair: `1 <= q < p < ∞` or `1 < q = p < ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPair<T> {
    p: T,
    q: T,
}

impl<T: Real> ExponentPair<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        let one = T::one();
        let ok = p.is_finite() && q.is_finite() && q >= one && q <= p && (q < p || p > one);
        if ok {
            Ok(Self { p, q })
        } else {
            Err(Error::InvalidExponents { p: p.to_f64_lossy(), q: q.to_f64_lossy() })
        }
    }

    /// The diagonal pair `(p, p)`.
    pub fn diagonal(p: T) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn is_diagonal(&self) -> bool {
        self.q == self.p
    }

    /// `p' = p/(p-1)`.
    pub fn conjugate(&self) -> T {
        self.p / (self.p - T::one())
    }

    /// `α = pq/(p-q)`, or `None` on (or numerically at) the diagonal.
    pub fn moment_exponent(&self) -> Option<T> {
        if self.is_diagonal() {
            return None;
        }
        let alpha = self.p * self.q / (self.p - self.q);
        (alpha.is_finite() && alpha <= T::c(MAX_MOMENT_EXPONENT)).then_some(alpha)
    }
}

/// Closed form of `π_{p,q}`.
pub fn pi_pq<T: Real>(e: &ExponentPair<T>) -> Result<T> {
    let (p, q) = (e.p(), e.q());
    if !(p > T::one()) {
        return Err(Error::UnsupportedExponent(format!("p = {p}: conjugate exponent is infinite")));
    }
    let pc = e.conjugate();
    let one = T::one();
    let two = one + one;
    let b = beta(one / q, one / pc)?;
    Ok(two / q * (one + q / pc).powf(one / q) * (one + pc / q).powf(-one / p) * b)
}

/// `π_p = π_{p,p}`.
pub fn pi_p<T: Real>(p: T) -> Result<T> {
    pi_pq(&ExponentPair::diagonal(p)?)
}

/// The Makai constant `C_{p,q}`.
pub fn c_pq<T: Real>(e: &ExponentPair<T>) -> Result<T> {
    let (p, q) = (e.p(), e.q());
    let half_pi = pi_pq(e)? / (T::one() + T::one());
    let first = (p * half_pi.ln()).exp();
    if e.is_diagonal() {
        return Ok(first);
    }
    let ratio = (p - q) / (p * q + p - q);
    Ok(first * ((p - q) / q * ratio.ln()).exp())
}
