//! Scalar abstraction shared by the closed-form and polyhedral code.
//!
//! Everything that is a formula or a finite geometric construction is written
//! once against [`Real`] and instantiated for `f32` and `f64`. The iterative
//! solvers (1D descent, finite elements, smooth bodies) are `f64` only.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by the generic parts of the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance for geometric predicates on unit-scale bodies.
    fn geom_eps() -> Self;

    /// Tolerance for pivots and rank decisions in small dense solves.
    fn pivot_eps() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn geom_eps() -> Self {
        1e-9
    }
    fn pivot_eps() -> Self {
        1e-13
    }
}

impl Real for f32 {
    fn geom_eps() -> Self {
        2e-4
    }
    fn pivot_eps() -> Self {
        1e-6
    }
}

/// Pairwise (cascade) summation, accurate to O(log n) ulps.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        let mut s = T::zero();
        for &v in values {
            s = s + v;
        }
        return s;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub(crate) fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_small_input() {
        let v: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }

    #[test]
    fn pairwise_sum_is_more_accurate_than_naive() {
        let v = vec![0.1f32; 1 << 20];
        let exact = 0.1f64 * (1 << 20) as f64;
        let naive: f32 = v.iter().sum();
        let pw = pairwise_sum(&v);
        assert!((pw as f64 - exact).abs() < (naive as f64 - exact).abs());
    }
}
