//! Monotone descent for 0-homogeneous Rayleigh-type quotients.
//!
//! The objective is minimized along preconditioned (sub)gradient directions
//! with Armijo backtracking; every accepted step strictly lowers the value,
//! so the recorded history is non-increasing. Iterates are renormalized after
//! each step, which the quotient does not see.

use crate::error::{Error, Result};

pub trait Objective {
    fn dim(&self) -> usize;

    fn value(&self, u: &[f64]) -> Result<f64>;

    /// Writes the (sub)gradient into `grad` and returns the value.
    fn value_grad(&self, u: &[f64], grad: &mut [f64]) -> Result<f64>;

    /// Approximately solves `P d = grad` for an SPD `P`; the identity by default.
    fn precondition(&self, _u: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
        Ok(grad.to_vec())
    }

    /// Rescales `u` in place; the objective is invariant under this.
    fn normalize(&self, _u: &mut [f64]) {}

    /// Natural first trial step (for a Newton-like preconditioner, 1/p).
    fn initial_step(&self) -> f64 {
        1.0
    }
}

#[derive(Clone, Debug)]
pub struct DescentOptions {
    pub max_iter: usize,
    /// Stop once the relative decrease stays below this for a few iterations.
    pub rel_tol: f64,
    pub max_halvings: usize,
    pub armijo: f64,
    pub record_history: bool,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            max_iter: 50_000,
            rel_tol: 1e-10,
            max_halvings: 60,
            armijo: 1e-4,
            record_history: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DescentReport {
    pub value: f64,
    pub u: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted step (first entry: initial value).
    pub history: Vec<f64>,
}

const STALL_ITERS: usize = 3;

pub fn descend<O: Objective + ?Sized>(obj: &O, u0: Vec<f64>, opts: &DescentOptions) -> Result<DescentReport> {
    if u0.len() != obj.dim() {
        return Err(Error::Precondition(format!(
            "initial guess has length {}, expected {}",
            u0.len(),
            obj.dim()
        )));
    }
    let mut u = u0;
    obj.normalize(&mut u);
    let mut grad = vec![0.0; u.len()];
    let mut value = obj.value_grad(&u, &mut grad)?;
    if !value.is_finite() {
        return Err(Error::Domain("objective is not finite at the initial guess".into()));
    }
    let mut history = Vec::new();
    if opts.record_history {
        history.push(value);
    }
    let base_step = obj.initial_step();
    let mut step = base_step;
    let mut stall = 0;
    let mut converged = false;
    let mut iterations = 0;
    let mut cand = vec![0.0; u.len()];

    while iterations < opts.max_iter {
        iterations += 1;
        let mut dir = obj.precondition(&u, &grad)?;
        let mut slope: f64 = -grad.iter().zip(&dir).map(|(g, d)| g * d).sum::<f64>();
        if !(slope < 0.0) {
            // preconditioner failed to give descent; fall back to the raw gradient
            dir = grad.clone();
            slope = -grad.iter().map(|g| g * g).sum::<f64>();
            if !(slope < 0.0) {
                converged = true;
                break;
            }
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..opts.max_halvings {
            for ((c, &ui), &di) in cand.iter_mut().zip(&u).zip(&dir) {
                *c = ui - t * di;
            }
            if let Ok(v) = obj.value(&cand) {
                if v.is_finite() && v <= value + opts.armijo * t * slope && v < value {
                    accepted = Some(v);
                    break;
                }
            }
            t *= 0.5;
        }
        let Some(new_value) = accepted else {
            // no decrease is representable along the direction
            converged = true;
            break;
        };
        std::mem::swap(&mut u, &mut cand);
        obj.normalize(&mut u);
        let rel = (value - new_value) / value.abs().max(f64::MIN_POSITIVE);
        value = obj.value_grad(&u, &mut grad)?;
        debug_assert!(value <= new_value * (1.0 + 1e-12) + 1e-300);
        if opts.record_history {
            history.push(value);
        }
        step = (2.0 * t).min(base_step);
        if rel < opts.rel_tol {
            stall += 1;
            if stall >= STALL_ITERS {
                converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }
    Ok(DescentReport { value, u, iterations, converged, history })
}

/// Solves a symmetric positive definite tridiagonal system in place
/// (`diag`, `off` the sub/super diagonal, `rhs` overwritten with the solution).
pub(crate) fn solve_tridiagonal(diag: &[f64], off: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    if !(d > 0.0) {
        return Err(Error::LinearAlgebra("non-positive pivot in tridiagonal solve".into()));
    }
    rhs[0] /= d;
    for i in 1..n {
        c[i - 1] = off[i - 1] / d;
        d = diag[i] - off[i - 1] * c[i - 1];
        if !(d > 0.0) {
            return Err(Error::LinearAlgebra("non-positive pivot in tridiagonal solve".into()));
        }
        rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// x^T A x / x^T x for a diagonal A; minimum is the smallest entry.
    struct DiagQuotient(Vec<f64>);

    impl Objective for DiagQuotient {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn value(&self, u: &[f64]) -> Result<f64> {
            let num: f64 = u.iter().zip(&self.0).map(|(x, a)| a * x * x).sum();
            let den: f64 = u.iter().map(|x| x * x).sum();
            Ok(num / den)
        }
        fn value_grad(&self, u: &[f64], grad: &mut [f64]) -> Result<f64> {
            let den: f64 = u.iter().map(|x| x * x).sum();
            let r = self.value(u)?;
            for ((g, x), a) in grad.iter_mut().zip(u).zip(&self.0) {
                *g = 2.0 * (a - r) * x / den;
            }
            Ok(r)
        }
        fn normalize(&self, u: &mut [f64]) {
            let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            u.iter_mut().for_each(|x| *x /= n);
        }
    }

    #[test]
    fn finds_smallest_eigenvalue_monotonically() {
        let obj = DiagQuotient(vec![3.0, 1.5, 7.0, 2.0]);
        let opts = DescentOptions { record_history: true, ..Default::default() };
        let rep = descend(&obj, vec![1.0; 4], &opts).unwrap();
        assert!((rep.value - 1.5).abs() < 1e-8, "{}", rep.value);
        assert!(rep.converged);
        assert!(rep.history.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rejects_wrong_length() {
        let obj = DiagQuotient(vec![1.0, 2.0]);
        assert!(descend(&obj, vec![1.0], &DescentOptions::default()).is_err());
    }

    #[test]
    fn tridiagonal_solve() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = [1 0 1] -> x = [1 1 1]
        let mut rhs = vec![1.0, 0.0, 1.0];
        solve_tridiagonal(&[2.0, 2.0, 2.0], &[-1.0, -1.0], &mut rhs).unwrap();
        for x in rhs {
            assert!((x - 1.0).abs() < 1e-14);
        }
    }
}
