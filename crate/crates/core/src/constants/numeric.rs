//! Discrete one-dimensional quotients.
//!
//! Both oracles minimize over continuous piecewise-linear functions on a
//! uniform grid. Derivatives are constant per cell and `∫|u|^q` is integrated
//! exactly cell by cell, so every value is the true quotient of an admissible
//! function and hence an upper bound of the continuous infimum.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ExponentPair;
use crate::error::{Error, Result};
use crate::measure::kernel::{abs_power_segment, abs_power_segment_grad};
use crate::optim::{descend, solve_tridiagonal, DescentOptions, Objective};

#[derive(Clone, Debug)]
pub struct OneDimOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OneDimOptions {
    fn default() -> Self {
        Self { max_iter: 50_000, rel_tol: 1e-10, restarts: 5, seed: 42 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

enum WeightRule {
    Constant(f64),
    /// Values on equal-width consecutive subintervals.
    Steps(Vec<f64>),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A positive weight on `(0, L)`.
#[derive(Clone)]
pub struct Weight1D {
    length: f64,
    rule: Arc<WeightRule>,
    monotone: bool,
}

impl fmt::Debug for Weight1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &*self.rule {
            WeightRule::Constant(c) => format!("constant({c})"),
            WeightRule::Steps(v) => format!("steps({} values)", v.len()),
            WeightRule::Function(_) => "function".to_string(),
        };
        f.debug_struct("Weight1D")
            .field("length", &self.length)
            .field("rule", &kind)
            .field("monotone", &self.monotone)
            .finish()
    }
}

fn check_length(length: f64) -> Result<()> {
    if length > 0.0 && length.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("weight domain length must be positive, got {length}")))
    }
}

impl Weight1D {
    /// `w ≡ 1` on `(0, L)`.
    pub fn unit(length: f64) -> Result<Self> {
        Self::constant(length, 1.0)
    }

    pub fn constant(length: f64, value: f64) -> Result<Self> {
        check_length(length)?;
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Domain(format!("weight value {value} is not positive")));
        }
        Ok(Self { length, rule: Arc::new(WeightRule::Constant(value)), monotone: true })
    }

    /// Piecewise-constant weight taking `values[k]` on the `k`-th of
    /// `values.len()` equal subintervals. Monotonicity is detected.
    pub fn steps(length: f64, values: Vec<f64>) -> Result<Self> {
        check_length(length)?;
        if values.is_empty() {
            return Err(Error::Domain("step weight needs at least one value".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!("step weight value {v} is not positive")));
        }
        let monotone = values.windows(2).all(|w| w[1] <= w[0]);
        Ok(Self { length, rule: Arc::new(WeightRule::Steps(values)), monotone })
    }

    /// Weight given by a rule; positivity is checked when sampled. A weight
    /// tagged `monotone` is verified to be non-increasing on 1024 samples.
    pub fn from_fn<F>(length: f64, f: F, monotone: bool) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_length(length)?;
        let w = Self { length, rule: Arc::new(WeightRule::Function(Arc::new(f))), monotone };
        if monotone {
            let n = 1024;
            let mut prev = f64::INFINITY;
            for k in 0..n {
                let v = w.eval((k as f64 + 0.5) * length / n as f64);
                if v > prev * (1.0 + 1e-12) {
                    return Err(Error::Domain("weight tagged monotone is increasing somewhere".into()));
                }
                prev = v;
            }
        }
        Ok(w)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &*self.rule {
            WeightRule::Constant(c) => *c,
            WeightRule::Steps(v) => {
                let k = ((t / self.length) * v.len() as f64).floor() as isize;
                v[k.clamp(0, v.len() as isize - 1) as usize]
            }
            WeightRule::Function(f) => f(t),
        }
    }

    /// Samples at the midpoints of `n` equal cells.
    fn midpoint_samples(&self, n: usize) -> Result<Vec<f64>> {
        let h = self.length / n as f64;
        (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) * h;
                let v = self.eval(t);
                if v > 0.0 && v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Domain(format!("weight is {v} at t = {t}")))
                }
            })
            .collect()
    }
}

/// `Σ h w_k |u'_k|^p / (Σ w_k ∫_cell |u|^q)^{p/q}` over nodal values
/// `u_1..u_{n-1}` (Dirichlet at both ends) or `u_1..u_n` (free right end).
struct LineQuotient {
    n: usize,
    h: f64,
    p: f64,
    q: f64,
    weights: Vec<f64>,
    free_right: bool,
}

impl LineQuotient {
    fn nodes(&self, u: &[f64]) -> Vec<f64> {
        let mut full = Vec::with_capacity(self.n + 1);
        full.push(0.0);
        full.extend_from_slice(u);
        if !self.free_right {
            full.push(0.0);
        }
        full
    }

    fn parts(&self, full: &[f64]) -> Result<(f64, f64)> {
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..self.n {
            let s = (full[k + 1] - full[k]) / self.h;
            num += self.h * self.weights[k] * s.abs().powf(self.p);
            den += self.weights[k] * abs_power_segment(self.h, [full[k], full[k + 1]], self.q)?;
        }
        if !(den > 0.0) {
            return Err(Error::Domain("quotient evaluated at the zero function".into()));
        }
        Ok((num, den))
    }

    /// Index of node `k` among the unknowns.
    fn unknown(&self, k: usize) -> Option<usize> {
        if k == 0 || (!self.free_right && k == self.n) {
            None
        } else {
            Some(k - 1)
        }
    }
}

impl Objective for LineQuotient {
    fn dim(&self) -> usize {
        if self.free_right {
            self.n
        } else {
            self.n - 1
        }
    }

    fn value(&self, u: &[f64]) -> Result<f64> {
        let (num, den) = self.parts(&self.nodes(u))?;
        Ok(num / den.powf(self.p / self.q))
    }

    fn value_grad(&self, u: &[f64], grad: &mut [f64]) -> Result<f64> {
        let full = self.nodes(u);
        let (num, den) = self.parts(&full)?;
        let mut gn = vec![0.0; grad.len()];
        let mut gd = vec![0.0; grad.len()];
        for k in 0..self.n {
            let s = (full[k + 1] - full[k]) / self.h;
            let dn = self.weights[k] * self.p * s.abs().powf(self.p - 2.0) * s;
            let dn = if s == 0.0 { 0.0 } else { dn };
            let dd = abs_power_segment_grad(self.h, [full[k], full[k + 1]], self.q)?;
            if let Some(i) = self.unknown(k) {
                gn[i] -= dn;
                gd[i] += self.weights[k] * dd[0];
            }
            if let Some(i) = self.unknown(k + 1) {
                gn[i] += dn;
                gd[i] += self.weights[k] * dd[1];
            }
        }
        let scale = den.powf(-self.p / self.q);
        let r = num * scale;
        let c = self.p / self.q * num / den;
        for ((g, a), b) in grad.iter_mut().zip(&gn).zip(&gd) {
            *g = (a - c * b) * scale;
        }
        Ok(r)
    }

    /// Weighted 1D Laplacian with weights `w_k (s_k² + δ²)^{(p-2)/2}`.
    fn precondition(&self, u: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
        let full = self.nodes(u);
        let slopes: Vec<f64> = (0..self.n).map(|k| (full[k + 1] - full[k]) / self.h).collect();
        let smax = slopes.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let delta2 = (1e-3 * smax).powi(2).max(1e-300);
        let m = self.dim();
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m.saturating_sub(1)];
        for k in 0..self.n {
            let c = self.weights[k] * (slopes[k] * slopes[k] + delta2).powf((self.p - 2.0) / 2.0) / self.h;
            let a = self.unknown(k);
            let b = self.unknown(k + 1);
            if let Some(i) = a {
                diag[i] += c;
            }
            if let Some(j) = b {
                diag[j] += c;
            }
            if let (Some(i), Some(_)) = (a, b) {
                off[i] -= c;
            }
        }
        let mut d = grad.to_vec();
        solve_tridiagonal(&diag, &off, &mut d)?;
        Ok(d)
    }

    fn normalize(&self, u: &mut [f64]) {
        if let Ok((_, den)) = self.parts(&self.nodes(u)) {
            let s = den.powf(-1.0 / self.q);
            u.iter_mut().for_each(|x| *x *= s);
        }
    }

    fn initial_step(&self) -> f64 {
        1.0 / self.p
    }
}

fn initial_guess(problem: &LineQuotient, restart: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dim = problem.dim();
    let (shape, noise) = if restart == 0 { (1.0, 0.0) } else { (rng.gen_range(0.5..2.0), 0.3) };
    (1..=dim)
        .map(|k| {
            let t = k as f64 / problem.n as f64;
            let base = if problem.free_right {
                (0.5 * std::f64::consts::PI * t).sin()
            } else {
                (std::f64::consts::PI * t).sin()
            };
            base.powf(shape) * (1.0 + noise * (rng.gen::<f64>() - 0.5))
        })
        .collect()
}

fn minimize_line(problem: &LineQuotient, opts: &OneDimOptions) -> Result<NumericEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dopts = DescentOptions { max_iter: opts.max_iter, rel_tol: opts.rel_tol, ..Default::default() };
    let mut best: Option<NumericEstimate> = None;
    for restart in 0..opts.restarts.max(1) {
        let u0 = initial_guess(problem, restart, &mut rng);
        let rep = descend(problem, u0, &dopts)?;
        let cand = NumericEstimate { value: rep.value, converged: rep.converged, iterations: rep.iterations };
        if best.map_or(true, |b| cand.value < b.value) {
            best = Some(cand);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Discrete `π_{p,q}`: minimum of `‖u'‖_p / ‖u‖_q` over piecewise-linear `u`
/// on `n` uniform cells of `(0, 1)` vanishing at both ends.
pub fn pi_pq_numeric(e: &ExponentPair<f64>, n: usize, opts: &OneDimOptions) -> Result<NumericEstimate> {
    if n < 16 {
        return Err(Error::Precondition(format!("grid size {n} < 16")));
    }
    let problem = LineQuotient {
        n,
        h: 1.0 / n as f64,
        p: e.p(),
        q: e.q(),
        weights: vec![1.0; n],
        free_right: false,
    };
    let est = minimize_line(&problem, opts)?;
    Ok(NumericEstimate { value: est.value.powf(1.0 / e.p()), ..est })
}

/// Discrete weighted quotient `μ_p(w, (0, L))`: minimum of
/// `∫|ψ'|^p w / ∫|ψ|^p w` over piecewise-linear `ψ` with `ψ(0) = 0` and a free
/// right end; `w` is sampled at cell midpoints.
pub fn mu_p_numeric(w: &Weight1D, p: f64, n: usize, opts: &OneDimOptions) -> Result<NumericEstimate> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::UnsupportedExponent(format!("p = {p} (need p > 1)")));
    }
    if n < 16 {
        return Err(Error::Precondition(format!("grid size {n} < 16")));
    }
    let weights = w.midpoint_samples(n)?;
    let problem = LineQuotient { n, h: w.length() / n as f64, p, q: p, weights, free_right: true };
    minimize_line(&problem, opts)
}
