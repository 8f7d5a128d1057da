use crate::constants::ExponentPair;
use crate::error::Result;
use crate::optim::{descend, DescentOptions};
use crate::spectral::eigen::{smallest_eigenpairs, EigenOptions};
use crate::spectral::fem::{load, mass, stiffness, DofMap};
use crate::spectral::mesh::{DiscreteField, TriangleMesh};
use crate::spectral::quotient::{rayleigh_values, PqObjective};
use crate::spectral::sparse::EnvelopeCholesky;

#[derive(Clone, Debug)]
pub struct LambdaOptions {
    pub eigen: EigenOptions,
    pub descent: DescentOptions,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        LambdaOptions {
            eigen: EigenOptions::default(),
            descent: DescentOptions { max_iter: 2000, rel_tol: 1e-10, ..DescentOptions::default() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMethod {
    InverseIteration,
    LinearSolve,
    Descent,
}

/// An admissible field and its exact quotient, which bounds `λ_{p,q}` of the
/// meshed domain from above.
#[derive(Clone, Debug)]
pub struct LambdaEstimate {
    pub lambda_upper: f64,
    pub field: DiscreteField,
    pub method: LambdaMethod,
    pub converged: bool,
    pub iterations: usize,
    /// Quotient after each accepted descent step (descent branch only).
    pub history: Vec<f64>,
}

/// Minimizes the discrete quotient: inverse iteration for `(2,2)`, one
/// linear solve for `(2,1)`, preconditioned descent from the `(2,2)`
/// eigenvector otherwise.
pub fn minimize_lambda(mesh: &TriangleMesh, e: &ExponentPair<f64>, opts: &LambdaOptions) -> Result<LambdaEstimate> {
    let dofs = DofMap::new(mesh)?;
    let k = stiffness(mesh, &dofs, None);
    let factor = EnvelopeCholesky::factor(&k)?;
    if e.p() == 2.0 && e.q() == 1.0 {
        let f = load(mesh, &dofs);
        let u = factor.solve(&f);
        let field = DiscreteField::new(mesh, dofs.expand(&u))?;
        let lambda_upper = rayleigh_values(mesh, field.values(), e)?;
        return Ok(LambdaEstimate { lambda_upper, field, method: LambdaMethod::LinearSolve, converged: true, iterations: 1, history: vec![] });
    }
    let m = mass(mesh, &dofs);
    let eig = smallest_eigenpairs(&k, &m, &factor, 1, None, &opts.eigen)?;
    let mut u0 = eig.vectors[0].clone();
    // fix the sign so the first eigenvector is non-negative on average
    if u0.iter().sum::<f64>() < 0.0 {
        u0.iter_mut().for_each(|v| *v = -*v);
    }
    if e.p() == 2.0 && e.q() == 2.0 {
        let field = DiscreteField::new(mesh, dofs.expand(&u0))?;
        let lambda_upper = rayleigh_values(mesh, field.values(), e)?;
        return Ok(LambdaEstimate {
            lambda_upper,
            field,
            method: LambdaMethod::InverseIteration,
            converged: eig.converged,
            iterations: eig.iterations,
            history: vec![],
        });
    }
    let obj = PqObjective::new(mesh, &dofs, e);
    let mut dopts = opts.descent.clone();
    dopts.record_history = true;
    let rep = descend(&obj, u0, &dopts)?;
    let field = DiscreteField::new(mesh, dofs.expand(&rep.u))?;
    let lambda_upper = rayleigh_values(mesh, field.values(), e)?;
    Ok(LambdaEstimate {
        lambda_upper,
        field,
        method: LambdaMethod::Descent,
        converged: rep.converged,
        iterations: rep.iterations,
        history: rep.history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn e(p: f64, q: f64) -> ExponentPair<f64> {
        ExponentPair::new(p, q).unwrap()
    }

    #[test]
    fn square_dirichlet_eigenvalue_from_above() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 24, 24).unwrap();
        let r = minimize_lambda(&m, &e(2.0, 2.0), &LambdaOptions::default()).unwrap();
        assert!(r.converged);
        assert!(r.lambda_upper > 2.0 * PI * PI && r.lambda_upper < 2.0 * PI * PI * 1.02, "{}", r.lambda_upper);
    }

    #[test]
    fn square_torsion_from_above() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 32, 32).unwrap();
        let r = minimize_lambda(&m, &e(2.0, 1.0), &LambdaOptions::default()).unwrap();
        assert_eq!(r.method, LambdaMethod::LinearSolve);
        assert!(r.lambda_upper > 28.45 && r.lambda_upper < 28.45 * 1.01, "{}", r.lambda_upper);
    }

    #[test]
    fn descent_is_monotone_and_beats_its_start() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 12, 12).unwrap();
        let r = minimize_lambda(&m, &e(3.0, 2.0), &LambdaOptions::default()).unwrap();
        assert_eq!(r.method, LambdaMethod::Descent);
        assert!(r.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.lambda_upper <= r.history[0]);
    }

    #[test]
    fn diagonal_p_reduces_to_eigenvalue_at_two() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 10, 10).unwrap();
        let a = minimize_lambda(&m, &e(2.0, 2.0), &LambdaOptions::default()).unwrap().lambda_upper;
        let b = minimize_lambda(&m, &e(2.0 + 1e-9, 2.0), &LambdaOptions::default()).unwrap().lambda_upper;
        assert!((a - b).abs() < 1e-6 * a);
    }
}
