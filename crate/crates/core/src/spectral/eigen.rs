//! Smallest eigenpairs of `K x = λ M x` by block inverse (subspace) iteration
//! with Rayleigh–Ritz projection.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::sparse::{CsrMatrix, EnvelopeCholesky};

#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// Relative change of the wanted Ritz values that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    /// Extra block vectors beyond the wanted count (speeds convergence).
    pub guard: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { tol: 1e-10, max_iter: 2000, guard: 4, seed: 11 }
    }
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Ascending Ritz values.
    pub values: Vec<f64>,
    /// `M`-orthonormal Ritz vectors.
    pub vectors: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
}

pub fn smallest_eigenpairs(
    k: &CsrMatrix,
    m: &CsrMatrix,
    factor: &EnvelopeCholesky,
    count: usize,
    start: Option<&[f64]>,
    opts: &EigenOptions,
) -> Result<EigenResult> {
    let n = k.n();
    if count == 0 || n == 0 {
        return Err(Error::Precondition("need at least one eigenpair and one unknown".into()));
    }
    let b = (count + opts.guard).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..b).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    if let Some(s) = start {
        if s.len() == n {
            x[0] = s.to_vec();
        }
    }
    let mut prev: Option<Vec<f64>> = None;
    let mut calm = 0;
    for it in 1..=opts.max_iter {
        let y: Vec<Vec<f64>> = x.iter().map(|xi| factor.solve(&m.mul_vec(xi))).collect();
        let (values, vectors) = rayleigh_ritz(k, m, &y)?;
        let wanted = &values[..count.min(values.len())];
        let done = prev.as_ref().is_some_and(|p: &Vec<f64>| {
            p.iter().zip(wanted).all(|(a, b)| (a - b).abs() <= opts.tol * b.abs())
        });
        calm = if done { calm + 1 } else { 0 };
        prev = Some(wanted.to_vec());
        x = vectors;
        if calm >= 2 {
            return Ok(EigenResult { values: values[..count].to_vec(), vectors: x[..count].to_vec(), iterations: it, converged: true });
        }
    }
    let (values, vectors) = rayleigh_ritz(k, m, &x)?;
    Ok(EigenResult { values: values[..count].to_vec(), vectors: vectors[..count].to_vec(), iterations: opts.max_iter, converged: false })
}

/// Ritz values and `M`-orthonormal Ritz vectors of the span of `y`.
fn rayleigh_ritz(k: &CsrMatrix, m: &CsrMatrix, y: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let b = y.len();
    let ky: Vec<Vec<f64>> = y.iter().map(|v| k.mul_vec(v)).collect();
    let my: Vec<Vec<f64>> = y.iter().map(|v| m.mul_vec(v)).collect();
    let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, z)| x * z).sum::<f64>();
    let a = DMatrix::from_fn(b, b, |i, j| 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i])));
    let bm = DMatrix::from_fn(b, b, |i, j| 0.5 * (dot(&y[i], &my[j]) + dot(&y[j], &my[i])));
    let chol = bm
        .cholesky()
        .ok_or_else(|| Error::LinearAlgebra("Ritz basis became linearly dependent".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::LinearAlgebra("singular Ritz Gram factor".into()))?;
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..b).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite"));
    let z = linv.transpose() * &eig.eigenvectors;
    let n = y[0].len();
    let mut values = Vec::with_capacity(b);
    let mut vectors = Vec::with_capacity(b);
    for &col in &order {
        values.push(eig.eigenvalues[col]);
        let mut v = vec![0.0; n];
        for (i, yi) in y.iter().enumerate() {
            let w = z[(i, col)];
            for (vk, yk) in v.iter_mut().zip(yi) {
                *vk += w * yk;
            }
        }
        vectors.push(v);
    }
    Ok((values, vectors))
}
