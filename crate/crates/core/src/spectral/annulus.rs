//! The slit annulus `A = {1 < |x| < 2} ∖ {(x₁, 0): x₁ > 0}` and its variant
//! with a small tooth glued across the slit's outer end.
//!
//! On `A` the function `u_A = r^{-1/2} sin(π(r−1)) sin(θ/2)` (θ ∈ (0, 2π))
//! is a Dirichlet eigenfunction with eigenvalue exactly `π²`, and
//! `∫|∇u_A|² = π³/2`, `∫u_A² = π/2`. Adding the tooth lowers the
//! eigenvalue by a tiny amount — far below plain P1 discretization error —
//! so the strict inequality is certified in a Ritz space spanned by `u_A`
//! and hat functions on a patch around the tooth. Every member of that space
//! vanishes on the tooth's boundary, so its quotient bounds `λ₂` of the
//! toothed domain from above.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::constants::ExponentPair;
use crate::error::{Error, Result};
use crate::report::{Direction, InequalityReport};
use crate::spectral::fem::{mass, stiffness, DofMap};
use crate::spectral::mesh::TriangleMesh;
use crate::spectral::mesher::{mesh_domain, MeshOptions, PlanarDomain};
use crate::spectral::solve::{minimize_lambda, LambdaOptions};

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Golub–Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn sides(outer_r: f64, h: f64) -> usize {
    ((2.0 * PI * outer_r / h).ceil() as usize).max(64)
}

/// Hole polygon circumscribing the unit circle, with an edge midpoint at
/// `(1, 0)` where the slit starts.
fn inner_ring(h: f64) -> Vec<[f64; 2]> {
    let n = sides(1.0, h);
    let r = 1.0 / (PI / n as f64).cos();
    let mut ring: Vec<[f64; 2]> = (0..n)
        .map(|k| {
            let a = (k as f64 + 0.5) * 2.0 * PI / n as f64;
            [r * a.cos(), r * a.sin()]
        })
        .collect();
    ring.push([1.0, 0.0]);
    ring
}

/// Polygonal slit annulus contained in `A`: the outer circle is inscribed,
/// the hole circumscribed, so its eigenvalue is at least `π²`.
pub fn slit_annulus_domain(h: f64) -> PlanarDomain {
    let n = sides(2.0, h);
    let outer = (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            [2.0 * a.cos(), 2.0 * a.sin()]
        })
        .collect();
    PlanarDomain { outer, holes: vec![inner_ring(h)], slits: vec![vec![[1.0, 0.0], [2.0, 0.0]]] }
}

/// Polygonal version of the toothed annulus
/// `A ∪ {√(4 − x₂²) ≤ x₁ < 2 + ε, |x₂| < ε}` minus the slit up to `2 + ε`;
/// contained in the true domain.
pub fn annulus_tooth_domain(eps: f64, h: f64) -> Result<PlanarDomain> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("tooth half-width must lie in (0, 1), got {eps}")));
    }
    let t0 = (0.5 * eps).asin();
    let n = sides(2.0, h);
    let mut outer = vec![[2.0 + eps, 0.0], [2.0 + eps, eps]];
    outer.extend((0..=n).map(|k| {
        let a = t0 + (2.0 * PI - 2.0 * t0) * k as f64 / n as f64;
        [2.0 * a.cos(), 2.0 * a.sin()]
    }));
    outer.push([2.0 + eps, -eps]);
    Ok(PlanarDomain { outer, holes: vec![inner_ring(h)], slits: vec![vec![[1.0, 0.0], [2.0 + eps, 0.0]]] })
}

/// `u_A` and its gradient; `lower` selects the branch θ ∈ (π, 2π].
fn annulus_mode(x: [f64; 2], lower: bool) -> (f64, [f64; 2]) {
    let r = x[0].hypot(x[1]);
    if r >= 2.0 || r <= 1.0 {
        return (0.0, [0.0, 0.0]);
    }
    let mut th = x[1].atan2(x[0]);
    if lower {
        th += 2.0 * PI;
    }
    let (st, ct) = (th.sin(), th.cos());
    let (sh, ch) = ((0.5 * th).sin(), (0.5 * th).cos());
    let (s, c) = ((PI * (r - 1.0)).sin(), (PI * (r - 1.0)).cos());
    let f = s / r.sqrt();
    let df = -0.5 * s / (r * r.sqrt()) + PI * c / r.sqrt();
    let (gr, gt) = (df * sh, 0.5 * f * ch / r);
    (f * sh, [gr * ct - gt * st, gr * st + gt * ct])
}

/// `∫ (∇u_A·∇φ_k, u_A φ_k)` over `T ∩ {|x| < 2}` for the three hats of `T`,
/// by Gauss rules on horizontal slices split wherever the integrand's
/// support changes shape.
fn cross_terms(v: [[f64; 2]; 3], grads: [[f64; 2]; 3], lower: bool, rule: &(Vec<f64>, Vec<f64>)) -> [[f64; 2]; 3] {
    let mut breaks: Vec<f64> = v.iter().map(|p| p[1]).collect();
    for i in 0..3 {
        let (a, b) = (v[i], v[(i + 1) % 3]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let (qa, qb, qc) = (d[0] * d[0] + d[1] * d[1], 2.0 * (a[0] * d[0] + a[1] * d[1]), a[0] * a[0] + a[1] * a[1] - 4.0);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            for t in [(-qb - disc.sqrt()) / (2.0 * qa), (-qb + disc.sqrt()) / (2.0 * qa)] {
                if t > 0.0 && t < 1.0 {
                    breaks.push(a[1] + t * d[1]);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let centroid = [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0];
    let slice = |y: f64| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..3 {
            let (a, b) = (v[i], v[(i + 1) % 3]);
            if (a[1] - y) * (b[1] - y) <= 0.0 && a[1] != b[1] {
                let x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo, hi.min((4.0 - y * y).max(0.0).sqrt()))
    };
    let (nodes, weights) = rule;
    let mut out = [[0.0; 2]; 3];
    for w in breaks.windows(2) {
        let (y0, y1) = (w[0], w[1]);
        if y1 - y0 <= 0.0 {
            continue;
        }
        for (&ty, &wy) in nodes.iter().zip(weights) {
            let y = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * ty;
            let (x0, x1) = slice(y);
            if !(x1 > x0) {
                continue;
            }
            let jac = 0.25 * (y1 - y0) * (x1 - x0) * wy;
            for (&tx, &wx) in nodes.iter().zip(weights) {
                let x = [0.5 * (x0 + x1) + 0.5 * (x1 - x0) * tx, y];
                let (u, g) = annulus_mode(x, lower);
                for k in 0..3 {
                    let phi = 1.0 / 3.0 + grads[k][0] * (x[0] - centroid[0]) + grads[k][1] * (x[1] - centroid[1]);
                    out[k][0] += jac * wx * (g[0] * grads[k][0] + g[1] * grads[k][1]);
                    out[k][1] += jac * wx * u * phi;
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct RitzOptions {
    /// How far the patch reaches into the annulus from `|x| = 2`.
    pub depth: f64,
    /// Patch cells across the tooth's half-width.
    pub cells_per_eps: usize,
    /// Gauss points per slice direction.
    pub gauss_points: usize,
}

impl Default for RitzOptions {
    fn default() -> Self {
        RitzOptions { depth: 0.3, cells_per_eps: 8, gauss_points: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RitzCertificate {
    pub eps: f64,
    /// Quotient of the best combination of `u_A` and the patch hats.
    pub lambda_upper: f64,
    /// `π² − lambda_upper`; positive certifies the strict drop.
    pub deficit: f64,
    /// Share of `u_A` in the minimizer, in the `L²` norm (close to 1).
    pub mode_weight: f64,
    pub patch_dofs: usize,
}

/// Rayleigh–Ritz on `span{u_A} ⊕ P1(patch)`, the patch being the box
/// `(2 − depth, 2 + ε) × (−ε, ε)` meshed with a seam on the slit line.
pub fn ritz_certificate(eps: f64, opts: &RitzOptions) -> Result<RitzCertificate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("tooth half-width must lie in (0, 1), got {eps}")));
    }
    if !(opts.depth > 0.0 && opts.depth < 1.0) || opts.cells_per_eps < 2 || opts.gauss_points < 2 {
        return Err(Error::Precondition("invalid Ritz patch options".into()));
    }
    let spacing = eps / opts.cells_per_eps as f64;
    let (x0, x1) = (2.0 - opts.depth, 2.0 + eps);
    let nx = ((x1 - x0) / spacing).ceil() as usize;
    let grid = TriangleMesh::rectangle(x0, x1, -eps, eps, nx, 2 * opts.cells_per_eps)?;
    // the slit line is a seam on which both sides vanish: fixing it suffices
    let fixed: Vec<bool> = grid.nodes().iter().zip(grid.fixed()).map(|(p, &f)| f || p[1].abs() < 0.25 * spacing).collect();
    let patch = TriangleMesh::new(grid.nodes().to_vec(), grid.triangles().to_vec(), fixed, vec![])?;
    let dofs = DofMap::new(&patch)?;
    let n = dofs.len();
    let dense = |a: &crate::spectral::sparse::CsrMatrix, m: &mut DMatrix<f64>| {
        for i in 0..n {
            for (j, v) in a.row(i) {
                m[(i + 1, j + 1)] = v;
            }
        }
    };
    let mut kb = DMatrix::<f64>::zeros(n + 1, n + 1);
    let mut mb = DMatrix::<f64>::zeros(n + 1, n + 1);
    dense(&stiffness(&patch, &dofs, None), &mut kb);
    dense(&mass(&patch, &dofs), &mut mb);
    kb[(0, 0)] = PI.powi(3) / 2.0;
    mb[(0, 0)] = PI / 2.0;
    let rule = gauss_legendre(opts.gauss_points);
    for (t, tri) in patch.triangles().iter().enumerate() {
        let v = tri.map(|i| patch.nodes()[i]);
        let lower = v.iter().map(|p| p[1]).sum::<f64>() < 0.0;
        let terms = cross_terms(v, patch.basis_gradients(t), lower, &rule);
        for (k, &node) in tri.iter().enumerate() {
            if let Some(d) = dofs.dof(node) {
                kb[(0, d + 1)] += terms[k][0];
                mb[(0, d + 1)] += terms[k][1];
            }
        }
    }
    for d in 1..=n {
        kb[(d, 0)] = kb[(0, d)];
        mb[(d, 0)] = mb[(0, d)];
    }
    let chol = mb
        .clone()
        .cholesky()
        .ok_or_else(|| Error::LinearAlgebra("Ritz mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::LinearAlgebra("singular Cholesky factor".into()))?;
    let reduced = &linv * &kb * linv.transpose();
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let eig = SymmetricEigen::new(reduced);
    let (imin, _) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let y: DVector<f64> = eig.eigenvectors.column(imin).into_owned();
    let c = linv.transpose() * y;
    // re-evaluate the quotient of the explicit combination
    let lambda_upper = c.dot(&(&kb * &c)) / c.dot(&(&mb * &c));
    let mode_weight = c[0] * mb[(0, 0)].sqrt() / c.dot(&(&mb * &c)).sqrt();
    Ok(RitzCertificate { eps, lambda_upper, deficit: PI * PI - lambda_upper, mode_weight: mode_weight.abs(), patch_dofs: n })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// `λ_upper · r² < π²/4` with `r = 1/2`.
    pub report: InequalityReport,
    pub ritz: RitzCertificate,
    /// Plain P1 bound on the polygonal toothed domain.
    pub fem_tooth: f64,
    pub fem_nodes: usize,
}

/// Certifies `λ₂(Ω̃) r² < π²/4` for the toothed annulus; the bound used is
/// the smaller of the enriched Ritz value and plain P1 on a mesh of size `h`.
pub fn counterexample_annulus_tooth(eps: f64, h: f64, ritz: &RitzOptions, opts: &LambdaOptions) -> Result<CounterexampleReport> {
    let domain = annulus_tooth_domain(eps, h)?;
    let mesh = mesh_domain(&domain, &MeshOptions::with_h(h))?;
    let two = ExponentPair::new(2.0, 2.0)?;
    let fem = minimize_lambda(&mesh, &two, opts)?;
    let cert = ritz_certificate(eps, ritz)?;
    let lambda = cert.lambda_upper.min(fem.lambda_upper);
    let source = if cert.lambda_upper <= fem.lambda_upper { "enriched Ritz (u_A + patch hats)" } else { "P1 FEM" };
    let report = InequalityReport::new(
        format!("annulus tooth ε={eps}"),
        lambda * 0.25,
        Direction::Less,
        PI * PI / 4.0,
        0.0,
        format!("λ₂ upper bound from {source}, times r² = 1/4"),
        "C_{2,2} = π²/4",
    )
    .with_detail("lambda_upper", lambda)
    .with_detail("ritz_lambda", cert.lambda_upper)
    .with_detail("ritz_deficit", cert.deficit)
    .with_detail("fem_lambda", fem.lambda_upper)
    .with_detail("h", h);
    Ok(CounterexampleReport { report, ritz: cert, fem_tooth: fem.lambda_upper, fem_nodes: mesh.n_nodes() })
}

/// P1 upper bound for the slit annulus without tooth (`→ π²` from above).
pub fn slit_annulus_control(h: f64, opts: &LambdaOptions) -> Result<InequalityReport> {
    let mesh = mesh_domain(&slit_annulus_domain(h), &MeshOptions::with_h(h))?;
    let est = minimize_lambda(&mesh, &ExponentPair::new(2.0, 2.0)?, opts)?;
    Ok(InequalityReport::new(
        "slit annulus control",
        est.lambda_upper,
        Direction::ApproxEq,
        PI * PI,
        0.05,
        format!("P1 quotient on {} nodes", mesh.n_nodes()),
        "λ₂(A) = π²",
    )
    .with_detail("h", h))
}
