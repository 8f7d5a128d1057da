//! The discrete `(p, q)` Rayleigh quotient, evaluated exactly for piecewise
//! linear fields: gradients are constant per triangle and `∫|u|^q` is
//! integrated after cutting each triangle along `u = 0`.

use std::cell::RefCell;

use crate::constants::ExponentPair;
use crate::error::{Error, Result};
use crate::measure::kernel::{abs_power_triangle, abs_power_triangle_grad};
use crate::optim::Objective;
use crate::spectral::fem::{stiffness, DofMap};
use crate::spectral::mesh::{DiscreteField, TriangleMesh};
use crate::spectral::sparse::EnvelopeCholesky;

/// `∫ |∇u|^p`.
pub fn gradient_energy(mesh: &TriangleMesh, u: &[f64], p: f64) -> f64 {
    (0..mesh.triangles().len())
        .map(|t| {
            let g = mesh.field_gradient(t, u);
            mesh.signed_area(t) * g[0].hypot(g[1]).powf(p)
        })
        .sum()
}

/// `∫ |u|^q`.
pub fn abs_power_integral(mesh: &TriangleMesh, u: &[f64], q: f64) -> Result<f64> {
    let mut s = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        s += abs_power_triangle(mesh.signed_area(t), tri.map(|v| u[v]), q)?;
    }
    Ok(s)
}

/// `∫|∇u|^p / (∫|u|^q)^{p/q}` — an upper bound for `λ_{p,q}` of any domain
/// containing the mesh, since the field extended by zero is admissible.
pub fn rayleigh_pq(mesh: &TriangleMesh, u: &DiscreteField, e: &ExponentPair<f64>) -> Result<f64> {
    rayleigh_values(mesh, u.values(), e)
}

pub(crate) fn rayleigh_values(mesh: &TriangleMesh, u: &[f64], e: &ExponentPair<f64>) -> Result<f64> {
    if u.len() != mesh.n_nodes() {
        return Err(Error::Precondition("field length differs from node count".into()));
    }
    let den = abs_power_integral(mesh, u, e.q())?;
    if !(den > 0.0) {
        return Err(Error::Domain("field is identically zero".into()));
    }
    Ok(gradient_energy(mesh, u, e.p()) / den.powf(e.p() / e.q()))
}

/// Quotient over the free nodes, with a weighted-Laplacian preconditioner
/// `Σ_T (|∇u|² + δ²)^{(p−2)/2} ∇φ_i·∇φ_j` refreshed every few iterations.
pub(crate) struct PqObjective<'a> {
    mesh: &'a TriangleMesh,
    dofs: &'a DofMap,
    p: f64,
    q: f64,
    refresh: usize,
    cache: RefCell<(usize, Option<EnvelopeCholesky>)>,
}

impl<'a> PqObjective<'a> {
    pub(crate) fn new(mesh: &'a TriangleMesh, dofs: &'a DofMap, e: &ExponentPair<f64>) -> Self {
        let refresh = if dofs.len() < 20_000 { 1 } else { 10 };
        PqObjective { mesh, dofs, p: e.p(), q: e.q(), refresh, cache: RefCell::new((0, None)) }
    }
}

impl Objective for PqObjective<'_> {
    fn dim(&self) -> usize {
        self.dofs.len()
    }

    fn value(&self, u: &[f64]) -> Result<f64> {
        let nodal = self.dofs.expand(u);
        let den = abs_power_integral(self.mesh, &nodal, self.q)?;
        if !(den > 0.0) {
            return Err(Error::Domain("field is identically zero".into()));
        }
        Ok(gradient_energy(self.mesh, &nodal, self.p) / den.powf(self.p / self.q))
    }

    fn value_grad(&self, u: &[f64], grad: &mut [f64]) -> Result<f64> {
        let nodal = self.dofs.expand(u);
        let (p, q) = (self.p, self.q);
        let mut g_num = vec![0.0; nodal.len()];
        let mut g_den = vec![0.0; nodal.len()];
        let mut num = 0.0;
        let mut den = 0.0;
        for (t, tri) in self.mesh.triangles().iter().enumerate() {
            let area = self.mesh.signed_area(t);
            let basis = self.mesh.basis_gradients(t);
            let g = self.mesh.field_gradient(t, &nodal);
            let s = g[0].hypot(g[1]);
            num += area * s.powf(p);
            if s > 0.0 {
                let c = area * p * s.powf(p - 2.0);
                for k in 0..3 {
                    g_num[tri[k]] += c * (g[0] * basis[k][0] + g[1] * basis[k][1]);
                }
            }
            let vals = tri.map(|v| nodal[v]);
            den += abs_power_triangle(area, vals, q)?;
            let dg = abs_power_triangle_grad(area, vals, q)?;
            for k in 0..3 {
                g_den[tri[k]] += dg[k];
            }
        }
        if !(den > 0.0) {
            return Err(Error::Domain("field is identically zero".into()));
        }
        let scale = den.powf(p / q);
        let r = num / scale;
        let g_num = self.dofs.restrict(&g_num);
        let g_den = self.dofs.restrict(&g_den);
        for ((gi, a), b) in grad.iter_mut().zip(&g_num).zip(&g_den) {
            *gi = (a - p / q * num / den * b) / scale;
        }
        Ok(r)
    }

    fn precondition(&self, u: &[f64], grad: &[f64]) -> Result<Vec<f64>> {
        let mut cache = self.cache.borrow_mut();
        if cache.1.is_none() || cache.0 % self.refresh == 0 {
            let nodal = self.dofs.expand(u);
            let n_t = self.mesh.triangles().len();
            let sq: Vec<f64> = (0..n_t)
                .map(|t| {
                    let g = self.mesh.field_gradient(t, &nodal);
                    g[0] * g[0] + g[1] * g[1]
                })
                .collect();
            let mean = sq.iter().sum::<f64>() / n_t as f64;
            let delta2 = 1e-4 * mean.max(f64::MIN_POSITIVE);
            let w: Vec<f64> = sq.iter().map(|s| (s + delta2).powf((self.p - 2.0) / 2.0)).collect();
            let k = stiffness(self.mesh, self.dofs, Some(&w));
            cache.1 = Some(EnvelopeCholesky::factor(&k)?);
        }
        cache.0 += 1;
        Ok(cache.1.as_ref().expect("factor present").solve(grad))
    }

    fn normalize(&self, u: &mut [f64]) {
        let nodal = self.dofs.expand(u);
        if let Ok(den) = abs_power_integral(self.mesh, &nodal, self.q) {
            if den > 0.0 {
                let c = den.powf(-1.0 / self.q);
                u.iter_mut().for_each(|v| *v *= c);
            }
        }
    }

    fn initial_step(&self) -> f64 {
        1.0 / self.p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: f64, q: f64) -> ExponentPair<f64> {
        ExponentPair::new(p, q).unwrap()
    }

    #[test]
    fn homogeneity_and_sign_invariance() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 6, 6).unwrap();
        let u = m.interpolate(|p| (p[0] - 0.4) * p[1] * (1.0 - p[0]) * (1.0 - p[1]));
        for pair in [e(2.0, 2.0), e(3.0, 2.0), e(2.0, 1.0), e(1.5, 1.5)] {
            let r = rayleigh_pq(&m, &u, &pair).unwrap();
            for c in [-1.0, 3.0] {
                let rc = rayleigh_pq(&m, &u.scaled(c), &pair).unwrap();
                assert!((rc - r).abs() <= 1e-12 * r, "{pair:?}");
            }
        }
    }

    #[test]
    fn sine_product_is_above_two_pi_squared() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 16, 16).unwrap();
        let pi = std::f64::consts::PI;
        let u = m.interpolate(|p| (pi * p[0]).sin() * (pi * p[1]).sin());
        let r = rayleigh_pq(&m, &u, &e(2.0, 2.0)).unwrap();
        assert!(r >= 2.0 * pi * pi && r < 2.0 * pi * pi * 1.05, "{r}");
    }

    #[test]
    fn zero_field_is_rejected() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        assert!(matches!(rayleigh_pq(&m, &m.zero_field(), &e(2.0, 2.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 4, 4).unwrap();
        let dofs = DofMap::new(&m).unwrap();
        let u = dofs.restrict(m.interpolate(|p| (p[0] - 0.3) * (p[1] + 0.2)).values());
        for pair in [e(3.0, 2.0), e(2.0, 1.0), e(1.5, 1.5)] {
            let obj = PqObjective::new(&m, &dofs, &pair);
            let mut g = vec![0.0; u.len()];
            obj.value_grad(&u, &mut g).unwrap();
            for i in 0..u.len() {
                let h = 1e-6;
                let mut up = u.clone();
                up[i] += h;
                let mut dn = u.clone();
                dn[i] -= h;
                let fd = (obj.value(&up).unwrap() - obj.value(&dn).unwrap()) / (2.0 * h);
                assert!((fd - g[i]).abs() < 1e-5 * (1.0 + g[i].abs()), "{pair:?} i={i}: {fd} vs {}", g[i]);
            }
        }
    }
}
