//! Piecewise linear finite element matrices on the free nodes.

use crate::error::{Error, Result};
use crate::spectral::mesh::TriangleMesh;
use crate::spectral::sparse::CsrMatrix;

const FIXED: usize = usize::MAX;

/// Numbering of the free nodes.
#[derive(Clone, Debug)]
pub struct DofMap {
    node_to_dof: Vec<usize>,
    dof_to_node: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &TriangleMesh) -> Result<Self> {
        let mut node_to_dof = vec![FIXED; mesh.n_nodes()];
        let mut dof_to_node = Vec::new();
        for (i, &f) in mesh.fixed().iter().enumerate() {
            if !f {
                node_to_dof[i] = dof_to_node.len();
                dof_to_node.push(i);
            }
        }
        if dof_to_node.is_empty() {
            return Err(Error::Precondition("mesh has no free nodes".into()));
        }
        Ok(DofMap { node_to_dof, dof_to_node })
    }

    pub fn len(&self) -> usize {
        self.dof_to_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dof_to_node.is_empty()
    }

    pub fn dof(&self, node: usize) -> Option<usize> {
        let d = self.node_to_dof[node];
        (d != FIXED).then_some(d)
    }

    /// Free values → nodal vector (zeros on fixed nodes).
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        let mut u = vec![0.0; self.node_to_dof.len()];
        for (d, &n) in self.dof_to_node.iter().enumerate() {
            u[n] = free[d];
        }
        u
    }

    pub fn restrict(&self, nodal: &[f64]) -> Vec<f64> {
        self.dof_to_node.iter().map(|&n| nodal[n]).collect()
    }
}

/// Stiffness `∫ w ∇φ_i·∇φ_j` with a per-triangle weight (1 if `None`).
pub fn stiffness(mesh: &TriangleMesh, dofs: &DofMap, weights: Option<&[f64]>) -> CsrMatrix {
    let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let g = mesh.basis_gradients(t);
        let w = weights.map_or(1.0, |w| w[t]) * mesh.signed_area(t);
        for a in 0..3 {
            let Some(da) = dofs.dof(tri[a]) else { continue };
            for b in 0..3 {
                let Some(db) = dofs.dof(tri[b]) else { continue };
                trip.push((da, db, w * (g[a][0] * g[b][0] + g[a][1] * g[b][1])));
            }
        }
    }
    CsrMatrix::from_triplets(dofs.len(), trip)
}

/// Consistent mass matrix `∫ φ_i φ_j`.
pub fn mass(mesh: &TriangleMesh, dofs: &DofMap) -> CsrMatrix {
    let mut trip = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.signed_area(t);
        for a in 0..3 {
            let Some(da) = dofs.dof(tri[a]) else { continue };
            for b in 0..3 {
                let Some(db) = dofs.dof(tri[b]) else { continue };
                trip.push((da, db, if a == b { area / 6.0 } else { area / 12.0 }));
            }
        }
    }
    CsrMatrix::from_triplets(dofs.len(), trip)
}

/// Load vector `∫ φ_i`.
pub fn load(mesh: &TriangleMesh, dofs: &DofMap) -> Vec<f64> {
    let mut f = vec![0.0; dofs.len()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let third = mesh.signed_area(t) / 3.0;
        for &v in tri {
            if let Some(d) = dofs.dof(v) {
                f[d] += third;
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_and_load_integrate_constants() {
        // with no fixed nodes the mass matrix sums to the area
        let m = TriangleMesh::rectangle(0.0, 2.0, 0.0, 1.0, 4, 3).unwrap();
        let free = TriangleMesh::new(m.nodes().to_vec(), m.triangles().to_vec(), vec![false; m.n_nodes()], vec![]).unwrap();
        let dofs = DofMap::new(&free).unwrap();
        let ones = vec![1.0; dofs.len()];
        assert!((mass(&free, &dofs).bilinear(&ones, &ones) - 2.0).abs() < 1e-13);
        assert!((load(&free, &dofs).iter().sum::<f64>() - 2.0).abs() < 1e-13);
        // constants are in the kernel of the stiffness matrix
        let k = stiffness(&free, &dofs, None);
        assert!(k.mul_vec(&ones).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn stiffness_energy_of_linear_function() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 3, 3).unwrap();
        let free = TriangleMesh::new(m.nodes().to_vec(), m.triangles().to_vec(), vec![false; m.n_nodes()], vec![]).unwrap();
        let dofs = DofMap::new(&free).unwrap();
        let u: Vec<f64> = free.nodes().iter().map(|p| 3.0 * p[0] + p[1]).collect();
        assert!((stiffness(&free, &dofs, None).bilinear(&u, &u) - 10.0).abs() < 1e-12);
    }
}
