use crate::error::{Error, Result};
use crate::geometry::linalg::det;
use crate::geometry::polytope::{dist, Polytope};
use crate::scalar::Real;

/// `N + 1` points spanning a non-degenerate simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplex<T> {
    vertices: Vec<Vec<T>>,
    volume: T,
}

impl<T: Real> Simplex<T> {
    pub fn new(vertices: Vec<Vec<T>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, |v| v.len());
        if dim == 0 || vertices.len() != dim + 1 || vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::Geometry(format!(
                "a simplex in dimension {dim} needs {} points of equal length",
                dim + 1
            )));
        }
        let volume = signed_volume(&vertices).abs();
        let scale = vertices.iter().fold(T::zero(), |m, v| m.max(dist(v, &vertices[0])));
        if !(volume > T::c(1e-14) * scale.powi(dim as i32)) || !volume.is_finite() {
            return Err(Error::DimensionDeficiency(format!("degenerate simplex (volume {volume})")));
        }
        Ok(Simplex { vertices, volume })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn volume(&self) -> T {
        self.volume
    }

    /// Barycentric centroid.
    pub fn centroid(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.vertices.len());
        (0..self.dim())
            .map(|k| self.vertices.iter().map(|v| v[k]).sum::<T>() / n)
            .collect()
    }
}

fn signed_volume<T: Real>(vertices: &[Vec<T>]) -> T {
    let dim = vertices.len() - 1;
    let rows: Vec<Vec<T>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(&vertices[0]).map(|(&a, &b)| a - b).collect())
        .collect();
    let mut fact = T::one();
    for k in 2..=dim {
        fact = fact * T::from_usize_lossy(k);
    }
    det(rows) / fact
}

/// Fan triangulation from the Chebyshev center over a triangulation of the
/// boundary (facet polygons are fanned from their first vertex).
///
/// A simplex is returned as itself. An empty list means the body was too thin
/// to produce any non-degenerate simplex.
pub fn triangulate<T: Real>(p: &Polytope<T>) -> Vec<Simplex<T>> {
    let dim = p.dim();
    if p.vertices().len() == dim + 1 {
        return Simplex::new(p.vertices().to_vec()).into_iter().collect();
    }
    let apex = p.inradius().1.to_vec();
    let mut out = Vec::new();
    for i in 0..p.facets().len() {
        let fv: Vec<&[T]> = p.facet_vertices(i).collect();
        let mut push = |pts: Vec<Vec<T>>| {
            if let Ok(s) = Simplex::new(pts) {
                out.push(s);
            }
        };
        if dim == 2 {
            push(vec![apex.clone(), fv[0].to_vec(), fv[1].to_vec()]);
        } else {
            for k in 1..fv.len() - 1 {
                push(vec![apex.clone(), fv[0].to_vec(), fv[k].to_vec(), fv[k + 1].to_vec()]);
            }
        }
    }
    out
}
