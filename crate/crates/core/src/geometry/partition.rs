//! Nearest-facet partition: the cell of facet `i` is the part of the body
//! where facet `i` is (one of) the nearest facets.

use crate::error::{Error, Result};
use crate::geometry::polytope::{Halfspace, Polytope};
use crate::geometry::simplex::{triangulate, Simplex};
use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct FacetCell<T> {
    facet: usize,
    base: Halfspace<T>,
    parent_facets: Vec<Halfspace<T>>,
    cell: Polytope<T>,
}

impl<T: Real> FacetCell<T> {
    pub fn facet_index(&self) -> usize {
        self.facet
    }

    /// The base facet's halfspace `(a_i, b_i)`.
    pub fn base(&self) -> &Halfspace<T> {
        &self.base
    }

    pub fn cell(&self) -> &Polytope<T> {
        &self.cell
    }

    pub fn volume(&self) -> T {
        self.cell.volume()
    }

    /// Distance to the base hyperplane, which equals the distance to the
    /// parent's boundary everywhere on the cell.
    pub fn base_slack(&self, x: &[T]) -> T {
        self.base.slack(x)
    }

    /// Largest dominance violation `max_j ((b_i − a_i·x) − (b_j − a_j·x))`;
    /// non-positive on the cell.
    pub fn dominance_defect(&self, x: &[T]) -> T {
        let own = self.base.slack(x);
        self.parent_facets
            .iter()
            .fold(T::neg_infinity(), |m, h| m.max(own - h.slack(x)))
    }

    /// Orthogonal projection onto the base hyperplane.
    pub fn project(&self, x: &[T]) -> Vec<T> {
        let s = self.base.slack(x);
        x.iter().zip(&self.base.normal).map(|(&xi, &ai)| xi + s * ai).collect()
    }

    /// Whether `y` lies on the base facet and strictly inside it relative to
    /// every other parent facet, with margin `margin`.
    pub fn in_facet_relint(&self, y: &[T], margin: T) -> bool {
        self.base.slack(y).abs() <= margin
            && self
                .parent_facets
                .iter()
                .enumerate()
                .all(|(j, h)| j == self.facet || h.slack(y) > margin)
    }

    /// `max{t >= 0 : y − t a_i ∈ cell}` for `y` in the relative interior of the
    /// base facet.
    pub fn height(&self, y: &[T]) -> Result<T> {
        let margin = T::c(1e-9) * self.cell.scale().max(T::one());
        if !self.in_facet_relint(y, margin) {
            return Err(Error::Precondition(format!(
                "point {y:?} is not in the relative interior of facet {}",
                self.facet
            )));
        }
        let a = &self.base.normal;
        let mut t = T::infinity();
        for h in self.cell.facets() {
            let rate = -crate::scalar::dot(&h.normal, a);
            if rate > T::geom_eps() {
                t = t.min(h.slack(y) / rate);
            }
        }
        Ok(t.max(T::zero()))
    }
}

/// One cell per facet, built as parent constraints together with the
/// dominance constraints `(a_j − a_i)·x <= b_j − b_i`.
pub fn facet_partition<T: Real>(p: &Polytope<T>) -> Result<Vec<FacetCell<T>>> {
    let facets = p.facets();
    let mut cells = Vec::with_capacity(facets.len());
    for (i, fi) in facets.iter().enumerate() {
        let mut hs: Vec<Halfspace<T>> = facets.to_vec();
        for (j, fj) in facets.iter().enumerate() {
            if j == i {
                continue;
            }
            let normal: Vec<T> = fj.normal.iter().zip(&fi.normal).map(|(&aj, &ai)| aj - ai).collect();
            hs.push(Halfspace::new(normal, fj.offset - fi.offset));
        }
        let cell = Polytope::from_halfspaces(p.dim(), &hs).map_err(|e| {
            Error::Internal(format!("cell of facet {i} could not be built: {e}"))
        })?;
        cells.push(FacetCell { facet: i, base: fi.clone(), parent_facets: facets.to_vec(), cell });
    }
    Ok(cells)
}

/// Free-function form of [`FacetCell::height`].
pub fn cell_height<T: Real>(cell: &FacetCell<T>, y: &[T]) -> Result<T> {
    cell.height(y)
}

/// Triangulation of a cell.
pub fn triangulate_cell<T: Real>(cell: &FacetCell<T>) -> Vec<Simplex<T>> {
    triangulate(&cell.cell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Polytope<f64> {
        Polytope::from_vertices(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
    }

    fn bottom(cells: &[FacetCell<f64>]) -> &FacetCell<f64> {
        cells.iter().find(|c| c.base().normal[1] < -0.5).unwrap()
    }

    #[test]
    fn square_splits_into_four_triangles() {
        let cells = facet_partition(&unit_square()).unwrap();
        assert_eq!(cells.len(), 4);
        for c in &cells {
            assert_eq!(c.cell().vertices().len(), 3);
            assert!((c.volume() - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn cube_splits_into_six_pyramids() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        let cells = facet_partition(&Polytope::from_vertices(&pts).unwrap()).unwrap();
        assert_eq!(cells.len(), 6);
        for c in &cells {
            assert_eq!(c.cell().vertices().len(), 5);
            assert!((c.volume() - 1.0 / 6.0).abs() < 1e-13);
        }
    }

    #[test]
    fn equilateral_cells_meet_at_incenter() {
        let s3 = 3f64.sqrt();
        let p = Polytope::from_vertices(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, s3 / 2.0]]).unwrap();
        let (_, c) = p.inradius();
        let cells = facet_partition(&p).unwrap();
        assert_eq!(cells.len(), 3);
        for cell in &cells {
            assert!(cell.cell().vertices().iter().any(|v| (v[0] - c[0]).hypot(v[1] - c[1]) < 1e-9));
            assert!((cell.volume() - p.volume() / 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn heights_on_the_bottom_edge() {
        let cells = facet_partition(&unit_square()).unwrap();
        let b = bottom(&cells);
        assert!((cell_height(b, &[0.5, 0.0]).unwrap() - 0.5).abs() < 1e-12);
        assert!((cell_height(b, &[0.25, 0.0]).unwrap() - 0.25).abs() < 1e-12);
        assert!(matches!(cell_height(b, &[0.5, 0.3]), Err(Error::Precondition(_))));
        assert!(matches!(cell_height(b, &[0.0, 0.0]), Err(Error::Precondition(_))));
    }
}
