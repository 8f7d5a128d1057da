use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Planar triangle mesh with Dirichlet (fixed) nodes.
///
/// Triangles are counter-clockwise. Nodes along an internal slit are
/// duplicated, one copy per side, and both copies are fixed; `seams` records
/// the `(original, copy)` pairs.
#[derive(Clone, Debug)]
pub struct TriangleMesh {
    nodes: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    fixed: Vec<bool>,
    seams: Vec<(usize, usize)>,
}

/// Summary statistics used to check mesh invariants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshQuality {
    pub min_angle_deg: f64,
    pub max_edge: f64,
    pub min_area: f64,
    /// Every edge is shared by at most two triangles.
    pub conforming: bool,
    /// Every edge used by a single triangle joins two fixed nodes.
    pub boundary_fixed: bool,
}

impl TriangleMesh {
    pub fn new(nodes: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>, fixed: Vec<bool>, seams: Vec<(usize, usize)>) -> Result<Self> {
        if fixed.len() != nodes.len() {
            return Err(Error::Geometry("fixed mask length differs from node count".into()));
        }
        for t in &triangles {
            if t.iter().any(|&v| v >= nodes.len()) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::Geometry(format!("invalid triangle {t:?}")));
            }
        }
        let mesh = TriangleMesh { nodes, triangles, fixed, seams };
        if let Some(i) = (0..mesh.triangles.len()).find(|&i| !(mesh.signed_area(i) > 0.0)) {
            return Err(Error::Geometry(format!("triangle {i} is not positively oriented")));
        }
        Ok(mesh)
    }

    /// Structured mesh of `[x0,x1] × [y0,y1]` with `nx × ny` cells, each cut
    /// along alternating diagonals; the whole boundary is fixed.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 || !(x1 > x0) || !(y1 > y0) {
            return Err(Error::Geometry("empty rectangle".into()));
        }
        let idx = |i: usize, j: usize| j * (nx + 1) + i;
        let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
        let mut fixed = Vec::with_capacity(nodes.capacity());
        for j in 0..=ny {
            for i in 0..=nx {
                nodes.push([x0 + (x1 - x0) * i as f64 / nx as f64, y0 + (y1 - y0) * j as f64 / ny as f64]);
                fixed.push(i == 0 || j == 0 || i == nx || j == ny);
            }
        }
        let mut triangles = Vec::with_capacity(2 * nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
                if (i + j) % 2 == 0 {
                    triangles.push([a, b, c]);
                    triangles.push([a, c, d]);
                } else {
                    triangles.push([a, b, d]);
                    triangles.push([b, c, d]);
                }
            }
        }
        TriangleMesh::new(nodes, triangles, fixed, Vec::new())
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn fixed(&self) -> &[bool] {
        &self.fixed
    }

    pub fn seams(&self) -> &[(usize, usize)] {
        &self.seams
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_free(&self) -> usize {
        self.fixed.iter().filter(|f| !**f).count()
    }

    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|v| self.nodes[v]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.signed_area(t)).sum()
    }

    /// Gradients of the three barycentric coordinates of triangle `t`.
    pub fn basis_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t].map(|v| self.nodes[v]);
        let two_area = 2.0 * self.signed_area(t);
        [
            [(b[1] - c[1]) / two_area, (c[0] - b[0]) / two_area],
            [(c[1] - a[1]) / two_area, (a[0] - c[0]) / two_area],
            [(a[1] - b[1]) / two_area, (b[0] - a[0]) / two_area],
        ]
    }

    /// Constant gradient of the piecewise linear interpolant on triangle `t`.
    pub fn field_gradient(&self, t: usize, u: &[f64]) -> [f64; 2] {
        let g = self.basis_gradients(t);
        let tri = self.triangles[t];
        let mut out = [0.0; 2];
        for k in 0..3 {
            out[0] += u[tri[k]] * g[k][0];
            out[1] += u[tri[k]] * g[k][1];
        }
        out
    }

    fn edge_counts(&self) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::with_capacity(self.triangles.len() * 2);
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn quality(&self) -> MeshQuality {
        let mut min_angle = f64::INFINITY;
        let mut max_edge: f64 = 0.0;
        let mut min_area = f64::INFINITY;
        for (ti, t) in self.triangles.iter().enumerate() {
            let p = t.map(|v| self.nodes[v]);
            for k in 0..3 {
                let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
                let u = [b[0] - a[0], b[1] - a[1]];
                let v = [c[0] - a[0], c[1] - a[1]];
                let cross = u[0] * v[1] - u[1] * v[0];
                let dot = u[0] * v[0] + u[1] * v[1];
                min_angle = min_angle.min(cross.atan2(dot).to_degrees());
                max_edge = max_edge.max(u[0].hypot(u[1]));
            }
            min_area = min_area.min(self.signed_area(ti));
        }
        let counts = self.edge_counts();
        MeshQuality {
            min_angle_deg: min_angle,
            max_edge,
            min_area,
            conforming: counts.values().all(|&c| c <= 2),
            boundary_fixed: counts
                .iter()
                .all(|(&(a, b), &c)| c == 2 || (self.fixed[a] && self.fixed[b])),
        }
    }

    /// Red refinement: every triangle splits into four. Midpoints of edges
    /// used by one triangle are fixed, so the finite element spaces are nested.
    pub fn refine_uniform(&self) -> TriangleMesh {
        let counts = self.edge_counts();
        let mut nodes = self.nodes.clone();
        let mut fixed = self.fixed.clone();
        let mut mid: HashMap<(usize, usize), usize> = HashMap::with_capacity(counts.len());
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>, fixed: &mut Vec<bool>| {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                nodes.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                fixed.push(counts[&key] == 1);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(self.triangles.len() * 4);
        for &[a, b, c] in &self.triangles {
            let ab = midpoint(a, b, &mut nodes, &mut fixed);
            let bc = midpoint(b, c, &mut nodes, &mut fixed);
            let ca = midpoint(c, a, &mut nodes, &mut fixed);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        TriangleMesh { nodes, triangles, fixed, seams: self.seams.clone() }
    }

    /// Node/element text format: a `nodes N` header and one `x y fixed` line per
    /// node, then a `triangles M` header and one `i j k` line per element.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "nodes {}", self.nodes.len());
        for (p, f) in self.nodes.iter().zip(&self.fixed) {
            let _ = writeln!(s, "{:.17e} {:.17e} {}", p[0], p[1], u8::from(*f));
        }
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("mesh text: {what}"));
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = |line: Option<&str>, key: &str| -> Result<usize> {
            let line = line.ok_or_else(|| bad("missing header"))?;
            let rest = line.strip_prefix(key).ok_or_else(|| bad(&format!("expected '{key}'")))?;
            rest.trim().parse().map_err(|_| bad("bad count"))
        };
        let n = header(lines.next(), "nodes")?;
        let mut nodes = Vec::with_capacity(n);
        let mut fixed = Vec::with_capacity(n);
        for _ in 0..n {
            let f: Vec<&str> = lines.next().ok_or_else(|| bad("truncated nodes"))?.split_whitespace().collect();
            if f.len() != 3 {
                return Err(bad("node line needs 3 fields"));
            }
            let x: f64 = f[0].parse().map_err(|_| bad("bad x"))?;
            let y: f64 = f[1].parse().map_err(|_| bad("bad y"))?;
            nodes.push([x, y]);
            fixed.push(f[2] == "1");
        }
        let m = header(lines.next(), "triangles")?;
        let mut triangles = Vec::with_capacity(m);
        for _ in 0..m {
            let f: Vec<usize> = lines
                .next()
                .ok_or_else(|| bad("truncated triangles"))?
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| bad("bad index")))
                .collect::<Result<_>>()?;
            if f.len() != 3 {
                return Err(bad("triangle line needs 3 indices"));
            }
            triangles.push([f[0], f[1], f[2]]);
        }
        TriangleMesh::new(nodes, triangles, fixed, Vec::new())
    }

    /// Zero field with the mesh's node count.
    pub fn zero_field(&self) -> DiscreteField {
        DiscreteField { values: vec![0.0; self.nodes.len()] }
    }

    /// Interpolates `f` at the free nodes (fixed nodes get 0).
    pub fn interpolate(&self, f: impl Fn([f64; 2]) -> f64) -> DiscreteField {
        DiscreteField {
            values: self.nodes.iter().zip(&self.fixed).map(|(&p, &fx)| if fx { 0.0 } else { f(p) }).collect(),
        }
    }
}

/// Nodal values of a piecewise linear function, zero on fixed nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteField {
    values: Vec<f64>,
}

impl DiscreteField {
    pub fn new(mesh: &TriangleMesh, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.n_nodes() {
            return Err(Error::Precondition(format!(
                "field has {} values for {} nodes",
                values.len(),
                mesh.n_nodes()
            )));
        }
        if let Some(i) = (0..values.len()).find(|&i| mesh.fixed()[i] && values[i] != 0.0) {
            return Err(Error::Precondition(format!("fixed node {i} carries a nonzero value")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite nodal value".into()));
        }
        Ok(DiscreteField { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> DiscreteField {
        DiscreteField { values: self.values.iter().map(|v| v * c).collect() }
    }

    /// Prolongation to a mesh obtained by [`TriangleMesh::refine_uniform`].
    pub fn prolong(&self, coarse: &TriangleMesh, fine: &TriangleMesh) -> Result<DiscreteField> {
        if fine.n_nodes() < coarse.n_nodes() || self.values.len() != coarse.n_nodes() {
            return Err(Error::Precondition("meshes are not a refinement pair".into()));
        }
        let mut values = self.values.clone();
        values.resize(fine.n_nodes(), 0.0);
        // refined triangles come in groups of four: [a, ab, ca], [ab, b, bc], [ca, bc, c], ...
        for (t, &[a, b, c]) in coarse.triangles().iter().enumerate() {
            let [_, ab, ca] = fine.triangles()[4 * t];
            let [_, _, bc] = fine.triangles()[4 * t + 1];
            values[ab] = 0.5 * (self.values[a] + self.values[b]);
            values[bc] = 0.5 * (self.values[b] + self.values[c]);
            values[ca] = 0.5 * (self.values[c] + self.values[a]);
        }
        DiscreteField::new(fine, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_mesh_properties() {
        let m = TriangleMesh::rectangle(0.0, 2.0, 0.0, 1.0, 8, 4).unwrap();
        assert_eq!(m.triangles().len(), 64);
        assert!((m.area() - 2.0).abs() < 1e-14);
        let q = m.quality();
        assert!(q.conforming && q.boundary_fixed);
        assert!((q.min_angle_deg - 45.0).abs() < 1e-9);
        assert_eq!(m.n_free(), 7 * 3);
    }

    #[test]
    fn gradients_reproduce_linear_functions() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 3, 3).unwrap();
        let u: Vec<f64> = m.nodes().iter().map(|p| 2.0 * p[0] - 3.0 * p[1]).collect();
        for t in 0..m.triangles().len() {
            let g = m.field_gradient(t, &u);
            assert!((g[0] - 2.0).abs() < 1e-12 && (g[1] + 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_and_prolongation() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        let f = m.refine_uniform();
        assert_eq!(f.triangles().len(), 32);
        assert!((f.area() - 1.0).abs() < 1e-14);
        assert_eq!(f.n_free(), 9);
        assert!(f.quality().boundary_fixed);
        let u = m.interpolate(|p| p[0] * (1.0 - p[0]));
        let v = u.prolong(&m, &f).unwrap();
        assert_eq!(v.values().len(), f.n_nodes());
    }

    #[test]
    fn text_round_trip() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 2, 3).unwrap();
        let back = TriangleMesh::from_text(&m.to_text()).unwrap();
        assert_eq!(back.nodes(), m.nodes());
        assert_eq!(back.triangles(), m.triangles());
        assert_eq!(back.fixed(), m.fixed());
        assert!(matches!(TriangleMesh::from_text("nodes 2\n0 0 1\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn fields_must_vanish_on_fixed_nodes() {
        let m = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 2, 2).unwrap();
        let mut v = vec![0.0; m.n_nodes()];
        v[0] = 1.0;
        assert!(matches!(DiscreteField::new(&m, v), Err(Error::Precondition(_))));
    }
}
