use crate::error::{Error, Result};
use crate::geometry::linalg::{affine_rank, cross3, solve};
use crate::geometry::lp::{maximize, LpOutcome};
use crate::scalar::{dot, norm, sub, Real};

/// `{x : normal · x <= offset}` with a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace<T> {
    pub normal: Vec<T>,
    pub offset: T,
}

impl<T: Real> Halfspace<T> {
    pub fn new(normal: Vec<T>, offset: T) -> Self {
        Halfspace { normal, offset }
    }

    /// `offset - normal · x`; the distance to the hyperplane for unit normals.
    #[inline]
    pub fn slack(&self, x: &[T]) -> T {
        self.offset - dot(&self.normal, x)
    }

    fn normalized(&self) -> Option<Self> {
        let n = norm(&self.normal);
        if !(n > T::zero()) {
            return None;
        }
        Some(Halfspace {
            normal: self.normal.iter().map(|&v| v / n).collect(),
            offset: self.offset / n,
        })
    }
}

/// Result of a distance query; `outside` is set when some constraint is violated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceQuery<T> {
    pub value: T,
    pub outside: bool,
}

/// Bounded, full-dimensional convex polytope in dimension 2 or 3, held in
/// both representations with facet–vertex incidence.
///
/// Facet vertex lists are ordered: counter-clockwise along the boundary in
/// 2D, counter-clockwise seen from outside in 3D. Polygon vertices are in
/// counter-clockwise order.
#[derive(Clone, Debug)]
pub struct Polytope<T> {
    dim: usize,
    facets: Vec<Halfspace<T>>,
    vertices: Vec<Vec<T>>,
    incidence: Vec<Vec<usize>>,
    center: Vec<T>,
    inradius: T,
    scale: T,
}

impl<T: Real> Polytope<T> {
    /// Convex hull of a point cloud.
    pub fn from_vertices(points: &[Vec<T>]) -> Result<Self> {
        let dim = check_points(points)?;
        let refs: Vec<&[T]> = points.iter().map(|p| p.as_slice()).collect();
        let scale = cloud_scale(points);
        let tol = T::geom_eps() * scale;
        if affine_rank(&refs, tol) < dim {
            return Err(Error::DimensionDeficiency(format!(
                "{} points span fewer than {dim} dimensions",
                points.len()
            )));
        }
        let (facets, vertices) = match dim {
            2 => hull2(points, tol),
            _ => hull3(points, tol),
        };
        Self::assemble(dim, facets, vertices)
    }

    /// Intersection of halfspaces `normal · x <= offset`; normals need not be unit.
    pub fn from_halfspaces(dim: usize, constraints: &[Halfspace<T>]) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut hs = Vec::with_capacity(constraints.len());
        for c in constraints {
            if c.normal.len() != dim {
                return Err(Error::Geometry(format!(
                    "constraint normal has length {}, expected {dim}",
                    c.normal.len()
                )));
            }
            if c.normal.iter().any(|v| !v.is_finite()) || !c.offset.is_finite() {
                return Err(Error::Geometry("non-finite constraint".into()));
            }
            match c.normalized() {
                Some(h) => hs.push(h),
                None if c.offset >= T::zero() => {}
                None => return Err(Error::Infeasible),
            }
        }
        if hs.len() <= dim {
            return Err(Error::Unbounded);
        }
        let (center, r) = chebyshev(&hs, dim)?;
        let cscale = center.iter().fold(r, |m, v| m.max(v.abs()));
        let tol = T::geom_eps() * cscale;
        if r <= tol {
            return Err(Error::DimensionDeficiency(format!("Chebyshev radius {r} is not positive")));
        }

        // Enumerate vertices inside a large box; touching the box means unbounded.
        let reach = hs.iter().fold(r, |m, h| m.max(h.slack(&center)));
        let big = T::c(1e6) * reach;
        let mut all = hs.clone();
        for k in 0..dim {
            let mut e = vec![T::zero(); dim];
            e[k] = T::one();
            all.push(Halfspace { normal: e.clone(), offset: center[k] + big });
            e[k] = -T::one();
            all.push(Halfspace { normal: e, offset: -center[k] + big });
        }
        let mut vertices: Vec<Vec<T>> = Vec::new();
        let mut touches_box = false;
        for_each_subset(all.len(), dim, |idx| {
            let a: Vec<Vec<T>> = idx.iter().map(|&i| all[i].normal.clone()).collect();
            let b: Vec<T> = idx.iter().map(|&i| all[i].offset).collect();
            let Some(x) = solve(a, b) else { return };
            let xs = x.iter().fold(T::one(), |m, v| m.max(v.abs()));
            let ftol = T::geom_eps() * (cscale + xs);
            if all.iter().any(|h| h.slack(&x) < -ftol) {
                return;
            }
            if hs.iter().all(|h| h.slack(&x) >= -ftol) && idx.iter().any(|&i| i >= hs.len()) {
                touches_box = true;
            }
            if !vertices.iter().any(|v| dist(v, &x) <= ftol) {
                vertices.push(x);
            }
        });
        if touches_box {
            return Err(Error::Unbounded);
        }
        let _ = all.split_off(hs.len());
        Self::assemble(dim, hs, vertices)
    }

    /// Keeps genuine facets (at least `dim` affinely independent incident
    /// vertices), deduplicates them and orders the incidence lists.
    fn assemble(dim: usize, candidates: Vec<Halfspace<T>>, mut vertices: Vec<Vec<T>>) -> Result<Self> {
        let scale = cloud_scale(&vertices);
        let tol = T::geom_eps() * scale;
        vertices.sort_by(|a, b| lex_cmp(a, b));

        let mut facets: Vec<Halfspace<T>> = Vec::new();
        let mut incidence: Vec<Vec<usize>> = Vec::new();
        for h in candidates {
            let inc: Vec<usize> = (0..vertices.len())
                .filter(|&v| h.slack(&vertices[v]).abs() <= tol)
                .collect();
            if inc.len() < dim {
                continue;
            }
            let pts: Vec<&[T]> = inc.iter().map(|&v| vertices[v].as_slice()).collect();
            if affine_rank(&pts, tol) < dim - 1 {
                continue;
            }
            let duplicate = facets.iter().any(|f| {
                dist(&f.normal, &h.normal) <= T::geom_eps() * T::c(10.0) && (f.offset - h.offset).abs() <= tol
            });
            if duplicate {
                continue;
            }
            facets.push(h);
            incidence.push(inc);
        }

        // Drop points that lie on fewer than `dim` facets (not extreme).
        let keep: Vec<bool> = (0..vertices.len())
            .map(|v| incidence.iter().filter(|inc| inc.contains(&v)).count() >= dim)
            .collect();
        if keep.iter().any(|k| !k) {
            let mut remap = vec![usize::MAX; vertices.len()];
            let mut kept = Vec::new();
            for (v, p) in vertices.into_iter().enumerate() {
                if keep[v] {
                    remap[v] = kept.len();
                    kept.push(p);
                }
            }
            vertices = kept;
            for inc in incidence.iter_mut() {
                *inc = inc.iter().filter(|&&v| remap[v] != usize::MAX).map(|&v| remap[v]).collect();
            }
        }

        if facets.len() <= dim || vertices.len() <= dim {
            return Err(Error::DimensionDeficiency("fewer than N+1 facets or vertices".into()));
        }

        let centroid = mean(&vertices);
        if dim == 2 {
            // counter-clockwise vertex order, then relabel incidence
            let mut order: Vec<usize> = (0..vertices.len()).collect();
            let angle = |p: &Vec<T>| (p[1] - centroid[1]).atan2(p[0] - centroid[0]);
            order.sort_by(|&a, &b| angle(&vertices[a]).partial_cmp(&angle(&vertices[b])).expect("finite"));
            let mut inv = vec![0; order.len()];
            for (new, &old) in order.iter().enumerate() {
                inv[old] = new;
            }
            vertices = order.iter().map(|&i| vertices[i].clone()).collect();
            for inc in incidence.iter_mut() {
                for v in inc.iter_mut() {
                    *v = inv[*v];
                }
            }
        }
        for (h, inc) in facets.iter().zip(incidence.iter_mut()) {
            order_facet(dim, h, inc, &vertices);
        }

        let (center, inradius) = chebyshev(&facets, dim).map_err(|e| match e {
            Error::Infeasible | Error::Unbounded => Error::Internal(format!("Chebyshev LP failed on a valid polytope: {e}")),
            other => other,
        })?;
        if inradius <= tol {
            return Err(Error::DimensionDeficiency(format!("Chebyshev radius {inradius} is not positive")));
        }
        Ok(Polytope { dim, facets, vertices, incidence, center, inradius, scale })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Halfspace<T>] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    /// Facet → ordered vertex indices.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn facet_vertices(&self, i: usize) -> impl Iterator<Item = &[T]> + '_ {
        self.incidence[i].iter().map(move |&v| self.vertices[v].as_slice())
    }

    /// Largest distance from the vertex centroid to a vertex.
    pub fn scale(&self) -> T {
        self.scale
    }

    /// Absolute tolerance used for this body's geometric predicates.
    pub fn tolerance(&self) -> T {
        T::geom_eps() * self.scale
    }

    /// `min_i (b_i - a_i · x)`, negative outside.
    pub fn signed_distance(&self, x: &[T]) -> T {
        self.nearest_facet(x).1
    }

    /// Distance to the boundary, clamped to 0 outside.
    pub fn distance(&self, x: &[T]) -> T {
        self.distance_query(x).value
    }

    pub fn distance_query(&self, x: &[T]) -> DistanceQuery<T> {
        let s = self.signed_distance(x);
        if s >= T::zero() {
            DistanceQuery { value: s, outside: false }
        } else {
            DistanceQuery { value: T::zero(), outside: true }
        }
    }

    /// Index and slack of the nearest facet hyperplane; ties go to the lowest index.
    pub fn nearest_facet(&self, x: &[T]) -> (usize, T) {
        let mut best = (0, self.facets[0].slack(x));
        for (i, h) in self.facets.iter().enumerate().skip(1) {
            let s = h.slack(x);
            if s < best.1 {
                best = (i, s);
            }
        }
        best
    }

    pub fn contains(&self, x: &[T], tol: T) -> bool {
        self.facets.iter().all(|h| h.slack(x) >= -tol)
    }

    /// Chebyshev radius and center.
    pub fn inradius(&self) -> (T, &[T]) {
        (self.inradius, &self.center)
    }

    /// (N−1)-volume of facet `i`.
    pub fn facet_measure(&self, i: usize) -> T {
        let pts: Vec<&[T]> = self.facet_vertices(i).collect();
        if self.dim == 2 {
            return dist(pts[0], pts[1]);
        }
        let mut acc = [T::zero(); 3];
        for k in 1..pts.len() - 1 {
            let c = cross3(&sub(pts[k], pts[0]), &sub(pts[k + 1], pts[0]));
            for j in 0..3 {
                acc[j] = acc[j] + c[j];
            }
        }
        norm(&acc) / T::c(2.0)
    }

    /// Volume by the pyramid decomposition over facets.
    pub fn volume(&self) -> T {
        let n = T::from_usize_lossy(self.dim);
        let terms: Vec<T> = (0..self.facets.len())
            .map(|i| self.facet_measure(i) * self.facets[i].slack(&self.center) / n)
            .collect();
        crate::scalar::pairwise_sum(&terms)
    }

    pub fn vertex_centroid(&self) -> Vec<T> {
        mean(&self.vertices)
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(dist(a, b));
            }
        }
        d
    }

    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        let mut lo = self.vertices[0].clone();
        let mut hi = lo.clone();
        for v in &self.vertices {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// The image under `x ↦ s x`.
    pub fn scaled(&self, s: T) -> Result<Self> {
        if !(s > T::zero()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {s}")));
        }
        let pts: Vec<Vec<T>> = self.vertices.iter().map(|v| v.iter().map(|&x| x * s).collect()).collect();
        Self::from_vertices(&pts)
    }

    /// Coordinates converted to another scalar type.
    pub fn cast<U: Real>(&self) -> Result<Polytope<U>> {
        let pts: Vec<Vec<U>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|&x| U::c(x.to_f64_lossy())).collect())
            .collect();
        Polytope::from_vertices(&pts)
    }
}

fn chebyshev<T: Real>(hs: &[Halfspace<T>], dim: usize) -> Result<(Vec<T>, T)> {
    let a: Vec<Vec<T>> = hs
        .iter()
        .map(|h| {
            let mut row = h.normal.clone();
            row.push(T::one());
            row
        })
        .collect();
    let b: Vec<T> = hs.iter().map(|h| h.offset).collect();
    let mut c = vec![T::zero(); dim + 1];
    c[dim] = T::one();
    match maximize(&c, &a, &b) {
        LpOutcome::Optimal { mut x, value } => {
            if value < T::zero() {
                return Err(Error::Infeasible);
            }
            x.pop();
            // the LP optimum is only a vertex of the LP; report the true slack
            let r = hs.iter().fold(T::infinity(), |m, h| m.min(h.slack(&x)));
            Ok((x, r))
        }
        LpOutcome::Unbounded => Err(Error::Unbounded),
        LpOutcome::Infeasible => Err(Error::Infeasible),
    }
}

fn check_points<T: Real>(points: &[Vec<T>]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::DimensionDeficiency("empty point set".into()));
    };
    let dim = first.len();
    if !(dim == 2 || dim == 3) {
        return Err(Error::UnsupportedDimension(dim));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::Geometry("points of mixed dimension".into()));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(Error::Geometry("non-finite coordinate".into()));
        }
    }
    Ok(dim)
}

fn hull2<T: Real>(points: &[Vec<T>], tol: T) -> (Vec<Halfspace<T>>, Vec<Vec<T>>) {
    let mut pts: Vec<&Vec<T>> = points.iter().collect();
    pts.sort_by(|a, b| lex_cmp(a, b));
    let cross = |o: &[T], a: &[T], b: &[T]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<&Vec<T>> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Vec<T>>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for p in iter {
            while hull.len() >= start + 2 {
                let o = hull[hull.len() - 2];
                let a = hull[hull.len() - 1];
                // drop right turns and (near-)collinear middles
                let ab = dist(o, p).max(T::min_positive_value());
                if cross(o, a, p) <= tol * ab {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    let mut facets = Vec::with_capacity(n);
    for i in 0..n {
        let a = hull[i];
        let b = hull[(i + 1) % n];
        let t = sub(b, a);
        let len = norm(&t);
        let normal = vec![t[1] / len, -t[0] / len];
        let offset = dot(&normal, a);
        facets.push(Halfspace { normal, offset });
    }
    (facets, hull.into_iter().cloned().collect())
}

fn hull3<T: Real>(points: &[Vec<T>], tol: T) -> (Vec<Halfspace<T>>, Vec<Vec<T>>) {
    let mut pts: Vec<Vec<T>> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| dist(q, p) <= tol) {
            pts.push(p.clone());
        }
    }
    let n = pts.len();
    let mut facets: Vec<Halfspace<T>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let c = cross3(&sub(&pts[j], &pts[i]), &sub(&pts[k], &pts[i]));
                let len = norm(&c);
                if len <= tol * dist(&pts[j], &pts[i]).max(dist(&pts[k], &pts[i])) {
                    continue;
                }
                let mut normal: Vec<T> = c.iter().map(|&v| v / len).collect();
                let mut offset = dot(&normal, &pts[i]);
                let above = pts.iter().any(|p| dot(&normal, p) - offset > tol);
                let below = pts.iter().any(|p| dot(&normal, p) - offset < -tol);
                if above && below {
                    continue;
                }
                if above {
                    normal.iter_mut().for_each(|v| *v = -*v);
                    offset = -offset;
                }
                let h = Halfspace { normal, offset };
                if !facets.iter().any(|f| dist(&f.normal, &h.normal) <= T::c(1e-7) && (f.offset - h.offset).abs() <= tol) {
                    facets.push(h);
                }
            }
        }
    }
    (facets, pts)
}

fn order_facet<T: Real>(dim: usize, h: &Halfspace<T>, inc: &mut [usize], vertices: &[Vec<T>]) {
    if dim == 2 {
        let t = [-h.normal[1], h.normal[0]];
        inc.sort_by(|&a, &b| dot(&t, &vertices[a]).partial_cmp(&dot(&t, &vertices[b])).expect("finite"));
        return;
    }
    let pts: Vec<Vec<T>> = inc.iter().map(|&v| vertices[v].clone()).collect();
    let c = mean(&pts);
    // orthonormal frame (e1, e2) with e1 × e2 = normal
    let n = &h.normal;
    let seed = if n[0].abs() < T::c(0.9) { [T::one(), T::zero(), T::zero()] } else { [T::zero(), T::one(), T::zero()] };
    let e1 = cross3(&seed, n);
    let l1 = norm(&e1);
    let e1: Vec<T> = e1.iter().map(|&v| v / l1).collect();
    let e2 = cross3(n, &e1);
    let angle = |v: usize| {
        let d = sub(&vertices[v], &c);
        dot(&e2, &d).atan2(dot(&e1, &d))
    };
    inc.sort_by(|&a, &b| angle(a).partial_cmp(&angle(b)).expect("finite"));
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + (x - y) * (x - y)).sqrt()
}

pub(crate) fn mean<T: Real>(points: &[Vec<T>]) -> Vec<T> {
    let dim = points[0].len();
    let n = T::from_usize_lossy(points.len());
    (0..dim).map(|k| points.iter().map(|p| p[k]).sum::<T>() / n).collect()
}

fn cloud_scale<T: Real>(points: &[Vec<T>]) -> T {
    if points.is_empty() {
        return T::one();
    }
    let c = mean(points);
    let s = points.iter().fold(T::zero(), |m, p| m.max(dist(p, &c)));
    if s > T::zero() {
        s
    } else {
        T::one()
    }
}

fn lex_cmp<T: Real>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("finite") {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}
