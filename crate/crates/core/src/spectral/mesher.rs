//! Delaunay refinement of planar straight-line graphs: an outer polygon,
//! polygonal holes and interior slit polylines.
//!
//! Constrained Bowyer–Watson insertion with exact orientation and incircle
//! predicates; segments are recovered by splitting, then Ruppert-style
//! refinement removes triangles that are too large or too skinny. Segments
//! meeting at input vertices are split on concentric shells (powers of two)
//! so that small input angles do not cause endless splitting.

use std::collections::{HashMap, VecDeque};

use robust::{incircle, orient2d, Coord};

use crate::error::{Error, Result};
use crate::spectral::mesh::TriangleMesh;

const NONE: usize = usize::MAX;

/// Polygonal domain: `outer` minus the closed `holes`, with `slits` (open
/// polylines) removed from the interior. Slit endpoints may touch rings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlanarDomain {
    pub outer: Vec<[f64; 2]>,
    pub holes: Vec<Vec<[f64; 2]>>,
    pub slits: Vec<Vec<[f64; 2]>>,
}

impl PlanarDomain {
    pub fn polygon(outer: Vec<[f64; 2]>) -> Self {
        PlanarDomain { outer, ..Default::default() }
    }

    /// Area of the outer ring minus the holes.
    pub fn area(&self) -> f64 {
        ring_area(&self.outer).abs() - self.holes.iter().map(|h| ring_area(h).abs()).sum::<f64>()
    }
}

#[derive(Clone, Debug)]
pub struct MeshOptions {
    /// Target edge length.
    pub h: f64,
    /// Quality bound for triangles away from small input angles.
    pub min_angle_deg: f64,
    /// Refinement stops (returning the current mesh) beyond this many nodes.
    pub max_nodes: usize,
}

impl MeshOptions {
    pub fn with_h(h: f64) -> Self {
        MeshOptions { h, min_angle_deg: 20.0, max_nodes: 3_000_000 }
    }
}

/// Meshes a simple polygon with optional slits.
pub fn mesh_polygon(polygon: &[[f64; 2]], slits: &[Vec<[f64; 2]>], h: f64) -> Result<TriangleMesh> {
    let domain = PlanarDomain { outer: polygon.to_vec(), holes: Vec::new(), slits: slits.to_vec() };
    mesh_domain(&domain, &MeshOptions::with_h(h))
}

pub fn mesh_domain(domain: &PlanarDomain, opts: &MeshOptions) -> Result<TriangleMesh> {
    if !(opts.h > 0.0) || !opts.h.is_finite() {
        return Err(Error::Geometry(format!("mesh size must be positive, got {}", opts.h)));
    }
    if !(opts.min_angle_deg > 0.0 && opts.min_angle_deg < 34.0) {
        return Err(Error::Geometry("minimum angle must lie in (0°, 34°)".into()));
    }
    let graph = Pslg::build(domain)?;
    let mut cdt = Cdt::new(&graph.points);
    let ids: Vec<usize> = graph
        .points
        .iter()
        .zip(&graph.input)
        .map(|(&p, &inp)| cdt.insert_point(p, inp))
        .collect::<Result<_>>()?;
    let mut pending: Vec<(usize, usize, Kind)> = Vec::new();
    for &(a, b, kind) in &graph.segments {
        // pre-split to the target length
        let (pa, pb) = (graph.points[a], graph.points[b]);
        let pieces = (dist(pa, pb) / opts.h).ceil().max(1.0) as usize;
        let mut prev = ids[a];
        for k in 1..pieces {
            let s = k as f64 / pieces as f64;
            let q = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let id = cdt.insert_point(q, false)?;
            pending.push((prev, id, kind));
            prev = id;
        }
        pending.push((prev, ids[b], kind));
    }
    cdt.recover(pending)?;
    cdt.label();
    cdt.refine(opts)?;
    cdt.extract()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Free,
    Boundary,
    Slit,
}

struct Pslg {
    points: Vec<[f64; 2]>,
    input: Vec<bool>,
    segments: Vec<(usize, usize, Kind)>,
}

impl Pslg {
    fn build(d: &PlanarDomain) -> Result<Self> {
        let mut rings: Vec<Vec<[f64; 2]>> = vec![d.outer.clone()];
        rings.extend(d.holes.iter().cloned());
        for r in &rings {
            if r.len() < 3 {
                return Err(Error::Geometry("a ring needs at least three vertices".into()));
            }
            if r.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Geometry("non-finite ring coordinate".into()));
            }
            if ring_area(r).abs() == 0.0 {
                return Err(Error::Geometry("degenerate ring".into()));
            }
        }
        for s in &d.slits {
            if s.len() < 2 || s.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Geometry("a slit needs at least two finite points".into()));
            }
        }
        let scale = rings[0].iter().flat_map(|p| p.iter()).fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let tol = 1e-12 * scale;

        // ring edges, split where slit vertices touch them
        let mut ring_edges: Vec<([f64; 2], [f64; 2])> = Vec::new();
        let slit_pts: Vec<[f64; 2]> = d.slits.iter().flatten().copied().collect();
        for r in &rings {
            for i in 0..r.len() {
                let (a, b) = (r[i], r[(i + 1) % r.len()]);
                if dist(a, b) <= tol {
                    return Err(Error::Geometry("repeated ring vertex".into()));
                }
                let mut cuts: Vec<(f64, [f64; 2])> = slit_pts
                    .iter()
                    .filter(|&&p| dist(p, a) > tol && dist(p, b) > tol && on_segment(p, a, b, tol))
                    .map(|&p| (dist(a, p), p))
                    .collect();
                cuts.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
                let mut prev = a;
                for (_, p) in cuts {
                    ring_edges.push((prev, p));
                    prev = p;
                }
                ring_edges.push((prev, b));
            }
        }
        // rings must be simple and mutually disjoint
        for i in 0..ring_edges.len() {
            for j in i + 1..ring_edges.len() {
                if segments_conflict(ring_edges[i], ring_edges[j], tol) {
                    return Err(Error::Geometry("polygon boundary self-intersects".into()));
                }
            }
        }
        let outer_area = ring_area(&d.outer).abs();
        for h in &d.holes {
            if !point_in_ring(h[0], &d.outer) || ring_area(h).abs() >= outer_area {
                return Err(Error::Geometry("hole is not inside the outer ring".into()));
            }
        }
        let inside_domain = |p: [f64; 2]| {
            let on_ring = ring_edges.iter().any(|&(a, b)| on_segment(p, a, b, tol));
            on_ring || (point_in_ring(p, &d.outer) && !d.holes.iter().any(|h| point_in_ring(p, h)))
        };
        let mut slit_edges = Vec::new();
        for s in &d.slits {
            for w in s.windows(2) {
                if dist(w[0], w[1]) <= tol {
                    return Err(Error::Geometry("repeated slit vertex".into()));
                }
                let mid = [0.5 * (w[0][0] + w[1][0]), 0.5 * (w[0][1] + w[1][1])];
                if !inside_domain(w[0]) || !inside_domain(w[1]) || !inside_domain(mid) {
                    return Err(Error::Geometry("slit leaves the domain".into()));
                }
                for &e in &ring_edges {
                    if proper_crossing((w[0], w[1]), e) {
                        return Err(Error::Geometry("slit crosses the boundary".into()));
                    }
                }
                slit_edges.push((w[0], w[1]));
            }
        }
        for i in 0..slit_edges.len() {
            for j in i + 1..slit_edges.len() {
                if segments_conflict(slit_edges[i], slit_edges[j], tol) {
                    return Err(Error::Geometry("slits intersect".into()));
                }
            }
        }

        let mut points: Vec<[f64; 2]> = Vec::new();
        let index = |p: [f64; 2], points: &mut Vec<[f64; 2]>| -> usize {
            if let Some(i) = points.iter().position(|&q| dist(p, q) <= tol) {
                i
            } else {
                points.push(p);
                points.len() - 1
            }
        };
        let mut segments = Vec::new();
        for &(a, b) in &ring_edges {
            let (ia, ib) = (index(a, &mut points), index(b, &mut points));
            segments.push((ia, ib, Kind::Boundary));
        }
        for &(a, b) in &slit_edges {
            let (ia, ib) = (index(a, &mut points), index(b, &mut points));
            segments.push((ia, ib, Kind::Slit));
        }
        let input = vec![true; points.len()];
        Ok(Pslg { points, input, segments })
    }
}

#[derive(Clone, Debug)]
struct Tri {
    v: [usize; 3],
    n: [usize; 3],
    seg: [Kind; 3],
    alive: bool,
    inside: bool,
}

struct Cdt {
    pts: Vec<[f64; 2]>,
    input: Vec<bool>,
    tris: Vec<Tri>,
    free: Vec<usize>,
    vert_tri: Vec<usize>,
    last: usize,
    scale: f64,
    mark: Vec<u32>,
    stamp: u32,
}

struct Cavity {
    tris: Vec<usize>,
    boundary: Vec<(usize, usize)>,
}

enum Walk {
    Found(usize),
    Blocked(usize, usize),
}

#[inline]
fn coord(p: [f64; 2]) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

#[inline]
fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    orient2d(coord(a), coord(b), coord(c))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Cdt {
    fn new(points: &[[f64; 2]]) -> Self {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        let m = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-300);
        let big = 40.0 * m;
        let pts = vec![[c[0] - big, c[1] - big], [c[0] + big, c[1] - big], [c[0], c[1] + big]];
        let tri = Tri { v: [0, 1, 2], n: [NONE; 3], seg: [Kind::Free; 3], alive: true, inside: false };
        Cdt {
            pts,
            input: vec![false; 3],
            tris: vec![tri],
            free: Vec::new(),
            vert_tri: vec![0; 3],
            last: 0,
            scale: m,
            mark: vec![0],
            stamp: 0,
        }
    }

    fn p(&self, v: usize) -> [f64; 2] {
        self.pts[v]
    }

    fn tri_pts(&self, t: usize) -> [[f64; 2]; 3] {
        self.tris[t].v.map(|v| self.pts[v])
    }

    fn contains(&self, t: usize, p: [f64; 2]) -> bool {
        let [a, b, c] = self.tri_pts(t);
        orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0
    }

    fn locate(&mut self, p: [f64; 2], start: usize) -> Result<usize> {
        let mut t = if start < self.tris.len() && self.tris[start].alive { start } else { self.last };
        if !self.tris[t].alive {
            t = self.tris.iter().position(|t| t.alive).expect("live triangle");
        }
        let cap = 4 * self.tris.len() + 64;
        let mut rot = 0;
        for _ in 0..cap {
            let tri = &self.tris[t];
            let mut next = None;
            for kk in 0..3 {
                let k = (kk + rot) % 3;
                let (a, b) = (tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]);
                if orient(self.pts[a], self.pts[b], p) < 0.0 {
                    next = Some(tri.n[k]);
                    break;
                }
            }
            rot = (rot + 1) % 3;
            match next {
                None => return Ok(t),
                Some(NONE) => return Err(Error::Geometry("point outside the triangulation".into())),
                Some(nb) => t = nb,
            }
        }
        (0..self.tris.len())
            .find(|&t| self.tris[t].alive && self.contains(t, p))
            .ok_or_else(|| Error::Geometry("point location failed".into()))
    }

    /// Straight walk from `from` (inside `t`) to `to`, stopping at constrained edges.
    fn walk(&self, mut t: usize, from: [f64; 2], to: [f64; 2]) -> Result<Walk> {
        let cap = 4 * self.tris.len() + 64;
        let mut came_from = NONE;
        for _ in 0..cap {
            if self.contains(t, to) {
                return Ok(Walk::Found(t));
            }
            let tri = &self.tris[t];
            let mut exit = None;
            for k in 0..3 {
                if tri.n[k] == came_from && came_from != NONE {
                    continue;
                }
                let (a, b) = (self.pts[tri.v[(k + 1) % 3]], self.pts[tri.v[(k + 2) % 3]]);
                if orient(a, b, to) < 0.0 {
                    let oa = orient(from, to, a);
                    let ob = orient(from, to, b);
                    if (oa <= 0.0 && ob >= 0.0) || (oa >= 0.0 && ob <= 0.0) {
                        exit = Some(k);
                        break;
                    }
                }
            }
            let Some(k) = exit else {
                return Err(Error::Geometry("segment walk lost its way".into()));
            };
            if tri.seg[k] != Kind::Free || tri.n[k] == NONE {
                return Ok(Walk::Blocked(t, k));
            }
            came_from = t;
            t = tri.n[k];
        }
        Err(Error::Geometry("segment walk did not terminate".into()))
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        if self.mark.len() < self.tris.len() {
            self.mark.resize(self.tris.len(), 0);
        }
        self.stamp
    }

    /// Triangles whose circumcircle contains `p`, reachable from `t0`
    /// without crossing constrained edges. `None` if the cavity is not
    /// star-shaped from `p`.
    fn cavity(&mut self, p: [f64; 2], t0: usize) -> Option<Cavity> {
        let stamp = self.next_stamp();
        self.mark[t0] = stamp;
        let mut stack = vec![t0];
        let mut tris = vec![t0];
        let mut boundary = Vec::new();
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let nb = self.tris[t].n[k];
                if self.tris[t].seg[k] != Kind::Free || nb == NONE {
                    boundary.push((t, k));
                    continue;
                }
                if self.mark[nb] == stamp {
                    continue;
                }
                let [a, b, c] = self.tri_pts(nb);
                if incircle(coord(a), coord(b), coord(c), coord(p)) > 0.0 {
                    self.mark[nb] = stamp;
                    stack.push(nb);
                    tris.push(nb);
                } else {
                    boundary.push((t, k));
                }
            }
        }
        for &(t, k) in &boundary {
            let v = self.tris[t].v;
            if !(orient(self.pts[v[(k + 1) % 3]], self.pts[v[(k + 2) % 3]], p) > 0.0) {
                return None;
            }
        }
        Some(Cavity { tris, boundary })
    }

    fn alloc(&mut self, tri: Tri) -> usize {
        if let Some(i) = self.free.pop() {
            self.tris[i] = tri;
            i
        } else {
            self.tris.push(tri);
            self.mark.push(0);
            self.tris.len() - 1
        }
    }

    /// Replaces the cavity by a fan around the new vertex; returns the new triangles.
    fn fill(&mut self, p: [f64; 2], input: bool, cav: Cavity) -> (usize, Vec<usize>) {
        let vid = self.pts.len();
        self.pts.push(p);
        self.input.push(input);
        self.vert_tri.push(NONE);
        let edges: Vec<(usize, usize, usize, Kind, bool)> = cav
            .boundary
            .iter()
            .map(|&(t, k)| {
                let tri = &self.tris[t];
                (tri.v[(k + 1) % 3], tri.v[(k + 2) % 3], tri.n[k], tri.seg[k], tri.inside)
            })
            .collect();
        for &t in &cav.tris {
            self.tris[t].alive = false;
            self.free.push(t);
        }
        let mut starts: HashMap<usize, usize> = HashMap::with_capacity(edges.len());
        let mut ends: HashMap<usize, usize> = HashMap::with_capacity(edges.len());
        let mut created = Vec::with_capacity(edges.len());
        for &(a, b, outer, seg, inside) in &edges {
            let t = self.alloc(Tri { v: [vid, a, b], n: [outer, NONE, NONE], seg: [seg, Kind::Free, Kind::Free], alive: true, inside });
            if outer != NONE {
                let o = &mut self.tris[outer];
                for k in 0..3 {
                    let (x, y) = (o.v[(k + 1) % 3], o.v[(k + 2) % 3]);
                    if x == b && y == a {
                        o.n[k] = t;
                    }
                }
            }
            starts.insert(a, t);
            ends.insert(b, t);
            self.vert_tri[a] = t;
            self.vert_tri[b] = t;
            created.push(t);
        }
        for &t in &created {
            let [_, a, b] = self.tris[t].v;
            self.tris[t].n[1] = starts[&b];
            self.tris[t].n[2] = ends[&a];
        }
        self.vert_tri[vid] = created[0];
        self.last = created[0];
        (vid, created)
    }

    fn insert_point(&mut self, p: [f64; 2], input: bool) -> Result<usize> {
        let t = self.locate(p, self.last)?;
        if let Some(&v) = self.tris[t].v.iter().find(|&&v| dist(self.pts[v], p) <= 1e-13 * self.scale) {
            self.input[v] |= input;
            return Ok(v);
        }
        let cav = self.cavity(p, t).ok_or_else(|| Error::Geometry("point lies on a constrained edge".into()))?;
        Ok(self.fill(p, input, cav).0)
    }

    fn find_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let start = self.vert_tri[a];
        if start == NONE {
            return None;
        }
        for dir in 0..2 {
            let mut t = start;
            loop {
                let tri = &self.tris[t];
                let i = tri.v.iter().position(|&v| v == a)?;
                if let Some(j) = tri.v.iter().position(|&v| v == b) {
                    return Some((t, 3 - i - j));
                }
                let k = if dir == 0 { (i + 2) % 3 } else { (i + 1) % 3 };
                let nb = tri.n[k];
                if nb == NONE || nb == start {
                    break;
                }
                t = nb;
            }
        }
        None
    }

    fn set_seg(&mut self, t: usize, k: usize, kind: Kind) {
        self.tris[t].seg[k] = kind;
        let (a, b) = (self.tris[t].v[(k + 1) % 3], self.tris[t].v[(k + 2) % 3]);
        let nb = self.tris[t].n[k];
        if nb != NONE {
            let o = &mut self.tris[nb];
            for kk in 0..3 {
                if o.v[(kk + 1) % 3] == b && o.v[(kk + 2) % 3] == a {
                    o.seg[kk] = kind;
                }
            }
        }
    }

    fn recover(&mut self, mut pending: Vec<(usize, usize, Kind)>) -> Result<()> {
        let cap = 50 * (pending.len() + 16);
        let mut steps = 0;
        while let Some((a, b, kind)) = pending.pop() {
            steps += 1;
            if steps > cap {
                return Err(Error::Geometry("segment recovery did not terminate".into()));
            }
            if let Some((t, k)) = self.find_edge(a, b) {
                self.set_seg(t, k, kind);
                continue;
            }
            let (pa, pb) = (self.p(a), self.p(b));
            let m = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
            let mid = self.insert_point(m, false)?;
            if mid == a || mid == b {
                return Err(Error::Geometry("segment is too short to recover".into()));
            }
            pending.push((a, mid, kind));
            pending.push((mid, b, kind));
        }
        Ok(())
    }

    /// Inside/outside by parity of boundary crossings from the super triangle.
    fn label(&mut self) {
        let start = self.vert_tri[0];
        let mut seen = vec![false; self.tris.len()];
        let mut queue = VecDeque::from([(start, false)]);
        seen[start] = true;
        while let Some((t, inside)) = queue.pop_front() {
            self.tris[t].inside = inside;
            for k in 0..3 {
                let nb = self.tris[t].n[k];
                if nb == NONE || seen[nb] {
                    continue;
                }
                seen[nb] = true;
                queue.push_back((nb, inside ^ (self.tris[t].seg[k] == Kind::Boundary)));
            }
        }
    }

    fn circumcenter(&self, t: usize) -> [f64; 2] {
        let [a, b, c] = self.tri_pts(t);
        let (bx, by) = (b[0] - a[0], b[1] - a[1]);
        let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
        let d = 2.0 * (bx * cy - by * cx);
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        [a[0] + (cy * b2 - by * c2) / d, a[1] + (bx * c2 - cx * b2) / d]
    }

    fn encroached_by(&self, a: usize, b: usize, p: [f64; 2]) -> bool {
        let (pa, pb) = (self.p(a), self.p(b));
        let l2 = (pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2);
        (p[0] - pa[0]) * (p[0] - pb[0]) + (p[1] - pa[1]) * (p[1] - pb[1]) < -1e-12 * l2
    }

    /// Constrained edge `(t, k)` has an inside apex within its diametral circle.
    fn encroached(&self, t: usize, k: usize) -> bool {
        let tri = &self.tris[t];
        let (a, b) = (tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]);
        for side in [t, tri.n[k]] {
            if side == NONE || !self.tris[side].inside {
                continue;
            }
            let apex = self.tris[side].v.iter().copied().find(|&v| v != a && v != b).expect("apex");
            if self.encroached_by(a, b, self.p(apex)) {
                return true;
            }
        }
        false
    }

    fn split_point(&self, a: usize, b: usize) -> [f64; 2] {
        let (pa, pb) = (self.p(a), self.p(b));
        let len = dist(pa, pb);
        if self.input[a] != self.input[b] {
            let (from, to) = if self.input[a] { (pa, pb) } else { (pb, pa) };
            let mut d = 2f64.powf((len / 2.0).log2().round());
            if d < len / 3.0 {
                d *= 2.0;
            }
            if d > 2.0 * len / 3.0 {
                d /= 2.0;
            }
            let s = d / len;
            return [from[0] + s * (to[0] - from[0]), from[1] + s * (to[1] - from[1])];
        }
        [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]
    }

    /// Splits constrained edge `(t, k)`; returns the new triangles, or `None`
    /// if the edge is too short to split.
    fn split_segment(&mut self, t: usize, k: usize, segq: &mut Vec<(usize, usize)>) -> Result<Option<Vec<usize>>> {
        let tri = self.tris[t].clone();
        let (a, b, kind) = (tri.v[(k + 1) % 3], tri.v[(k + 2) % 3], tri.seg[k]);
        if dist(self.p(a), self.p(b)) <= 1e-9 * self.scale {
            return Ok(None);
        }
        let m = self.split_point(a, b);
        self.set_seg(t, k, Kind::Free);
        let Some(cav) = self.cavity(m, t) else {
            self.set_seg(t, k, kind);
            return Ok(None);
        };
        let (mid, created) = self.fill(m, false, cav);
        for end in [a, b] {
            let (tt, kk) = self
                .find_edge(mid, end)
                .ok_or_else(|| Error::Internal("split segment lost an edge".into()))?;
            self.set_seg(tt, kk, kind);
            segq.push((mid, end));
        }
        for &c in &created {
            let tri = &self.tris[c];
            if tri.seg[0] != Kind::Free {
                segq.push((tri.v[1], tri.v[2]));
            }
        }
        Ok(Some(created))
    }

    fn is_bad(&self, t: usize, h: f64, ratio_bound: f64) -> bool {
        let [a, b, c] = self.tri_pts(t);
        let (la, lb, lc) = (dist(b, c), dist(c, a), dist(a, b));
        let area = 0.5 * orient(a, b, c);
        if !(area > 0.0) {
            return false;
        }
        let r = la * lb * lc / (4.0 * area);
        if r > 0.6 * h {
            return true;
        }
        let shortest = la.min(lb).min(lc);
        if r / shortest <= ratio_bound {
            return false;
        }
        // skinny because of a small input angle between two segments: leave it
        let tri = &self.tris[t];
        for i in 0..3 {
            let (e1, e2) = ((i + 1) % 3, (i + 2) % 3);
            if tri.seg[e1] != Kind::Free && tri.seg[e2] != Kind::Free {
                let p = self.p(tri.v[i]);
                let (q, s) = (self.p(tri.v[(i + 1) % 3]), self.p(tri.v[(i + 2) % 3]));
                let u = [q[0] - p[0], q[1] - p[1]];
                let v = [s[0] - p[0], s[1] - p[1]];
                let ang = (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]).abs();
                if ang < 60f64.to_radians() {
                    return false;
                }
            }
        }
        true
    }

    fn refine(&mut self, opts: &MeshOptions) -> Result<()> {
        let ratio_bound = 1.0 / (2.0 * opts.min_angle_deg.to_radians().sin());
        let mut segq: Vec<(usize, usize)> = Vec::new();
        for tri in self.tris.iter().filter(|t| t.alive) {
            for k in 0..3 {
                if tri.seg[k] != Kind::Free {
                    segq.push((tri.v[(k + 1) % 3], tri.v[(k + 2) % 3]));
                }
            }
        }
        let mut bad: VecDeque<(usize, [usize; 3])> = (0..self.tris.len())
            .filter(|&t| self.tris[t].alive && self.tris[t].inside)
            .map(|t| (t, self.tris[t].v))
            .collect();
        let tiny = 1e-10 * self.scale;
        loop {
            if self.pts.len() >= opts.max_nodes {
                break;
            }
            if let Some((a, b)) = segq.pop() {
                if let Some((t, k)) = self.find_edge(a, b) {
                    if self.tris[t].seg[k] != Kind::Free && self.encroached(t, k) {
                        if let Some(created) = self.split_segment(t, k, &mut segq)? {
                            bad.extend(created.into_iter().filter(|&c| self.tris[c].inside).map(|c| (c, self.tris[c].v)));
                        }
                    }
                }
                continue;
            }
            let Some((t, vs)) = bad.pop_front() else { break };
            if !self.tris[t].alive || self.tris[t].v != vs || !self.tris[t].inside || !self.is_bad(t, opts.h, ratio_bound) {
                continue;
            }
            let c = self.circumcenter(t);
            let [p0, p1, p2] = self.tri_pts(t);
            let from = [(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0];
            match self.walk(t, from, c)? {
                Walk::Blocked(bt, k) => {
                    if let Some(created) = self.split_segment(bt, k, &mut segq)? {
                        bad.extend(created.into_iter().filter(|&c| self.tris[c].inside).map(|c| (c, self.tris[c].v)));
                        bad.push_back((t, vs));
                    }
                }
                Walk::Found(tc) => {
                    if self.tris[tc].v.iter().any(|&v| dist(self.p(v), c) <= tiny) {
                        continue;
                    }
                    let Some(cav) = self.cavity(c, tc) else { continue };
                    let enc: Vec<(usize, usize)> = cav
                        .boundary
                        .iter()
                        .filter(|&&(bt, k)| self.tris[bt].seg[k] != Kind::Free)
                        .map(|&(bt, k)| (self.tris[bt].v[(k + 1) % 3], self.tris[bt].v[(k + 2) % 3]))
                        .filter(|&(a, b)| self.encroached_by(a, b, c))
                        .collect();
                    if enc.is_empty() {
                        let (_, created) = self.fill(c, false, cav);
                        bad.extend(created.into_iter().filter(|&c| self.tris[c].inside).map(|c| (c, self.tris[c].v)));
                    } else {
                        let mut split_any = false;
                        for (a, b) in enc {
                            if let Some((st, sk)) = self.find_edge(a, b) {
                                if let Some(created) = self.split_segment(st, sk, &mut segq)? {
                                    split_any = true;
                                    bad.extend(created.into_iter().filter(|&c| self.tris[c].inside).map(|c| (c, self.tris[c].v)));
                                }
                            }
                        }
                        if split_any {
                            bad.push_back((t, vs));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn extract(&self) -> Result<TriangleMesh> {
        let mut map = vec![NONE; self.pts.len()];
        let mut nodes = Vec::new();
        let mut fixed = Vec::new();
        let mut triangles = Vec::new();
        let mut slit_edges: Vec<(usize, usize)> = Vec::new();
        for tri in self.tris.iter().filter(|t| t.alive && t.inside) {
            let mut out = [0; 3];
            for (k, &v) in tri.v.iter().enumerate() {
                if map[v] == NONE {
                    map[v] = nodes.len();
                    nodes.push(self.pts[v]);
                    fixed.push(false);
                }
                out[k] = map[v];
            }
            for k in 0..3 {
                if tri.seg[k] != Kind::Free {
                    let (a, b) = (out[(k + 1) % 3], out[(k + 2) % 3]);
                    fixed[a] = true;
                    fixed[b] = true;
                    if tri.seg[k] == Kind::Slit {
                        slit_edges.push((a.min(b), a.max(b)));
                    }
                }
            }
            triangles.push(out);
        }
        if triangles.is_empty() {
            return Err(Error::Geometry("domain produced no triangles".into()));
        }
        let seams = split_seams(&mut nodes, &mut fixed, &mut triangles, &slit_edges);
        TriangleMesh::new(nodes, triangles, fixed, seams)
    }
}

/// Duplicates nodes so that triangles on opposite sides of a slit edge no
/// longer share vertices there. Triangles around each node are grouped by
/// adjacency across non-slit edges; every group beyond the first gets a copy.
fn split_seams(
    nodes: &mut Vec<[f64; 2]>,
    fixed: &mut Vec<bool>,
    triangles: &mut [[usize; 3]],
    slit_edges: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    if slit_edges.is_empty() {
        return Vec::new();
    }
    let slit: std::collections::HashSet<(usize, usize)> = slit_edges.iter().copied().collect();
    let mut on_slit = vec![false; nodes.len()];
    for &(a, b) in slit_edges {
        on_slit[a] = true;
        on_slit[b] = true;
    }
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for &v in tri {
            if on_slit[v] {
                incident.entry(v).or_default().push(t);
            }
        }
    }
    let mut seams = Vec::new();
    let mut keys: Vec<usize> = incident.keys().copied().collect();
    keys.sort_unstable();
    for v in keys {
        let ts = &incident[&v];
        let mut parent: Vec<usize> = (0..ts.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            let mut i = i;
            while p[i] != r {
                let n = p[i];
                p[i] = r;
                i = n;
            }
            r
        }
        // edges (v, w) → triangles sharing them
        let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
        for (li, &t) in ts.iter().enumerate() {
            for &w in &triangles[t] {
                if w != v {
                    by_edge.entry(w).or_default().push(li);
                }
            }
        }
        for (&w, lis) in &by_edge {
            if lis.len() == 2 && !slit.contains(&(v.min(w), v.max(w))) {
                let (ra, rb) = (find(&mut parent, lis[0]), find(&mut parent, lis[1]));
                parent[ra] = rb;
            }
        }
        let mut roots: Vec<usize> = (0..ts.len()).map(|i| find(&mut parent, i)).collect();
        let mut distinct = roots.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let first_root = roots[0];
        for root in distinct.into_iter().filter(|&r| r != first_root) {
            let copy = nodes.len();
            nodes.push(nodes[v]);
            fixed.push(true);
            seams.push((v, copy));
            for (li, r) in roots.iter_mut().enumerate() {
                if *r == root {
                    let t = ts[li];
                    for x in triangles[t].iter_mut() {
                        if *x == v {
                            *x = copy;
                        }
                    }
                }
            }
        }
    }
    seams
}

fn ring_area(r: &[[f64; 2]]) -> f64 {
    let n = r.len();
    0.5 * (0..n).map(|i| r[i][0] * r[(i + 1) % n][1] - r[(i + 1) % n][0] * r[i][1]).sum::<f64>()
}

/// Even–odd test; points on the ring count as unspecified.
pub(crate) fn point_in_ring(p: [f64; 2], r: &[[f64; 2]]) -> bool {
    let mut inside = false;
    let n = r.len();
    for i in 0..n {
        let (a, b) = (r[i], r[(i + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2], tol: f64) -> bool {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let l2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / l2;
    if !(-1e-12..=1.0 + 1e-12).contains(&t) {
        return false;
    }
    let q = [a[0] + t * ab[0], a[1] + t * ab[1]];
    dist(p, q) <= tol
}

fn proper_crossing(s: ([f64; 2], [f64; 2]), e: ([f64; 2], [f64; 2])) -> bool {
    let d1 = orient(e.0, e.1, s.0);
    let d2 = orient(e.0, e.1, s.1);
    let d3 = orient(s.0, s.1, e.0);
    let d4 = orient(s.0, s.1, e.1);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Two boundary edges conflict if they cross, overlap, or touch anywhere
/// other than a shared endpoint.
fn segments_conflict(s: ([f64; 2], [f64; 2]), e: ([f64; 2], [f64; 2]), tol: f64) -> bool {
    if proper_crossing(s, e) {
        return true;
    }
    let shared = |p: [f64; 2]| dist(p, e.0) <= tol || dist(p, e.1) <= tol;
    let shares = shared(s.0) || shared(s.1);
    for (p, (a, b)) in [(s.0, e), (s.1, e), (e.0, s), (e.1, s)] {
        let is_endpoint = dist(p, a) <= tol || dist(p, b) <= tol;
        if !is_endpoint && on_segment(p, a, b, tol) {
            return true;
        }
    }
    if shares {
        // shared endpoint: reject only collinear overlap (backtracking)
        let (sa, sb) = if shared(s.0) { (s.0, s.1) } else { (s.1, s.0) };
        let other = if dist(sa, e.0) <= tol { e.1 } else { e.0 };
        let u = [sb[0] - sa[0], sb[1] - sa[1]];
        let v = [other[0] - sa[0], other[1] - sa[1]];
        let cross = u[0] * v[1] - u[1] * v[0];
        let dot = u[0] * v[0] + u[1] * v[1];
        let both_shared = shared(s.0) && shared(s.1);
        return both_shared || (cross.abs() <= tol * (u[0].hypot(u[1]) + v[0].hypot(v[1])) && dot > 0.0);
    }
    false
}
