//! Strictly convex C² planar bodies in normal coordinates `Φ(s, t) = γ(s) +
//! t ν(s)`, the cut distance `l(s)`, and checks built on them.

mod spline;

use std::f64::consts::TAU;

pub use spline::PeriodicSpline;

use crate::constants::numeric::{mu_p_numeric, OneDimOptions, Weight1D};
use crate::constants::{pi_p, ExponentPair};
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::report::{Direction, InequalityReport};
use crate::spectral::{mesh_polytope, minimize_lambda, LambdaOptions};

/// Boundary samples used for nearest-point searches.
pub const BOUNDARY_SAMPLES: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Curve {
    Ellipse { a: f64, b: f64, center: [f64; 2] },
    Spline(PeriodicSpline),
}

/// A strictly convex body bounded by a counterclockwise C² curve `γ` on
/// `[0, 2π)`.
#[derive(Clone, Debug)]
pub struct SmoothBody2D {
    curve: Curve,
    samples: Vec<[f64; 2]>,
    centroid: [f64; 2],
    extent: f64,
}

/// Nearest boundary point of a query point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryProjection {
    /// `d_Ω(x)`; zero outside.
    pub distance: f64,
    /// Euclidean distance to the boundary, inside or out.
    pub gap: f64,
    pub s: f64,
    pub outside: bool,
}

/// Normal chart at one boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalChart {
    pub s: f64,
    pub point: [f64; 2],
    pub normal: [f64; 2],
    pub curvature: f64,
    /// `l(s)`.
    pub cut: f64,
    /// False when the cut bisection never accepted a positive depth.
    pub certified: bool,
}

impl NormalChart {
    /// Jacobian weight `1 − t κ(s)`.
    pub fn weight(&self, t: f64) -> f64 {
        1.0 - t * self.curvature
    }

    pub fn map(&self, t: f64) -> [f64; 2] {
        [self.point[0] + t * self.normal[0], self.point[1] + t * self.normal[1]]
    }
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl SmoothBody2D {
    pub fn circle(radius: f64) -> Result<Self> {
        Self::ellipse(radius, radius)
    }

    /// `(a cos s, b sin s)`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::Geometry(format!("ellipse semi-axes must be positive, got {a}, {b}")));
        }
        Self::build(Curve::Ellipse { a, b, center: [0.0, 0.0] })
    }

    /// Body through tabulated counterclockwise boundary points, interpolated
    /// by a periodic cubic spline.
    pub fn from_points(points: Vec<[f64; 2]>) -> Result<Self> {
        Self::build(Curve::Spline(PeriodicSpline::new(points)?))
    }

    fn build(curve: Curve) -> Result<Self> {
        let samples: Vec<[f64; 2]> =
            (0..BOUNDARY_SAMPLES).map(|k| Self::eval_curve(&curve, TAU * k as f64 / BOUNDARY_SAMPLES as f64)[0]).collect();
        let n = samples.len() as f64;
        let centroid = [samples.iter().map(|p| p[0]).sum::<f64>() / n, samples.iter().map(|p| p[1]).sum::<f64>() / n];
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &samples {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        let extent = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
        let body = SmoothBody2D { curve, samples, centroid, extent };
        for k in 0..256 {
            let s = TAU * (k as f64 + 0.25) / 256.0;
            let kappa = body.curvature(s)?;
            if !(kappa > 0.0) {
                return Err(Error::Geometry(format!("curve is not strictly convex and counterclockwise at s = {s} (κ = {kappa})")));
            }
        }
        let close = sub(body.point(0.0), body.point(TAU * (1.0 - 1e-15)));
        if close[0].hypot(close[1]) > 1e-9 * extent.max(1.0) {
            return Err(Error::Geometry("curve is not closed".into()));
        }
        for k in 0..16 {
            let s = TAU * k as f64 / 16.0;
            if dot(body.inward_normal(s)?, sub(centroid, body.point(s))) <= 0.0 {
                return Err(Error::Geometry("inward normal points away from the interior".into()));
            }
        }
        Ok(body)
    }

    fn eval_curve(curve: &Curve, s: f64) -> [[f64; 2]; 3] {
        match curve {
            Curve::Ellipse { a, b, center } => {
                let (sn, cs) = s.sin_cos();
                [[center[0] + a * cs, center[1] + b * sn], [-a * sn, b * cs], [-a * cs, -b * sn]]
            }
            Curve::Spline(sp) => sp.eval(s),
        }
    }

    /// `[γ(s), γ'(s), γ''(s)]`.
    pub fn jet(&self, s: f64) -> [[f64; 2]; 3] {
        Self::eval_curve(&self.curve, s)
    }

    pub fn point(&self, s: f64) -> [f64; 2] {
        self.jet(s)[0]
    }

    pub fn speed(&self, s: f64) -> f64 {
        let d = self.jet(s)[1];
        d[0].hypot(d[1])
    }

    /// Signed curvature `(γ' × γ'') / |γ'|³`.
    pub fn curvature(&self, s: f64) -> Result<f64> {
        let [_, d1, d2] = self.jet(s);
        let v = d1[0].hypot(d1[1]);
        if v < 1e-12 {
            return Err(Error::Geometry(format!("degenerate parametrization at s = {s}")));
        }
        Ok(cross(d1, d2) / (v * v * v))
    }

    /// Unit normal pointing into the body.
    pub fn inward_normal(&self, s: f64) -> Result<[f64; 2]> {
        let d1 = self.jet(s)[1];
        let v = d1[0].hypot(d1[1]);
        if v < 1e-12 {
            return Err(Error::Geometry(format!("degenerate parametrization at s = {s}")));
        }
        Ok([-d1[1] / v, d1[0] / v])
    }

    /// Diagonal of the bounding box; bounds the diameter from above.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn centroid(&self) -> [f64; 2] {
        self.centroid
    }

    /// Exact for ellipses, otherwise by Green's formula on a fine midpoint rule.
    pub fn area(&self) -> f64 {
        match self.curve {
            Curve::Ellipse { a, b, .. } => std::f64::consts::PI * a * b,
            Curve::Spline(_) => {
                let n = 8 * BOUNDARY_SAMPLES;
                (0..n)
                    .map(|k| {
                        let [p, d, _] = self.jet(TAU * (k as f64 + 0.5) / n as f64);
                        0.5 * cross(p, d)
                    })
                    .sum::<f64>()
                    * TAU
                    / n as f64
            }
        }
    }

    /// Nearest boundary point by dense sampling and safeguarded Newton
    /// refinement of the few best local minima.
    pub fn project(&self, x: [f64; 2]) -> BoundaryProjection {
        let n = self.samples.len();
        let d2: Vec<f64> = self.samples.iter().map(|p| {
            let v = sub(*p, x);
            dot(v, v)
        }).collect();
        let mut minima: Vec<usize> = (0..n).filter(|&k| d2[k] <= d2[(k + n - 1) % n] && d2[k] <= d2[(k + 1) % n]).collect();
        minima.sort_by(|&a, &b| d2[a].total_cmp(&d2[b]));
        minima.truncate(4);
        let h = TAU / n as f64;
        let mut best = (f64::INFINITY, 0.0);
        for k in minima {
            let s = self.refine(x, h * k as f64 - h, h * k as f64 + h);
            let v = sub(self.point(s), x);
            let g = dot(v, v);
            if g < best.0 {
                best = (g, s);
            }
        }
        let (g, s) = best;
        let gap = g.sqrt();
        let nu = self.inward_normal(s).unwrap_or([0.0, 0.0]);
        let outside = dot(sub(x, self.point(s)), nu) < 0.0;
        BoundaryProjection { distance: if outside { 0.0 } else { gap }, gap, s: s.rem_euclid(TAU), outside }
    }

    /// Local minimizer of `|γ(u) − x|²/2` on `[lo, hi]`.
    fn refine(&self, x: [f64; 2], mut lo: f64, mut hi: f64) -> f64 {
        let deriv = |u: f64| {
            let [p, d1, d2] = self.jet(u);
            let v = sub(p, x);
            (dot(v, d1), dot(d1, d1) + dot(v, d2))
        };
        if deriv(lo).0 > 0.0 || deriv(hi).0 < 0.0 {
            return 0.5 * (lo + hi);
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..100 {
            let (g, gg) = deriv(u);
            if g == 0.0 {
                return u;
            }
            if g > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let newton = u - g / gg;
            u = if gg > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 * (1.0 + u.abs()) {
                break;
            }
            if (newton - u).abs() < 1e-16 && gg > 0.0 {
                break;
            }
        }
        u
    }

    /// `d_Ω(x)`.
    pub fn distance(&self, x: [f64; 2]) -> f64 {
        self.project(x).distance
    }

    /// Normal chart at `s` with the cut distance found by bisection to `tol`:
    /// the largest `t` with `d_Ω(γ(s) + t ν(s)) = t`.
    pub fn chart(&self, s: f64, tol: f64) -> Result<NormalChart> {
        if !(tol > 0.0) {
            return Err(Error::Precondition(format!("cut tolerance must be positive, got {tol}")));
        }
        let point = self.point(s);
        let normal = self.inward_normal(s)?;
        let curvature = self.curvature(s)?;
        // an absolute slack at rounding level of the distance evaluation
        let slack = 1e-13 * self.extent;
        let accepts = |t: f64| {
            let q = self.project([point[0] + t * normal[0], point[1] + t * normal[1]]);
            !q.outside && q.distance >= t - slack
        };
        let (mut lo, mut hi) = (0.0, self.extent);
        let mut certified = false;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if accepts(mid) {
                lo = mid;
                certified = true;
            } else {
                hi = mid;
            }
        }
        let cut = if certified { 0.5 * (lo + hi) } else { 0.0 };
        Ok(NormalChart { s, point, normal, curvature, cut, certified })
    }

    pub fn cut_distance(&self, s: f64, tol: f64) -> Result<f64> {
        Ok(self.chart(s, tol)?.cut)
    }

    /// `r_Ω = max_s l(s)`: the deepest point lies on the cut locus.
    pub fn inradius(&self, tol: f64) -> Result<(f64, [f64; 2])> {
        let n = 256;
        let h = TAU / n as f64;
        let cuts: Vec<f64> = (0..n).map(|k| self.cut_distance(h * k as f64, tol)).collect::<Result<_>>()?;
        let k = (0..n).max_by(|&a, &b| cuts[a].total_cmp(&cuts[b])).expect("non-empty");
        // golden-section polish around the best sample
        let (mut a, mut b) = (h * k as f64 - h, h * k as f64 + h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |s: f64| self.cut_distance(s, tol);
        let (mut c, mut d) = (b - g * (b - a), a + g * (b - a));
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..30 {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d)?;
            }
        }
        let (s, r) = if fc >= fd { (c, fc) } else { (d, fd) };
        let (s, r) = if r >= cuts[k] { (s, r) } else { (h * k as f64, cuts[k]) };
        let chart = self.chart(s, tol)?;
        Ok((r, chart.map(r)))
    }

    /// Inscribed polygon through `γ(2πk/n)`.
    pub fn inscribed_polygon(&self, n: usize) -> Result<Polytope<f64>> {
        if n < 3 {
            return Err(Error::Precondition("an inscribed polygon needs at least 3 vertices".into()));
        }
        let v: Vec<Vec<f64>> = (0..n).map(|k| self.point(TAU * k as f64 / n as f64).to_vec()).collect();
        Polytope::from_vertices(&v)
    }
}

/// `∫_Ω f` in normal coordinates: midpoint rule in `s` and in `t ∈ (0,
/// l(s))` of `f(Φ(s,t)) (1 − t κ(s)) |γ'(s)|`.
pub fn cov_integral(body: &SmoothBody2D, f: impl Fn([f64; 2]) -> f64, n_s: usize, n_t: usize, tol: f64) -> Result<f64> {
    if n_s == 0 || n_t == 0 {
        return Err(Error::Precondition("quadrature sizes must be positive".into()));
    }
    let hs = TAU / n_s as f64;
    let mut total = 0.0;
    for i in 0..n_s {
        let s = hs * (i as f64 + 0.5);
        let chart = body.chart(s, tol)?;
        let ht = chart.cut / n_t as f64;
        let speed = body.speed(s);
        let inner: f64 = (0..n_t)
            .map(|j| {
                let t = ht * (j as f64 + 0.5);
                f(chart.map(t)) * chart.weight(t)
            })
            .sum();
        total += inner * ht * speed * hs;
    }
    Ok(total)
}

/// Direct oracle `∫_Ω f` over the star map `x = c + ρ(γ(s) − c)`, midpoint
/// rule in `(ρ, s)`; independent of normal coordinates.
pub fn star_integral(body: &SmoothBody2D, f: impl Fn([f64; 2]) -> f64, n: usize) -> f64 {
    let c = body.centroid();
    let (hs, hr) = (TAU / n as f64, 1.0 / n as f64);
    let mut total = 0.0;
    for i in 0..n {
        let [p, d1, _] = body.jet(hs * (i as f64 + 0.5));
        let v = sub(p, c);
        let jac = cross(v, d1).abs();
        for j in 0..n {
            let rho = hr * (j as f64 + 0.5);
            total += f([c[0] + rho * v[0], c[1] + rho * v[1]]) * rho * jac;
        }
    }
    total * hs * hr
}

/// Monotone-weight comparison along one normal: `μ_p(1, (0, l)) ≤ μ_p(1 −
/// tκ, (0, l)) + 1e-3 μ_p(1, (0, l))`.
pub fn weighted_quotient_check(body: &SmoothBody2D, s: f64, p: f64, n: usize, opts: &OneDimOptions) -> Result<InequalityReport> {
    let chart = body.chart(s, 1e-10)?;
    if !chart.certified {
        return Err(Error::Precondition(format!("no cut distance resolved at s = {s}")));
    }
    let kappa = chart.curvature;
    let w = Weight1D::from_fn(chart.cut, move |t| 1.0 - t * kappa, true)?;
    let weighted = mu_p_numeric(&w, p, n, opts)?;
    let unit = mu_p_numeric(&Weight1D::unit(chart.cut)?, p, n, opts)?;
    let slack = 1e-3 * unit.value;
    Ok(InequalityReport::new(
        format!("weighted quotient s={s:.4} p={p}"),
        unit.value,
        Direction::LessEq,
        weighted.value,
        slack / weighted.value,
        "μ_p(1, (0, l(s)))",
        "μ_p(1 − tκ(s), (0, l(s)))",
    )
    .with_detail("cut", chart.cut)
    .with_detail("curvature", kappa))
}

/// `(π_p/2)^p / r^p ≤ λ_p` of an inscribed `sides`-gon meshed at `h`; the
/// polygon lies inside the body, so its bound also bounds the body.
pub fn hp_smooth_check(body: &SmoothBody2D, p: f64, sides: usize, h: f64, opts: &LambdaOptions) -> Result<InequalityReport> {
    let (r, _) = body.inradius(1e-10)?;
    let left = (pi_p(p)? / 2.0).powf(p) / r.powf(p);
    let poly = body.inscribed_polygon(sides)?;
    let mesh = mesh_polytope(&poly, h)?;
    let est = minimize_lambda(&mesh, &ExponentPair::diagonal(p)?, opts)?;
    Ok(InequalityReport::new(
        format!("smooth hersch-protter p={p}"),
        left,
        Direction::LessEq,
        est.lambda_upper,
        1e-9,
        "(π_p/2)^p / r^p, r = max l(s)",
        format!("P1 quotient on inscribed {sides}-gon, {} nodes", mesh.n_nodes()),
    )
    .with_detail("inradius", r)
    .with_detail("h", h))
}
