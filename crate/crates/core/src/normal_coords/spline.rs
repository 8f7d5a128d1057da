//! Periodic cubic interpolation of a closed tabulated curve.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::optim::solve_tridiagonal;

/// C² periodic cubic spline through `points[k]` at `s = 2πk/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicSpline {
    points: Vec<[f64; 2]>,
    /// Second derivatives at the knots.
    second: Vec<[f64; 2]>,
    step: f64,
}

/// Solves the cyclic system `m[k-1] + 4 m[k] + m[k+1] = rhs[k]` by
/// Sherman–Morrison around the symmetric tridiagonal part.
fn cyclic_solve(rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    let gamma = -4.0;
    let mut diag = vec![4.0; n];
    diag[0] -= gamma;
    diag[n - 1] -= 1.0 / gamma;
    let off = vec![1.0; n - 1];
    let mut y = rhs.to_vec();
    solve_tridiagonal(&diag, &off, &mut y)?;
    let mut z = vec![0.0; n];
    z[0] = gamma;
    z[n - 1] = 1.0;
    solve_tridiagonal(&diag, &off, &mut z)?;
    let vy = y[0] + y[n - 1] / gamma;
    let vz = z[0] + z[n - 1] / gamma;
    let f = vy / (1.0 + vz);
    Ok(y.iter().zip(&z).map(|(a, b)| a - f * b).collect())
}

impl PeriodicSpline {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        let n = points.len();
        if n < 8 {
            return Err(Error::Geometry(format!("a periodic spline needs at least 8 points, got {n}")));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Geometry("non-finite curve sample".into()));
        }
        let step = TAU / n as f64;
        let mut second = vec![[0.0; 2]; n];
        for d in 0..2 {
            let rhs: Vec<f64> = (0..n)
                .map(|k| {
                    let (a, b, c) = (points[(k + n - 1) % n][d], points[k][d], points[(k + 1) % n][d]);
                    6.0 * (a - 2.0 * b + c) / (step * step)
                })
                .collect();
            for (k, m) in cyclic_solve(&rhs)?.into_iter().enumerate() {
                second[k][d] = m;
            }
        }
        Ok(PeriodicSpline { points, second, step })
    }

    pub fn knots(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Value and first two derivatives at `s` (any real, taken mod 2π).
    pub fn eval(&self, s: f64) -> [[f64; 2]; 3] {
        let n = self.points.len();
        let u = s.rem_euclid(TAU) / self.step;
        let k = (u.floor() as usize).min(n - 1);
        let t = u - k as f64;
        let (j, h) = ((k + 1) % n, self.step);
        let (a, b) = (1.0 - t, t);
        let mut out = [[0.0; 2]; 3];
        for d in 0..2 {
            let (y0, y1) = (self.points[k][d], self.points[j][d]);
            let (m0, m1) = (self.second[k][d], self.second[j][d]);
            out[0][d] = a * y0 + b * y1 + h * h / 6.0 * ((a * a * a - a) * m0 + (b * b * b - b) * m1);
            out[1][d] = (y1 - y0) / h + h / 6.0 * (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1);
            out[2][d] = a * m0 + b * m1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_and_tracks_a_circle() {
        let n = 64;
        let pts: Vec<[f64; 2]> = (0..n).map(|k| {
            let s = TAU * k as f64 / n as f64;
            [s.cos(), s.sin()]
        }).collect();
        let sp = PeriodicSpline::new(pts.clone()).unwrap();
        for (k, p) in pts.iter().enumerate() {
            let v = sp.eval(TAU * k as f64 / n as f64)[0];
            assert!((v[0] - p[0]).abs() < 1e-14 && (v[1] - p[1]).abs() < 1e-14);
        }
        for i in 0..100 {
            let s = 0.0637 * i as f64;
            let [x, dx, ddx] = sp.eval(s);
            assert!((x[0] - s.cos()).abs() < 1e-6 && (x[1] - s.sin()).abs() < 1e-6);
            assert!((dx[0] + s.sin()).abs() < 1e-4 && (dx[1] - s.cos()).abs() < 1e-4);
            assert!((ddx[0] + s.cos()).abs() < 1e-2 && (ddx[1] + s.sin()).abs() < 1e-2);
        }
    }

    #[test]
    fn derivatives_are_continuous_across_knots() {
        let pts: Vec<[f64; 2]> = (0..10).map(|k| [k as f64 % 3.0, (k * k) as f64 % 7.0]).collect();
        let sp = PeriodicSpline::new(pts).unwrap();
        let h = TAU / 10.0;
        for k in 0..10 {
            let s = h * k as f64;
            let (l, r) = (sp.eval(s - 1e-9), sp.eval(s + 1e-9));
            for d in 0..2 {
                assert!((l[1][d] - r[1][d]).abs() < 1e-6);
                assert!((l[2][d] - r[2][d]).abs() < 1e-5);
            }
        }
    }
}
