//! Dense two-phase simplex method for the small linear programs of the
//! polytope code (Chebyshev centers, redundancy checks).

use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Unbounded,
    Infeasible,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    eps: T,
}

enum Run {
    Optimal,
    Unbounded,
}

impl<T: Real> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v = *v / p;
        }
        self.rhs[r] = self.rhs[r] / p;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f == T::zero() {
                continue;
            }
            for j in 0..self.rows[i].len() {
                let v = self.rows[r][j];
                self.rows[i][j] = self.rows[i][j] - f * v;
            }
            self.rhs[i] = self.rhs[i] - f * self.rhs[r];
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj · z` over the current basis using Bland's rule.
    fn run(&mut self, obj: &[T], allowed: &[bool]) -> Run {
        let ncols = obj.len();
        let max_iter = 50 * (ncols + self.rows.len()) + 1000;
        for _ in 0..max_iter {
            let mut entering = None;
            for j in 0..ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut d = obj[j];
                for (i, &b) in self.basis.iter().enumerate() {
                    d = d - obj[b] * self.rows[i][j];
                }
                if d > self.eps {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Run::Optimal;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > self.eps {
                    let ratio = self.rhs[i] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - self.eps || (ratio <= lr + self.eps && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Run::Unbounded;
            };
            self.pivot(r, c);
        }
        Run::Optimal
    }
}

/// Maximizes `c · x` subject to `A x <= b` with `x` free.
pub fn maximize<T: Real>(c: &[T], a: &[Vec<T>], b: &[T]) -> LpOutcome<T> {
    let n = c.len();
    let m = a.len();
    // columns: x+ (n), x- (n), slacks (m), artificials (one per negative rhs)
    let negative: Vec<usize> = (0..m).filter(|&i| b[i] < T::zero()).collect();
    let n_art = negative.len();
    let ncols = 2 * n + m + n_art;
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .chain(b.iter())
        .fold(T::one(), |acc, v| acc.max(v.abs()));
    let eps = T::pivot_eps() * T::c(10.0) * scale;
    let mut rows = vec![vec![T::zero(); ncols]; m];
    let mut rhs = vec![T::zero(); m];
    let mut basis = vec![0; m];
    let mut art = 0;
    for i in 0..m {
        let sign = if b[i] < T::zero() { -T::one() } else { T::one() };
        for j in 0..n {
            rows[i][j] = sign * a[i][j];
            rows[i][n + j] = -sign * a[i][j];
        }
        rows[i][2 * n + i] = sign;
        rhs[i] = sign * b[i];
        if b[i] < T::zero() {
            let col = 2 * n + m + art;
            rows[i][col] = T::one();
            basis[i] = col;
            art += 1;
        } else {
            basis[i] = 2 * n + i;
        }
    }
    let mut tab = Tableau { rows, rhs, basis, eps };
    let mut allowed = vec![true; ncols];

    if n_art > 0 {
        let mut obj = vec![T::zero(); ncols];
        for k in 0..n_art {
            obj[2 * n + m + k] = -T::one();
        }
        let _ = tab.run(&obj, &allowed);
        let infeas: T = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(&bcol, _)| bcol >= 2 * n + m)
            .fold(T::zero(), |s, (_, &v)| s + v);
        if infeas > eps {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis where possible
        for r in 0..m {
            if tab.basis[r] >= 2 * n + m {
                if let Some(c) = (0..2 * n + m).find(|&j| tab.rows[r][j].abs() > eps) {
                    tab.pivot(r, c);
                }
            }
        }
        for k in 0..n_art {
            allowed[2 * n + m + k] = false;
        }
    }

    let mut obj = vec![T::zero(); ncols];
    for j in 0..n {
        obj[j] = c[j];
        obj[n + j] = -c[j];
    }
    match tab.run(&obj, &allowed) {
        Run::Unbounded => LpOutcome::Unbounded,
        Run::Optimal => {
            let mut z = vec![T::zero(); ncols];
            for (i, &bcol) in tab.basis.iter().enumerate() {
                z[bcol] = tab.rhs[i];
            }
            let x: Vec<T> = (0..n).map(|j| z[j] - z[n + j]).collect();
            let value = c.iter().zip(&x).fold(T::zero(), |s, (&ci, &xi)| s + ci * xi);
            LpOutcome::Optimal { x, value }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_center_of_unit_square() {
        // max r s.t. -x + r <= 0, x + r <= 1, -y + r <= 0, y + r <= 1
        let a = vec![
            vec![-1.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, -1.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ];
        let b: Vec<f64> = vec![0.0, 1.0, 0.0, 1.0];
        match maximize(&[0.0, 0.0, 1.0], &a, &b) {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 0.5).abs() < 1e-12);
                assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_needs_phase_one() {
        // x >= 2 (as -x <= -2), x <= 5; maximize -x -> x = 2
        let out = maximize(&[-1.0], &[vec![-1.0], vec![1.0]], &[-2.0, 5.0]);
        assert_eq!(out, LpOutcome::Optimal { x: vec![2.0], value: -2.0 });
    }

    #[test]
    fn detects_unbounded_and_infeasible() {
        assert_eq!(maximize(&[1.0], &[vec![-1.0]], &[0.0]), LpOutcome::Unbounded);
        assert_eq!(maximize(&[1.0], &[vec![1.0], vec![-1.0]], &[1.0, -2.0]), LpOutcome::Infeasible);
    }
}
