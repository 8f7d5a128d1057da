//! Small dense solves for polytope construction.

use crate::scalar::Real;

/// Solves `A x = b` by Gaussian elimination with partial pivoting; `None`
/// when a pivot falls below `Real::pivot_eps()` relative to the row scale.
pub(crate) fn solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(T::zero(), |m, v| m.max(v.abs()))
        .max(T::min_positive_value());
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))?;
        if a[piv][col].abs() <= T::pivot_eps() * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s = s - a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Rank of the vectors `rows` (full pivoting, absolute tolerance `tol`).
pub(crate) fn rank<T: Real>(mut rows: Vec<Vec<T>>, tol: T) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    let mut used_cols = vec![false; ncols];
    while r < rows.len() {
        let mut best = (T::zero(), 0, 0);
        for (i, row) in rows.iter().enumerate().skip(r) {
            for (j, &v) in row.iter().enumerate() {
                if !used_cols[j] && v.abs() > best.0 {
                    best = (v.abs(), i, j);
                }
            }
        }
        if best.0 <= tol {
            break;
        }
        let (_, pi, pj) = best;
        rows.swap(r, pi);
        used_cols[pj] = true;
        for i in r + 1..rows.len() {
            let f = rows[i][pj] / rows[r][pj];
            for j in 0..ncols {
                let v = rows[r][j];
                rows[i][j] = rows[i][j] - f * v;
            }
        }
        r += 1;
    }
    r
}

/// Affine rank of a point set: rank of `p_i - p_0`.
pub(crate) fn affine_rank<T: Real>(points: &[&[T]], tol: T) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let rows = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(&a, &b)| a - b).collect())
        .collect();
    rank(rows, tol)
}

pub(crate) fn det<T: Real>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    let mut d = T::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("non-empty");
        if a[piv][col] == T::zero() {
            return T::zero();
        }
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d = d * a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
        }
    }
    d
}

pub(crate) fn cross3<T: Real>(a: &[T], b: &[T]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
