//! Exact integration of powers of affine functions over simplices.
//!
//! For an `N`-simplex `T` and an affine `l >= 0` taking the values
//! `v_0, ..., v_N` at the vertices,
//!
//! ```text
//! ∫_T l^α dx = N! |T| Δ[v_0, ..., v_N] g,      g(t) = t^(α+N) / ((α+1)···(α+N))
//! ```
//!
//! where `Δ` is the divided difference (Hermite–Genocchi). Repeating the node
//! `v_j` once more gives the moment against the barycentric coordinate `λ_j`,
//! which is what the exact gradients of `∫|u|^q` need. For integer `α` the
//! same integral is `|T| h_α(v) / C(α+N, N)` with `h_α` the complete
//! homogeneous symmetric polynomial; both routes are exposed so one can check
//! the other.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative node spread below which a divided-difference entry is evaluated
/// from a Taylor expansion instead of the recursion.
const TAYLOR_SPREAD: f64 = 0.1;
const TAYLOR_MAX_TERMS: usize = 200;

/// `g(t) = coef · t^beta` on `t >= 0`.
#[derive(Clone, Copy, Debug)]
struct PowerFn<T> {
    coef: T,
    beta: T,
}

impl<T: Real> PowerFn<T> {
    fn eval(&self, t: T) -> T {
        self.coef * pow0(t, self.beta)
    }

    /// `g^(k)(t) / k!`
    fn taylor_coef(&self, t: T, k: usize) -> T {
        let mut binom = T::one();
        for i in 0..k {
            binom = binom * (self.beta - T::from_usize_lossy(i)) / T::from_usize_lossy(i + 1);
        }
        if binom == T::zero() {
            return T::zero();
        }
        self.coef * binom * pow0(t, self.beta - T::from_usize_lossy(k))
    }
}

/// `t^e` with the convention `0^0 = 1`, for `t >= 0`.
fn pow0<T: Real>(t: T, e: T) -> T {
    if t == T::zero() {
        if e == T::zero() {
            T::one()
        } else if e > T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        t.powf(e)
    }
}

/// Divided difference of `g` over the nodes (sorted ascending, repeats allowed).
fn divided_difference<T: Real>(nodes: &[T], g: &PowerFn<T>) -> T {
    let n = nodes.len();
    // table[i][j - i] holds Δ[x_i..x_j]
    let mut table = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        table[i][0] = g.eval(nodes[i]);
    }
    let tau = T::c(TAYLOR_SPREAD);
    for span in 1..n {
        for i in 0..n - span {
            let j = i + span;
            let lo = nodes[i];
            let hi = nodes[j];
            let mid = (lo + hi) * T::c(0.5);
            table[i][span] = if hi - lo <= tau * mid {
                taylor_divided_difference(&nodes[i..=j], mid, g)
            } else {
                (table[i + 1][span - 1] - table[i][span - 1]) / (hi - lo)
            };
        }
    }
    table[0][n - 1]
}

/// `Δ[x_0..x_m] g = Σ_{k>=m} g^(k)(c)/k! · h_{k-m}(x - c)`.
fn taylor_divided_difference<T: Real>(nodes: &[T], center: T, g: &PowerFn<T>) -> T {
    let m = nodes.len() - 1;
    let d: Vec<T> = nodes.iter().map(|&x| x - center).collect();
    if d.iter().all(|&x| x == T::zero()) {
        return g.taylor_coef(center, m);
    }
    // h[i] = h_r(d_0..d_i), advanced one degree at a time
    let mut h = vec![T::one(); m + 1];
    let mut sum = g.taylor_coef(center, m);
    let mut small_run = 0;
    for r in 1..TAYLOR_MAX_TERMS {
        let mut prev = T::zero();
        for (i, &di) in d.iter().enumerate() {
            // h_r(d_0..d_i) = h_r(d_0..d_{i-1}) + d_i h_{r-1}(d_0..d_i)
            let hi = prev + di * h[i];
            h[i] = hi;
            prev = hi;
        }
        let term = g.taylor_coef(center, m + r) * h[m];
        sum = sum + term;
        if term.abs() <= T::epsilon() * T::c(1e-2) * sum.abs() {
            small_run += 1;
            if small_run >= 2 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    sum
}

fn check_inputs<T: Real>(values: &[T], alpha: T) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Domain("simplex needs at least one vertex value".into()));
    }
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::UnsupportedExponent(format!("alpha = {alpha} (need alpha >= 0)")));
    }
    if let Some(v) = values.iter().find(|v| !(**v >= T::zero()) || !v.is_finite()) {
        return Err(Error::Domain(format!("negative or non-finite vertex value {v}")));
    }
    Ok(())
}

fn sorted<T: Real>(values: &[T]) -> Vec<T> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    v
}

/// `∫_T l^α` by divided differences; `measure` is the volume of `T` and
/// `values` the vertex values (`N + 1` of them).
pub fn linear_power_integral_dd<T: Real>(measure: T, values: &[T], alpha: T) -> Result<T> {
    check_inputs(values, alpha)?;
    let n = values.len() - 1;
    let mut coef = T::one();
    for k in 1..=n {
        coef = coef / (alpha + T::from_usize_lossy(k));
    }
    let g = PowerFn { coef, beta: alpha + T::from_usize_lossy(n) };
    let fact = factorial::<T>(n);
    Ok(fact * measure * divided_difference(&sorted(values), &g))
}

/// `∫_T l^α` for integer `α` via `h_α`.
pub fn linear_power_integral_sym<T: Real>(measure: T, values: &[T], alpha: u32) -> Result<T> {
    check_inputs(values, T::from_u32(alpha).unwrap_or_else(T::infinity))?;
    let n = values.len() - 1;
    let a = alpha as usize;
    // h[k] = h_k(v_0..v_i) as variables are added
    let mut h = vec![T::zero(); a + 1];
    h[0] = T::one();
    for &v in values {
        for k in 1..=a {
            h[k] = h[k] + v * h[k - 1];
        }
    }
    // 1 / C(α+N, N)
    let mut inv_binom = T::one();
    for k in 1..=n {
        inv_binom = inv_binom * T::from_usize_lossy(k) / T::from_usize_lossy(a + k);
    }
    Ok(measure * h[a] * inv_binom)
}

/// `∫_T l^α`, choosing the symmetric-polynomial form for small integer `α`.
pub fn linear_power_integral<T: Real>(measure: T, values: &[T], alpha: T) -> Result<T> {
    if alpha >= T::zero() && alpha <= T::c(64.0) && alpha == alpha.round() {
        let a = alpha.to_u32().expect("small integer");
        linear_power_integral_sym(measure, values, a)
    } else {
        linear_power_integral_dd(measure, values, alpha)
    }
}

/// `∫_T l^α λ_j` where `λ_j` is the barycentric coordinate of vertex `j`.
pub fn linear_power_weighted<T: Real>(measure: T, values: &[T], alpha: T, j: usize) -> Result<T> {
    check_inputs(values, alpha)?;
    if j >= values.len() {
        return Err(Error::Precondition(format!("vertex index {j} out of range")));
    }
    let n = values.len() - 1;
    let mut coef = T::one();
    for k in 1..=n + 1 {
        coef = coef / (alpha + T::from_usize_lossy(k));
    }
    let g = PowerFn { coef, beta: alpha + T::from_usize_lossy(n + 1) };
    let mut nodes = values.to_vec();
    nodes.push(values[j]);
    let nodes = sorted(&nodes);
    Ok(factorial::<T>(n) * measure * divided_difference(&nodes, &g))
}

fn factorial<T: Real>(n: usize) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k))
}

/// One single-signed piece of a simplex cut along the zero set of an affine
/// function: its volume fraction, the barycentric coordinates (w.r.t. the
/// parent) of its vertices, and `|u|` at those vertices.
#[derive(Clone, Debug)]
pub struct SignedPiece<T, const K: usize> {
    pub fraction: T,
    pub bary: [[T; K]; K],
    pub abs_values: [T; K],
    pub sign: T,
}

/// Cut a segment with end values `u` at the zero of the interpolant.
pub fn split_segment<T: Real>(u: [T; 2]) -> Vec<SignedPiece<T, 2>> {
    let z = T::zero();
    let o = T::one();
    if (u[0] >= z && u[1] >= z) || (u[0] <= z && u[1] <= z) {
        let sign = if u[0] + u[1] >= z { o } else { -o };
        return vec![SignedPiece {
            fraction: o,
            bary: [[o, z], [z, o]],
            abs_values: [u[0].abs(), u[1].abs()],
            sign,
        }];
    }
    let s = u[0] / (u[0] - u[1]);
    vec![
        SignedPiece {
            fraction: s,
            bary: [[o, z], [o - s, s]],
            abs_values: [u[0].abs(), z],
            sign: u[0].signum(),
        },
        SignedPiece {
            fraction: o - s,
            bary: [[o - s, s], [z, o]],
            abs_values: [z, u[1].abs()],
            sign: u[1].signum(),
        },
    ]
}

/// Cut a triangle with vertex values `u` along the zero line of the interpolant.
pub fn split_triangle<T: Real>(u: [T; 3]) -> Vec<SignedPiece<T, 3>> {
    let z = T::zero();
    let o = T::one();
    let all_nonneg = u.iter().all(|&x| x >= z);
    let all_nonpos = u.iter().all(|&x| x <= z);
    if all_nonneg || all_nonpos {
        let sign = if all_nonneg { o } else { -o };
        return vec![SignedPiece {
            fraction: o,
            bary: [[o, z, z], [z, o, z], [z, z, o]],
            abs_values: [u[0].abs(), u[1].abs(), u[2].abs()],
            sign,
        }];
    }
    // the vertex whose sign differs from the other two (zeros side with the pair)
    let lone = (0..3)
        .find(|&i| {
            let a = u[(i + 1) % 3];
            let b = u[(i + 2) % 3];
            (u[i] > z && a <= z && b <= z) || (u[i] < z && a >= z && b >= z)
        })
        .expect("mixed signs imply a lone vertex");
    let i1 = (lone + 1) % 3;
    let i2 = (lone + 2) % 3;
    let s1 = u[lone] / (u[lone] - u[i1]);
    let s2 = u[lone] / (u[lone] - u[i2]);
    let e = |i: usize| {
        let mut b = [z; 3];
        b[i] = o;
        b
    };
    let mut z1 = [z; 3];
    z1[lone] = o - s1;
    z1[i1] = s1;
    let mut z2 = [z; 3];
    z2[lone] = o - s2;
    z2[i2] = s2;
    let other_sign = -u[lone].signum();
    vec![
        SignedPiece {
            fraction: s1 * s2,
            bary: [e(lone), z1, z2],
            abs_values: [u[lone].abs(), z, z],
            sign: u[lone].signum(),
        },
        SignedPiece {
            fraction: o - s1,
            bary: [z1, e(i1), e(i2)],
            abs_values: [z, u[i1].abs(), u[i2].abs()],
            sign: other_sign,
        },
        SignedPiece {
            fraction: s1 * (o - s2),
            bary: [z1, e(i2), z2],
            abs_values: [z, u[i2].abs(), z],
            sign: other_sign,
        },
    ]
}

fn abs_power_pieces<T: Real, const K: usize>(measure: T, pieces: &[SignedPiece<T, K>], q: T) -> Result<T> {
    let mut total = T::zero();
    for piece in pieces {
        if piece.fraction > T::zero() {
            total = total + linear_power_integral(measure * piece.fraction, &piece.abs_values, q)?;
        }
    }
    Ok(total)
}

/// `∂/∂u_j ∫|u|^q = q ∫ |u|^(q-1) sign(u) λ_j`, summed over pieces.
fn abs_power_grad_pieces<T: Real, const K: usize>(
    measure: T,
    pieces: &[SignedPiece<T, K>],
    q: T,
) -> Result<[T; K]> {
    let mut grad = [T::zero(); K];
    for piece in pieces {
        if piece.fraction <= T::zero() {
            continue;
        }
        let m = measure * piece.fraction;
        for (local, bary) in piece.bary.iter().enumerate() {
            let w = linear_power_weighted(m, &piece.abs_values, q - T::one(), local)?;
            for j in 0..K {
                grad[j] = grad[j] + q * piece.sign * bary[j] * w;
            }
        }
    }
    Ok(grad)
}

/// `∫ |u|^q` over a segment of length `len` with signed end values.
pub fn abs_power_segment<T: Real>(len: T, u: [T; 2], q: T) -> Result<T> {
    abs_power_pieces(len, &split_segment(u), q)
}

/// Gradient of [`abs_power_segment`] with respect to the end values (`q >= 1`).
pub fn abs_power_segment_grad<T: Real>(len: T, u: [T; 2], q: T) -> Result<[T; 2]> {
    abs_power_grad_pieces(len, &split_segment(u), q)
}

/// `∫ |u|^q` over a triangle of area `area` with signed vertex values.
pub fn abs_power_triangle<T: Real>(area: T, u: [T; 3], q: T) -> Result<T> {
    abs_power_pieces(area, &split_triangle(u), q)
}

/// Gradient of [`abs_power_triangle`] with respect to the vertex values (`q >= 1`).
pub fn abs_power_triangle_grad<T: Real>(area: T, u: [T; 3], q: T) -> Result<[T; 3]> {
    abs_power_grad_pieces(area, &split_triangle(u), q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn unit_segment_square() {
        assert!(close(linear_power_integral(1.0, &[0.0, 1.0], 2.0).unwrap(), 1.0 / 3.0, 1e-15));
        assert!(close(linear_power_integral_dd(1.0, &[0.0, 1.0], 2.0).unwrap(), 1.0 / 3.0, 1e-14));
    }

    #[test]
    fn right_triangle_y_squared() {
        // ∫_0^1 y^2 (1 - y) dy
        let v = [0.0, 0.0, 1.0];
        assert!(close(linear_power_integral(0.5, &v, 2.0).unwrap(), 1.0 / 12.0, 1e-15));
        assert!(close(linear_power_integral_dd(0.5, &v, 2.0).unwrap(), 1.0 / 12.0, 1e-14));
    }

    #[test]
    fn constant_values_give_c_to_alpha_times_volume() {
        for &alpha in &[0.0, 0.5, 1.0, 2.0, 3.7] {
            for n in 1..=3 {
                let v = vec![0.7; n + 1];
                let got = linear_power_integral_dd(0.25, &v, alpha).unwrap();
                assert!(close(got, 0.25 * 0.7f64.powf(alpha), 1e-14), "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn near_confluent_nodes_are_stable() {
        // values that differ by 1e-11 must agree with the exactly confluent case
        let exact = linear_power_integral_dd(1.0 / 6.0, &[0.3, 0.3, 0.3, 0.9], 2.5).unwrap();
        let near = linear_power_integral_dd(1.0 / 6.0, &[0.3, 0.3 + 1e-11, 0.3 - 1e-11, 0.9], 2.5).unwrap();
        assert!(close(near, exact, 1e-10), "{near} vs {exact}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(linear_power_integral(1.0, &[0.0, -1.0], 2.0), Err(Error::Domain(_))));
        assert!(matches!(
            linear_power_integral(1.0, &[0.0, 1.0], -1.0),
            Err(Error::UnsupportedExponent(_))
        ));
    }

    /// Brute-force quadrature over the standard triangle for signed fields.
    fn brute_abs_power(u: [f64; 3], q: f64, n: usize) -> f64 {
        // midpoint rule on a uniform split into n^2 sub-triangles
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n - i {
                let pts = [
                    [(i as f64 + 1.0 / 3.0) * h, (j as f64 + 1.0 / 3.0) * h],
                ];
                for p in pts {
                    let val = u[0] * (1.0 - p[0] - p[1]) + u[1] * p[0] + u[2] * p[1];
                    s += val.abs().powf(q) * 0.5 * h * h;
                }
                if i + j + 1 < n {
                    let p = [(i as f64 + 2.0 / 3.0) * h, (j as f64 + 2.0 / 3.0) * h];
                    let val = u[0] * (1.0 - p[0] - p[1]) + u[1] * p[0] + u[2] * p[1];
                    s += val.abs().powf(q) * 0.5 * h * h;
                }
            }
        }
        s
    }

    #[test]
    fn sign_changing_triangle_matches_brute_force() {
        let u = [1.0, -0.5, 0.3];
        for &q in &[1.0, 1.5, 2.0, 3.0] {
            let exact = abs_power_triangle(0.5, u, q).unwrap();
            let brute = brute_abs_power(u, q, 600);
            assert!(close(exact, brute, 2e-5), "q={q}: {exact} vs {brute}");
        }
    }

    #[test]
    fn split_fractions_sum_to_one() {
        let pieces = split_triangle([0.4, -1.0, 2.0]);
        let total: f64 = pieces.iter().map(|p| p.fraction).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let u = [0.8, -0.3, 0.5];
        for &q in &[1.5, 2.0, 3.0] {
            let g = abs_power_triangle_grad(0.7, u, q).unwrap();
            for j in 0..3 {
                let h = 1e-6;
                let mut up = u;
                up[j] += h;
                let mut dn = u;
                dn[j] -= h;
                let fd = (abs_power_triangle(0.7, up, q).unwrap() - abs_power_triangle(0.7, dn, q).unwrap()) / (2.0 * h);
                assert!(close(g[j], fd, 1e-6), "q={q} j={j}: {} vs {fd}", g[j]);
            }
        }
        let g = abs_power_segment_grad(2.0, [0.4, -0.1], 2.0).unwrap();
        // d/da ∫ u^2 = 2∫ u φ_a = 2 * len * (2a + b)/6
        assert!(close(g[0], 2.0 * 2.0 * (0.8 - 0.1) / 6.0, 1e-12));
    }

    proptest! {
        #[test]
        fn dd_equals_symmetric_kernel_for_integer_alpha(
            vals in proptest::collection::vec(0.0f64..2.0, 2..=4),
            alpha in 0u32..7,
        ) {
            let a = linear_power_integral_sym(1.0, &vals, alpha).unwrap();
            let b = linear_power_integral_dd(1.0, &vals, alpha as f64).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-300), "{} vs {}", a, b);
        }

        #[test]
        fn weighted_moments_sum_to_plain_moment(
            vals in proptest::collection::vec(0.0f64..2.0, 2..=4),
            alpha in 0.0f64..4.0,
        ) {
            // Σ_j λ_j = 1
            let total = linear_power_integral_dd(1.0, &vals, alpha).unwrap();
            let parts: f64 = (0..vals.len()).map(|j| linear_power_weighted(1.0, &vals, alpha, j).unwrap()).sum();
            prop_assert!((total - parts).abs() <= 1e-10 * total.max(1e-300));
        }
    }
}
