use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::measure::{MomentMethod, MomentResult};

#[derive(Clone, Copy, Debug)]
pub struct MonteCarloOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        MonteCarloOptions { samples: 1_000_000, seed: 7 }
    }
}

/// Monte Carlo estimates of `∫_P d^α` for several `α` from one stream of
/// points drawn uniformly in the bounding box (points outside contribute 0).
/// The reported error is one standard error.
pub fn monte_carlo_moments(p: &Polytope<f64>, alphas: &[f64], opts: &MonteCarloOptions) -> Result<Vec<MomentResult<f64>>> {
    if opts.samples < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0)) {
        return Err(Error::UnsupportedExponent(format!("moment exponent {a} < 0")));
    }
    let (lo, hi) = p.bounding_box();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sum = vec![0.0; alphas.len()];
    let mut sum_sq = vec![0.0; alphas.len()];
    let mut x = vec![0.0; p.dim()];
    for _ in 0..opts.samples {
        for k in 0..p.dim() {
            x[k] = rng.gen_range(lo[k]..hi[k]);
        }
        let d = p.signed_distance(&x);
        if d <= 0.0 {
            continue;
        }
        for (j, &a) in alphas.iter().enumerate() {
            let v = d.powf(a);
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    let n = opts.samples as f64;
    Ok(alphas
        .iter()
        .enumerate()
        .map(|(j, &alpha)| {
            let mean = sum[j] / n;
            let var = (sum_sq[j] / n - mean * mean).max(0.0) * n / (n - 1.0);
            MomentResult {
                alpha,
                value: box_vol * mean,
                method: MomentMethod::MonteCarlo,
                error: box_vol * (var / n).sqrt(),
            }
        })
        .collect())
}
