//! Acceptance run: one PASS/FAIL line per criterion, each against an
//! independent oracle where one exists, and each within its time budget.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use pqfreq::constants::{c_pq, mu_p_numeric, pi_p, pi_pq, pi_pq_numeric, ExponentPair, OneDimOptions, Weight1D};
use pqfreq::geometry::shapes::{axis_box, random_convex, regular_ngon, standard_simplex};
use pqfreq::geometry::Polytope;
use pqfreq::measure::{distance_moment, makai_lower_bound, moment_upper_bound, monte_carlo_moments, MonteCarloOptions};
use pqfreq::normal_coords::{cov_integral, SmoothBody2D};
use pqfreq::spectral::{
    counterexample_annulus_tooth, minimize_lambda, slab, slab_sharpness, slit_annulus_control, verify_hersch_protter,
    verify_makai, LambdaOptions, RitzOptions, TriangleMesh,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn pair(p: f64, q: f64) -> ExponentPair<f64> {
    ExponentPair::new(p, q).unwrap()
}

fn unit_square() -> Polytope<f64> {
    Polytope::from_vertices(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
}

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Torsional rigidity of the unit square, `Σ_{m,n odd} 64/(π⁶ m² n² (m² + n²))`,
/// summed until the tail is below 1e-12.
fn square_torsion_series() -> f64 {
    let mut t = 0.0;
    let mut m = 1;
    while m < 4001 {
        let mut n = 1;
        while n < 4001 {
            let (mf, nf) = (m as f64, n as f64);
            t += 64.0 / (PI.powi(6) * mf * mf * nf * nf * (mf * mf + nf * nf));
            n += 2;
        }
        m += 2;
    }
    t
}

/// First zero of `J₀` from its power series, by bisection on `[2, 3]`.
fn bessel_j0_first_zero() -> f64 {
    let j0 = |x: f64| {
        let (mut term, mut sum) = (1.0, 1.0);
        for k in 1..60 {
            term *= -(x * x / 4.0) / (k * k) as f64;
            sum += term;
        }
        sum
    };
    let (mut a, mut b) = (2.0, 3.0);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if j0(a) * j0(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    0.5 * (a + b)
}

fn criterion_1() -> Outcome {
    let c21 = c_pq(&pair(2.0, 1.0)).map_err(|e| e.to_string())?;
    let c22 = c_pq(&pair(2.0, 2.0)).map_err(|e| e.to_string())?;
    ensure(
        (c21 - 1.0).abs() <= 1e-10 && (c22 - PI * PI / 4.0).abs() <= 1e-10,
        format!("C_2,1 = {c21:.15}, C_2,2 = {c22:.15} (π²/4 = {:.15})", PI * PI / 4.0),
    )
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (p, q) in [(2.0, 1.0), (2.0, 2.0), (3.0, 2.0), (4.0, 4.0), (1.5, 1.0)] {
        let e = pair(p, q);
        let exact = pi_pq(&e).map_err(|e| e.to_string())?;
        let num = pi_pq_numeric(&e, 2000, &OneDimOptions::default()).map_err(|e| e.to_string())?;
        let rel = (num.value - exact).abs() / exact;
        worst = worst.max(rel);
        parts.push(format!("({p},{q}): {:.6} vs {:.6}", num.value, exact));
    }
    ensure(worst <= 0.01, format!("max rel dev {worst:.2e}; {}", parts.join(", ")))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for l in [1.0f64, 2.0] {
        for p in [1.5f64, 2.0, 3.0] {
            let exact = l.powf(-p) * (pi_p(p).map_err(|e| e.to_string())? / 2.0).powf(p);
            let num = mu_p_numeric(&Weight1D::unit(l).unwrap(), p, 2000, &OneDimOptions::default()).map_err(|e| e.to_string())?;
            worst = worst.max((num.value - exact).abs() / exact);
        }
    }
    ensure(worst <= 0.005, format!("max rel dev {worst:.2e} over L ∈ {{1,2}}, p ∈ {{1.5,2,3}}"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 400;
    let mut worst_margin = f64::INFINITY;
    let mut count = 0;
    for p in [1.5, 2.0, 3.0] {
        let unit = mu_p_numeric(&Weight1D::unit(1.0).unwrap(), p, n, &OneDimOptions::default()).map_err(|e| e.to_string())?.value;
        for _ in 0..50 {
            let steps = rng.gen_range(2..12);
            let mut v: Vec<f64> = (0..steps).map(|_| rng.gen_range(0.05..5.0)).collect();
            v.sort_by(|a, b| b.total_cmp(a));
            let w = Weight1D::steps(1.0, v).unwrap();
            let mu = mu_p_numeric(&w, p, n, &OneDimOptions::default()).map_err(|e| e.to_string())?.value;
            worst_margin = worst_margin.min((mu - unit) / unit);
            count += 1;
        }
    }
    ensure(worst_margin >= -1e-3, format!("{count} weights; min (μ(w) − μ(1))/μ(1) = {worst_margin:.3e}"))
}

fn criterion_5() -> Outcome {
    let sq = unit_square();
    let m1 = distance_moment(&sq, 1.0).map_err(|e| e.to_string())?.value;
    let m2 = distance_moment(&sq, 2.0).map_err(|e| e.to_string())?.value;
    if (m1 - 1.0 / 6.0).abs() > 1e-9 || (m2 - 1.0 / 24.0).abs() > 1e-9 {
        return Err(format!("unit square moments {m1}, {m2}"));
    }
    let alphas = [0.5, 1.0, 2.0, 3.7];
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let p = random_convex(12, 1000 + i).map_err(|e| e.to_string())?;
        let mc = monte_carlo_moments(&p, &alphas, &MonteCarloOptions::default()).map_err(|e| e.to_string())?;
        for (a, est) in alphas.iter().zip(&mc) {
            let exact = distance_moment(&p, *a).map_err(|e| e.to_string())?.value;
            worst = worst.max((exact - est.value).abs() / est.error);
        }
    }
    ensure(worst <= 3.0, format!("square 1/6 and 1/24 exact; worst |exact − MC|/σ over 200 cases = {worst:.2}"))
}

fn criterion_6() -> Outcome {
    let mut bodies: Vec<Polytope<f64>> = (0..50u64).map(|i| random_convex(12, 1000 + i).unwrap()).collect();
    bodies.push(axis_box(&[1.0, 2.0, 3.0]).unwrap());
    bodies.push(axis_box(&[1.0, 1.0, 1.0]).unwrap());
    bodies.push(standard_simplex(3).unwrap());
    bodies.push(standard_simplex(2).unwrap());
    let mut worst = 0.0f64;
    for b in &bodies {
        for a in [0.5, 1.0, 2.0] {
            let m = distance_moment(b, a).map_err(|e| e.to_string())?.value;
            let ub = moment_upper_bound(b, a).map_err(|e| e.to_string())?;
            worst = worst.max(m / ub);
        }
    }
    let ratios: Vec<f64> = [2.0, 4.0, 8.0]
        .iter()
        .map(|&l| {
            let s = slab(l).unwrap();
            moment_upper_bound(&s, 2.0).unwrap() / distance_moment(&s, 2.0).unwrap().value
        })
        .collect();
    let trend = ratios[0] > ratios[1] && ratios[1] > ratios[2] && ratios[2] >= 1.0;
    ensure(
        worst <= 1.0 && trend,
        format!("max moment/bound = {worst:.4} on {} bodies; slab bound/moment (α=2) = {ratios:.4?}", bodies.len()),
    )
}

fn criterion_7() -> Outcome {
    let opts = LambdaOptions::default();
    let mut violations = 0;
    let mut checked = 0;
    let mut min_ratio = f64::INFINITY;
    for i in 0..100u64 {
        let p = random_convex(12, 5000 + i).map_err(|e| e.to_string())?;
        let h = 0.05 * p.diameter();
        for (pp, qq) in [(2.0, 1.0), (3.0, 2.0), (2.0, 2.0)] {
            let r = verify_makai(&p, &pair(pp, qq), h, &opts).map_err(|e| e.to_string())?;
            checked += 1;
            min_ratio = min_ratio.min(r.right / r.left);
            if !r.pass {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, format!("{checked} audits, {violations} violations, min λ_upper/bound = {min_ratio:.4}"))
}

fn criterion_8() -> Outcome {
    let t = square_torsion_series();
    let target = 1.0 / t;
    let e = pair(2.0, 1.0);
    let mut mesh = TriangleMesh::rectangle(0.0, 1.0, 0.0, 1.0, 16, 16).map_err(|e| e.to_string())?;
    let mut values = Vec::new();
    for _ in 0..3 {
        values.push(minimize_lambda(&mesh, &e, &LambdaOptions::default()).map_err(|e| e.to_string())?.lambda_upper);
        mesh = mesh.refine_uniform();
    }
    let last = *values.last().unwrap();
    let decreasing = values.windows(2).all(|w| w[1] <= w[0]);
    let makai = makai_lower_bound(&unit_square(), &e).map_err(|e| e.to_string())?;
    ensure(
        (last - target).abs() <= 0.01 * target && decreasing && 1.0 / last <= 1.0 / makai,
        format!("T_series = {t:.9}, 1/T = {target:.4}; λ_2,1 upper = {values:.4?}; 1/λ = {:.6} ≤ 1/24", 1.0 / last),
    )
}

fn criterion_9() -> Outcome {
    let opts = LambdaOptions::default();
    let rows = slab_sharpness(&pair(2.0, 2.0), &[1.0, 2.0, 4.0], 0.02, &opts).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for r in &rows {
        worst = worst.max((r.ratio / (1.0 + 1.0 / (r.length * r.length)) - 1.0).abs());
    }
    let rows21 = slab_sharpness(&pair(2.0, 1.0), &[1.0, 2.0, 4.0, 8.0], 0.02, &opts).map_err(|e| e.to_string())?;
    let r21: Vec<f64> = rows21.iter().map(|r| r.ratio).collect();
    let strict = r21.windows(2).all(|w| w[1] < w[0]) && r21.iter().all(|&r| r >= 1.0);
    ensure(
        worst <= 0.02 && strict,
        format!("(2,2) max dev from 1+1/L² = {worst:.2e}; (2,1) ratios = {r21:.4?}"),
    )
}

fn criterion_10() -> Outcome {
    let opts = LambdaOptions::default();
    let c = counterexample_annulus_tooth(0.1, 0.02, &RitzOptions::default(), &opts).map_err(|e| e.to_string())?;
    let control = slit_annulus_control(0.01, &opts).map_err(|e| e.to_string())?;
    let lam = c.report.detail("lambda_upper").unwrap_or(f64::NAN);
    ensure(
        c.report.pass && lam < PI * PI && control.pass,
        format!(
            "toothed ε=0.1: λ_upper = {lam:.9} (Ritz {:.9}, deficit {:.3e}; P1 h=0.02 gives {:.5}), λ·r² = {:.9} < π²/4 = {:.9}; control λ = {:.5} (π² = {:.5})",
            c.ritz.lambda_upper,
            c.ritz.deficit,
            c.fem_tooth,
            c.report.left,
            c.report.right,
            control.left,
            PI * PI
        ),
    )
}

fn criterion_11() -> Outcome {
    let circle = SmoothBody2D::circle(1.0).map_err(|e| e.to_string())?;
    let ellipse = SmoothBody2D::ellipse(2.0, 1.0).map_err(|e| e.to_string())?;
    let ac = cov_integral(&circle, |_| 1.0, 512, 512, 1e-10).map_err(|e| e.to_string())?;
    let ae = cov_integral(&ellipse, |_| 1.0, 512, 512, 1e-10).map_err(|e| e.to_string())?;
    let l0 = ellipse.cut_distance(0.0, 1e-10).map_err(|e| e.to_string())?;
    let l1 = ellipse.cut_distance(PI / 2.0, 1e-10).map_err(|e| e.to_string())?;
    ensure(
        (ac - PI).abs() <= 1e-3 && (ae - 2.0 * PI).abs() <= 1e-3 && (l0 - 0.5).abs() <= 1e-4 && (l1 - 1.0).abs() <= 1e-4,
        format!("areas {ac:.6} (π), {ae:.6} (2π); cuts {l0:.7} (b²/a = 0.5), {l1:.7} (b = 1)"),
    )
}

fn criterion_12() -> Outcome {
    let opts = LambdaOptions::default();
    let bodies = [
        ("square", unit_square()),
        ("hexagon", regular_ngon(6, 1.0).unwrap()),
        ("64-gon", regular_ngon(64, 1.0).unwrap()),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, b) in &bodies {
        for p in [1.5, 2.0, 3.0] {
            let r = verify_hersch_protter(b, &ExponentPair::diagonal(p).unwrap(), 0.05 * b.diameter(), &opts).map_err(|e| e.to_string())?;
            ok &= r.pass;
            if *name == "64-gon" && p == 2.0 {
                let j0 = bessel_j0_first_zero();
                lines.push(format!("disk p=2: {:.4} ≤ {:.4} (j₀² = {:.4})", r.left, r.right, j0 * j0));
                ok &= (r.left - (PI / 2.0).powi(2)).abs() < 0.01 && r.right >= j0 * j0 && (r.right / (j0 * j0) - 1.0).abs() < 0.02;
            }
        }
    }
    ensure(ok, format!("9 audits pass; {}", lines.join("; ")))
}

fn criterion_13() -> Outcome {
    let lo = c_pq(&pair(2.0 - 1e-4, 1.0)).map_err(|e| e.to_string())?;
    let hi = c_pq(&pair(2.0 + 1e-4, 1.0)).map_err(|e| e.to_string())?;
    let trend: Vec<f64> = [10.0, 20.0, 40.0, 80.0].iter().map(|&p| c_pq(&pair(p, 1.0)).unwrap().powf(1.0 / p)).collect();
    let monotone = trend.windows(2).all(|w| (w[1] - 1.0).abs() <= (w[0] - 1.0).abs() + 1e-12);
    ensure(
        (lo - 1.0).abs() <= 1e-3 && (hi - 1.0).abs() <= 1e-3 && (trend[3] - 1.0).abs() <= 0.05 && monotone,
        format!("C_p,1 at 2∓1e-4: {lo:.6}, {hi:.6}; C_p,1^(1/p) at p=10,20,40,80: {trend:.4?}"),
    )
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 13] = [
        (1, "constants C_2,1 and C_2,2", Duration::from_secs(1), criterion_1),
        (2, "1D π_pq oracle", Duration::from_secs(30), criterion_2),
        (3, "unit-weight μ_p scaling", Duration::from_secs(30), criterion_3),
        (4, "monotone weight comparison", Duration::from_secs(120), criterion_4),
        (5, "exact moments vs Monte Carlo", Duration::from_secs(120), criterion_5),
        (6, "moment upper bound", Duration::from_secs(60), criterion_6),
        (7, "Makai audit on random polygons", Duration::from_secs(900), criterion_7),
        (8, "square torsion benchmark", Duration::from_secs(120), criterion_8),
        (9, "slab sharpness", Duration::from_secs(600), criterion_9),
        (10, "annulus with tooth", Duration::from_secs(600), criterion_10),
        (11, "change of variables", Duration::from_secs(60), criterion_11),
        (12, "inradius bound, q = p", Duration::from_secs(300), criterion_12),
        (13, "constant limits", Duration::from_secs(1), criterion_13),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (pass, msg) = match outcome {
            Ok(m) if took <= budget => (true, m),
            Ok(m) => (false, format!("{m} [over budget {budget:?}]")),
            Err(m) => (false, m),
        };
        println!("criterion {id:>2} {}: {name} — {msg} ({:.2?})", if pass { "PASS" } else { "FAIL" }, took);
        if !pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
