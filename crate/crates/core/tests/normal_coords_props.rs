use std::f64::consts::{PI, TAU};

use proptest::prelude::*;

use pqfreq::normal_coords::{cov_integral, star_integral};
use pqfreq::SmoothBody2D;

const TOL: f64 = 1e-9;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cut_distance_is_where_the_normal_stops_being_nearest(a in 1.05f64..3.0, s in 0.0f64..TAU) {
        let body = SmoothBody2D::ellipse(a, 1.0).unwrap();
        let c = body.chart(s, TOL).unwrap();
        prop_assert!(c.certified);
        prop_assert!((body.distance(c.map(c.cut)) - c.cut).abs() <= 2.0 * TOL);
        let past = c.cut + 10.0 * TOL;
        prop_assert!(body.distance(c.map(past)) < past);
        // the Jacobian weight stays positive up to the cut
        prop_assert!(c.weight(c.cut - TOL) > 0.0, "κ = {}, l = {}", c.curvature, c.cut);
    }

    #[test]
    fn deepest_cut_is_the_inradius(a in 1.05f64..3.0, b in 0.3f64..1.0) {
        let body = SmoothBody2D::ellipse(a, b).unwrap();
        let (r, center) = body.inradius(TOL).unwrap();
        prop_assert!((r - b).abs() <= 1e-6, "{} vs {}", r, b);
        prop_assert!((body.distance(center) - r).abs() <= 1e-6);
    }
}

#[test]
fn area_error_at_least_halves_under_refinement() {
    for (body, exact) in [(SmoothBody2D::circle(1.0).unwrap(), PI), (SmoothBody2D::ellipse(2.0, 1.0).unwrap(), 2.0 * PI)] {
        let errs: Vec<f64> = [32, 64, 128, 256]
            .iter()
            .map(|&n| (cov_integral(&body, |_| 1.0, n, n, 1e-12).unwrap() - exact).abs())
            .collect();
        for w in errs.windows(2) {
            assert!(w[1] <= 0.5 * w[0] || w[1] < 1e-9, "{errs:?}");
        }
    }
}

#[test]
fn distance_powers_agree_with_polar_quadrature() {
    let body = SmoothBody2D::ellipse(2.0, 1.0).unwrap();
    for alpha in [1.0, 2.0] {
        let f = |x: [f64; 2]| body.distance(x).powf(alpha);
        let cov = cov_integral(&body, f, 512, 512, 1e-10).unwrap();
        let polar = star_integral(&body, f, 512);
        assert!((cov / polar - 1.0).abs() < 1e-3, "α {alpha}: {cov} vs {polar}");
    }
}

#[test]
fn tabulated_curve_reproduces_the_ellipse() {
    let pts: Vec<[f64; 2]> = (0..256).map(|k| {
        let s = TAU * k as f64 / 256.0;
        [2.0 * s.cos(), s.sin()]
    }).collect();
    let spline = SmoothBody2D::from_points(pts).unwrap();
    assert!((spline.area() - 2.0 * PI).abs() < 1e-6);
    let l = spline.cut_distance(0.0, TOL).unwrap();
    assert!((l - 0.5).abs() < 1e-3, "{l}");
    let area = cov_integral(&spline, |_| 1.0, 256, 256, 1e-10).unwrap();
    assert!((area - 2.0 * PI).abs() < 1e-3, "{area}");
}
