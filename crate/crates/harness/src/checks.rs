//! One scenario, one domain, a list of audits → a list of reports.

use std::f64::consts::PI;

use pqfreq::constants::OneDimOptions;
use pqfreq::measure::{distance_moment, moment_upper_bound};
use pqfreq::normal_coords::{cov_integral, hp_smooth_check, star_integral, weighted_quotient_check};
use pqfreq::spectral::{
    counterexample_annulus_tooth, slab_sharpness, slit_annulus_control, verify_hersch_protter, verify_makai, LambdaOptions, RitzOptions,
};
use pqfreq::{Direction, Error, ExponentPair, InequalityReport, Result};

use crate::domain::{generate_domain, Domain};
use crate::scenario::{Check, Scenario};

const DEFAULT_ALPHAS: [f64; 3] = [0.5, 1.0, 2.0];
const DEFAULT_LENGTHS: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
const SMOOTH_POLYGON_SIDES: usize = 64;
const COV_SAMPLES: usize = 512;
const QUOTIENT_CELLS: usize = 400;

/// Reports of one scenario; errors are per check and never abort the run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckOutcome {
    pub reports: Vec<InequalityReport>,
    pub errors: Vec<String>,
}

/// Same verdict rule, different tolerance (strict comparisons have none).
pub fn with_tolerance(r: InequalityReport, tol: f64) -> InequalityReport {
    if r.direction == Direction::Less {
        return r;
    }
    let details = r.details;
    let mut out = InequalityReport::new(r.id, r.left, r.direction, r.right, tol, r.left_provenance, r.right_provenance);
    out.details = details;
    out
}

pub fn run_checks(s: &Scenario, only: Option<&[Check]>) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    let domain = match s.domain.as_ref().map(|d| generate_domain(d, s.seed)).transpose() {
        Ok(d) => d,
        Err(e) => {
            out.errors.push(format!("domain: {e}"));
            return out;
        }
    };
    for &check in s.checks.iter().filter(|c| only.map_or(true, |o| o.contains(c))) {
        match run_check(s, check, domain.as_ref()) {
            Ok(rs) => out.reports.extend(rs.into_iter().map(|r| match s.tolerance {
                Some(t) => with_tolerance(r, t),
                None => r,
            })),
            Err(e) => out.errors.push(format!("{}: {e}", check.name())),
        }
    }
    out
}

fn mesh_size(s: &Scenario, diameter: f64) -> f64 {
    if s.h_relative {
        s.h * diameter
    } else {
        s.h
    }
}

fn needs<'a, T>(what: Option<&'a T>, check: Check, kind: &str) -> Result<&'a T> {
    what.ok_or_else(|| Error::Precondition(format!("{} needs a {kind}", check.name())))
}

fn run_check(s: &Scenario, check: Check, domain: Option<&Domain>) -> Result<Vec<InequalityReport>> {
    let opts = LambdaOptions::default();
    let pairs = s.exponent_pairs();
    let domain = match (check, domain) {
        (Check::SlabSharpness, _) => None,
        (_, Some(d)) => Some(d),
        (_, None) => return Err(Error::Precondition(format!("{} needs a domain", check.name()))),
    };
    let polytope = domain.and_then(|d| match d {
        Domain::Polytope(p) => Some(p),
        _ => None,
    });
    let smooth = domain.and_then(|d| match d {
        Domain::Smooth(b) => Some(b),
        _ => None,
    });
    let h = domain.map_or(s.h, |d| mesh_size(s, d.diameter()));
    if pairs.is_empty() && matches!(check, Check::Makai | Check::SlabSharpness) {
        return Err(Error::Precondition(format!("{} needs at least one exponent pair", check.name())));
    }
    match check {
        Check::Makai => {
            let p = needs(polytope, check, "polytope")?;
            pairs.iter().map(|e| verify_makai(p, e, h, &opts)).collect()
        }
        Check::HerschProtter => match (polytope, smooth) {
            (Some(p), _) => pairs.iter().map(|e| verify_hersch_protter(p, e, h, &opts)).collect(),
            (_, Some(b)) => diagonal_ps(&pairs)?.into_iter().map(|p| hp_smooth_check(b, p, SMOOTH_POLYGON_SIDES, h, &opts)).collect(),
            _ => Err(Error::Precondition("hersch_protter needs a polytope or a smooth body".into())),
        },
        Check::MomentBound => {
            let p = needs(polytope, check, "polytope")?;
            let alphas = if s.alphas.is_empty() { &DEFAULT_ALPHAS[..] } else { &s.alphas[..] };
            alphas
                .iter()
                .map(|&a| {
                    let m = distance_moment(p, a)?.value;
                    Ok(InequalityReport::new(
                        format!("moment bound α={a}"),
                        m,
                        Direction::LessEq,
                        moment_upper_bound(p, a)?,
                        1e-12,
                        "∫ d^α, exact",
                        "|Ω| r^α / (α + 1)",
                    ))
                })
                .collect()
        }
        Check::SlabSharpness => {
            let lengths = if s.lengths.is_empty() { &DEFAULT_LENGTHS[..] } else { &s.lengths[..] };
            let mut out = Vec::new();
            for e in &pairs {
                out.extend(slab_reports(e, lengths, h, &opts)?);
            }
            Ok(out)
        }
        Check::Counterexample => {
            let Some(Domain::AnnulusTooth { eps }) = domain else {
                return Err(Error::Precondition("counterexample needs the annulus_tooth domain".into()));
            };
            let cx = counterexample_annulus_tooth(*eps, h, &RitzOptions::default(), &opts)?;
            Ok(vec![cx.report, slit_annulus_control(h, &opts)?])
        }
        Check::Cov => {
            let b = needs(smooth, check, "smooth body")?;
            let area = cov_integral(b, |_| 1.0, COV_SAMPLES, COV_SAMPLES, 1e-10)?;
            let r2 = |x: [f64; 2]| x[0] * x[0] + x[1] * x[1];
            let second = cov_integral(b, r2, COV_SAMPLES, COV_SAMPLES, 1e-10)?;
            Ok(vec![
                InequalityReport::new("cov area", area, Direction::ApproxEq, b.area(), 1e-3, "∫∫ (1 − tκ) dt ds", "½ ∮ x × dx"),
                InequalityReport::new(
                    "cov ∫|x|²",
                    second,
                    Direction::ApproxEq,
                    star_integral(b, r2, COV_SAMPLES),
                    1e-3,
                    "∫∫ |x|² (1 − tκ) dt ds",
                    "polar integral about the centroid",
                ),
            ])
        }
        Check::WeightedQuotient => {
            let b = needs(smooth, check, "smooth body")?;
            let ps = if pairs.is_empty() { vec![2.0] } else { diagonal_ps(&pairs)? };
            let one = OneDimOptions { seed: s.seed, ..OneDimOptions::default() };
            let mut out = Vec::new();
            for p in ps {
                for k in 0..4 {
                    out.push(weighted_quotient_check(b, k as f64 * PI / 4.0, p, QUOTIENT_CELLS, &one)?);
                }
            }
            Ok(out)
        }
    }
}

fn diagonal_ps(pairs: &[ExponentPair]) -> Result<Vec<f64>> {
    pairs
        .iter()
        .map(|e| {
            if e.is_diagonal() {
                Ok(e.p())
            } else {
                Err(Error::Precondition(format!("smooth-body audits need q = p, got ({}, {})", e.p(), e.q())))
            }
        })
        .collect()
}

/// Lower bound ≤ upper bound at every length; for `(2,2)` the ratio must
/// match the rectangle oracle `1 + 1/L²`, otherwise it must decrease in `L`.
fn slab_reports(e: &ExponentPair, lengths: &[f64], h: f64, opts: &LambdaOptions) -> Result<Vec<InequalityReport>> {
    let rows = slab_sharpness(e, lengths, h, opts)?;
    let label = format!("({}, {})", e.p(), e.q());
    let mut out = Vec::new();
    for r in &rows {
        out.push(
            InequalityReport::new(
                format!("slab {label} L={} bound", r.length),
                r.lower_bound,
                Direction::LessEq,
                r.lambda_upper,
                1e-9,
                "lower bound on the slab",
                format!("P1 quotient on {} nodes", r.nodes),
            )
            .with_detail("h", h),
        );
    }
    if e.p() == 2.0 && e.q() == 2.0 {
        for r in &rows {
            out.push(InequalityReport::new(
                format!("slab {label} L={} ratio", r.length),
                r.ratio,
                Direction::ApproxEq,
                1.0 + 1.0 / (r.length * r.length),
                0.02,
                "λ_upper r² / (π/2)²",
                "1 + 1/L², separable rectangle eigenvalue",
            ));
        }
    } else if !e.is_diagonal() && rows.len() >= 2 {
        let step = rows.windows(2).map(|w| w[1].ratio / w[0].ratio).fold(f64::NEG_INFINITY, f64::max);
        let mut r = InequalityReport::new(
            format!("slab {label} ratios decrease"),
            step,
            Direction::Less,
            1.0,
            0.0,
            "max over consecutive lengths of ratio(L') / ratio(L)",
            "strict decrease",
        );
        for row in &rows {
            r = r.with_detail(format!("ratio L={}", row.length), row.ratio);
        }
        out.push(r);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::DomainSpec;

    fn scenario(domain: Option<DomainSpec>, checks: Vec<Check>) -> Scenario {
        Scenario {
            id: "t".into(),
            domain,
            pairs: vec![[2.0, 1.0]],
            checks,
            h: 0.1,
            h_relative: true,
            tolerance: None,
            seed: 3,
            lengths: vec![],
            alphas: vec![],
        }
    }

    #[test]
    fn square_makai_and_moments_pass() {
        let s = scenario(Some(DomainSpec::Rectangle { length: 1.0 }), vec![Check::Makai, Check::MomentBound]);
        let out = run_checks(&s, None);
        assert!(out.errors.is_empty(), "{:?}", out.errors);
        assert_eq!(out.reports.len(), 4);
        assert!(out.reports.iter().all(|r| r.pass));
    }

    #[test]
    fn wrong_domain_kind_is_recorded_not_fatal() {
        let s = scenario(Some(DomainSpec::Circle { radius: 1.0 }), vec![Check::Makai, Check::Cov]);
        let out = run_checks(&s, None);
        assert_eq!(out.errors.len(), 1);
        assert!(out.errors[0].starts_with("makai"));
        assert_eq!(out.reports.len(), 2);
        assert!(out.reports.iter().all(|r| r.pass), "{:?}", out.reports);
    }

    #[test]
    fn three_dimensional_bodies_support_moment_bounds_only() {
        let s = scenario(Some(DomainSpec::Box3d { a: 1.0, b: 2.0, c: 3.0 }), vec![Check::MomentBound, Check::HerschProtter]);
        let out = run_checks(&s, None);
        assert_eq!(out.reports.len(), 3);
        assert_eq!(out.errors.len(), 1);
    }

    #[test]
    fn tolerance_override_keeps_strict_reports() {
        let r = InequalityReport::new("x", 1.01, Direction::LessEq, 1.0, 0.0, "", "");
        assert!(!r.pass);
        assert!(with_tolerance(r, 0.02).pass);
        let strict = InequalityReport::new("y", 1.0, Direction::Less, 1.0, 0.0, "", "");
        assert!(!with_tolerance(strict, 1.0).pass);
    }
}
