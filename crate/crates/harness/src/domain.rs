use pqfreq::geometry::shapes::{axis_box, random_convex, regular_ngon, standard_simplex};
use pqfreq::spectral::slab;
use pqfreq::{Error, Polytope, Result, SmoothBody2D};

use crate::scenario::DomainSpec;

#[derive(Clone, Debug)]
pub enum Domain {
    Polytope(Polytope),
    Smooth(SmoothBody2D),
    /// Slit annulus `1 < |x| < 2` with a tooth of half-width `eps` across the
    /// outer circle.
    AnnulusTooth { eps: f64 },
}

impl Domain {
    pub fn kind(&self) -> &'static str {
        match self {
            Domain::Polytope(_) => "polytope",
            Domain::Smooth(_) => "smooth body",
            Domain::AnnulusTooth { .. } => "annulus with tooth",
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Polytope(p) => p.diameter(),
            Domain::Smooth(b) => b.extent(),
            Domain::AnnulusTooth { eps } => 4.0 + eps,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} must be positive, got {v}")))
    }
}

/// `seed` is used by `random_convex` when the spec carries none.
pub fn generate_domain(spec: &DomainSpec, seed: u64) -> Result<Domain> {
    Ok(match spec {
        DomainSpec::RegularNgon { n, r } => Domain::Polytope(regular_ngon(*n, *r)?),
        DomainSpec::RandomConvex { k, seed: s } => Domain::Polytope(random_convex(*k, s.unwrap_or(seed))?),
        DomainSpec::Rectangle { length } => {
            positive("rectangle length", *length)?;
            Domain::Polytope(slab(*length)?)
        }
        DomainSpec::Triangle { vertices } => {
            Domain::Polytope(Polytope::from_vertices(&vertices.iter().map(|v| v.to_vec()).collect::<Vec<_>>())?)
        }
        DomainSpec::Box3d { a, b, c } => Domain::Polytope(axis_box(&[*a, *b, *c])?),
        DomainSpec::Simplex3d => Domain::Polytope(standard_simplex(3)?),
        DomainSpec::AnnulusTooth { eps } => {
            if !(*eps > 0.0 && *eps < 1.0) {
                return Err(Error::Precondition(format!("tooth half-width must lie in (0, 1), got {eps}")));
            }
            Domain::AnnulusTooth { eps: *eps }
        }
        DomainSpec::Ellipse { a, b } => Domain::Smooth(SmoothBody2D::ellipse(*a, *b)?),
        DomainSpec::Circle { radius } => Domain::Smooth(SmoothBody2D::circle(*radius)?),
        DomainSpec::Inline { polytope } => Domain::Polytope(polytope.to_polytope()?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_has_half_unit_inradius() {
        let Domain::Polytope(p) = generate_domain(&DomainSpec::Rectangle { length: 4.0 }, 0).unwrap() else { panic!() };
        assert!((p.inradius().0 - 0.5).abs() < 1e-12);
        assert!((p.volume() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn random_convex_uses_the_scenario_seed_as_fallback() {
        let spec = DomainSpec::RandomConvex { k: 20, seed: None };
        let (Domain::Polytope(a), Domain::Polytope(b)) = (generate_domain(&spec, 7).unwrap(), generate_domain(&spec, 7).unwrap()) else {
            panic!()
        };
        assert_eq!(a.vertices(), b.vertices());
        let Domain::Polytope(c) = generate_domain(&DomainSpec::RandomConvex { k: 20, seed: Some(7) }, 99).unwrap() else { panic!() };
        assert_eq!(a.vertices(), c.vertices());
    }

    #[test]
    fn bad_parameters_are_errors() {
        assert!(generate_domain(&DomainSpec::RegularNgon { n: 2, r: 1.0 }, 0).is_err());
        assert!(generate_domain(&DomainSpec::Ellipse { a: -1.0, b: 1.0 }, 0).is_err());
        assert!(generate_domain(&DomainSpec::AnnulusTooth { eps: 1.5 }, 0).is_err());
        let flat = DomainSpec::Triangle { vertices: [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]] };
        assert!(generate_domain(&flat, 0).is_err());
    }
}
