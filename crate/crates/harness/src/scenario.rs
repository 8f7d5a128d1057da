//! Scenario files: what to generate, which audits to run, at what resolution.

use std::collections::HashSet;
use std::fmt;

use pqfreq::geometry::PolytopeJson;
use pqfreq::ExponentPair;
use serde::{Deserialize, Serialize};

/// A named domain generator, or an inline polytope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    RegularNgon { n: usize, r: f64 },
    /// Falls back to the scenario seed when `seed` is absent.
    RandomConvex { k: usize, seed: Option<u64> },
    /// `(-L/2, L/2) × (0, 1)`.
    Rectangle { length: f64 },
    Triangle { vertices: [[f64; 2]; 3] },
    Box3d { a: f64, b: f64, c: f64 },
    Simplex3d,
    AnnulusTooth { eps: f64 },
    Ellipse { a: f64, b: f64 },
    Circle { radius: f64 },
    Inline { polytope: PolytopeJson },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Makai,
    HerschProtter,
    MomentBound,
    SlabSharpness,
    Counterexample,
    Cov,
    WeightedQuotient,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Makai,
        Check::HerschProtter,
        Check::MomentBound,
        Check::SlabSharpness,
        Check::Counterexample,
        Check::Cov,
        Check::WeightedQuotient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Makai => "makai",
            Check::HerschProtter => "hersch_protter",
            Check::MomentBound => "moment_bound",
            Check::SlabSharpness => "slab_sharpness",
            Check::Counterexample => "counterexample",
            Check::Cov => "cov",
            Check::WeightedQuotient => "weighted_quotient",
        }
    }
}

fn default_h() -> f64 {
    0.05
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    /// Absent only for checks that build their own domains (slab sharpness).
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    /// `[p, q]` pairs.
    #[serde(default)]
    pub pairs: Vec<[f64; 2]>,
    pub checks: Vec<Check>,
    /// Target mesh edge length.
    #[serde(default = "default_h")]
    pub h: f64,
    /// Read `h` as a fraction of the domain diameter.
    #[serde(default = "default_true")]
    pub h_relative: bool,
    /// Overrides the audit's own tolerance when set; must be positive.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Slab lengths for `slab_sharpness`.
    #[serde(default)]
    pub lengths: Vec<f64>,
    /// Moment exponents for `moment_bound`.
    #[serde(default)]
    pub alphas: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub scenarios: Vec<Scenario>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    /// Carries serde's line/column and field message.
    Parse(String),
    Invalid { scenario: String, message: String },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Parse(m) => write!(f, "scenario parse error: {m}"),
            ScenarioError::Invalid { scenario, message } => write!(f, "invalid scenario `{scenario}`: {message}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

pub const BUNDLED_SUITE: &str = include_str!("paper_suite.json");

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn bundled_suite() -> Self {
        Self::parse(BUNDLED_SUITE).expect("bundled suite is valid")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let mut seen = HashSet::new();
        for s in &self.scenarios {
            if !seen.insert(s.id.as_str()) {
                return Err(invalid(&s.id, "duplicate id"));
            }
            s.validate()?;
        }
        Ok(())
    }
}

fn invalid(id: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid { scenario: id.to_string(), message: message.into() }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let id = &self.id;
        if id.is_empty() {
            return Err(invalid(id, "empty id"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(invalid(id, format!("tolerance must be > 0, got {t}")));
            }
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(invalid(id, format!("mesh size must be > 0, got {}", self.h)));
        }
        for &[p, q] in &self.pairs {
            ExponentPair::new(p, q).map_err(|e| invalid(id, e.to_string()))?;
        }
        if let Some(l) = self.lengths.iter().find(|l| !(**l >= 1.0)) {
            return Err(invalid(id, format!("slab lengths must be ≥ 1, got {l}")));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a >= 0.0)) {
            return Err(invalid(id, format!("moment exponents must be ≥ 0, got {a}")));
        }
        let needs_domain = self.checks.iter().any(|c| *c != Check::SlabSharpness);
        if needs_domain && self.domain.is_none() {
            return Err(invalid(id, "checks other than slab_sharpness need a domain"));
        }
        Ok(())
    }

    pub fn exponent_pairs(&self) -> Vec<ExponentPair> {
        self.pairs.iter().map(|&[p, q]| ExponentPair::new(p, q).expect("validated")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_suite_parses() {
        let s = ScenarioFile::bundled_suite();
        assert!(!s.scenarios.is_empty());
        for c in Check::ALL {
            assert!(s.scenarios.iter().any(|x| x.checks.contains(&c)), "{} not exercised", c.name());
        }
    }

    #[test]
    fn parse_errors_name_the_field_and_line() {
        let e = ScenarioFile::parse("{\"scenarios\": [\n  {\"id\": \"a\", \"checks\": [\"makai\"], \"h\": \"x\"}]}").unwrap_err();
        let m = e.to_string();
        assert!(m.contains("line 2"), "{m}");
        let e = ScenarioFile::parse("{\"scenarios\": [{\"checks\": []}]}").unwrap_err();
        assert!(e.to_string().contains("`id`"), "{e}");
        let e = ScenarioFile::parse("{\"scenarios\": [{\"id\": \"a\", \"checks\": [\"nope\"]}]}").unwrap_err();
        assert!(e.to_string().contains("nope"), "{e}");
    }

    #[test]
    fn validation_rules() {
        let ok = r#"{"id": "a", "domain": {"generator": "circle", "radius": 1.0}, "checks": ["cov"]}"#;
        let wrap = |s: &str| format!("{{\"scenarios\": [{s}]}}");
        assert!(ScenarioFile::parse(&wrap(ok)).is_ok());
        assert!(ScenarioFile::parse(&wrap(&format!("{ok}, {ok}"))).is_err());
        let zero = ok.replace("\"checks\"", "\"tolerance\": 0, \"checks\"");
        assert!(matches!(ScenarioFile::parse(&wrap(&zero)), Err(ScenarioError::Invalid { .. })));
        let bad_pair = ok.replace("\"checks\"", "\"pairs\": [[1, 2]], \"checks\"");
        assert!(ScenarioFile::parse(&wrap(&bad_pair)).is_err());
        let no_domain = r#"{"id": "a", "checks": ["makai"]}"#;
        assert!(ScenarioFile::parse(&wrap(no_domain)).is_err());
        assert!(ScenarioFile::parse(&wrap(r#"{"id": "s", "checks": ["slab_sharpness"]}"#)).is_ok());
    }
}
