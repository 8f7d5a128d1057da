//! Audited inequality instances.

use serde::{Deserialize, Serialize};

/// How `left` must relate to `right` for a report to pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `left ≤ right·(1 + tol)`.
    LessEq,
    /// `left < right` strictly; the tolerance is ignored.
    Less,
    /// `|left/right − 1| ≤ tol`.
    ApproxEq,
}

/// JSON has no NaN or infinity; serde_json writes them as `null`.
fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub id: String,
    #[serde(deserialize_with = "null_as_nan")]
    pub left: f64,
    #[serde(deserialize_with = "null_as_nan")]
    pub right: f64,
    /// `left / right`.
    #[serde(deserialize_with = "null_as_nan")]
    pub ratio: f64,
    pub tolerance: f64,
    pub direction: Direction,
    pub pass: bool,
    pub left_provenance: String,
    pub right_provenance: String,
    /// Free-form supporting numbers (mesh size, iteration counts, …).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<(String, f64)>,
}

impl InequalityReport {
    pub fn new(
        id: impl Into<String>,
        left: f64,
        direction: Direction,
        right: f64,
        tolerance: f64,
        left_provenance: impl Into<String>,
        right_provenance: impl Into<String>,
    ) -> Self {
        let ratio = left / right;
        let pass = match direction {
            _ if !left.is_finite() || !right.is_finite() => false,
            Direction::LessEq => left <= right + tolerance * right.abs(),
            Direction::Less => left < right,
            Direction::ApproxEq => (ratio - 1.0).abs() <= tolerance,
        };
        InequalityReport {
            id: id.into(),
            left,
            right,
            ratio,
            tolerance,
            direction,
            pass,
            left_provenance: left_provenance.into(),
            right_provenance: right_provenance.into(),
            details: Vec::new(),
        }
    }

    pub fn with_detail(mut self, key: impl Into<String>, value: f64) -> Self {
        self.details.push((key.into(), value));
        self
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }
}
