use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::polytope::{dist, Halfspace, Polytope};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Interchange form `{"dimension", "vertices"?, "halfspaces"?}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceJson>>,
}

impl PolytopeJson {
    /// Builds the polytope from whichever representation is present. When
    /// both are, the vertex set of the halfspace system must match.
    pub fn to_polytope<T: Real>(&self) -> Result<Polytope<T>> {
        let conv = |v: &[f64]| v.iter().map(|&x| T::c(x)).collect::<Vec<T>>();
        let from_v = |vs: &[Vec<f64>]| -> Result<Polytope<T>> {
            let pts: Vec<Vec<T>> = vs.iter().map(|v| conv(v)).collect();
            if pts.iter().any(|p| p.len() != self.dimension) {
                return Err(Error::Parse(format!("vertex length differs from dimension {}", self.dimension)));
            }
            Polytope::from_vertices(&pts)
        };
        match (&self.vertices, &self.halfspaces) {
            (None, None) => Err(Error::Parse("polytope needs vertices or halfspaces".into())),
            (Some(vs), None) => from_v(vs),
            (vs, Some(hs)) => {
                let hs: Vec<Halfspace<T>> = hs.iter().map(|h| Halfspace::new(conv(&h.normal), T::c(h.offset))).collect();
                let p = Polytope::from_halfspaces(self.dimension, &hs)?;
                if let Some(vs) = vs {
                    let q = from_v(vs)?;
                    let tol = p.tolerance() * T::c(10.0);
                    let same = q.vertices().len() == p.vertices().len()
                        && q.vertices().iter().all(|v| p.vertices().iter().any(|w| dist(v, w) <= tol));
                    if !same {
                        return Err(Error::Parse("vertices and halfspaces describe different bodies".into()));
                    }
                }
                Ok(p)
            }
        }
    }

    pub fn from_polytope<T: Real>(p: &Polytope<T>) -> Self {
        let conv = |v: &[T]| v.iter().map(|x| x.to_f64_lossy()).collect::<Vec<f64>>();
        PolytopeJson {
            dimension: p.dim(),
            vertices: Some(p.vertices().iter().map(|v| conv(v)).collect()),
            halfspaces: Some(
                p.facets()
                    .iter()
                    .map(|h| HalfspaceJson { normal: conv(&h.normal), offset: h.offset.to_f64_lossy() })
                    .collect(),
            ),
        }
    }
}

impl<T: Real> Polytope<T> {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PolytopeJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        j.to_polytope()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&PolytopeJson::from_polytope(self)).expect("plain data serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = Polytope::<f64>::from_json_str(r#"{"dimension": 2, "vertices": [[0,0],[2,0],[0,1]]}"#).unwrap();
        let q = Polytope::<f64>::from_json_str(&p.to_json_string()).unwrap();
        assert_eq!(q.facets().len(), 3);
        assert!((q.volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn halfspaces_only() {
        let s = r#"{"dimension": 2, "halfspaces": [
            {"normal": [1, 0], "offset": 1}, {"normal": [-1, 0], "offset": 0},
            {"normal": [0, 2], "offset": 2}, {"normal": [0, -1], "offset": 0}]}"#;
        let p = Polytope::<f64>::from_json_str(s).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn inconsistent_and_malformed_inputs() {
        let s = r#"{"dimension": 2, "vertices": [[0,0],[2,0],[0,2]],
            "halfspaces": [{"normal": [1, 0], "offset": 1}, {"normal": [-1, 0], "offset": 0},
            {"normal": [0, 1], "offset": 1}, {"normal": [0, -1], "offset": 0}]}"#;
        assert!(matches!(Polytope::<f64>::from_json_str(s), Err(Error::Parse(_))));
        assert!(matches!(Polytope::<f64>::from_json_str("{"), Err(Error::Parse(_))));
        assert!(matches!(Polytope::<f64>::from_json_str(r#"{"dimension": 2}"#), Err(Error::Parse(_))));
    }
}
