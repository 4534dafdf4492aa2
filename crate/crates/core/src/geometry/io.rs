//! JSON polytope files.
//!
//! Either `{"dim": n, "vertices": [[...], ...]}` or
//! `{"dim": n, "halfspaces": [{"normal": [...], "offset": t}, ...]}`.
//! Floats are written in shortest round-trip form, which reads back to the
//! identical double.

use serde::{Deserialize, Serialize};

use super::polytope::{convex_hull, HPolytope, Halfspace, VPolytope};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeFile {
    Vertices { dim: usize, vertices: Vec<Vec<f64>> },
    Halfspaces { dim: usize, halfspaces: Vec<Halfspace> },
}

impl PolytopeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))?;
        let (dim, lens): (usize, Vec<usize>) = match &file {
            Self::Vertices { dim, vertices } => (*dim, vertices.iter().map(Vec::len).collect()),
            Self::Halfspaces { dim, halfspaces } => {
                (*dim, halfspaces.iter().map(|h| h.normal.len()).collect())
            }
        };
        if lens.iter().any(|&l| l != dim) {
            return Err(Error::invalid("coordinate count differs from dim"));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope files serialize")
    }

    pub fn from_vpolytope(p: &VPolytope) -> Self {
        Self::Vertices {
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
        }
    }

    pub fn from_hpolytope(p: &HPolytope) -> Self {
        Self::Halfspaces {
            dim: p.dim(),
            halfspaces: p.halfspaces().to_vec(),
        }
    }

    /// Vertex description of the stored polytope.
    pub fn to_vpolytope(&self) -> Result<VPolytope> {
        match self {
            Self::Vertices { vertices, .. } => convex_hull(vertices),
            Self::Halfspaces { dim, halfspaces } => {
                HPolytope::new(*dim, halfspaces.clone())?.to_vpolytope()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let p = VPolytope::regular_polygon(7, 1.0 / 3.0).unwrap();
        let f = PolytopeFile::from_vpolytope(&p);
        let back = PolytopeFile::parse(&f.to_json()).unwrap();
        assert_eq!(f, back);
        let h = PolytopeFile::from_hpolytope(&p.to_hpolytope());
        assert_eq!(PolytopeFile::parse(&h.to_json()).unwrap(), h);
        let q = h.to_vpolytope().unwrap();
        assert_eq!(q.vertices().len(), 7);
        assert!((q.volume() - p.volume()).abs() < 1e-12);
    }

    #[test]
    fn rejects_mismatched_dims() {
        assert!(PolytopeFile::parse(r#"{"dim":3,"vertices":[[0,0],[1,0],[0,1]]}"#).is_err());
        assert!(PolytopeFile::parse(r#"{"dim":2}"#).is_err());
    }
}
