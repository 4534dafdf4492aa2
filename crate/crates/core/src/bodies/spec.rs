//! JSON body descriptions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Ball, ConvexBody, Cube, Ellipsoid, PolytopeBody, RadialTrig, Simplex, SmoothPlanarBody};
use crate::error::{Error, Result};
use crate::geometry::{Halfspace, HPolytope, convex_hull};

/// `{"kind": "ball" | "ellipsoid" | "cube" | "simplex" | "polytope" | "smooth2d", ...}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BodySpec {
    Ball {
        dim: usize,
        #[serde(default)]
        center: Option<Vec<f64>>,
        #[serde(default = "one")]
        radius: f64,
    },
    Ellipsoid {
        semiaxes: Vec<f64>,
        #[serde(default)]
        center: Option<Vec<f64>>,
        #[serde(default)]
        rotation: Option<Vec<Vec<f64>>>,
    },
    Cube {
        dim: usize,
        #[serde(default)]
        lo: Option<f64>,
        #[serde(default)]
        hi: Option<f64>,
    },
    Simplex {
        #[serde(default)]
        dim: Option<usize>,
        #[serde(default)]
        vertices: Option<Vec<Vec<f64>>>,
    },
    Polytope {
        dim: usize,
        #[serde(default)]
        vertices: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        halfspaces: Option<Vec<Halfspace>>,
    },
    Smooth2d {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

impl BodySpec {
    pub fn build(&self) -> Result<Arc<dyn ConvexBody>> {
        Ok(match self {
            Self::Ball { dim, center, radius } => {
                let c = center.clone().unwrap_or_else(|| vec![0.0; *dim]);
                if c.len() != *dim {
                    return Err(Error::invalid("ball centre has wrong length"));
                }
                Arc::new(Ball::new(c, *radius)?)
            }
            Self::Ellipsoid {
                semiaxes,
                center,
                rotation,
            } => {
                let n = semiaxes.len();
                let c = center.clone().unwrap_or_else(|| vec![0.0; n]);
                match rotation {
                    Some(r) => Arc::new(Ellipsoid::new(c, semiaxes.clone(), r.clone())?),
                    None => Arc::new(Ellipsoid::axis_aligned(c, semiaxes.clone())?),
                }
            }
            Self::Cube { dim, lo, hi } => Arc::new(Cube::new(*dim, lo.unwrap_or(0.0), hi.unwrap_or(1.0))?),
            Self::Simplex { dim, vertices } => match (dim, vertices) {
                (_, Some(v)) => Arc::new(Simplex::new(v.clone())?),
                (Some(d), None) => Arc::new(Simplex::standard(*d)?),
                _ => return Err(Error::invalid("simplex needs dim or vertices")),
            },
            Self::Polytope {
                dim,
                vertices,
                halfspaces,
            } => {
                let p = match (vertices, halfspaces) {
                    (Some(v), None) => convex_hull(v)?,
                    (None, Some(h)) => HPolytope::new(*dim, h.clone())?.to_vpolytope()?,
                    _ => return Err(Error::invalid("polytope needs exactly one of vertices or halfspaces")),
                };
                if p.dim() != *dim {
                    return Err(Error::invalid("polytope dimension mismatch"));
                }
                Arc::new(PolytopeBody::new(p))
            }
            Self::Smooth2d { a0, cos, sin } => {
                Arc::new(SmoothPlanarBody::radial(RadialTrig::new(*a0, cos.clone(), sin.clone())?)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let cases = [
            r#"{"kind":"ball","dim":3}"#,
            r#"{"kind":"ellipsoid","semiaxes":[2,1]}"#,
            r#"{"kind":"cube","dim":2,"lo":-1,"hi":1}"#,
            r#"{"kind":"simplex","dim":3}"#,
            r#"{"kind":"polytope","dim":2,"vertices":[[0,0],[1,0],[0,1]]}"#,
            r#"{"kind":"smooth2d","a0":1.0,"cos":[0.05],"sin":[0.02]}"#,
        ];
        let vols = [4.0 * std::f64::consts::PI / 3.0, 2.0 * std::f64::consts::PI, 4.0, 1.0 / 6.0, 0.5];
        for (i, c) in cases.iter().enumerate() {
            let spec: BodySpec = serde_json::from_str(c).unwrap();
            let body = spec.build().unwrap();
            if let Some(v) = vols.get(i) {
                assert!((body.volume() - v).abs() < 1e-9, "{c}");
            }
            let back: BodySpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let spec: BodySpec = serde_json::from_str(r#"{"kind":"ball","dim":2,"radius":-1}"#).unwrap();
        assert!(spec.build().is_err());
        assert!(serde_json::from_str::<BodySpec>(r#"{"kind":"torus"}"#).is_err());
    }
}
