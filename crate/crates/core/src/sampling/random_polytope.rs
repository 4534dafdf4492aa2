//! Convex hulls of random point sets.

use super::boundary::{BoundaryDensity, BoundarySampler};
use super::rng::SimRng;
use super::uniform::UniformSampler;
use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, VPolytope};

/// Distribution of the random points.
#[derive(Clone, Debug)]
pub enum PointModel {
    /// Uniform in the body.
    Uniform,
    /// On the boundary with the given density.
    Boundary(BoundaryDensity),
    /// Uniform over a fixed finite set of points.
    Atoms(Vec<Vec<f64>>),
    /// The listed points in order, repeated: a deterministic model.
    Cyclic(Vec<Vec<f64>>),
}

/// A point model prepared for one body.
#[derive(Debug)]
pub enum PointSampler<'a> {
    Uniform(UniformSampler<'a>),
    Boundary(BoundarySampler<'a>),
    Atoms(&'a [Vec<f64>]),
    Cyclic(&'a [Vec<f64>]),
}

impl<'a> PointSampler<'a> {
    pub fn new(body: &'a dyn ConvexBody, model: &'a PointModel) -> Result<Self> {
        Ok(match model {
            PointModel::Uniform => Self::Uniform(UniformSampler::new(body)),
            PointModel::Boundary(d) => Self::Boundary(BoundarySampler::new(body, d)?),
            PointModel::Atoms(a) | PointModel::Cyclic(a) => {
                if a.is_empty() || a.iter().any(|p| p.len() != body.dim()) {
                    return Err(Error::invalid("atoms must be points of the body's dimension"));
                }
                if matches!(model, PointModel::Cyclic(_)) {
                    Self::Cyclic(a)
                } else {
                    Self::Atoms(a)
                }
            }
        })
    }

    /// Appends `count` points of dimension `dim` to a flat buffer.
    pub fn fill(&self, rng: &mut SimRng, count: usize, dim: usize, out: &mut Vec<f64>) -> Result<()> {
        match self {
            Self::Uniform(s) => s.fill(rng, count, out),
            Self::Boundary(s) => s.fill(rng, count, dim, out),
            Self::Atoms(a) => {
                use rand::Rng;
                for _ in 0..count {
                    out.extend_from_slice(&a[rng.random_range(0..a.len())]);
                }
                Ok(())
            }
            Self::Cyclic(a) => {
                for k in 0..count {
                    out.extend_from_slice(&a[k % a.len()]);
                }
                Ok(())
            }
        }
    }
}

/// A random polytope together with its generating points.
#[derive(Clone, Debug)]
pub struct RandomPolytope {
    pub polytope: VPolytope,
    pub points: Vec<Vec<f64>>,
    /// Number of discarded flat draws.
    pub redraws: usize,
}

/// Hull of `n_points` i.i.d. draws from `model` on `body`. Flat draws are
/// redrawn (up to 1000 times).
pub fn random_polytope(body: &dyn ConvexBody, model: &PointModel, n_points: usize, rng: &mut SimRng) -> Result<RandomPolytope> {
    let dim = body.dim();
    if n_points < dim + 1 {
        return Err(Error::invalid(format!("need at least {} points", dim + 1)));
    }
    let sampler = PointSampler::new(body, model)?;
    let mut buf = Vec::with_capacity(n_points * dim);
    for redraws in 0..1000 {
        buf.clear();
        sampler.fill(rng, n_points, dim, &mut buf)?;
        let points: Vec<Vec<f64>> = buf.chunks_exact(dim).map(<[f64]>::to_vec).collect();
        match convex_hull(&points) {
            Ok(polytope) => return Ok(RandomPolytope { polytope, points, redraws }),
            Err(Error::DegenerateInput(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::degenerate("every draw was flat"))
}
