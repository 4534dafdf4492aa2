//! Uniform points in a convex body.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::rng::SimRng;
use crate::bodies::{BodyRef, ConvexBody};
use crate::error::{Error, Result};

/// Attempts after which a rejection sampler gives up on one point.
const REJECTION_LIMIT: usize = 1_000_000;

/// A uniform-in-body sampler with its lookup tables built once.
#[derive(Debug)]
pub enum UniformSampler<'a> {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Affine image `c + M y` of the unit ball (row-major M).
    Ellipsoid { center: Vec<f64>, matrix: Vec<Vec<f64>> },
    /// Union of simplices chosen proportionally to volume.
    Simplices { points: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>, cumulative: Vec<f64> },
    Rejection { body: &'a dyn ConvexBody, lo: Vec<f64>, hi: Vec<f64> },
}

impl<'a> UniformSampler<'a> {
    pub fn new(body: &'a dyn ConvexBody) -> Self {
        match body.view() {
            BodyRef::Ball(b) => Self::Ball {
                center: b.center.clone(),
                radius: b.radius,
            },
            BodyRef::Cube(_) => {
                let (lo, hi) = body.bounding_box();
                Self::Box { lo, hi }
            }
            BodyRef::Ellipsoid(e) => {
                let n = e.dim();
                let matrix = (0..n)
                    .map(|i| (0..n).map(|j| e.rotation[i][j] * e.semiaxes[j]).collect())
                    .collect();
                Self::Ellipsoid {
                    center: e.center.clone(),
                    matrix,
                }
            }
            BodyRef::Simplex(s) => Self::Simplices {
                points: s.vertices().to_vec(),
                simplices: vec![(0..=s.dim()).collect()],
                cumulative: vec![1.0],
            },
            BodyRef::Polytope(p) => {
                let p = p.inner();
                let mut points = p.vertices().to_vec();
                let apex = points.len();
                points.push(p.vertex_mean());
                let simplices: Vec<Vec<usize>> = p
                    .boundary_simplices()
                    .iter()
                    .map(|s| {
                        let mut s = s.clone();
                        s.push(apex);
                        s
                    })
                    .collect();
                Self::Simplices {
                    points,
                    simplices,
                    cumulative: cumulative(&p.cone_volumes()),
                }
            }
            BodyRef::Smooth(_) => {
                let (lo, hi) = body.bounding_box();
                Self::Rejection { body, lo, hi }
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } | Self::Ellipsoid { center, .. } => center.len(),
            Self::Box { lo, .. } | Self::Rejection { lo, .. } => lo.len(),
            Self::Simplices { points, .. } => points[0].len(),
        }
    }

    /// Writes one point into `out` (length = dimension).
    pub fn sample_into(&self, rng: &mut SimRng, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Ball { center, radius } => {
                let n = center.len();
                unit_ball_point(rng, out);
                for k in 0..n {
                    out[k] = center[k] + radius * out[k];
                }
            }
            Self::Box { lo, hi } => {
                for k in 0..lo.len() {
                    out[k] = rng.random_range(lo[k]..hi[k]);
                }
            }
            Self::Ellipsoid { center, matrix } => {
                let n = center.len();
                let mut y = vec![0.0; n];
                unit_ball_point(rng, &mut y);
                for i in 0..n {
                    out[i] = center[i] + crate::numeric::dot(&matrix[i], &y);
                }
            }
            Self::Simplices {
                points,
                simplices,
                cumulative,
            } => {
                let s = &simplices[pick(cumulative, rng)];
                dirichlet_combination(rng, s.iter().map(|&i| points[i].as_slice()), out);
            }
            Self::Rejection { body, lo, hi } => {
                for _ in 0..REJECTION_LIMIT {
                    for k in 0..lo.len() {
                        out[k] = rng.random_range(lo[k]..hi[k]);
                    }
                    if body.contains(out, 0.0) {
                        return Ok(());
                    }
                }
                return Err(Error::RejectionStall(1.0 / REJECTION_LIMIT as f64));
            }
        }
        Ok(())
    }

    /// Appends `count` points to a flat buffer.
    pub fn fill(&self, rng: &mut SimRng, count: usize, out: &mut Vec<f64>) -> Result<()> {
        let n = self.dim();
        let start = out.len();
        out.resize(start + count * n, 0.0);
        for chunk in out[start..].chunks_exact_mut(n) {
            self.sample_into(rng, chunk)?;
        }
        Ok(())
    }
}

/// One uniform point in `body`.
pub fn sample_uniform_body(body: &dyn ConvexBody, rng: &mut SimRng) -> Result<Vec<f64>> {
    let s = UniformSampler::new(body);
    let mut out = vec![0.0; body.dim()];
    s.sample_into(rng, &mut out)?;
    Ok(out)
}

pub(crate) fn unit_ball_point(rng: &mut SimRng, out: &mut [f64]) {
    let n = out.len();
    unit_sphere_point(rng, out);
    let r: f64 = rng.random::<f64>().powf(1.0 / n as f64);
    out.iter_mut().for_each(|x| *x *= r);
}

pub(crate) fn unit_sphere_point(rng: &mut SimRng, out: &mut [f64]) {
    loop {
        let mut s = 0.0;
        for x in out.iter_mut() {
            *x = StandardNormal.sample(rng);
            s += *x * *x;
        }
        if s > 1e-300 {
            let r = s.sqrt();
            out.iter_mut().for_each(|x| *x /= r);
            return;
        }
    }
}

/// Uniform point of the simplex with the given vertices, from normalized
/// exponential spacings.
pub(crate) fn dirichlet_combination<'p>(
    rng: &mut SimRng,
    vertices: impl Iterator<Item = &'p [f64]> + Clone,
    out: &mut [f64],
) {
    let weights: Vec<f64> = vertices.clone().map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    out.iter_mut().for_each(|x| *x = 0.0);
    for (w, v) in weights.iter().zip(vertices) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += w / total * x;
        }
    }
}

pub(crate) fn cumulative(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    let mut c: Vec<f64> = weights
        .iter()
        .map(|w| {
            acc += w / total;
            acc
        })
        .collect();
    if let Some(last) = c.last_mut() {
        *last = 1.0;
    }
    c
}

pub(crate) fn pick(cumulative: &[f64], rng: &mut SimRng) -> usize {
    let u: f64 = rng.random();
    cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1)
}
