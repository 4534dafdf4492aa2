use std::sync::OnceLock;

use super::{BodyRef, ConvexBody};
use crate::error::{Error, Result};
use crate::geometry::{VPolytope, MAX_DIM, MAX_EXACT_DIM};

/// Axis-parallel cube `[lo, hi]^n`.
#[derive(Clone, Debug)]
pub struct Cube {
    dim: usize,
    pub lo: f64,
    pub hi: f64,
    poly: OnceLock<Option<VPolytope>>,
}

impl Cube {
    pub fn new(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::OutOfRange(format!("dimension {dim}")));
        }
        if !(hi > lo) {
            return Err(Error::invalid("cube needs lo < hi"));
        }
        Ok(Self {
            dim,
            lo,
            hi,
            poly: OnceLock::new(),
        })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, 0.0, 1.0)
    }

    pub fn side(&self) -> f64 {
        self.hi - self.lo
    }

    fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl ConvexBody for Cube {
    fn dim(&self) -> usize {
        self.dim
    }

    fn name(&self) -> String {
        format!("cube{}[{},{}]", self.dim, self.lo, self.hi)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter().all(|&v| v >= self.lo - tol && v <= self.hi + tol)
    }

    fn support(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let x: Vec<f64> = u.iter().map(|&d| if d >= 0.0 { self.hi } else { self.lo }).collect();
        (crate::numeric::dot(&x, u), x)
    }

    fn volume(&self) -> f64 {
        self.side().powi(self.dim as i32)
    }

    fn surface_area(&self) -> f64 {
        2.0 * self.dim as f64 * self.side().powi(self.dim as i32 - 1)
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![self.lo; self.dim], vec![self.hi; self.dim])
    }

    fn centroid(&self) -> Vec<f64> {
        vec![self.mid(); self.dim]
    }

    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        let m = self.mid();
        let (k, _) = x
            .iter()
            .enumerate()
            .max_by(|a, b| (a.1 - m).abs().total_cmp(&(b.1 - m).abs()))
            .unwrap();
        let mut n = vec![0.0; self.dim];
        n[k] = (x[k] - m).signum();
        Ok(n)
    }

    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        let mut t = f64::INFINITY;
        for (p, d) in from.iter().zip(dir) {
            if *d > 0.0 {
                t = t.min((self.hi - p) / d);
            } else if *d < 0.0 {
                t = t.min((self.lo - p) / d);
            }
        }
        from.iter().zip(dir).map(|(p, d)| p + t * d).collect()
    }

    fn boundary_distance(&self, x: &[f64]) -> f64 {
        if self.contains(x, 0.0) {
            x.iter()
                .map(|&v| (v - self.lo).min(self.hi - v))
                .fold(f64::INFINITY, f64::min)
        } else {
            x.iter()
                .map(|&v| (self.lo - v).max(v - self.hi).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt()
        }
    }

    fn polytope(&self) -> Option<&VPolytope> {
        self.poly
            .get_or_init(|| {
                (self.dim <= MAX_EXACT_DIM)
                    .then(|| VPolytope::cube(self.dim, self.lo, self.hi).ok())
                    .flatten()
            })
            .as_ref()
    }

    fn view(&self) -> BodyRef<'_> {
        BodyRef::Cube(self)
    }
}
