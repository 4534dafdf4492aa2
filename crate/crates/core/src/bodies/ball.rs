use super::{check_unit, BodyRef, ConvexBody};
use crate::error::{Error, Result};
use crate::numeric::{dist, dot, norm, unit_ball_volume, unit_sphere_area};

/// Euclidean ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(2..=crate::geometry::MAX_DIM).contains(&center.len()) {
            return Err(Error::OutOfRange(format!("dimension {}", center.len())));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("ball radius must be positive"));
        }
        Ok(Self { center, radius })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim], 1.0)
    }
}

impl ConvexBody for Ball {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn name(&self) -> String {
        format!("ball{}(r={})", self.dim(), self.radius)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        dist(x, &self.center) <= self.radius + tol
    }

    fn support(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let len = norm(u);
        let e = check_unit(u);
        let x: Vec<f64> = self.center.iter().zip(&e).map(|(c, d)| c + self.radius * d).collect();
        (dot(&self.center, u) + self.radius * len, x)
    }

    fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.radius.powi(self.dim() as i32)
    }

    fn surface_area(&self) -> f64 {
        unit_sphere_area(self.dim()) * self.radius.powi(self.dim() as i32 - 1)
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.center.iter().map(|c| c - self.radius).collect(),
            self.center.iter().map(|c| c + self.radius).collect(),
        )
    }

    fn centroid(&self) -> Vec<f64> {
        self.center.clone()
    }

    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        if crate::numeric::norm(&d) == 0.0 {
            return Err(Error::OutOfRange("centre has no normal".into()));
        }
        Ok(check_unit(&d))
    }

    fn curvature(&self, _x: &[f64]) -> Result<f64> {
        Ok(self.radius.powi(-(self.dim() as i32 - 1)))
    }

    fn affine_surface_area(&self) -> Result<f64> {
        let n = self.dim() as f64;
        Ok(self.surface_area() * self.radius.powf(-(n - 1.0) / (n + 1.0)))
    }

    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        // |from + t u - c| = r, largest root
        let u = check_unit(dir);
        let w: Vec<f64> = from.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let b = dot(&w, &u);
        let c = dot(&w, &w) - self.radius * self.radius;
        let t = -b + (b * b - c).max(0.0).sqrt();
        from.iter().zip(&u).map(|(p, d)| p + t * d).collect()
    }

    fn boundary_distance(&self, x: &[f64]) -> f64 {
        (dist(x, &self.center) - self.radius).abs()
    }

    fn view(&self) -> BodyRef<'_> {
        BodyRef::Ball(self)
    }
}
