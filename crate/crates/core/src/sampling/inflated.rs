//! Random polytopes on a slightly inflated sphere.

use super::random_polytope::{random_polytope, PointModel};
use super::boundary::BoundaryDensity;
use super::rng::SimRng;
use crate::bodies::Ball;
use crate::error::{Error, Result};
use crate::geometry::VPolytope;

/// Radius 1 + N^{-2/(n-1)} used for the inflated sphere.
pub fn inflated_radius(n: usize, n_points: usize) -> f64 {
    1.0 + (n_points as f64).powf(-2.0 / (n as f64 - 1.0))
}

/// Hull of N uniform points on the sphere of radius 1 + N^{-2/(n-1)}.
pub fn inflated_sphere_polytope(n: usize, n_points: usize, rng: &mut SimRng) -> Result<VPolytope> {
    if !(2..=3).contains(&n) {
        return Err(Error::OutOfRange(format!("inflated spheres need n in 2..=3, got {n}")));
    }
    if n_points < 2 * n {
        return Err(Error::invalid(format!("need N >= {}", 2 * n)));
    }
    let ball = Ball::new(vec![0.0; n], inflated_radius(n, n_points))?;
    let model = PointModel::Boundary(BoundaryDensity::uniform());
    Ok(random_polytope(&ball, &model, n_points, rng)?.polytope)
}

/// Area of the intersection of the unit disk with a convex polygon given
/// counter-clockwise.
pub fn disk_polygon_intersection(ring: &[Vec<f64>]) -> f64 {
    let m = ring.len();
    (0..m)
        .map(|k| triangle_disk_area(&ring[k], &ring[(k + 1) % m]))
        .sum()
}

/// vol(B² △ P) for a convex polygon P.
pub fn disk_polygon_symdiff(poly: &VPolytope) -> f64 {
    let ring = poly.vertices();
    std::f64::consts::PI + poly.volume() - 2.0 * disk_polygon_intersection(ring)
}

/// Signed area of (unit disk) ∩ triangle(0, a, b).
fn triangle_disk_area(a: &[f64], b: &[f64]) -> f64 {
    // split segment ab at its crossings with the unit circle
    let d = [b[0] - a[0], b[1] - a[1]];
    let qa = d[0] * d[0] + d[1] * d[1];
    let qb = 2.0 * (a[0] * d[0] + a[1] * d[1]);
    let qc = a[0] * a[0] + a[1] * a[1] - 1.0;
    let disc = qb * qb - 4.0 * qa * qc;
    let mut ts = vec![0.0];
    if disc > 0.0 {
        let s = disc.sqrt();
        for t in [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)] {
            if t > 0.0 && t < 1.0 {
                ts.push(t);
            }
        }
    }
    ts.push(1.0);
    let at = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    let mut area = 0.0;
    for w in ts.windows(2) {
        let (p, q) = (at(w[0]), at(w[1]));
        let mid = at(0.5 * (w[0] + w[1]));
        let cross = p[0] * q[1] - p[1] * q[0];
        if disc > 0.0 && mid[0] * mid[0] + mid[1] * mid[1] < 1.0 {
            area += 0.5 * cross;
        } else {
            let dotpq = p[0] * q[0] + p[1] * q[1];
            area += 0.5 * cross.atan2(dotpq);
        }
    }
    area
}
