//! Greedy separated sets on the sphere that cover it at a given angle.

use std::f64::consts::PI;

use super::uniform::unit_sphere_point;
use super::RandomSource;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, VPolytope};
use crate::numeric::dot;

const POOL: usize = 200_000;

/// Points ξ_i on the sphere with pairwise angles ≥ φ whose hull has
/// inradius ≥ cos φ, i.e. every unit x has some ⟨x, ξ_i⟩ ≥ cos φ.
///
/// Regular polygons (n = 2) and Fibonacci lattices (n = 3) are tried
/// first since they approximate the ball much better than greedy sets;
/// otherwise a greedy maximal separated subset of a quasi-uniform pool is
/// used. Facet normals are then added while the inradius is short.
#[derive(Clone, Debug)]
pub struct SphereCovering {
    pub points: Vec<Vec<f64>>,
    pub polytope: VPolytope,
    /// Points added after the greedy pass to close uncovered gaps.
    pub refinements: usize,
}

/// Quasi-uniform candidate directions: equally spaced angles on the
/// circle, a Fibonacci lattice on S², fixed-seed Gaussian directions above.
pub fn sphere_pool(n: usize, m: usize) -> Vec<Vec<f64>> {
    match n {
        2 => (0..m)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        3 => fibonacci_sphere(m),
        _ => {
            let mut rng = RandomSource::new(0xc0de, n as u64).rng();
            (0..m)
                .map(|_| {
                    let mut x = vec![0.0; n];
                    unit_sphere_point(&mut rng, &mut x);
                    x
                })
                .collect()
        }
    }
}

pub fn fibonacci_sphere(m: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..m)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / m as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * k as f64;
            vec![r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

pub fn sphere_covering(n: usize, phi: f64) -> Result<SphereCovering> {
    if !(2..=4).contains(&n) {
        return Err(Error::OutOfRange(format!("sphere coverings need n in 2..=4, got {n}")));
    }
    if !(phi > 0.0 && phi < PI / 2.0) {
        return Err(Error::OutOfRange(format!("angle {phi} outside (0, π/2)")));
    }
    let c = phi.cos();
    let mut points = match structured(n, phi) {
        Some(p) => p,
        None => greedy(n, c),
    };
    if points.len() < n + 1 {
        return Err(Error::PoolExhausted);
    }
    let mut refinements = 0;
    loop {
        let poly = convex_hull(&points).map_err(|_| Error::PoolExhausted)?;
        let worst = poly
            .facets()
            .iter()
            .min_by(|a, b| a.halfspace.offset.total_cmp(&b.halfspace.offset))
            .expect("hull has facets");
        if worst.halfspace.offset >= c {
            return Ok(SphereCovering { points, polytope: poly, refinements });
        }
        // The facet normal is at angle > φ from every point on or below the
        // facet plane, so separation is kept.
        points.push(worst.halfspace.normal.clone());
        refinements += 1;
        if refinements > 100_000 {
            return Err(Error::PoolExhausted);
        }
    }
}

/// Greedy maximal cos-separated subset of the candidate pool.
fn greedy(n: usize, c: f64) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    for p in sphere_pool(n, POOL) {
        if points.iter().all(|q| dot(q, &p) <= c) {
            points.push(p);
        }
    }
    points
}

/// The densest regular polygon or Fibonacci lattice whose points are
/// φ-separated, when it also covers at angle φ on a validation set.
fn structured(n: usize, phi: f64) -> Option<Vec<Vec<f64>>> {
    let c = phi.cos();
    let pts = match n {
        2 => {
            let m = (2.0 * PI / phi).floor() as usize;
            sphere_pool(2, m)
        }
        3 => {
            // hexagonal packing density bounds the count from above
            let mut m = (8.0 * PI / (3f64.sqrt() * phi * phi)).ceil() as usize + 8;
            loop {
                if m < 4 {
                    return None;
                }
                let cand = fibonacci_sphere(m);
                if min_separated(&cand, c) {
                    break cand;
                }
                m -= 1;
            }
        }
        _ => return None,
    };
    let covers = sphere_pool(n, 20_000)
        .iter()
        .all(|x| pts.iter().any(|p| dot(p, x) >= c));
    covers.then_some(pts)
}

fn min_separated(points: &[Vec<f64>], c: f64) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, a)| points[i + 1..].iter().all(|b| dot(a, b) <= c))
}
