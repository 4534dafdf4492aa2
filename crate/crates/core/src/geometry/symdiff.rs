//! Volume of the symmetric difference of two bodies.

use std::time::Instant;

use rand::Rng;

use crate::bodies::{certify_containment, ConvexBody};
use crate::error::{Error, Result};
use crate::experiments::estimate::EstimateRecord;
use crate::sampling::RandomSource;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SymdiffMode {
    /// `|vol A - vol B|`, valid once one body is certified to contain the other.
    ExactNested,
    /// Hit counting over the common bounding box.
    MonteCarlo { samples: usize, seed: u64 },
}

/// vol(A △ B).
pub fn symdiff_volume(a: &dyn ConvexBody, b: &dyn ConvexBody, mode: SymdiffMode) -> Result<EstimateRecord> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("bodies live in different dimensions"));
    }
    match mode {
        SymdiffMode::ExactNested => {
            let (la, ha) = a.bounding_box();
            let scale = la.iter().zip(&ha).map(|(l, h)| h - l).fold(0.0, f64::max);
            let tol = 1e-12 * scale;
            if certify_containment(a, b, tol) || certify_containment(b, a, tol) {
                Ok(EstimateRecord::exact((a.volume() - b.volume()).abs()))
            } else {
                Err(Error::ContainmentNotCertified)
            }
        }
        SymdiffMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::invalid("Monte Carlo needs at least one sample"));
            }
            let start = Instant::now();
            let (la, ha) = a.bounding_box();
            let (lb, hb) = b.bounding_box();
            let lo: Vec<f64> = la.iter().zip(&lb).map(|(x, y)| x.min(*y)).collect();
            let hi: Vec<f64> = ha.iter().zip(&hb).map(|(x, y)| x.max(*y)).collect();
            let box_vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
            let mut rng = RandomSource::new(seed, 0).rng();
            let mut x = vec![0.0; lo.len()];
            let mut hits = 0usize;
            for _ in 0..samples {
                for (k, xk) in x.iter_mut().enumerate() {
                    *xk = rng.random_range(lo[k]..hi[k]);
                }
                if a.contains(&x, 0.0) != b.contains(&x, 0.0) {
                    hits += 1;
                }
            }
            let p = hits as f64 / samples as f64;
            Ok(EstimateRecord {
                value: box_vol * p,
                stderr: box_vol * (p * (1.0 - p) / samples as f64).sqrt(),
                samples,
                seed: Some(seed),
                wall_seconds: start.elapsed().as_secs_f64(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ball, Cube, PolytopeBody};
    use crate::geometry::VPolytope;
    use std::f64::consts::PI;

    #[test]
    fn identical_bodies() {
        let d = Ball::unit(2).unwrap();
        let r = symdiff_volume(&d, &d, SymdiffMode::ExactNested).unwrap();
        assert_eq!((r.value, r.stderr), (0.0, 0.0));
    }

    #[test]
    fn disk_and_inscribed_square() {
        let d = Ball::unit(2).unwrap();
        let sq = PolytopeBody::new(VPolytope::cross_polytope(2).unwrap());
        let r = symdiff_volume(&d, &sq, SymdiffMode::ExactNested).unwrap();
        assert!((r.value - (PI - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn shifted_squares_by_monte_carlo() {
        let a = Cube::unit(2).unwrap();
        let b = PolytopeBody::new(VPolytope::cube(2, 0.0, 1.0).unwrap().translated(&[0.5, 0.0]).unwrap());
        assert_eq!(symdiff_volume(&a, &b, SymdiffMode::ExactNested).unwrap_err(), Error::ContainmentNotCertified);
        let r = symdiff_volume(&a, &b, SymdiffMode::MonteCarlo { samples: 1_000_000, seed: 5 }).unwrap();
        assert!((r.value - 1.0).abs() < 3.0 * r.stderr, "{r:?}");
    }
}
