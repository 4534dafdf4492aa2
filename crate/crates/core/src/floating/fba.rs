//! Vertex selection driven by the floating body: keep adding the support
//! point of K in a direction where the current hull falls short of K_δ.

use serde::Serialize;

use super::body::{floating_body, FloatingBodyResult};
use super::directions::{default_grid, direction_grid};
use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::experiments::fit::{rate_fit, RateFit, RateModel};
use crate::geometry::{convex_hull, Halfspace, VPolytope};
use crate::numeric::{dot, unit_ball_volume};

pub const MAX_STEPS: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct FbaRun {
    pub delta: f64,
    /// Chosen boundary points x_1, ..., x_N.
    pub points: Vec<Vec<f64>>,
    /// Support hyperplane of K_δ used to select each point after the first.
    pub hyperplanes: Vec<Halfspace>,
    pub terminated: bool,
    pub floating: FloatingBodyResult,
    /// Largest remaining gap h_{K_δ}(u) − max_k ⟨x_k, u⟩ over the grid.
    pub final_gap: f64,
}

impl FbaRun {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn polytope(&self) -> Result<VPolytope> {
        convex_hull(&self.points)
    }
}

/// e^{16n} vol(K \ K_δ) / (vol(B^n) δ).
pub fn fba_bound(n: usize, loss: f64, delta: f64) -> f64 {
    (16.0 * n as f64).exp() * loss / (unit_ball_volume(n) * delta)
}

/// Runs the selection for 0 < δ ≤ vol(K)/(4e⁴), the range in which the
/// cardinality bound [`fba_bound`] is known to hold. `grid` is the number
/// of directions (0 for the default).
pub fn floating_body_algorithm(body: &dyn ConvexBody, delta: f64, grid: usize) -> Result<FbaRun> {
    let max = body.volume() / (4.0 * 4f64.exp());
    if !(delta > 0.0 && delta <= max) {
        return Err(Error::DeltaOutOfRange { delta, max });
    }
    select_vertices(body, delta, grid)
}

/// The selection itself, for any δ with a nonempty floating body.
pub fn select_vertices(body: &dyn ConvexBody, delta: f64, grid: usize) -> Result<FbaRun> {
    let n = body.dim();
    let grid = if grid == 0 { default_grid(n) } else { grid };
    let floating = floating_body(body, delta, grid)?;
    let dirs = direction_grid(n, grid);
    let target: Vec<f64> = dirs.iter().map(|u| floating.support(u)).collect();
    let first = body.support(&dirs[0]).1;
    let mut best: Vec<f64> = dirs.iter().map(|u| dot(u, &first)).collect();
    let mut points = vec![first];
    let mut hyperplanes = Vec::new();
    loop {
        let (k, gap) = target
            .iter()
            .zip(&best)
            .map(|(t, b)| t - b)
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("grid is nonempty");
        if gap <= 0.0 {
            return Ok(FbaRun { delta, points, hyperplanes, terminated: true, floating, final_gap: gap });
        }
        if points.len() >= MAX_STEPS {
            return Err(Error::NonTermination(points.len()));
        }
        let u = &dirs[k];
        hyperplanes.push(Halfspace { normal: u.clone(), offset: target[k] });
        let x = body.support(u).1;
        for (b, v) in best.iter_mut().zip(&dirs) {
            *b = b.max(dot(v, &x));
        }
        points.push(x);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FbaRatePoint {
    pub delta: f64,
    pub n: usize,
    /// vol(K) − vol(P_N); the hull is inscribed so this is d_S.
    pub missed: f64,
}

/// Missed volume of the selected polytopes against their size, with a
/// pure power-law fit (exponent −2/(n−1) expected).
pub fn fba_smooth_rate(body: &dyn ConvexBody, deltas: &[f64], grid: usize) -> Result<(Vec<FbaRatePoint>, RateFit)> {
    let vol = body.volume();
    let mut pts = Vec::new();
    for &d in deltas {
        let run = floating_body_algorithm(body, d, grid)?;
        let missed = vol - run.polytope()?.volume();
        pts.push(FbaRatePoint { delta: d, n: run.n(), missed });
    }
    let data: Vec<(f64, f64)> = pts.iter().map(|p| (p.n as f64, p.missed)).collect();
    let fit = rate_fit(&data, RateModel::PurePower)?;
    Ok((pts, fit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{cap_height, cap_volume, Ball, Cube};
    use std::f64::consts::PI;

    #[test]
    fn disk_run_contains_floating_disk() {
        let disk = Ball::unit(2).unwrap();
        let delta = cap_volume(2, 1.0 - (PI / 8.0).cos()).unwrap();
        // above the admissible range, so only containment is checked here
        assert!(floating_body_algorithm(&disk, delta, 0).is_err());
        let run = select_vertices(&disk, delta, 0).unwrap();
        assert!(run.terminated);
        let p = run.polytope().unwrap();
        let r = 1.0 - cap_height(2, delta).unwrap();
        for u in direction_grid(2, 4096) {
            assert!(p.support(&u).0 >= r - 1e-6);
        }
        for x in &run.points {
            assert!((crate::numeric::norm(x) - 1.0).abs() < 1e-12);
        }
        assert!(run.n() >= 8);
    }

    #[test]
    fn cardinality_bound_in_range() {
        let disk = Ball::unit(2).unwrap();
        for k in 1..=5 {
            let delta = PI / (4.0 * 4f64.exp()) / k as f64;
            let run = floating_body_algorithm(&disk, delta, 0).unwrap();
            let loss = run.floating.volume_loss();
            assert!((run.n() as f64) <= fba_bound(2, loss, delta));
        }
    }

    #[test]
    fn square_run_picks_boundary_points() {
        let sq = Cube::unit(2).unwrap();
        let delta = 0.99 / (4.0 * 4f64.exp());
        let run = floating_body_algorithm(&sq, delta, 512).unwrap();
        for x in &run.points {
            assert!(sq.boundary_distance(x) < 1e-9);
        }
        assert!(run.polytope().unwrap().volume() <= 1.0 + 1e-12);
    }

    #[test]
    fn rejects_large_delta() {
        let disk = Ball::unit(2).unwrap();
        assert!(matches!(floating_body_algorithm(&disk, 0.1, 0), Err(Error::DeltaOutOfRange { .. })));
    }

    #[test]
    fn disk_rate_exponent() {
        let disk = Ball::unit(2).unwrap();
        let deltas: Vec<f64> = (0..10).map(|k| 1e-2 * 0.25f64.powi(k)).collect();
        let (pts, fit) = fba_smooth_rate(&disk, &deltas, 0).unwrap();
        assert!((fit.exponent + 2.0).abs() < 0.15, "{fit:?}");
        assert!(pts.windows(2).all(|w| w[1].missed <= w[0].missed + 1e-12));
    }
}
