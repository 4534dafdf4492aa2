//! Floating bodies K_δ: the intersection of all halfspaces whose
//! complements cut volume δ off K.

use rayon::prelude::*;

use super::directions::{clustered_planar, default_grid, direction_grid};
use crate::bodies::{cap_height, Ball, BodyRef, ConvexBody, Ellipsoid};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, HPolytope, Halfspace, VPolytope};
use crate::numeric::{dot, unit_ball_volume};
use crate::sampling::{RandomSource, UniformSampler};

/// Samples used for cut volumes of bodies without an exact method.
pub const MC_SAMPLES: usize = 1_000_000;

/// Angular reach of the clustered directions around each edge normal. The
/// corner hyperbolas of K_δ are nearly flat near the edges (curvature
/// radius of order 1/δ) and need fine angular steps there.
const CLUSTER_SPAN: f64 = 1.0;

/// Polygons with more edges get no extra directions near edge normals.
pub const MAX_CLUSTERED_EDGES: usize = 64;

/// How a floating body is represented.
#[derive(Clone, Debug)]
pub enum FloatingShape {
    /// Exact, for balls.
    Ball(Ball),
    /// Exact, for ellipsoids (affine image of the ball case).
    Ellipsoid(Ellipsoid),
    /// Intersection of the δ-cuts in finitely many directions.
    Cuts {
        directions: Vec<Vec<f64>>,
        offsets: Vec<f64>,
        polytope: VPolytope,
        volume: f64,
    },
}

#[derive(Clone, Debug)]
pub struct FloatingBodyResult {
    pub delta: f64,
    /// Volume of the original body.
    pub body_volume: f64,
    pub shape: FloatingShape,
    /// True when the representation is exact. A finite set of cuts gives
    /// an outer approximation that shrinks to K_δ as the grid is refined.
    pub exact: bool,
}

impl FloatingBodyResult {
    pub fn volume(&self) -> f64 {
        match &self.shape {
            FloatingShape::Ball(b) => b.volume(),
            FloatingShape::Ellipsoid(e) => e.volume(),
            FloatingShape::Cuts { volume, .. } => *volume,
        }
    }

    /// vol(K) - vol(K_δ).
    pub fn volume_loss(&self) -> f64 {
        match &self.shape {
            FloatingShape::Ball(b) => {
                let n = b.center.len() as i32;
                // r^n - (r(1-h))^n without cancellation
                let outer_r = self.outer_radius();
                unit_ball_volume(n as usize) * (outer_r.powi(n) - b.radius.powi(n))
            }
            _ => self.body_volume - self.volume(),
        }
    }

    fn outer_radius(&self) -> f64 {
        let n = match &self.shape {
            FloatingShape::Ball(b) => b.center.len(),
            _ => unreachable!(),
        };
        (self.body_volume / unit_ball_volume(n)).powf(1.0 / n as f64)
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        match &self.shape {
            FloatingShape::Ball(b) => b.support(u).0,
            FloatingShape::Ellipsoid(e) => e.support(u).0,
            FloatingShape::Cuts { polytope, .. } => polytope.support(u).0,
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match &self.shape {
            FloatingShape::Ball(b) => b.contains(x, tol),
            FloatingShape::Ellipsoid(e) => e.contains(x, tol),
            FloatingShape::Cuts { polytope, .. } => polytope.contains(x, tol),
        }
    }
}

/// Floating body of `body` at cut volume `delta`.
///
/// Balls and ellipsoids are handled exactly. Otherwise the offset of the
/// δ-cut is found for each of `grid` directions: by exact polygon cuts in
/// the plane (with extra directions clustered at the edge normals), by
/// clipping for polytopes in higher dimension, and by quantiles of
/// Monte Carlo projections for other bodies.
pub fn floating_body(body: &dyn ConvexBody, delta: f64, grid: usize) -> Result<FloatingBodyResult> {
    let vol = body.volume();
    if !(delta > 0.0 && delta < vol / 2.0) {
        return Err(Error::DeltaOutOfRange { delta, max: vol / 2.0 });
    }
    let n = body.dim();
    let grid = if grid == 0 { default_grid(n) } else { grid };
    let shape = match body.view() {
        BodyRef::Ball(b) => {
            let rn = b.radius.powi(n as i32);
            let h = cap_height(n, delta / rn)?;
            FloatingShape::Ball(Ball::new(b.center.clone(), b.radius * (1.0 - h))?)
        }
        BodyRef::Ellipsoid(e) => {
            let det: f64 = e.semiaxes.iter().product();
            let h = cap_height(n, delta / det)?;
            FloatingShape::Ellipsoid(Ellipsoid::new(
                e.center.clone(),
                e.semiaxes.iter().map(|a| a * (1.0 - h)).collect(),
                e.rotation.clone(),
            )?)
        }
        _ => match body.polytope() {
            Some(p) if n == 2 => planar_cuts(p, delta, grid)?,
            Some(p) => polytope_cuts(p, delta, grid)?,
            None => sampled_cuts(body, delta, grid)?,
        },
    };
    let exact = !matches!(shape, FloatingShape::Cuts { .. });
    Ok(FloatingBodyResult { delta, body_volume: vol, shape, exact })
}

fn planar_cuts(p: &VPolytope, delta: f64, grid: usize) -> Result<FloatingShape> {
    let ring: Vec<[f64; 2]> = p.vertices().iter().map(|v| [v[0], v[1]]).collect();
    let normals: Vec<Vec<f64>> = p.facets().iter().map(|f| f.halfspace.normal.clone()).collect();
    let mut dirs = direction_grid(2, grid);
    // Cut normals of K_δ approach the edge normals to within about δ/vol.
    // Polygons with many short edges behave like smooth bodies and need
    // no clustering.
    let smallest = (1e-2 * delta / p.volume()).max(1e-12);
    if normals.len() <= MAX_CLUSTERED_EDGES {
        dirs.extend(clustered_planar(&normals, CLUSTER_SPAN, smallest));
    }
    let offsets: Vec<f64> = dirs
        .par_iter()
        .enumerate()
        .map(|(i, u)| polygon_cut_offset(&ring, [u[0], u[1]], delta).ok_or(Error::CutVolumeUnresolved { direction: i }))
        .collect::<Result<_>>()?;
    let poly_ring = halfplane_intersection(&dirs, &offsets).ok_or(Error::EmptyResult)?;
    let volume = ring_area(&poly_ring);
    let pts: Vec<Vec<f64>> = poly_ring.iter().map(|q| q.to_vec()).collect();
    let polytope = convex_hull(&pts)?;
    Ok(FloatingShape::Cuts { directions: dirs, offsets, polytope, volume })
}

/// Polygon vertices in counter-clockwise order.
fn ring_area(ring: &[[f64; 2]]) -> f64 {
    let m = ring.len();
    0.5 * (0..m)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % m]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

/// Area of `{x in P : <u, x> >= t}` for a counter-clockwise polygon.
fn polygon_cap_area(ring: &[[f64; 2]], u: [f64; 2], t: f64) -> f64 {
    let m = ring.len();
    let s: Vec<f64> = ring.iter().map(|v| v[0] * u[0] + v[1] * u[1] - t).collect();
    let mut cap: Vec<[f64; 2]> = Vec::with_capacity(m + 2);
    for i in 0..m {
        let j = (i + 1) % m;
        if s[i] >= 0.0 {
            cap.push(ring[i]);
        }
        if (s[i] >= 0.0) != (s[j] >= 0.0) {
            let w = s[i] / (s[i] - s[j]);
            cap.push([ring[i][0] + w * (ring[j][0] - ring[i][0]), ring[i][1] + w * (ring[j][1] - ring[i][1])]);
        }
    }
    if cap.len() < 3 {
        return 0.0;
    }
    // centre on the first point to limit cancellation
    let o = cap[0];
    let shifted: Vec<[f64; 2]> = cap.iter().map(|q| [q[0] - o[0], q[1] - o[1]]).collect();
    ring_area(&shifted)
}

/// Offset t with cap area δ in direction u, bisected to full precision.
fn polygon_cut_offset(ring: &[[f64; 2]], u: [f64; 2], delta: f64) -> Option<f64> {
    let proj = ring.iter().map(|v| v[0] * u[0] + v[1] * u[1]);
    let hi0 = proj.clone().fold(f64::NEG_INFINITY, f64::max);
    let lo0 = proj.fold(f64::INFINITY, f64::min);
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if polygon_cap_area(ring, u, mid) > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let err = (polygon_cap_area(ring, u, t) - delta).abs();
    (err <= f64::max(1e-9, 1e-4 * delta)).then_some(t)
}

/// Counter-clockwise vertices of `∩ {<u_i, x> <= t_i}` (sorted-angle
/// sweep with a deque).
pub fn halfplane_intersection(dirs: &[Vec<f64>], offsets: &[f64]) -> Option<Vec<[f64; 2]>> {
    struct Line {
        ang: f64,
        u: [f64; 2],
        t: f64,
    }
    let mut lines: Vec<Line> = dirs
        .iter()
        .zip(offsets)
        .map(|(u, &t)| Line { ang: u[1].atan2(u[0]), u: [u[0], u[1]], t })
        .collect();
    lines.sort_by(|a, b| a.ang.total_cmp(&b.ang).then(a.t.total_cmp(&b.t)));
    // keep the tightest line per angle
    lines.dedup_by(|later, earlier| later.ang == earlier.ang);
    let meet = |a: &Line, b: &Line| -> Option<[f64; 2]> {
        let det = a.u[0] * b.u[1] - a.u[1] * b.u[0];
        if det.abs() < 1e-300 {
            return None;
        }
        Some([(a.t * b.u[1] - b.t * a.u[1]) / det, (a.u[0] * b.t - b.u[0] * a.t) / det])
    };
    let outside = |l: &Line, p: [f64; 2]| l.u[0] * p[0] + l.u[1] * p[1] > l.t;
    let mut dq: std::collections::VecDeque<usize> = Default::default();
    let mut pts: std::collections::VecDeque<[f64; 2]> = Default::default();
    for i in 0..lines.len() {
        while !pts.is_empty() && outside(&lines[i], *pts.back().unwrap()) {
            pts.pop_back();
            dq.pop_back();
        }
        while !pts.is_empty() && outside(&lines[i], *pts.front().unwrap()) {
            pts.pop_front();
            dq.pop_front();
        }
        if let Some(&last) = dq.back() {
            pts.push_back(meet(&lines[last], &lines[i])?);
        }
        dq.push_back(i);
    }
    loop {
        if pts.len() >= 2 && outside(&lines[dq[0]], *pts.back().unwrap()) {
            pts.pop_back();
            dq.pop_back();
        } else if pts.len() >= 2 && outside(&lines[*dq.back().unwrap()], *pts.front().unwrap()) {
            pts.pop_front();
            dq.pop_front();
        } else {
            break;
        }
    }
    if dq.len() < 3 {
        return None;
    }
    let first = dq[0];
    let last = *dq.back().unwrap();
    pts.push_back(meet(&lines[last], &lines[first])?);
    // pts[k] is the meet of dq[k] and dq[k+1]
    Some(pts.into_iter().collect())
}

fn polytope_cuts(p: &VPolytope, delta: f64, grid: usize) -> Result<FloatingShape> {
    let n = p.dim();
    let dirs = direction_grid(n, grid);
    let tol = f64::max(1e-9, 1e-4 * delta);
    let offsets: Vec<f64> = dirs
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let cap = |t: f64| -> f64 {
                let h = Halfspace { normal: u.iter().map(|x| -x).collect(), offset: -t };
                match p.clip(&h) {
                    Ok(q) => q.volume(),
                    Err(_) => 0.0,
                }
            };
            let (hi0, _) = p.support(u);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            let lo0 = -p.support(&neg).0;
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let c = cap(mid);
                if (c - delta).abs() <= tol {
                    return Ok(mid);
                }
                if c > delta {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Err(Error::CutVolumeUnresolved { direction: i })
        })
        .collect::<Result<_>>()?;
    cuts_shape(n, dirs, offsets)
}

fn cuts_shape(n: usize, dirs: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<FloatingShape> {
    let hs: Vec<Halfspace> = dirs
        .iter()
        .zip(&offsets)
        .map(|(u, &t)| Halfspace { normal: u.clone(), offset: t })
        .collect();
    let polytope = HPolytope::new(n, hs)?.to_vpolytope()?;
    let volume = polytope.volume();
    Ok(FloatingShape::Cuts { directions: dirs, offsets, polytope, volume })
}

/// Cut offsets from the order statistics of projected uniform samples.
fn sampled_cuts(body: &dyn ConvexBody, delta: f64, grid: usize) -> Result<FloatingShape> {
    let n = body.dim();
    let sampler = UniformSampler::new(body);
    let mut rng = RandomSource::new(0x5eed_f10a7, 0).rng();
    let mut pts = Vec::with_capacity(MC_SAMPLES * n);
    sampler.fill(&mut rng, MC_SAMPLES, &mut pts)?;
    let k = (delta / body.volume() * MC_SAMPLES as f64).round() as usize;
    if k < 100 {
        return Err(Error::CutVolumeUnresolved { direction: 0 });
    }
    let dirs = direction_grid(n, grid);
    let offsets: Vec<f64> = dirs
        .par_iter()
        .map(|u| {
            let mut proj: Vec<f64> = pts.chunks_exact(n).map(|x| dot(x, u)).collect();
            let (_, t, _) = proj.select_nth_unstable_by(MC_SAMPLES - k, f64::total_cmp);
            *t
        })
        .collect();
    cuts_shape(n, dirs, offsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{cap_volume, Cube, PolytopeBody, Simplex};
    use std::f64::consts::PI;

    #[test]
    fn disk_floating_body_is_a_disk() {
        let disk = Ball::unit(2).unwrap();
        let h = 0.1;
        let delta = cap_volume(2, h).unwrap();
        let f = floating_body(&disk, delta, 0).unwrap();
        match &f.shape {
            FloatingShape::Ball(b) => assert!((b.radius - 0.9).abs() < 1e-12),
            _ => panic!("expected exact disk"),
        }
        assert!((f.volume_loss() - PI * (1.0 - 0.81)).abs() < 1e-12);
        // grid construction agrees up to grid resolution
        let poly = PolytopeBody::new(VPolytope::regular_polygon(4096, 1.0).unwrap());
        let g = floating_body(&poly, delta, 1024).unwrap();
        assert!((g.volume() - f.volume()).abs() < 1e-4);
    }

    #[test]
    fn square_loss_matches_corner_hyperbolas() {
        let sq = Cube::unit(2).unwrap();
        let delta = 0.01;
        let f = floating_body(&sq, delta, 512).unwrap();
        let exact = 2.0 * delta * (1.0 + (1.0 / (2.0 * delta)).ln());
        assert!((f.volume_loss() / exact - 1.0).abs() < 0.01, "{} vs {exact}", f.volume_loss());
        assert!(!f.exact);
    }

    #[test]
    fn triangle_loss_matches_corner_hyperbolas() {
        let s = 2f64.sqrt();
        let tri = Simplex::new(vec![vec![0.0, 0.0], vec![s, 0.0], vec![0.0, s]]).unwrap();
        for delta in [1e-2, 1e-4] {
            let f = floating_body(&tri, delta, 0).unwrap();
            let exact = 1.5 * delta * (1.0 + (1.0 / delta).ln());
            assert!((f.volume_loss() / exact - 1.0).abs() < 1e-3, "{} vs {exact}", f.volume_loss());
        }
    }

    #[test]
    fn monotone_in_delta_and_symmetric() {
        let sq = Cube::new(2, -0.5, 0.5).unwrap();
        let a = floating_body(&sq, 0.001, 256).unwrap();
        let b = floating_body(&sq, 0.01, 256).unwrap();
        for u in direction_grid(2, 64) {
            assert!(b.support(&u) <= a.support(&u) + 1e-12);
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            assert!((a.support(&u) - a.support(&neg)).abs() < 1e-9);
        }
    }

    #[test]
    fn cube_floating_body_by_clipping() {
        let c = Cube::new(3, -0.5, 0.5).unwrap();
        let delta = 0.02;
        let f = floating_body(&c, delta, 200).unwrap();
        if let FloatingShape::Cuts { directions, offsets, .. } = &f.shape {
            let p = c.polytope().unwrap();
            for (u, &t) in directions.iter().zip(offsets).take(20) {
                let h = Halfspace { normal: u.iter().map(|x| -x).collect(), offset: -t };
                let cut = p.clip(&h).unwrap().volume();
                assert!((cut - delta).abs() <= 1e-4 * delta + 1e-9);
            }
        } else {
            panic!("expected cuts");
        }
        assert!(f.volume() < 1.0 && f.volume() > 0.5);
    }

    #[test]
    fn ellipse_floating_body_is_affine_image() {
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 0.5]).unwrap();
        let f = floating_body(&e, 0.05, 0).unwrap();
        let d = floating_body(&Ball::unit(2).unwrap(), 0.05, 0).unwrap();
        assert!((f.volume() - d.volume()).abs() < 1e-12);
    }

    #[test]
    fn rejects_large_delta() {
        let disk = Ball::unit(2).unwrap();
        assert!(matches!(floating_body(&disk, 2.0, 0), Err(Error::DeltaOutOfRange { .. })));
    }

    #[test]
    fn halfplanes_of_a_square() {
        let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 0.0]];
        let offs = [1.0, 1.0, 1.0, 1.0, 2.0];
        let ring = halfplane_intersection(&dirs, &offs).unwrap();
        assert_eq!(ring.len(), 4);
        assert!((ring_area(&ring) - 4.0).abs() < 1e-12);
    }
}
