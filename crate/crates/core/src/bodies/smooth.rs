//! Smooth strictly convex planar bodies given by a boundary parameterization.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use super::{BodyRef, ConvexBody};
use crate::error::{Error, Result};
use crate::numeric::simpson_doubling;

const GRID: usize = 4096;

/// A closed counter-clockwise curve on [0, 2π) with analytic first and
/// second derivatives.
pub trait PlanarCurve: Send + Sync + std::fmt::Debug {
    fn point(&self, t: f64) -> [f64; 2];
    fn d1(&self, t: f64) -> [f64; 2];
    fn d2(&self, t: f64) -> [f64; 2];
}

/// Star-shaped curve `r(θ)(cos θ, sin θ)` with
/// `r(θ) = a0 + Σ_k (a_k cos kθ + b_k sin kθ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialTrig {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl RadialTrig {
    pub fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let r = Self { a0, cos, sin };
        if (0..GRID).any(|j| !(r.radius(TAU * j as f64 / GRID as f64).0 > 0.0)) {
            return Err(Error::invalid("radius function must stay positive"));
        }
        Ok(r)
    }

    /// r, r', r'' at θ.
    fn radius(&self, t: f64) -> (f64, f64, f64) {
        let (mut r, mut r1, mut r2) = (self.a0, 0.0, 0.0);
        let terms = self.cos.len().max(self.sin.len());
        for k in 1..=terms {
            let a = self.cos.get(k - 1).copied().unwrap_or(0.0);
            let b = self.sin.get(k - 1).copied().unwrap_or(0.0);
            let kf = k as f64;
            let (s, c) = (kf * t).sin_cos();
            r += a * c + b * s;
            r1 += kf * (-a * s + b * c);
            r2 -= kf * kf * (a * c + b * s);
        }
        (r, r1, r2)
    }
}

impl PlanarCurve for RadialTrig {
    fn point(&self, t: f64) -> [f64; 2] {
        let (r, _, _) = self.radius(t);
        [r * t.cos(), r * t.sin()]
    }

    fn d1(&self, t: f64) -> [f64; 2] {
        let (r, r1, _) = self.radius(t);
        let (s, c) = t.sin_cos();
        [r1 * c - r * s, r1 * s + r * c]
    }

    fn d2(&self, t: f64) -> [f64; 2] {
        let (r, r1, r2) = self.radius(t);
        let (s, c) = t.sin_cos();
        [r2 * c - 2.0 * r1 * s - r * c, r2 * s + 2.0 * r1 * c - r * s]
    }
}

/// Ellipse `c + R (a cos t, b sin t)` with R a rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipseCurve {
    pub a: f64,
    pub b: f64,
    pub center: [f64; 2],
    /// Rotation angle of the first axis.
    pub angle: f64,
}

impl EllipseCurve {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_frame(a, b, [0.0, 0.0], 0.0)
    }

    pub fn with_frame(a: f64, b: f64, center: [f64; 2], angle: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::invalid("semiaxes must be positive"));
        }
        Ok(Self { a, b, center, angle })
    }

    fn rot(&self, v: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.angle.sin_cos();
        [c * v[0] - s * v[1], s * v[0] + c * v[1]]
    }
}

impl PlanarCurve for EllipseCurve {
    fn point(&self, t: f64) -> [f64; 2] {
        let p = self.rot([self.a * t.cos(), self.b * t.sin()]);
        [p[0] + self.center[0], p[1] + self.center[1]]
    }

    fn d1(&self, t: f64) -> [f64; 2] {
        self.rot([-self.a * t.sin(), self.b * t.cos()])
    }

    fn d2(&self, t: f64) -> [f64; 2] {
        self.rot([-self.a * t.cos(), -self.b * t.sin()])
    }
}

/// Planar convex body bounded by a smooth curve of positive curvature.
#[derive(Clone, Debug)]
pub struct SmoothPlanarBody {
    curve: Arc<dyn PlanarCurve>,
    center: [f64; 2],
    /// Polar angle of grid points about `center`, unwrapped to increase.
    angles: Vec<f64>,
    area: f64,
    perimeter: f64,
    affine_area: f64,
    bbox: ([f64; 2], [f64; 2]),
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn grid_t(j: usize) -> f64 {
    TAU * j as f64 / GRID as f64
}

impl SmoothPlanarBody {
    /// Validates positive curvature on a 4096-point grid and precomputes
    /// area, centroid, perimeter and affine surface area.
    pub fn new<C: PlanarCurve + 'static>(curve: C) -> Result<Self> {
        let curve: Arc<dyn PlanarCurve> = Arc::new(curve);
        for j in 0..GRID {
            let t = grid_t(j);
            if !(cross(curve.d1(t), curve.d2(t)) > 0.0) {
                return Err(Error::invalid(format!(
                    "curvature is not positive at t = {t:.6}"
                )));
            }
        }
        let c = curve.clone();
        let area = 0.5
            * simpson_doubling(
                |t| {
                    let (p, d) = (c.point(t), c.d1(t));
                    p[0] * d[1] - p[1] * d[0]
                },
                0.0,
                TAU,
                1e-13,
            );
        if !(area > 0.0) {
            return Err(Error::invalid("curve must be counter-clockwise"));
        }
        let cx = simpson_doubling(|t| c.point(t)[0].powi(2) * c.d1(t)[1], 0.0, TAU, 1e-12) / (2.0 * area);
        let cy = -simpson_doubling(|t| c.point(t)[1].powi(2) * c.d1(t)[0], 0.0, TAU, 1e-12) / (2.0 * area);
        let perimeter = simpson_doubling(|t| speed(c.d1(t)), 0.0, TAU, 1e-13);
        let affine_area = simpson_doubling(|t| cross(c.d1(t), c.d2(t)).cbrt(), 0.0, TAU, 1e-12);
        let center = [cx, cy];
        let mut angles = Vec::with_capacity(GRID);
        let mut prev = f64::NAN;
        for j in 0..GRID {
            let p = curve.point(grid_t(j));
            let mut a = (p[1] - cy).atan2(p[0] - cx);
            if j > 0 {
                while a < prev {
                    a += TAU;
                }
            }
            angles.push(a);
            prev = a;
        }
        let mut body = Self {
            curve,
            center,
            angles,
            area,
            perimeter,
            affine_area,
            bbox: ([0.0; 2], [0.0; 2]),
        };
        let lo = [-body.support(&[-1.0, 0.0]).0, -body.support(&[0.0, -1.0]).0];
        let hi = [body.support(&[1.0, 0.0]).0, body.support(&[0.0, 1.0]).0];
        body.bbox = (lo, hi);
        Ok(body)
    }

    /// Body bounded by a trigonometric radius function.
    pub fn radial(curve: RadialTrig) -> Result<Self> {
        Self::new(curve)
    }

    pub fn curve(&self) -> &dyn PlanarCurve {
        self.curve.as_ref()
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// Curvature at parameter t.
    pub fn curvature_at(&self, t: f64) -> f64 {
        let d1 = self.curve.d1(t);
        cross(d1, self.curve.d2(t)) / speed(d1).powi(3)
    }

    /// |γ'(t)|.
    pub fn speed_at(&self, t: f64) -> f64 {
        speed(self.curve.d1(t))
    }

    /// Largest curvature on the validation grid.
    pub fn grid_max_curvature(&self) -> f64 {
        (0..GRID).map(|j| self.curvature_at(grid_t(j))).fold(0.0, f64::max)
    }

    /// Parameter of the boundary point on the ray from the centroid through x.
    pub fn param_of(&self, x: &[f64]) -> f64 {
        let [cx, cy] = self.center;
        let a0 = self.angles[0];
        let phi = a0 + ((x[1] - cy).atan2(x[0] - cx) - a0).rem_euclid(TAU);
        let j = self.angles.partition_point(|&a| a <= phi).max(1) - 1;
        let (mut lo, mut hi) = (grid_t(j), grid_t(j + 1));
        let base = self.angles[j];
        let rel = |t: f64| {
            let p = self.curve.point(t);
            let a = (p[1] - cy).atan2(p[0] - cx);
            base + (a - base + PI).rem_euclid(TAU) - PI
        };
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if rel(mid) <= phi {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn normal_at(&self, t: f64) -> [f64; 2] {
        let d = self.curve.d1(t);
        let s = speed(d);
        [d[1] / s, -d[0] / s]
    }
}

fn speed(d: [f64; 2]) -> f64 {
    (d[0] * d[0] + d[1] * d[1]).sqrt()
}

impl ConvexBody for SmoothPlanarBody {
    fn dim(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        format!("smooth2d({:?})", self.curve)
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        let t = self.param_of(x);
        let b = self.curve.point(t);
        let [cx, cy] = self.center;
        let rx = ((x[0] - cx).powi(2) + (x[1] - cy).powi(2)).sqrt();
        let rb = ((b[0] - cx).powi(2) + (b[1] - cy).powi(2)).sqrt();
        rx <= rb + tol
    }

    fn support(&self, u: &[f64]) -> (f64, Vec<f64>) {
        let f = |t: f64| {
            let p = self.curve.point(t);
            p[0] * u[0] + p[1] * u[1]
        };
        let j = (0..GRID)
            .max_by(|&a, &b| f(grid_t(a)).total_cmp(&f(grid_t(b))))
            .unwrap();
        let h = TAU / GRID as f64;
        let (lo, hi) = (grid_t(j) - h, grid_t(j) + h);
        let mut t = grid_t(j);
        for _ in 0..30 {
            let d1 = self.curve.d1(t);
            let d2 = self.curve.d2(t);
            let g = d1[0] * u[0] + d1[1] * u[1];
            let g1 = d2[0] * u[0] + d2[1] * u[1];
            if g1 >= 0.0 {
                break;
            }
            let next = (t - g / g1).clamp(lo, hi);
            if (next - t).abs() < 1e-16 {
                t = next;
                break;
            }
            t = next;
        }
        let p = self.curve.point(t);
        (f(t), p.to_vec())
    }

    fn volume(&self) -> f64 {
        self.area
    }

    fn surface_area(&self) -> f64 {
        self.perimeter
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (self.bbox.0.to_vec(), self.bbox.1.to_vec())
    }

    fn centroid(&self) -> Vec<f64> {
        self.center.to_vec()
    }

    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.normal_at(self.param_of(x)).to_vec())
    }

    fn curvature(&self, x: &[f64]) -> Result<f64> {
        Ok(self.curvature_at(self.param_of(x)))
    }

    fn affine_surface_area(&self) -> Result<f64> {
        Ok(self.affine_area)
    }

    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        let len = crate::numeric::norm(dir);
        let at = |s: f64| vec![from[0] + s * dir[0] / len, from[1] + s * dir[1] / len];
        let (lo, hi) = self.bounding_box();
        let diam = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
        let (mut a, mut b) = (0.0, diam);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if self.contains(&at(m), 0.0) {
                a = m;
            } else {
                b = m;
            }
            if b - a <= 1e-16 * diam {
                break;
            }
        }
        let guess = at(0.5 * (a + b));
        // snap onto the curve along the ray through the centroid
        let t = self.param_of(&guess);
        let p = self.curve.point(t);
        if from == self.center.as_slice() {
            p.to_vec()
        } else {
            guess
        }
    }

    fn boundary_distance(&self, x: &[f64]) -> f64 {
        let t = self.param_of(x);
        let b = self.curve.point(t);
        let n = self.normal_at(t);
        ((x[0] - b[0]) * n[0] + (x[1] - b[1]) * n[1]).abs()
    }

    fn view(&self) -> BodyRef<'_> {
        BodyRef::Smooth(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_data() {
        let c = SmoothPlanarBody::radial(RadialTrig::new(0.5, vec![], vec![]).unwrap()).unwrap();
        assert_relative_eq!(c.volume(), PI * 0.25, max_relative = 1e-12);
        assert_relative_eq!(c.surface_area(), PI, max_relative = 1e-12);
        for j in 0..GRID {
            assert_relative_eq!(c.curvature_at(grid_t(j)), 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn curvature_matches_turning_angle_differences() {
        let body = SmoothPlanarBody::radial(RadialTrig::new(1.0, vec![0.05, 0.02], vec![0.03]).unwrap()).unwrap();
        let h = 1e-4;
        for j in 0..256 {
            let t = TAU * j as f64 / 256.0;
            let ang = |s: f64| {
                let d = body.curve().d1(s);
                d[1].atan2(d[0])
            };
            let wrap = |a: f64| (a + PI).rem_euclid(TAU) - PI;
            let dtheta = wrap(ang(t + h) - ang(t)) - wrap(ang(t) - ang(t - h));
            let slope = wrap(ang(t + h) - ang(t - h)) / (2.0 * h);
            // κ = dθ/ds: ratio of the turning rate to the speed
            let k_fd = slope / body.speed_at(t);
            assert!((k_fd - body.curvature_at(t)).abs() < 1e-4, "t={t}");
            assert!(dtheta.abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_nonconvex_curves() {
        assert!(SmoothPlanarBody::radial(RadialTrig::new(1.0, vec![0.0, 0.0, 0.5], vec![]).unwrap()).is_err());
    }

    #[test]
    fn param_round_trip() {
        let body = SmoothPlanarBody::new(EllipseCurve::new(2.0, 1.0).unwrap()).unwrap();
        for j in 0..100 {
            let t = 0.0628 * j as f64 + 0.001;
            let p = body.curve().point(t);
            assert!((body.param_of(&p) - t).abs() < 1e-12);
            assert!(body.boundary_distance(&p) < 1e-12);
        }
        assert_relative_eq!(body.volume(), 2.0 * PI, max_relative = 1e-12);
    }
}
