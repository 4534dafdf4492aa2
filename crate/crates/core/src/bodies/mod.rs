//! Concrete convex bodies.

mod ball;
mod cap;
mod cube;
mod ellipsoid;
mod polytope_body;
mod smooth;
mod spec;

pub use ball::Ball;
pub use cap::{cap_height, cap_volume};
pub use cube::Cube;
pub use ellipsoid::{affine_invariance_check, Ellipsoid};
pub use polytope_body::{PolytopeBody, Simplex};
pub use smooth::{EllipseCurve, PlanarCurve, RadialTrig, SmoothPlanarBody};
pub use spec::BodySpec;

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, VPolytope};
use crate::numeric::{dot, norm};

/// Borrowed view of a body's concrete type, for code that has exact
/// methods for particular bodies.
#[derive(Clone, Copy, Debug)]
pub enum BodyRef<'a> {
    Ball(&'a Ball),
    Ellipsoid(&'a Ellipsoid),
    Cube(&'a Cube),
    Simplex(&'a Simplex),
    Polytope(&'a PolytopeBody),
    Smooth(&'a SmoothPlanarBody),
}

/// A compact convex set with nonempty interior.
pub trait ConvexBody: Send + Sync + std::fmt::Debug {
    fn dim(&self) -> usize;

    /// Short human-readable label.
    fn name(&self) -> String;

    /// Membership with absolute tolerance `tol`.
    fn contains(&self, x: &[f64], tol: f64) -> bool;

    /// Support value `h(u) = max <x, u>` and a maximizing point.
    fn support(&self, u: &[f64]) -> (f64, Vec<f64>);

    fn volume(&self) -> f64;

    /// Boundary measure.
    fn surface_area(&self) -> f64;

    /// Axis-parallel bounding box (lower, upper).
    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>);

    fn centroid(&self) -> Vec<f64>;

    /// Outer unit normal at a boundary point.
    fn outer_normal(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Gauss-Kronecker curvature at a boundary point.
    fn curvature(&self, _x: &[f64]) -> Result<f64> {
        Err(Error::CurvatureUnavailable)
    }

    /// Integral of κ^{1/(n+1)} over the boundary.
    fn affine_surface_area(&self) -> Result<f64> {
        Err(Error::CurvatureUnavailable)
    }

    /// The boundary point on the ray from interior point `from` along `dir`.
    fn radial_boundary(&self, from: &[f64], dir: &[f64]) -> Vec<f64> {
        let (lo, hi) = self.bounding_box();
        let diam = norm(&lo.iter().zip(&hi).map(|(a, b)| b - a).collect::<Vec<_>>());
        let len = norm(dir);
        let at = |t: f64| -> Vec<f64> { from.iter().zip(dir).map(|(p, d)| p + t * d / len).collect() };
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
        at(0.5 * (a + b))
    }

    /// Distance from a point to the boundary (for boundary checks).
    fn boundary_distance(&self, x: &[f64]) -> f64;

    /// Vertex description when the body is a polytope.
    fn polytope(&self) -> Option<&VPolytope> {
        None
    }

    fn view(&self) -> BodyRef<'_>;
}

/// Gauss-Kronecker curvature at a boundary point, after checking that the
/// point lies on the boundary within 1e-9.
pub fn gauss_curvature(body: &dyn ConvexBody, x: &[f64]) -> Result<f64> {
    if body.polytope().is_some() {
        return Err(Error::CurvatureUnavailable);
    }
    if body.boundary_distance(x) > 1e-9 {
        return Err(Error::OutOfRange("point is not on the boundary".into()));
    }
    body.curvature(x)
}

/// Integral of κ^{1/(n+1)} over the boundary.
pub fn affine_surface_area(body: &dyn ConvexBody) -> Result<f64> {
    body.affine_surface_area()
}

/// Supporting halfspaces when the body is a polytope.
pub fn halfspaces(body: &dyn ConvexBody) -> Option<Vec<Halfspace>> {
    body.polytope().map(VPolytope::halfspaces)
}

/// True when `inner ⊆ outer` can be certified exactly: polytope vertices
/// inside the other body, support values below facet offsets, or nested
/// balls.
pub fn certify_containment(inner: &dyn ConvexBody, outer: &dyn ConvexBody, tol: f64) -> bool {
    if let Some(p) = inner.polytope() {
        return p.vertices().iter().all(|v| outer.contains(v, tol));
    }
    if let Some(q) = outer.polytope() {
        return q
            .facets()
            .iter()
            .all(|f| inner.support(&f.halfspace.normal).0 <= f.halfspace.offset + tol);
    }
    if let (BodyRef::Ball(a), BodyRef::Ball(b)) = (inner.view(), outer.view()) {
        let d = crate::numeric::dist(&a.center, &b.center);
        return d + a.radius <= b.radius + tol;
    }
    false
}

pub(crate) fn check_unit(u: &[f64]) -> Vec<f64> {
    let n = norm(u);
    u.iter().map(|x| x / n).collect()
}

pub(crate) fn support_of_points(points: &[Vec<f64>], u: &[f64]) -> (f64, Vec<f64>) {
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, p) in points.iter().enumerate() {
        let s = dot(p, u);
        if s > best.0 {
            best = (s, i);
        }
    }
    (best.0, points[best.1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::add;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn bodies() -> Vec<Arc<dyn ConvexBody>> {
        vec![
            Arc::new(Ball::new(vec![0.5, -1.0, 2.0], 1.5).unwrap()),
            Arc::new(Ellipsoid::axis_aligned(vec![0.0, 1.0], vec![2.0, 1.0]).unwrap()),
            Arc::new(Cube::new(3, -1.0, 1.0).unwrap()),
            Arc::new(Simplex::standard(3).unwrap()),
            Arc::new(SmoothPlanarBody::radial(RadialTrig::new(1.0, vec![0.1, 0.05], vec![0.0, 0.03]).unwrap()).unwrap()),
            Arc::new(SmoothPlanarBody::new(EllipseCurve::new(2.0, 1.0).unwrap()).unwrap()),
        ]
    }

    #[test]
    fn support_points_are_contained_and_support_is_sublinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for b in bodies() {
            let n = b.dim();
            for _ in 0..1000 {
                let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let (hu, xu) = b.support(&u);
                assert!(b.contains(&xu, 1e-9), "{}", b.name());
                assert!((dot(&xu, &u) - hu).abs() < 1e-9);
                let (hv, _) = b.support(&v);
                let (huv, _) = b.support(&add(&u, &v));
                assert!(huv <= hu + hv + 1e-9, "{}", b.name());
            }
        }
    }

    #[test]
    fn normals_are_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for b in bodies() {
            let c = b.centroid();
            for _ in 0..100 {
                let d: Vec<f64> = (0..b.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
                let x = b.radial_boundary(&c, &d);
                assert!(b.boundary_distance(&x) < 1e-9, "{}", b.name());
                let nrm = b.outer_normal(&x).unwrap();
                assert!((norm(&nrm) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn curvature_examples() {
        let b = Ball::new(vec![0.0; 3], 1.0).unwrap();
        assert!((gauss_curvature(&b, &[0.0, 0.6, 0.8]).unwrap() - 1.0).abs() < 1e-12);
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        assert!((gauss_curvature(&e, &[2.0, 0.0]).unwrap() - 2.0).abs() < 1e-12);
        let c = Cube::new(2, 0.0, 1.0).unwrap();
        assert_eq!(gauss_curvature(&c, &[0.0, 0.5]), Err(Error::CurvatureUnavailable));
        let r = 0.7;
        let circle = Ball::new(vec![0.0, 0.0], r).unwrap();
        for k in 0..4096 {
            let t = std::f64::consts::TAU * k as f64 / 4096.0;
            let k_val = gauss_curvature(&circle, &[r * t.cos(), r * t.sin()]).unwrap();
            assert!((k_val - 1.0 / r).abs() < 1e-12);
        }
        let sm = SmoothPlanarBody::new(EllipseCurve::new(2.0, 1.0).unwrap()).unwrap();
        assert!((gauss_curvature(&sm, &[2.0, 0.0]).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn affine_surface_area_examples() {
        use std::f64::consts::PI;
        let disk = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        assert!((affine_surface_area(&disk).unwrap() - 2.0 * PI).abs() < 1e-12);
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let want = 2.0 * PI * 2f64.powf(1.0 / 3.0);
        assert!((affine_surface_area(&e).unwrap() - want).abs() < 1e-12);
        let sm = SmoothPlanarBody::new(EllipseCurve::new(2.0, 1.0).unwrap()).unwrap();
        assert!((affine_surface_area(&sm).unwrap() / want - 1.0).abs() < 1e-8);
        let ball = Ball::new(vec![0.0; 3], 1.0).unwrap();
        assert!((affine_surface_area(&ball).unwrap() - 4.0 * PI).abs() < 1e-12);
        assert_eq!(
            affine_surface_area(&Cube::new(2, 0.0, 1.0).unwrap()),
            Err(Error::CurvatureUnavailable)
        );
    }

    #[test]
    fn containment_certificates() {
        let disk = Ball::new(vec![0.0, 0.0], 1.0).unwrap();
        let diamond = PolytopeBody::new(VPolytope::cross_polytope(2).unwrap());
        assert!(certify_containment(&diamond, &disk, 1e-12));
        assert!(!certify_containment(&disk, &diamond, 1e-12));
        let sq = PolytopeBody::new(VPolytope::cube(2, -1.0, 1.0).unwrap());
        assert!(certify_containment(&disk, &sq, 1e-12));
    }
}
