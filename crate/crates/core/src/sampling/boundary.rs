//! Boundary points under surface, cone and affine-surface-area measures.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng::SimRng;
use super::uniform::{cumulative, dirichlet_combination, pick, unit_sphere_point, UniformSampler};
use crate::bodies::{BodyRef, ConvexBody, Ellipsoid, SmoothPlanarBody};
use crate::error::{Error, Result};
use crate::numeric::{norm, simpson_doubling};

const REJECTION_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityKind {
    Uniform,
    Cone,
    Affine,
    Custom,
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Uniform => "uniform",
            Self::Cone => "cone",
            Self::Affine => "affine",
            Self::Custom => "custom",
        };
        f.write_str(s)
    }
}

pub type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A probability density on the boundary with respect to surface measure.
///
/// The uniform, cone and affine kinds are defined by the body itself. A
/// custom density carries its own function and an upper bound for
/// rejection.
#[derive(Clone)]
pub struct BoundaryDensity {
    pub kind: DensityKind,
    f: Option<DensityFn>,
    sup: f64,
}

impl fmt::Debug for BoundaryDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryDensity")
            .field("kind", &self.kind)
            .field("sup", &self.sup)
            .finish()
    }
}

impl BoundaryDensity {
    pub fn uniform() -> Self {
        Self { kind: DensityKind::Uniform, f: None, sup: f64::NAN }
    }

    pub fn cone() -> Self {
        Self { kind: DensityKind::Cone, f: None, sup: f64::NAN }
    }

    pub fn affine() -> Self {
        Self { kind: DensityKind::Affine, f: None, sup: f64::NAN }
    }

    pub fn from_kind(kind: DensityKind) -> Result<Self> {
        match kind {
            DensityKind::Uniform => Ok(Self::uniform()),
            DensityKind::Cone => Ok(Self::cone()),
            DensityKind::Affine => Ok(Self::affine()),
            DensityKind::Custom => Err(Error::invalid("custom densities need a function")),
        }
    }

    /// A custom density `f` with `sup f <= sup`. The integral of `f` over
    /// the boundary must be 1 within 1e-3.
    pub fn custom(body: &dyn ConvexBody, f: DensityFn, sup: f64) -> Result<Self> {
        let integral = boundary_integral(body, &|x| f(x))?;
        if (integral - 1.0).abs() > 1e-3 {
            return Err(Error::NormalizationFailure(integral));
        }
        Ok(Self { kind: DensityKind::Custom, f: Some(f), sup })
    }

    /// Density value at a boundary point of `body`.
    pub fn eval(&self, body: &dyn ConvexBody, x: &[f64]) -> Result<f64> {
        match self.kind {
            DensityKind::Uniform => Ok(1.0 / body.surface_area()),
            DensityKind::Affine => {
                let n = body.dim() as f64;
                Ok(body.curvature(x)?.powf(1.0 / (n + 1.0)) / body.affine_surface_area()?)
            }
            DensityKind::Cone => {
                // dP = <x - c, N(x)> / (n vol K) dμ
                let c = body.centroid();
                let nrm = body.outer_normal(x)?;
                let h: f64 = x.iter().zip(&c).zip(&nrm).map(|((a, b), u)| (a - b) * u).sum();
                Ok(h / (body.dim() as f64 * body.volume()))
            }
            DensityKind::Custom => Ok((self.f.as_ref().expect("custom density has a function"))(x)),
        }
    }
}

/// ∫ g dμ over the boundary: quadrature for planar curves, otherwise a
/// fixed-seed Monte Carlo average over uniform boundary points.
pub fn boundary_integral(body: &dyn ConvexBody, g: &dyn Fn(&[f64]) -> f64) -> Result<f64> {
    if let Some(planar) = planar_view(body)? {
        let c = planar.curve();
        return Ok(simpson_doubling(
            |t| g(&c.point(t)) * norm(&c.d1(t)),
            0.0,
            TAU,
            1e-10,
        ));
    }
    let sampler = BoundarySampler::new(body, &BoundaryDensity::uniform())?;
    let mut rng = super::RandomSource::new(0xb0da, 0).rng();
    let m = 1_000_000;
    let mut x = vec![0.0; body.dim()];
    let mut acc = 0.0;
    for _ in 0..m {
        sampler.sample_into(&mut rng, &mut x)?;
        acc += g(&x);
    }
    Ok(acc / m as f64 * body.surface_area())
}

/// Planar bodies with a smooth parameterization (smooth bodies and 2D
/// ellipsoids and balls).
pub(crate) fn planar_view(body: &dyn ConvexBody) -> Result<Option<std::borrow::Cow<'_, SmoothPlanarBody>>> {
    use std::borrow::Cow;
    Ok(match body.view() {
        BodyRef::Smooth(s) => Some(Cow::Borrowed(s)),
        BodyRef::Ellipsoid(e) if e.dim() == 2 => Some(Cow::Owned(e.to_planar()?)),
        BodyRef::Ball(b) if b.center.len() == 2 => Some(Cow::Owned(
            Ellipsoid::axis_aligned(b.center.clone(), vec![b.radius; 2])?.to_planar()?,
        )),
        _ => None,
    })
}

/// A prepared boundary sampler.
pub enum BoundarySampler<'a> {
    Sphere { center: Vec<f64>, radius: f64 },
    CubeFaces { lo: f64, hi: f64, dim: usize },
    Simplices { points: Vec<Vec<f64>>, simplices: Vec<Vec<usize>>, cumulative: Vec<f64> },
    /// Uniform interior point projected radially from the centroid.
    Cone { body: &'a dyn ConvexBody, inner: UniformSampler<'a>, center: Vec<f64> },
    /// Ellipsoid surface: sphere proposal weighted by the area element.
    EllipsoidSurface { ell: Ellipsoid, bound: f64 },
    /// Ellipsoid affine measure: exact push-forward of the uniform sphere.
    EllipsoidAffine { ell: Ellipsoid },
    /// Planar curve: arclength proposal, then rejection on `weight / bound`.
    Curve { body: std::borrow::Cow<'a, SmoothPlanarBody>, speed_bound: f64, weight: CurveWeight, bound: f64 },
    /// Uniform proposal thinned by a custom density.
    Thinned { base: Box<BoundarySampler<'a>>, f: DensityFn, sup: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveWeight {
    One,
    CurvatureThird,
}

impl fmt::Debug for BoundarySampler<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Sphere { .. } => "Sphere",
            Self::CubeFaces { .. } => "CubeFaces",
            Self::Simplices { .. } => "Simplices",
            Self::Cone { .. } => "Cone",
            Self::EllipsoidSurface { .. } => "EllipsoidSurface",
            Self::EllipsoidAffine { .. } => "EllipsoidAffine",
            Self::Curve { .. } => "Curve",
            Self::Thinned { .. } => "Thinned",
        };
        f.write_str(name)
    }
}

impl<'a> BoundarySampler<'a> {
    pub fn new(body: &'a dyn ConvexBody, density: &BoundaryDensity) -> Result<Self> {
        let unsupported = || Error::KindUnsupported {
            kind: density.kind.to_string(),
            body: body.name(),
        };
        match density.kind {
            DensityKind::Cone => {
                return Ok(Self::Cone {
                    body,
                    inner: UniformSampler::new(body),
                    center: body.centroid(),
                })
            }
            DensityKind::Custom => {
                let base = Self::new(body, &BoundaryDensity::uniform())?;
                return Ok(Self::Thinned {
                    base: Box::new(base),
                    f: density.f.clone().ok_or_else(unsupported)?,
                    sup: density.sup,
                });
            }
            DensityKind::Uniform | DensityKind::Affine => {}
        }
        let affine = density.kind == DensityKind::Affine;
        Ok(match body.view() {
            BodyRef::Ball(b) => Self::Sphere { center: b.center.clone(), radius: b.radius },
            BodyRef::Cube(c) if !affine => Self::CubeFaces { lo: c.lo, hi: c.hi, dim: c.dim() },
            BodyRef::Simplex(_) | BodyRef::Polytope(_) | BodyRef::Cube(_) => {
                if affine {
                    return Err(unsupported());
                }
                let p = body.polytope().ok_or_else(unsupported)?;
                Self::Simplices {
                    points: p.vertices().to_vec(),
                    simplices: p.boundary_simplices().to_vec(),
                    cumulative: cumulative(&p.boundary_simplex_areas()),
                }
            }
            BodyRef::Ellipsoid(e) => {
                if affine {
                    Self::EllipsoidAffine { ell: e.clone() }
                } else {
                    let amin = e.semiaxes.iter().copied().fold(f64::INFINITY, f64::min);
                    Self::EllipsoidSurface { ell: e.clone(), bound: 1.0 / amin }
                }
            }
            BodyRef::Smooth(s) => {
                let grid = 4096;
                let speed_bound = 1.01
                    * (0..grid)
                        .map(|j| s.speed_at(TAU * j as f64 / grid as f64))
                        .fold(0.0, f64::max);
                let (weight, bound) = if affine {
                    (CurveWeight::CurvatureThird, 1.01 * s.grid_max_curvature().cbrt())
                } else {
                    (CurveWeight::One, 1.0)
                };
                Self::Curve { body: std::borrow::Cow::Borrowed(s), speed_bound, weight, bound }
            }
        })
    }

    pub fn sample_into(&self, rng: &mut SimRng, out: &mut [f64]) -> Result<()> {
        match self {
            Self::Sphere { center, radius } => {
                unit_sphere_point(rng, out);
                for (o, c) in out.iter_mut().zip(center) {
                    *o = c + radius * *o;
                }
            }
            Self::CubeFaces { lo, hi, dim } => {
                let face = rng.random_range(0..2 * dim);
                for (k, o) in out.iter_mut().enumerate() {
                    *o = if k == face / 2 {
                        if face % 2 == 0 { *lo } else { *hi }
                    } else {
                        rng.random_range(*lo..*hi)
                    };
                }
            }
            Self::Simplices { points, simplices, cumulative } => {
                let s = &simplices[pick(cumulative, rng)];
                dirichlet_combination(rng, s.iter().map(|&i| points[i].as_slice()), out);
            }
            Self::Cone { body, inner, center } => {
                inner.sample_into(rng, out)?;
                let dir: Vec<f64> = out.iter().zip(center).map(|(a, b)| a - b).collect();
                if norm(&dir) == 0.0 {
                    return self.sample_into(rng, out);
                }
                out.copy_from_slice(&body.radial_boundary(center, &dir));
            }
            Self::EllipsoidSurface { ell, bound } => {
                let mut s = vec![0.0; out.len()];
                for _ in 0..REJECTION_LIMIT {
                    unit_sphere_point(rng, &mut s);
                    let j = s.iter().zip(&ell.semiaxes).map(|(si, a)| (si / a).powi(2)).sum::<f64>().sqrt();
                    if rng.random::<f64>() * bound <= j {
                        out.copy_from_slice(&ell.from_sphere(&s));
                        return Ok(());
                    }
                }
                return Err(Error::RejectionStall(1.0 / REJECTION_LIMIT as f64));
            }
            Self::EllipsoidAffine { ell } => {
                let mut s = vec![0.0; out.len()];
                unit_sphere_point(rng, &mut s);
                out.copy_from_slice(&ell.from_sphere(&s));
            }
            Self::Curve { body, speed_bound, weight, bound } => {
                for _ in 0..REJECTION_LIMIT {
                    let t = rng.random_range(0.0..TAU);
                    if rng.random::<f64>() * speed_bound > body.speed_at(t) {
                        continue;
                    }
                    let w = match weight {
                        CurveWeight::One => 1.0,
                        CurveWeight::CurvatureThird => body.curvature_at(t).cbrt(),
                    };
                    if rng.random::<f64>() * bound <= w {
                        out.copy_from_slice(&body.curve().point(t));
                        return Ok(());
                    }
                }
                return Err(Error::RejectionStall(1.0 / REJECTION_LIMIT as f64));
            }
            Self::Thinned { base, f, sup } => {
                for _ in 0..REJECTION_LIMIT {
                    base.sample_into(rng, out)?;
                    if rng.random::<f64>() * sup <= f(out) {
                        return Ok(());
                    }
                }
                return Err(Error::RejectionStall(1.0 / REJECTION_LIMIT as f64));
            }
        }
        Ok(())
    }

    pub fn fill(&self, rng: &mut SimRng, count: usize, dim: usize, out: &mut Vec<f64>) -> Result<()> {
        let start = out.len();
        out.resize(start + count * dim, 0.0);
        for chunk in out[start..].chunks_exact_mut(dim) {
            self.sample_into(rng, chunk)?;
        }
        Ok(())
    }
}

/// One boundary point of `body` distributed by `density`.
pub fn sample_boundary(body: &dyn ConvexBody, density: &BoundaryDensity, rng: &mut SimRng) -> Result<Vec<f64>> {
    let s = BoundarySampler::new(body, density)?;
    let mut out = vec![0.0; body.dim()];
    s.sample_into(rng, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ball, Cube, SmoothPlanarBody, EllipseCurve};
    use crate::numeric::{chi_square_sf, ks_two_sample, mean_stderr};
    use crate::sampling::RandomSource;

    fn draw(body: &dyn ConvexBody, d: &BoundaryDensity, m: usize, seed: u64) -> Vec<Vec<f64>> {
        let s = BoundarySampler::new(body, d).unwrap();
        let mut rng = RandomSource::new(seed, 0).rng();
        (0..m)
            .map(|_| {
                let mut x = vec![0.0; body.dim()];
                s.sample_into(&mut rng, &mut x).unwrap();
                assert!(body.boundary_distance(&x) < 1e-9, "{x:?}");
                x
            })
            .collect()
    }

    #[test]
    fn circle_uniform_has_zero_resultant() {
        let c = Ball::unit(2).unwrap();
        let xs = draw(&c, &BoundaryDensity::uniform(), 100_000, 1);
        for k in 0..2 {
            let (m, se) = mean_stderr(&xs.iter().map(|x| x[k]).collect::<Vec<_>>());
            assert!(m.abs() < 4.0 * se);
        }
    }

    #[test]
    fn circle_affine_matches_uniform_in_distribution() {
        let c = SmoothPlanarBody::new(EllipseCurve::new(1.0, 1.0).unwrap()).unwrap();
        let ang = |xs: Vec<Vec<f64>>| xs.iter().map(|x| x[1].atan2(x[0])).collect::<Vec<_>>();
        let a = ang(draw(&c, &BoundaryDensity::affine(), 20_000, 2));
        let u = ang(draw(&c, &BoundaryDensity::uniform(), 20_000, 3));
        let (_, p) = ks_two_sample(&a, &u);
        assert!(p > 0.01, "p = {p}");
    }

    #[test]
    fn square_cone_measure_hits_edges_equally() {
        let sq = Cube::new(2, -1.0, 1.0).unwrap();
        let m = 100_000;
        let xs = draw(&sq, &BoundaryDensity::cone(), m, 4);
        let mut counts = [0usize; 4];
        for x in &xs {
            let k = if x[0].abs() > x[1].abs() { usize::from(x[0] > 0.0) } else { 2 + usize::from(x[1] > 0.0) };
            counts[k] += 1;
        }
        let e = m as f64 / 4.0;
        let chi: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        assert!(chi_square_sf(chi, 3.0) > 0.001);
        for c in counts {
            let p = c as f64 / m as f64;
            assert!((p - 0.25).abs() < 4.0 * (0.25 * 0.75 / m as f64).sqrt());
        }
    }

    #[test]
    fn cube_cone_measure_equal_on_facets() {
        let c = Cube::new(3, -1.0, 1.0).unwrap();
        let m = 100_000;
        let xs = draw(&c, &BoundaryDensity::cone(), m, 5);
        let mut counts = [0usize; 6];
        for x in &xs {
            let (k, v) = x.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap();
            counts[2 * k + usize::from(*v > 0.0)] += 1;
        }
        let e = m as f64 / 6.0;
        let chi: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
        assert!(chi_square_sf(chi, 5.0) > 0.001, "{counts:?}");
    }

    #[test]
    fn affine_sampler_concentrates_at_ellipse_ends() {
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let xs = draw(&e, &BoundaryDensity::affine(), 400_000, 6);
        // empirical arclength density near (±2, 0) vs near (0, ±1)
        let win = 0.05;
        let ends = xs.iter().filter(|x| x[1].abs() < win && x[0].abs() > 1.0).count() as f64;
        let flanks = xs.iter().filter(|x| x[0].abs() < win && x[1].abs() > 0.5).count() as f64;
        // arclength of each window is ~2·win at the ends and ~2·win·... at the
        // flanks; convert counts to per-arclength densities
        let sm = e.to_planar().unwrap();
        let arc = |t0: f64, t1: f64| simpson_doubling(|t| sm.speed_at(t), t0, t1, 1e-12);
        let half_end = (win / 1.0).asin(); // |b sin t| < win, b = 1
        let half_flank = (win / 2.0).asin(); // |a cos t| < win near t = π/2
        let arc_end = 2.0 * arc(-half_end, half_end);
        let arc_flank = 2.0 * arc(std::f64::consts::FRAC_PI_2 - half_flank, std::f64::consts::FRAC_PI_2 + half_flank);
        let ratio = (ends / arc_end) / (flanks / arc_flank);
        let kappa = |x: &[f64]| e.curvature(x).unwrap();
        let want = (kappa(&[2.0, 0.0]) / kappa(&[0.0, 1.0])).cbrt();
        assert!((ratio / want - 1.0).abs() < 0.1, "ratio {ratio} want {want}");
    }

    #[test]
    fn polytopes_reject_affine_kind() {
        let c = Cube::unit(2).unwrap();
        assert!(matches!(BoundarySampler::new(&c, &BoundaryDensity::affine()), Err(Error::KindUnsupported { .. })));
    }

    #[test]
    fn custom_density_normalization_is_checked() {
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let len = e.surface_area();
        let bad: DensityFn = Arc::new(move |_| 2.0 / len);
        assert!(matches!(BoundaryDensity::custom(&e, bad, 1.0), Err(Error::NormalizationFailure(_))));
        let good: DensityFn = Arc::new(move |_| 1.0 / len);
        assert!(BoundaryDensity::custom(&e, good, 1.0 / len).is_ok());
    }

    #[test]
    fn ellipsoid_surface_uniformity_via_moment() {
        // For the (2,1) ellipse, E[x²] under arclength equals ∫x²ds / L.
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let sm = e.to_planar().unwrap();
        let l = sm.perimeter();
        let want = simpson_doubling(|t| (2.0 * t.cos()).powi(2) * sm.speed_at(t), 0.0, TAU, 1e-12) / l;
        let xs = draw(&e, &BoundaryDensity::uniform(), 100_000, 7);
        let (m, se) = mean_stderr(&xs.iter().map(|x| x[0] * x[0]).collect::<Vec<_>>());
        assert!((m - want).abs() < 4.0 * se, "{m} vs {want}");
        let ys = draw(&sm, &BoundaryDensity::uniform(), 100_000, 8);
        let (m2, se2) = mean_stderr(&ys.iter().map(|x| x[0] * x[0]).collect::<Vec<_>>());
        assert!((m2 - want).abs() < 4.0 * se2, "{m2} vs {want}");
    }
}
