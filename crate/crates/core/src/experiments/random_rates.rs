//! Convergence-rate experiments for random polytopes.
//!
//! Each experiment estimates a sequence of means over an N-sequence, fits a
//! power law on the log scale and compares the tail against a closed-form
//! prefactor where one exists. Tail comparisons use the three largest N:
//! the constant with the exponent held at its theoretical value, plus a
//! three-point extrapolation of the scaled means.

use serde::{Deserialize, Serialize};

use super::constants::Constant;
use super::estimate::EstimateRecord;
use super::fit::{constant_for, log_term_test, rate_fit, three_point_extrapolation, LogTermTest, RateFit, RateModel};
use super::montecarlo::{missed_volume, vertex_count, TrialPolicy};
use crate::bodies::{affine_surface_area, BodyRef, ConvexBody, PolytopeBody};
use crate::combinatorics::flag_via_lattice;
use crate::error::{Error, Result};
use crate::numeric::factorial;
use crate::sampling::{boundary_integral, BoundaryDensity, PointModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n: usize,
    pub estimate: EstimateRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub points: Vec<RatePoint>,
    /// Free fit of the means.
    pub fit: RateFit,
    pub expected_exponent: f64,
    /// Power of ln N in the rate.
    pub log_power: u32,
    /// Closed-form prefactor, when one is known.
    pub reference: Option<f64>,
    /// Prefactor with the exponent fixed, from the three largest N.
    pub tail_constant: f64,
    /// Scaled mean at the largest N.
    pub last_scaled: f64,
    pub extrapolated: Option<f64>,
    /// tail_constant / reference − 1.
    pub relative_deviation: Option<f64>,
    /// Test for a ln ln N term beyond the fitted model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_test: Option<LogTermTest>,
    /// Lower bounds on the mean at each N, where a construction gives one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bounds: Option<Vec<f64>>,
}

impl RateReport {
    pub fn data(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.n as f64, p.estimate.value)).collect()
    }

    /// Mean divided by N^p (ln N)^k at each N.
    pub fn scaled(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| scale_mean(p.n as f64, p.estimate.value, self.expected_exponent, self.log_power))
            .collect()
    }
}

fn scale_mean(n: f64, v: f64, p: f64, k: u32) -> f64 {
    v / (n.powf(p) * n.ln().powi(k as i32))
}

/// Correction shape used for the tail extrapolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Correction {
    /// L + a x + b x², x = N^{-q}.
    Power(f64),
    /// L + a/ln N + b/ln² N.
    Log,
}

/// Fits the means and compares the tail against `reference`.
pub fn rate_report(
    points: Vec<RatePoint>,
    expected_exponent: f64,
    log_power: u32,
    reference: Option<f64>,
    correction: Correction,
) -> Result<RateReport> {
    let data: Vec<(f64, f64)> = points.iter().map(|p| (p.n as f64, p.estimate.value)).collect();
    let model = if log_power == 0 { RateModel::PurePower } else { RateModel::PowerWithLog(log_power) };
    let fit = rate_fit(&data, model)?;
    let tail = &data[data.len().saturating_sub(3)..];
    let tail_constant = constant_for(tail, expected_exponent, log_power as f64);
    let xs: Vec<f64> = data.iter().map(|d| d.0).collect();
    let ys: Vec<f64> = data
        .iter()
        .map(|&(n, v)| scale_mean(n, v, expected_exponent, log_power))
        .collect();
    let extrapolated = match correction {
        Correction::Power(q) => three_point_extrapolation(&xs, &ys, |n| {
            let x = n.powf(-q);
            [x, x * x]
        }),
        Correction::Log => three_point_extrapolation(&xs, &ys, |n| {
            let x = 1.0 / n.ln();
            [x, x * x]
        }),
    };
    Ok(RateReport {
        fit,
        expected_exponent,
        log_power,
        reference,
        tail_constant,
        last_scaled: *ys.last().expect("non-empty"),
        extrapolated,
        relative_deviation: reference.map(|r| tail_constant / r - 1.0),
        log_test: None,
        lower_bounds: None,
        points,
    })
}

fn check_ns(ns: &[usize], dim: usize) -> Result<()> {
    if ns.iter().any(|&n| n < dim + 1) {
        return Err(Error::OutOfRange(format!("every N must be at least {}", dim + 1)));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("N-sequence must be strictly increasing"));
    }
    Ok(())
}

fn check_low_dim(body: &dyn ConvexBody) -> Result<usize> {
    let n = body.dim();
    if !(2..=3).contains(&n) {
        return Err(Error::OutOfRange(format!("rate experiments run in dimension 2 or 3, got {n}")));
    }
    Ok(n)
}

fn estimates(
    body: &dyn ConvexBody,
    model: &PointModel,
    ns: &[usize],
    policy: &TrialPolicy,
    seed: u64,
) -> Result<Vec<RatePoint>> {
    check_ns(ns, body.dim())?;
    ns.iter()
        .map(|&n| Ok(RatePoint { n, estimate: missed_volume(body, model, n, policy, seed)? }))
        .collect()
}

/// Missed volume of uniform random polytopes in a smooth body: rate
/// N^{-2/(n+1)} with prefactor asa(K)·vol(K)^{2/(n+1)}/c(n).
pub fn uniform_rate_experiment(body: &dyn ConvexBody, ns: &[usize], policy: &TrialPolicy, seed: u64) -> Result<RateReport> {
    let n = check_low_dim(body)? as f64;
    let reference = uniform_reference(body)?;
    let points = estimates(body, &PointModel::Uniform, ns, policy, seed)?;
    rate_report(points, -2.0 / (n + 1.0), 0, Some(reference), Correction::Power(2.0 / (n + 1.0)))
}

/// asa(K)·vol(K)^{2/(n+1)}/c(n).
pub fn uniform_reference(body: &dyn ConvexBody) -> Result<f64> {
    let n = body.dim() as f64;
    let asa = affine_surface_area(body)?;
    Ok(asa * body.volume().powf(2.0 / (n + 1.0)) / Constant::RandomUniform.eval(body.dim())?)
}

/// ∫ κ^{1/(n-1)} f^{-2/(n-1)} dμ over the boundary.
///
/// The density must integrate to one: within 1e-6 on planar bodies, where
/// the integral is a quadrature, and within 1e-2 otherwise, where it is a
/// Monte Carlo average.
pub fn holder_functional(body: &dyn ConvexBody, f: &BoundaryDensity) -> Result<f64> {
    let n = body.dim();
    if n < 2 {
        return Err(Error::OutOfRange("boundary functionals need dimension at least 2".into()));
    }
    let total = boundary_integral(body, &|x| f.eval(body, x).unwrap_or(f64::NAN))?;
    let tol = if n == 2 { 1e-6 } else { 1e-2 };
    if !total.is_finite() {
        return Err(Error::CurvatureUnavailable);
    }
    if (total - 1.0).abs() > tol {
        return Err(Error::NormalizationFailure(total));
    }
    let e = 1.0 / (n as f64 - 1.0);
    let value = boundary_integral(body, &|x| {
        match (body.curvature(x), f.eval(body, x)) {
            (Ok(k), Ok(fx)) => k.powf(e) / fx.powf(2.0 * e),
            _ => f64::NAN,
        }
    })?;
    if !value.is_finite() {
        return Err(Error::CurvatureUnavailable);
    }
    Ok(value)
}

/// Missed volume of random polytopes with vertices on the boundary of a
/// ball or ellipsoid: rate N^{-2/(n-1)} with prefactor
/// cₙ·∫κ^{1/(n-1)}/f^{2/(n-1)} dμ.
pub fn boundary_rate_experiment(
    body: &dyn ConvexBody,
    density: &BoundaryDensity,
    ns: &[usize],
    policy: &TrialPolicy,
    seed: u64,
) -> Result<RateReport> {
    if !matches!(body.view(), BodyRef::Ball(_) | BodyRef::Ellipsoid(_)) {
        return Err(Error::RollingConditionUnavailable);
    }
    let n = check_low_dim(body)?;
    let reference = boundary_reference(body, density)?;
    let points = estimates(body, &PointModel::Boundary(density.clone()), ns, policy, seed)?;
    rate_report(points, -2.0 / (n as f64 - 1.0), 0, Some(reference), Correction::Power(1.0))
}

/// cₙ·∫κ^{1/(n-1)}/f^{2/(n-1)} dμ.
pub fn boundary_reference(body: &dyn ConvexBody, density: &BoundaryDensity) -> Result<f64> {
    Ok(Constant::RandomBoundary.eval(body.dim())? * holder_functional(body, density)?)
}

/// Mean number of vertices of uniform random polytopes: rate
/// N^{(n-1)/(n+1)}. No reference prefactor.
pub fn vertex_count_rate(body: &dyn ConvexBody, ns: &[usize], policy: &TrialPolicy, seed: u64) -> Result<RateReport> {
    let n = check_low_dim(body)? as f64;
    check_ns(ns, body.dim())?;
    let points = ns
        .iter()
        .map(|&k| Ok(RatePoint { n: k, estimate: vertex_count(body, &PointModel::Uniform, k, policy, seed)? }))
        .collect::<Result<Vec<_>>>()?;
    let q = (n - 1.0) / (n + 1.0);
    rate_report(points, q, 0, None, Correction::Power(q))
}

fn polytope_of(body: &dyn ConvexBody) -> Result<&crate::geometry::VPolytope> {
    body.polytope().ok_or_else(|| Error::invalid(format!("{} is not a polytope", body.name())))
}

/// Missed volume of uniform random polytopes in a polytope P scaled to unit
/// volume: rate N^{-1}(ln N)^{n-1} with prefactor
/// flag(P)/((n+1)^{n-1}(n-1)!).
pub fn polytope_uniform_rate(body: &dyn ConvexBody, ns: &[usize], policy: &TrialPolicy, seed: u64) -> Result<RateReport> {
    let n = check_low_dim(body)?;
    let unit = unit_volume_body(body)?;
    let reference = polytope_uniform_reference(unit.inner())?;
    let points = estimates(&unit, &PointModel::Uniform, ns, policy, seed)?;
    rate_report(points, -1.0, n as u32 - 1, Some(reference), Correction::Log)
}

/// The polytope of `body` scaled to unit volume.
pub fn unit_volume_body(body: &dyn ConvexBody) -> Result<PolytopeBody> {
    Ok(PolytopeBody::new(polytope_of(body)?.normalized_to_unit_volume()?))
}

/// flag(P)/((n+1)^{n-1}(n-1)!).
pub fn polytope_uniform_reference(p: &crate::geometry::VPolytope) -> Result<f64> {
    Ok(flag_via_lattice(p)? as f64 * Constant::BaranyBuchta.eval(p.dim())?)
}

/// True when every vertex lies in exactly n facets.
pub fn is_simple(p: &crate::geometry::VPolytope) -> bool {
    let n = p.dim();
    let mut degree = vec![0usize; p.vertices().len()];
    for f in p.facets() {
        for &v in &f.vertices {
            degree[v] += 1;
        }
    }
    degree.iter().all(|&d| d == n)
}

/// Missed volume of random polytopes with vertices uniform on the boundary
/// of a simple polytope: rate N^{-n/(n-1)} without a logarithmic factor.
/// For the unit cube the report carries the corner lower bound
/// P(no point near the origin)·s^n/n!, s = ((n-1)!/(nN))^{1/(n-1)}.
pub fn polytope_boundary_rate(body: &dyn ConvexBody, ns: &[usize], policy: &TrialPolicy, seed: u64) -> Result<RateReport> {
    let n = check_low_dim(body)?;
    if !is_simple(polytope_of(body)?) {
        return Err(Error::NotSimple);
    }
    let points = estimates(body, &PointModel::Boundary(BoundaryDensity::uniform()), ns, policy, seed)?;
    let nf = n as f64;
    let mut r = rate_report(points, -nf / (nf - 1.0), 0, None, Correction::Power(1.0))?;
    r.log_test = Some(log_term_test(&r.data())?);
    r.lower_bounds = corner_lower_bounds(body, ns);
    Ok(r)
}

/// P(no point in the corner region)·s^n/n! at each N, for the unit cube.
pub fn corner_lower_bounds(body: &dyn ConvexBody, ns: &[usize]) -> Option<Vec<f64>> {
    let BodyRef::Cube(c) = body.view() else { return None };
    if c.lo != 0.0 || c.hi != 1.0 {
        return None;
    }
    let n = body.dim();
    Some(
        ns.iter()
            .map(|&k| {
                let s = corner_scale(n, k);
                let hit = 1.0 / (k as f64 * body.surface_area());
                (1.0 - hit).powi(k as i32) * s.powi(n as i32) / factorial(n as u32)
            })
            .collect(),
    )
}

/// Leg length ((n-1)!/(nN))^{1/(n-1)} of the corner simplices whose union
/// has surface measure 1/N.
pub fn corner_scale(n: usize, n_points: usize) -> f64 {
    (factorial(n as u32 - 1) / (n as f64 * n_points as f64)).powf(1.0 / (n as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ball, Cube, EllipseCurve, Ellipsoid, SmoothPlanarBody};
    use crate::geometry::VPolytope;
    use std::f64::consts::{PI, TAU};
    use std::sync::Arc;

    #[test]
    fn holder_on_the_circle_is_equality() {
        let disk = Ball::unit(2).unwrap();
        let v = holder_functional(&disk, &BoundaryDensity::uniform()).unwrap();
        assert!((v / (8.0 * PI.powi(3)) - 1.0).abs() < 1e-9);
        let a = holder_functional(&disk, &BoundaryDensity::affine()).unwrap();
        assert!((a / v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn holder_on_the_ellipse() {
        let e = Ellipsoid::axis_aligned(vec![0.0, 0.0], vec![2.0, 1.0]).unwrap();
        let asa = affine_surface_area(&e).unwrap();
        let fas = holder_functional(&e, &BoundaryDensity::affine()).unwrap();
        assert!((fas / asa.powi(3) - 1.0).abs() < 1e-6);
        let uni = holder_functional(&e, &BoundaryDensity::uniform()).unwrap();
        // uniform: L² ∫κ ds = 2π L²
        let l = SmoothPlanarBody::new(EllipseCurve::new(2.0, 1.0).unwrap()).unwrap().perimeter();
        assert!((uni / (TAU * l * l) - 1.0).abs() < 1e-8);
        assert!(uni > 1.1 * asa.powi(3));
    }

    #[test]
    fn holder_rejects_unnormalized_densities() {
        let disk = Ball::unit(2).unwrap();
        let f = BoundaryDensity::custom(&disk, Arc::new(|_| 1.0 / TAU * 1.0004), 1.0).unwrap();
        assert!(matches!(holder_functional(&disk, &f), Err(Error::NormalizationFailure(_))));
    }

    #[test]
    fn boundary_experiment_needs_rolling_balls() {
        let sq = Cube::unit(2).unwrap();
        let r = boundary_rate_experiment(&sq, &BoundaryDensity::uniform(), &[8, 16], &TrialPolicy::fixed(30), 1);
        assert_eq!(r.unwrap_err(), Error::RollingConditionUnavailable);
    }

    #[test]
    fn non_simple_polytopes_are_rejected() {
        let oct = PolytopeBody::new(VPolytope::cross_polytope(3).unwrap());
        let r = polytope_boundary_rate(&oct, &[8, 16], &TrialPolicy::fixed(30), 1);
        assert_eq!(r.unwrap_err(), Error::NotSimple);
        assert!(is_simple(&VPolytope::cube(3, 0.0, 1.0).unwrap()));
        assert!(is_simple(&VPolytope::standard_simplex(3).unwrap()));
    }

    #[test]
    fn corner_region_has_measure_one_over_n() {
        for n in 2..=4 {
            for k in [1, 10, 1000] {
                let s = corner_scale(n, k);
                let measure = n as f64 * s.powi(n as i32 - 1) / factorial(n as u32 - 1);
                assert!((measure * k as f64 - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_disk_rate_runs() {
        let disk = Ball::unit(2).unwrap();
        let ns = [8, 16, 32, 64, 128, 256];
        let r = uniform_rate_experiment(&disk, &ns, &TrialPolicy::fixed(200), 3).unwrap();
        assert!((r.fit.exponent + 2.0 / 3.0).abs() < 0.15, "{}", r.fit.exponent);
        assert_eq!(r.points.len(), 6);
        let v = vertex_count_rate(&disk, &ns, &TrialPolicy::fixed(50), 3).unwrap();
        assert!(v.points.iter().all(|p| p.estimate.value <= p.n as f64));
    }
}
