//! Volume loss of floating bodies as δ → 0.

use serde::{Deserialize, Serialize};

use super::body::floating_body;
use crate::bodies::{ConvexBody, PolytopeBody};
use crate::error::{Error, Result};
use crate::experiments::fit::three_point_extrapolation;
use crate::geometry::VPolytope;
use crate::numeric::{factorial, unit_ball_volume};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub delta: f64,
    /// vol(K) − vol(K_δ).
    pub loss: f64,
    /// Loss divided by the rate function of δ.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatingRateTable {
    pub rows: Vec<RateRow>,
    /// Predicted limit of the ratio.
    pub limit: f64,
    /// Extrapolated limit from the last three rows.
    pub extrapolated: Option<f64>,
}

impl FloatingRateTable {
    pub fn last_ratio(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.ratio)
    }
}

/// Halving sequence from vol/100 down to `smallest_fraction · vol`, with
/// the endpoint itself appended.
pub fn delta_sequence(volume: f64, smallest_fraction: f64) -> Vec<f64> {
    let end = smallest_fraction * volume;
    let mut out = Vec::new();
    let mut d = volume / 100.0;
    while d > end * (1.0 + 1e-9) {
        out.push(d);
        d /= 2.0;
    }
    out.push(end);
    out
}

/// ½ ((n+1)/vol_{n-1}(B^{n-1}))^{2/(n+1)} · ∫ κ^{1/(n+1)}.
pub fn smooth_floating_limit(body: &dyn ConvexBody) -> Result<f64> {
    let n = body.dim() as f64;
    let asa = body.affine_surface_area()?;
    Ok(0.5 * ((n + 1.0) / unit_ball_volume(body.dim() - 1)).powf(2.0 / (n + 1.0)) * asa)
}

/// (vol K − vol K_δ)/δ^{2/(n+1)} along `deltas`.
pub fn smooth_floating_rate(body: &dyn ConvexBody, deltas: &[f64]) -> Result<FloatingRateTable> {
    let limit = smooth_floating_limit(body)?;
    let p = 2.0 / (body.dim() as f64 + 1.0);
    let rows = deltas
        .iter()
        .map(|&d| {
            let f = floating_body(body, d, 0)?;
            let loss = f.volume_loss();
            Ok(RateRow { delta: d, loss, ratio: loss / d.powf(p) })
        })
        .collect::<Result<Vec<_>>>()?;
    // corrections are powers of δ^{2/(n+1)}
    let xs: Vec<f64> = rows.iter().map(|r| r.delta.powf(p)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let extrapolated = three_point_extrapolation(&xs, &ys, |x| [x, x * x]);
    Ok(FloatingRateTable { rows, limit, extrapolated })
}

/// flag(P) / (n! n^{n-1}).
pub fn polytope_floating_limit(p: &VPolytope) -> f64 {
    let n = p.dim();
    p.lattice().flag_count() as f64 / (factorial(n as u32) * (n as f64).powi(n as i32 - 1))
}

/// (vol P − vol P_δ)/(δ ln(1/δ)^{n-1}) along `deltas`, after rescaling P
/// to unit volume so that the ratio is affine invariant.
pub fn polytope_floating_rate(p: &VPolytope, deltas: &[f64], grid: usize) -> Result<FloatingRateTable> {
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("δ-sequence must decrease"));
    }
    if deltas.last().is_some_and(|&d| d < 1e-6) {
        return Err(Error::DeltaOutOfRange { delta: deltas[deltas.len() - 1], max: 0.5 });
    }
    let unit = PolytopeBody::new(p.normalized_to_unit_volume()?);
    let n = p.dim() as i32;
    let rows = deltas
        .iter()
        .map(|&d| {
            let loss = floating_body(&unit, d, grid)?.volume_loss();
            Ok(RateRow { delta: d, loss, ratio: loss / (d * (1.0 / d).ln().powi(n - 1)) })
        })
        .collect::<Result<Vec<_>>>()?;
    // in x = ln(1/δ) the corrections are powers of 1/x
    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.delta).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let extrapolated = three_point_extrapolation(&xs, &ys, |x| [1.0 / x, 1.0 / (x * x)]);
    Ok(FloatingRateTable { rows, limit: polytope_floating_limit(p), extrapolated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Ball;
    use std::f64::consts::PI;

    #[test]
    fn disk_and_ball_limits() {
        let disk = Ball::unit(2).unwrap();
        let want = 0.5 * 1.5f64.powf(2.0 / 3.0) * 2.0 * PI;
        assert!((smooth_floating_limit(&disk).unwrap() - want).abs() < 1e-12);
        let ball = Ball::unit(3).unwrap();
        let want3 = 0.5 * (4.0 / PI).sqrt() * 4.0 * PI;
        assert!((smooth_floating_limit(&ball).unwrap() - want3).abs() < 1e-12);
    }

    #[test]
    fn limit_scales_homogeneously() {
        // asa scales as r^{n(n-1)/(n+1)} and δ^{2/(n+1)} absorbs the rest
        for n in [2usize, 3] {
            let r = 1.7f64;
            let a = smooth_floating_limit(&Ball::unit(n).unwrap()).unwrap();
            let b = smooth_floating_limit(&Ball::new(vec![0.0; n], r).unwrap()).unwrap();
            let nf = n as f64;
            assert!((b / a - r.powf(nf * (nf - 1.0) / (nf + 1.0))).abs() < 1e-12);
            // and the finite-δ ratios obey the same law at matched δ
            let d = 1e-4;
            let ta = smooth_floating_rate(&Ball::unit(n).unwrap(), &[d]).unwrap();
            let tb = smooth_floating_rate(&Ball::new(vec![0.0; n], r).unwrap(), &[d * r.powi(n as i32)]).unwrap();
            let want = r.powf(nf - 2.0 * nf / (nf + 1.0));
            assert!((tb.rows[0].ratio / ta.rows[0].ratio / want - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn disk_ratio_converges() {
        let disk = Ball::unit(2).unwrap();
        let t = smooth_floating_rate(&disk, &delta_sequence(PI, 1e-5 / PI)).unwrap();
        assert!((t.last_ratio() / t.limit - 1.0).abs() < 0.02);
        assert!((t.extrapolated.unwrap() / t.limit - 1.0).abs() < 1e-3);
        let gaps: Vec<f64> = t.rows.iter().map(|r| (r.ratio - t.limit).abs()).collect();
        assert!(gaps.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn polytope_limits() {
        assert!((polytope_floating_limit(&VPolytope::cube(2, 0.0, 1.0).unwrap()) - 2.0).abs() < 1e-12);
        assert!((polytope_floating_limit(&VPolytope::standard_simplex(2).unwrap()) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn square_ratios_stay_bounded() {
        let sq = VPolytope::cube(2, 0.0, 1.0).unwrap();
        let t = polytope_floating_rate(&sq, &[1e-2, 1e-3, 1e-4], 512).unwrap();
        for r in &t.rows {
            let exact = 2.0 * (1.0 + (1.0 / (2.0 * r.delta)).ln()) / (1.0 / r.delta).ln();
            assert!((r.ratio / exact - 1.0).abs() < 1e-3);
            assert!(r.ratio < 3.0);
        }
    }

    #[test]
    fn delta_sequence_shape() {
        let s = delta_sequence(1.0, 1e-5);
        assert_eq!(s[0], 0.01);
        assert_eq!(*s.last().unwrap(), 1e-5);
        assert!(s.windows(2).all(|w| w[1] < w[0]));
    }
}
