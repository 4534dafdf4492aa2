//! Caps of the unit ball.

use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, unit_ball_volume};

/// Volume of the cap `{x in B^n : x_1 >= 1 - h}` of the unit ball.
///
/// Uses the substitution t = cos θ, which turns the integrand into the
/// smooth function sin^n θ on [0, arccos(1 - h)].
pub fn cap_volume(n: usize, h: f64) -> Result<f64> {
    if n < 1 || !(0.0..=2.0).contains(&h) {
        return Err(Error::OutOfRange(format!("cap height {h} outside [0, 2]")));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    let theta = (1.0 - h).clamp(-1.0, 1.0).acos();
    let base = unit_ball_volume(n - 1);
    // Leading-order size of the cap, to make the tolerance relative.
    let rough = base * theta.powi(n as i32 + 1) / (n as f64 + 1.0);
    let tol = 1e-12f64.min(1e-13 * rough.max(1e-300));
    let f = |t: f64| t.sin().powi(n as i32);
    Ok(base * adaptive_simpson(&f, 0.0, theta, tol))
}

/// Inverse of [`cap_volume`] in h, by bisection (50 halvings plus a final
/// refinement to full precision).
pub fn cap_height(n: usize, v: f64) -> Result<f64> {
    let full = unit_ball_volume(n);
    if !(0.0..=full).contains(&v) {
        return Err(Error::OutOfRange(format!("cap volume {v} outside [0, {full}]")));
    }
    let (mut lo, mut hi) = (0.0, 2.0);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if cap_volume(n, mid)? < v {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
