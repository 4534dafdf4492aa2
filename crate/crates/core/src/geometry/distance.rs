//! Euclidean projection onto polytopes and the Hausdorff distance.

use super::polytope::VPolytope;
use crate::error::{Error, Result};
use crate::numeric::{dot, norm, solve};

const KKT_TOL: f64 = 1e-10;

/// Distance from `x` to the polytope `p` (zero inside).
///
/// Solves min |y - x|² subject to the facet inequalities with a primal
/// active-set method started at the vertex mean. At most 10·n pivots are
/// allowed.
pub fn distance_to_polytope(x: &[f64], p: &VPolytope) -> Result<f64> {
    let y = project(x, p)?;
    Ok(crate::numeric::dist(x, &y))
}

/// Nearest point of `p` to `x`.
pub fn project(x: &[f64], p: &VPolytope) -> Result<Vec<f64>> {
    let hs = p.halfspaces();
    let n = p.dim();
    let scale = p.diameter().max(norm(x)).max(1.0);
    let tol = KKT_TOL * scale;
    if hs.iter().all(|h| h.signed_distance(x) <= 0.0) {
        return Ok(x.to_vec());
    }
    let mut y = p.vertex_mean();
    let mut work: Vec<usize> = Vec::new();
    let max_pivots = 10 * n;
    let mut pivots = 0;
    loop {
        // Minimizer of |z - x|² on the affine set of the working constraints.
        let (target, lambda) = if work.is_empty() {
            (x.to_vec(), Vec::new())
        } else {
            let g: Vec<Vec<f64>> = work
                .iter()
                .map(|&i| work.iter().map(|&j| dot(&hs[i].normal, &hs[j].normal)).collect())
                .collect();
            let rhs: Vec<f64> = work
                .iter()
                .map(|&i| dot(&hs[i].normal, x) - hs[i].offset)
                .collect();
            let lambda = solve(&g, &rhs)
                .ok_or_else(|| Error::ProjectionFailed("dependent active constraints".into()))?;
            let mut z = x.to_vec();
            for (l, &i) in lambda.iter().zip(&work) {
                z.iter_mut().zip(&hs[i].normal).for_each(|(zk, a)| *zk -= l * a);
            }
            (z, lambda)
        };
        let step: Vec<f64> = target.iter().zip(&y).map(|(t, yk)| t - yk).collect();
        if norm(&step) <= tol {
            // KKT check: every multiplier of the working set nonnegative.
            match lambda
                .iter()
                .enumerate()
                .filter(|(_, &l)| l < -tol)
                .min_by(|a, b| a.1.total_cmp(b.1))
            {
                None => return Ok(target),
                Some((k, _)) => {
                    work.remove(k);
                }
            }
        } else {
            let mut alpha = 1.0;
            let mut blocking = None;
            for (i, h) in hs.iter().enumerate() {
                if work.contains(&i) {
                    continue;
                }
                let rate = dot(&h.normal, &step);
                if rate > 1e-15 {
                    let room = (h.offset - dot(&h.normal, &y)).max(0.0);
                    let a = room / rate;
                    if a < alpha {
                        alpha = a;
                        blocking = Some(i);
                    }
                }
            }
            y.iter_mut().zip(&step).for_each(|(yk, s)| *yk += alpha * s);
            if let Some(i) = blocking {
                work.push(i);
            }
        }
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::ProjectionFailed(format!(
                "no optimal active set after {max_pivots} pivots"
            )));
        }
    }
}

/// Hausdorff distance between two polytopes: the largest distance from a
/// vertex of either one to the other.
pub fn hausdorff_distance(p: &VPolytope, q: &VPolytope) -> Result<f64> {
    let mut d: f64 = 0.0;
    for v in p.vertices() {
        d = d.max(distance_to_polytope(v, q)?);
    }
    for v in q.vertices() {
        d = d.max(distance_to_polytope(v, p)?);
    }
    Ok(d)
}
