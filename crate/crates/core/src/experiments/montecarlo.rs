//! Seeded trial runner and the missed-volume estimator.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::EstimateRecord;
use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::geometry::{hull_vertex_count, hull_volume};
use crate::numeric::mean_stderr;
use crate::sampling::{PointModel, PointSampler, RandomSource, SimRng};

/// Fewest trials for an estimate that is compared against anything.
pub const MIN_TRIALS: usize = 30;

/// How many trials to run for one cell.
///
/// Starting from `trials`, the count doubles while the relative standard
/// error exceeds `target_rel_stderr`, up to `max_trials`. Trial `t` always
/// uses stream `t` of the cell, so an escalated run extends the shorter one.
/// `budget_seconds` stops escalation early; runs that hit it are the only
/// ones whose trial count depends on the machine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialPolicy {
    pub trials: usize,
    #[serde(default)]
    pub target_rel_stderr: Option<f64>,
    #[serde(default)]
    pub max_trials: Option<usize>,
    #[serde(default)]
    pub budget_seconds: Option<f64>,
}

impl TrialPolicy {
    pub fn fixed(trials: usize) -> Self {
        Self {
            trials,
            target_rel_stderr: None,
            max_trials: None,
            budget_seconds: None,
        }
    }

    pub fn escalating(trials: usize, target_rel_stderr: f64, max_trials: usize) -> Self {
        Self {
            trials,
            target_rel_stderr: Some(target_rel_stderr),
            max_trials: Some(max_trials),
            budget_seconds: None,
        }
    }

    fn check(&self) -> Result<()> {
        if self.trials < MIN_TRIALS {
            return Err(Error::OutOfRange(format!(
                "{} trials requested, at least {MIN_TRIALS} needed",
                self.trials
            )));
        }
        Ok(())
    }
}

/// Per-trial values for trials `range` of cell `key`, in trial order.
pub fn trial_values<F>(seed: u64, key: u64, range: std::ops::Range<u64>, f: &F) -> Result<Vec<f64>>
where
    F: Fn(&mut SimRng) -> Result<f64> + Sync,
{
    range
        .into_par_iter()
        .map(|t| f(&mut RandomSource::for_trial(seed, key, t).rng()))
        .collect()
}

/// Runs trials under `policy` and aggregates them.
pub fn estimate<F>(seed: u64, key: u64, policy: &TrialPolicy, f: F) -> Result<EstimateRecord>
where
    F: Fn(&mut SimRng) -> Result<f64> + Sync,
{
    policy.check()?;
    let start = Instant::now();
    let mut values = trial_values(seed, key, 0..policy.trials as u64, &f)?;
    if let Some(target) = policy.target_rel_stderr {
        let cap = policy.max_trials.unwrap_or(policy.trials);
        loop {
            let (mean, se) = mean_stderr(&values);
            let done = se <= target * mean.abs() || values.len() >= cap;
            let out_of_time = policy
                .budget_seconds
                .is_some_and(|b| start.elapsed().as_secs_f64() >= b);
            if done || out_of_time {
                break;
            }
            let next = (2 * values.len()).min(cap) as u64;
            values.extend(trial_values(seed, key, values.len() as u64..next, &f)?);
        }
    }
    Ok(EstimateRecord::from_trials(&values, seed, start.elapsed().as_secs_f64()))
}

/// Volume of the hull of a flat buffer; flat hulls have volume zero.
pub(crate) fn hull_volume_or_zero(buf: &[f64], dim: usize) -> Result<f64> {
    match hull_volume(buf, dim) {
        Ok(v) => Ok(v),
        Err(Error::DegenerateInput(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// One trial: vol(K) minus the volume of the hull of `n_points` draws.
pub fn missed_volume_trial(
    body: &dyn ConvexBody,
    sampler: &PointSampler<'_>,
    n_points: usize,
    rng: &mut SimRng,
) -> Result<f64> {
    let dim = body.dim();
    let mut buf = Vec::with_capacity(n_points * dim);
    sampler.fill(rng, n_points, dim, &mut buf)?;
    Ok(body.volume() - hull_volume_or_zero(&buf, dim)?)
}

/// Mean of vol(K) − vol([x₁, …, x_N]) over independent trials.
pub fn missed_volume(
    body: &dyn ConvexBody,
    model: &PointModel,
    n_points: usize,
    policy: &TrialPolicy,
    seed: u64,
) -> Result<EstimateRecord> {
    let sampler = PointSampler::new(body, model)?;
    estimate(seed, n_points as u64, policy, |rng| {
        missed_volume_trial(body, &sampler, n_points, rng)
    })
}

/// Mean number of hull vertices of `n_points` draws.
pub fn vertex_count(
    body: &dyn ConvexBody,
    model: &PointModel,
    n_points: usize,
    policy: &TrialPolicy,
    seed: u64,
) -> Result<EstimateRecord> {
    let sampler = PointSampler::new(body, model)?;
    let dim = body.dim();
    estimate(seed, n_points as u64, policy, |rng| {
        let mut buf = Vec::with_capacity(n_points * dim);
        sampler.fill(rng, n_points, dim, &mut buf)?;
        Ok(hull_vertex_count(&buf, dim)? as f64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ball, Simplex};
    use crate::geometry::simplex_measure;
    use crate::numeric::adaptive_simpson;
    use crate::sampling::BoundaryDensity;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn too_few_trials() {
        let s = Simplex::standard(2).unwrap();
        let r = missed_volume(&s, &PointModel::Uniform, 3, &TrialPolicy::fixed(10), 1);
        assert!(matches!(r, Err(Error::OutOfRange(_))));
    }

    #[test]
    fn cyclic_vertices_have_zero_variance() {
        let s = Simplex::new(vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let inner = vec![vec![0.5, 0.1], vec![1.0, 0.2], vec![0.2, 0.6]];
        let r = missed_volume(&s, &PointModel::Cyclic(inner.clone()), 9, &TrialPolicy::fixed(40), 3).unwrap();
        assert_eq!(r.stderr, 0.0);
        assert!((r.value - (1.0 - simplex_measure(&inner))).abs() < 1e-15);
    }

    #[test]
    fn simplex_with_n_plus_one_uniform_points() {
        // Brute-force oracle: 10⁷ direct determinant evaluations, no hulls.
        use crate::sampling::UniformSampler;
        let s = Simplex::standard(2).unwrap();
        let u = UniformSampler::new(&s);
        let total = 10_000_000u64;
        let chunks = 100u64;
        let sums: Vec<f64> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = RandomSource::new(99, c).rng();
                let mut p = [[0.0; 2]; 3];
                let mut acc = 0.0;
                for _ in 0..total / chunks {
                    for q in p.iter_mut() {
                        u.sample_into(&mut rng, q).unwrap();
                    }
                    let d = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
                    acc += 0.5 * d.abs();
                }
                acc
            })
            .collect();
        let oracle = 0.5 - sums.iter().sum::<f64>() / total as f64;
        let r = missed_volume(&s, &PointModel::Uniform, 3, &TrialPolicy::fixed(200_000), 5).unwrap();
        assert!((r.value - oracle).abs() < 4.0 * r.stderr, "{} vs {oracle} ± {}", r.value, r.stderr);
        // the classical mean triangle/area ratio 1/12 as a sanity anchor
        assert!((oracle / 0.5 - (1.0 - 1.0 / 12.0)).abs() < 1e-3);
    }

    #[test]
    fn circle_triangle_missed_area() {
        // Fix the first point at angle 0; the sorted other two split the
        // circle into gaps a, b, 2π − a − b with density 2/(2π)².
        let mean_area = 2.0 * adaptive_simpson(
            &|a: f64| {
                adaptive_simpson(
                    &|b: f64| {
                        let c = TAU - a - b;
                        0.5 * (a.sin() + b.sin() + c.sin()).abs()
                    },
                    0.0,
                    TAU - a,
                    1e-11,
                )
            },
            0.0,
            TAU,
            1e-10,
        ) / (TAU * TAU);
        assert!((mean_area - 3.0 / TAU).abs() < 1e-8);
        let disk = Ball::unit(2).unwrap();
        let model = PointModel::Boundary(BoundaryDensity::uniform());
        let r = missed_volume(&disk, &model, 3, &TrialPolicy::fixed(100_000), 8).unwrap();
        let want = PI - mean_area;
        assert!((r.value - want).abs() < 4.0 * r.stderr, "{} vs {want}", r.value);
    }

    #[test]
    fn escalation_extends_the_same_streams() {
        let s = Simplex::standard(2).unwrap();
        let p = TrialPolicy::escalating(32, 1e-9, 256);
        let a = missed_volume(&s, &PointModel::Uniform, 10, &p, 4).unwrap();
        assert_eq!(a.samples, 256);
        let b = missed_volume(&s, &PointModel::Uniform, 10, &TrialPolicy::fixed(256), 4).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.stderr, b.stderr);
        let loose = missed_volume(&s, &PointModel::Uniform, 10, &TrialPolicy::escalating(32, 10.0, 256), 4).unwrap();
        assert_eq!(loose.samples, 32);
    }

    #[test]
    fn stderr_scales_with_trials() {
        let disk = Ball::unit(2).unwrap();
        let a = missed_volume(&disk, &PointModel::Uniform, 50, &TrialPolicy::fixed(500), 6).unwrap();
        let b = missed_volume(&disk, &PointModel::Uniform, 50, &TrialPolicy::fixed(8000), 6).unwrap();
        let ratio = a.stderr / b.stderr;
        assert!((ratio / 4.0 - 1.0).abs() < 0.25, "{ratio}");
    }

    #[test]
    fn vertex_counts_never_exceed_n() {
        let disk = Ball::unit(2).unwrap();
        let r = vertex_count(&disk, &PointModel::Uniform, 40, &TrialPolicy::fixed(50), 1).unwrap();
        assert!(r.value <= 40.0 && r.value >= 3.0);
    }
}
