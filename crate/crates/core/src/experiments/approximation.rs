//! Best approximation of the disk, vertex removal, the cube corner
//! construction and polytopes from an inflated sphere.

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::constants::Constant;
use super::estimate::EstimateRecord;
use super::montecarlo::{estimate, trial_values, TrialPolicy};
use super::random_rates::corner_scale;
use crate::bodies::Cube;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, simplex_measure};
use crate::numeric::{factorial, student_t_quantile};
use crate::sampling::{disk_polygon_symdiff, inflated_sphere_polytope, BoundarySampler, BoundaryDensity};

/// x − sin x without cancellation for small x.
fn x_minus_sin(x: f64) -> f64 {
    if x > 0.5 {
        return x - x.sin();
    }
    // x³/3! − x⁵/5! + …
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0f64;
    let mut k = 3.0;
    while term.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
        sum += term;
        term *= -x2 / ((k + 1.0) * (k + 2.0));
        k += 2.0;
    }
    sum
}

/// Area missed by the regular N-gon inscribed in the unit disk,
/// π − (N/2) sin(2π/N).
pub fn best_polygon_disk(n_vertices: usize) -> Result<f64> {
    if n_vertices < 3 {
        return Err(Error::OutOfRange(format!("a polygon needs 3 vertices, got {n_vertices}")));
    }
    let a = 2.0 * PI / n_vertices as f64;
    Ok(0.5 * n_vertices as f64 * x_minus_sin(a))
}

/// Relative volume loss from deleting each point of a finite set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRemovalScan {
    pub dim: usize,
    pub volume: f64,
    /// (vol P − vol P₋ᵢ)/vol P for each input index; zero for non-vertices.
    pub losses: Vec<f64>,
    /// Indices of the hull vertices.
    pub vertices: Vec<usize>,
    pub epsilon: f64,
    /// The (1 − 2ε)·N smallest vertex loss.
    pub quantile: f64,
    /// quantile · N^{(n+1)/(n-1)} / (n² ε^{-(n+1)/(n-1)}), with N the vertex count.
    pub c0: f64,
}

impl VertexRemovalScan {
    /// c₀ n² ε^{-(n+1)/(n-1)} N^{-(n+1)/(n-1)}.
    pub fn bound(&self, c0: f64) -> f64 {
        let n = self.dim as f64;
        let e = (n + 1.0) / (n - 1.0);
        c0 * n * n * self.epsilon.powf(-e) * (self.vertices.len() as f64).powf(-e)
    }

    /// Number of vertices whose loss is at most `t`.
    pub fn count_at_most(&self, t: f64) -> usize {
        self.vertices.iter().filter(|&&i| self.losses[i] <= t).count()
    }
}

/// Deletes each point in turn and measures the lost volume.
///
/// The loss of a vertex x is the sum of the cones from x over the facets of
/// the smaller hull that x sees, which avoids subtracting two nearly equal
/// volumes.
pub fn vertex_removal_scan(points: &[Vec<f64>]) -> Result<VertexRemovalScan> {
    let dim = points.first().map_or(0, Vec::len);
    if points.len() > 500 || !(2..=4).contains(&dim) {
        return Err(Error::OutOfRange(format!(
            "vertex removal needs at most 500 points in dimension 2..=4, got {} in {dim}",
            points.len()
        )));
    }
    let p = convex_hull(points)?;
    let volume = p.volume();
    let key = |v: &[f64]| v.iter().map(|c| c.to_bits()).collect::<Vec<u64>>();
    let vertex_keys: HashSet<Vec<u64>> = p.vertices().iter().map(|v| key(v)).collect();
    let vertices: Vec<usize> = (0..points.len()).filter(|&i| vertex_keys.contains(&key(&points[i]))).collect();
    let mut losses = vec![0.0; points.len()];
    for &i in &vertices {
        let rest: Vec<Vec<f64>> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        let q = convex_hull(&rest)?;
        let hs = q.halfspaces();
        let x = &points[i];
        let mut loss = 0.0;
        for (s, &f) in q.boundary_simplices().iter().zip(q.boundary_simplex_facets()) {
            if hs[f].signed_distance(x) > 0.0 {
                let mut cone: Vec<Vec<f64>> = s.iter().map(|&k| q.vertices()[k].clone()).collect();
                cone.push(x.clone());
                loss += simplex_measure(&cone);
            }
        }
        losses[i] = loss / volume;
    }
    let epsilon = 0.25;
    let mut sorted: Vec<f64> = vertices.iter().map(|&i| losses[i]).collect();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let rank = (((1.0 - 2.0 * epsilon) * m as f64).ceil() as usize).clamp(1, m);
    let quantile = sorted[rank - 1];
    let n = dim as f64;
    let e = (n + 1.0) / (n - 1.0);
    let c0 = quantile * (m as f64).powf(e) / (n * n * epsilon.powf(-e));
    Ok(VertexRemovalScan { dim, volume, losses, vertices, epsilon, quantile, c0 })
}

/// Outcome of the cube corner construction at one N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CornerBound {
    pub dim: usize,
    pub n_points: usize,
    /// Leg length of the corner simplices.
    pub scale: f64,
    /// Surface measure of the corner region (1/N while the legs fit in a facet).
    pub region_measure: f64,
    /// Fraction of trials in which no point fell in the corner region.
    pub miss_probability: EstimateRecord,
    /// (1 − 1/N)^N: the miss probability if the region carried probability 1/N.
    pub printed_miss: f64,
    /// (1 − 1/(2nN))^N: the miss probability under the normalized surface
    /// measure, which gives the region probability 1/(2nN).
    pub uniform_miss: f64,
    /// Volume s^n/n! of the corner simplex missed when no point hits.
    pub missed_volume_bound: f64,
}

/// Samples N uniform boundary points of [0,1]^n per trial and records
/// whether any lands in ∂C ∩ {x₁ + … + xₙ ≤ s}, s = ((n-1)!/(nN))^{1/(n-1)}.
pub fn cube_corner_bound(n: usize, n_points: usize, policy: &TrialPolicy, seed: u64) -> Result<CornerBound> {
    if !(2..=4).contains(&n) {
        return Err(Error::OutOfRange(format!("corner bounds need n in 2..=4, got {n}")));
    }
    if n_points == 0 {
        return Err(Error::OutOfRange("N must be positive".into()));
    }
    let cube = Cube::unit(n)?;
    let sampler = BoundarySampler::new(&cube, &BoundaryDensity::uniform())?;
    let s = corner_scale(n, n_points);
    let miss_probability = estimate(seed, n_points as u64, policy, |rng| {
        let mut x = vec![0.0; n];
        for _ in 0..n_points {
            sampler.sample_into(rng, &mut x)?;
            if x.iter().sum::<f64>() <= s {
                return Ok(0.0);
            }
        }
        Ok(1.0)
    })?;
    let nf = n_points as f64;
    let legs = s.min(1.0);
    Ok(CornerBound {
        dim: n,
        n_points,
        scale: s,
        region_measure: n as f64 * legs.powi(n as i32 - 1) / factorial(n as u32 - 1),
        miss_probability,
        printed_miss: (1.0 - 1.0 / nf).powf(nf),
        uniform_miss: (1.0 - 1.0 / (2.0 * n as f64 * nf)).powf(nf),
        missed_volume_bound: s.powi(n as i32) / factorial(n as u32),
    })
}

/// One N of the inflated-sphere experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InflatedRow {
    pub n_points: usize,
    /// Median of vol(B △ P)·N²/vol(B) over trials.
    pub median_scaled: f64,
    /// Smallest vol(B △ P) seen.
    pub min_symdiff: f64,
    /// vol(B)/(67e²πn)·N^{-2/(n-1)}.
    pub lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InflatedReport {
    pub rows: Vec<InflatedRow>,
    /// Slope of ln(median) on ln N.
    pub slope: f64,
    pub slope_stderr: f64,
    /// One-sided 95% test for a positive slope.
    pub upward_trend: bool,
    pub lower_bound_respected: bool,
}

/// Random polygons with vertices on the circle of radius 1 + N^{-2},
/// compared with the unit disk in the symmetric-difference metric.
pub fn inflated_disk_experiment(ns: &[usize], trials: usize, seed: u64) -> Result<InflatedReport> {
    if ns.len() < 3 {
        return Err(Error::InsufficientRange("need at least 3 values of N".into()));
    }
    let n = 2;
    let coef = Constant::Boroczky.eval(n)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &m in ns {
        let f = |rng: &mut crate::sampling::SimRng| -> Result<f64> {
            let p = inflated_sphere_polytope(n, m, rng)?;
            Ok(disk_polygon_symdiff(&p))
        };
        let mut sym = trial_values(seed, m as u64, 0..trials as u64, &f)?;
        sym.sort_by(f64::total_cmp);
        let mid = sym.len() / 2;
        let median = if sym.len() % 2 == 1 { sym[mid] } else { 0.5 * (sym[mid - 1] + sym[mid]) };
        let mf = m as f64;
        rows.push(InflatedRow {
            n_points: m,
            median_scaled: median * mf * mf / PI,
            min_symdiff: sym[0],
            lower_bound: coef * mf.powf(-2.0 / (n as f64 - 1.0)),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n_points as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_scaled.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    let slope_stderr = (rss / (k - 2.0) / sxx).sqrt();
    let upward_trend = slope > student_t_quantile(0.95, k - 2.0) * slope_stderr;
    let lower_bound_respected = rows.iter().all(|r| r.min_symdiff >= r.lower_bound);
    Ok(InflatedReport { rows, slope, slope_stderr, upward_trend, lower_bound_respected })
}

/// Random search over inscribed N-gons: the largest area found among
/// `tries` random angle vectors and their local refinements.
pub fn inscribed_polygon_search(n_vertices: usize, tries: usize, rng: &mut crate::sampling::SimRng) -> f64 {
    let area = |gaps: &[f64]| 0.5 * gaps.iter().map(|g| g.sin()).sum::<f64>();
    let mut best = 0.0f64;
    for _ in 0..tries {
        let mut gaps: Vec<f64> = (0..n_vertices).map(|_| rng.random::<f64>() + 0.05).collect();
        let total: f64 = gaps.iter().sum();
        gaps.iter_mut().for_each(|g| *g *= 2.0 * PI / total);
        // pairwise equalization never decreases the area (sin is concave on [0, π])
        let mut step = 0.5;
        for _ in 0..200 {
            let i = rng.random_range(0..n_vertices);
            let j = (i + 1 + rng.random_range(0..n_vertices - 1)) % n_vertices;
            let mut trial = gaps.clone();
            let d = step * (trial[j] - trial[i]);
            trial[i] += d;
            trial[j] -= d;
            if trial.iter().all(|&g| g > 0.0 && g < PI) && area(&trial) >= area(&gaps) {
                gaps = trial;
            } else {
                step *= 0.97;
            }
        }
        best = best.max(area(&gaps));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::VPolytope;
    use crate::sampling::RandomSource;

    #[test]
    fn square_and_limit() {
        assert!((best_polygon_disk(4).unwrap() - (PI - 2.0)).abs() < 1e-15);
        assert!(best_polygon_disk(2).is_err());
        let lim = 2.0 * PI.powi(3) / 3.0;
        for n in [64usize, 256, 4096, 1 << 20] {
            let v = best_polygon_disk(n).unwrap() * (n * n) as f64;
            assert!((v / lim - 1.0).abs() < 0.01, "{n}: {v}");
        }
        let huge = best_polygon_disk(1 << 20).unwrap() * 2f64.powi(40);
        assert!((huge / lim - 1.0).abs() < 1e-10);
    }

    #[test]
    fn regular_polygons_are_optimal_for_small_n() {
        let mut rng = RandomSource::new(21, 0).rng();
        for n in 3..=6 {
            let regular = PI - best_polygon_disk(n).unwrap();
            let found = inscribed_polygon_search(n, 300, &mut rng);
            assert!(found <= regular + 1e-12, "{n}: {found} > {regular}");
            assert!(found > regular - 1e-3);
        }
    }

    #[test]
    fn regular_polygon_ears() {
        // rounding of the vertex coordinates limits the relative accuracy
        // of an ear to about 1e-16·N²/(2π²)
        for n in [8usize, 16, 32, 64, 128] {
            let p = VPolytope::regular_polygon(n, 1.0).unwrap();
            let scan = vertex_removal_scan(p.vertices()).unwrap();
            let a = 2.0 * PI / n as f64;
            let ear = a.sin() * (1.0 - a.cos());
            let rel = ear / (0.5 * n as f64 * a.sin());
            for &l in &scan.losses {
                assert!((l / rel - 1.0).abs() < 1e-12, "{n}: {l} vs {rel}");
            }
        }
    }

    #[test]
    fn interior_points_lose_nothing() {
        let mut pts = VPolytope::cube(3, 0.0, 1.0).unwrap().vertices().to_vec();
        pts.push(vec![0.5, 0.5, 0.5]);
        pts.push(vec![0.5, 0.5, 1.0]);
        let scan = vertex_removal_scan(&pts).unwrap();
        assert_eq!(scan.losses[8], 0.0);
        assert_eq!(scan.losses[9], 0.0);
        assert_eq!(scan.vertices.len(), 8);
        // a cube corner carries the tetrahedron of volume 1/6
        assert!((scan.losses[0] - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn corner_region_and_probabilities() {
        let c = cube_corner_bound(2, 1, &TrialPolicy::fixed(4000), 3).unwrap();
        assert!((c.region_measure - 1.0).abs() < 1e-12);
        assert_eq!(c.printed_miss, 0.0);
        // one point lands in the corner with probability 1/(2n) = 1/4
        let p = c.miss_probability.value;
        assert!((p - 0.75).abs() < 4.0 * c.miss_probability.stderr, "{p}");
        let d = cube_corner_bound(3, 100, &TrialPolicy::fixed(4000), 4).unwrap();
        assert!((d.region_measure * 100.0 - 1.0).abs() < 1e-12);
        assert!((d.miss_probability.value - d.uniform_miss).abs() < 4.0 * d.miss_probability.stderr);
    }

    #[test]
    fn inflated_polygons_stay_above_the_lower_bound() {
        let r = inflated_disk_experiment(&[32, 64, 128], 60, 1).unwrap();
        assert!(r.lower_bound_respected);
        assert!(r.rows.iter().all(|row| row.median_scaled.is_finite() && row.median_scaled > 0.0));
    }
}
