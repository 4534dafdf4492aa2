//! Experiment configurations, named presets and per-N cells.
//!
//! A run is a list of cells, one per N, each an [`EstimateRecord`]
//! computed from trial streams keyed by (seed, N, trial). Cells are
//! independent, so a runner can checkpoint after each one. The summary is
//! derived from the finished cells alone.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::approximation::{best_polygon_disk, cube_corner_bound};
use super::estimate::EstimateRecord;
use super::fit::{check_n_range, log_term_test, rate_fit, RateModel};
use super::montecarlo::{estimate, missed_volume, vertex_count, TrialPolicy};
use super::random_rates::{
    boundary_reference, corner_lower_bounds, is_simple, polytope_uniform_reference, rate_report,
    uniform_reference, unit_volume_body, Correction, RatePoint, RateReport,
};
use crate::bodies::{BodyRef, BodySpec, ConvexBody};
use crate::error::{Error, Result};
use crate::numeric::student_t_quantile;
use crate::sampling::{disk_polygon_symdiff, inflated_sphere_polytope, BoundaryDensity, PointModel};

/// What an experiment measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Missed volume under a chosen point model, no fit.
    MissedVolume,
    /// Uniform points in a smooth body.
    UniformRate,
    /// Boundary points of a ball or ellipsoid.
    BoundaryRate,
    /// Vertex count of uniform random polytopes.
    VertexCount,
    /// Uniform points in a polytope scaled to unit volume.
    PolytopeUniform,
    /// Uniform boundary points of a simple polytope.
    PolytopeBoundary,
    /// Corner miss probability of the unit cube.
    CubeCorner,
    /// Random polygons on the circle of radius 1 + N^{-2}.
    InflatedDisk,
    /// Missed area of the regular inscribed N-gon (no sampling).
    BestPolygon,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::MissedVolume => "missed-volume",
            Self::UniformRate => "uniform-rate",
            Self::BoundaryRate => "boundary-rate",
            Self::VertexCount => "vertex-count",
            Self::PolytopeUniform => "polytope-uniform",
            Self::PolytopeBoundary => "polytope-boundary",
            Self::CubeCorner => "cube-corner",
            Self::InflatedDisk => "inflated-disk",
            Self::BestPolygon => "best-polygon",
        }
    }

    const ALL: [ExperimentKind; 9] = [
        Self::MissedVolume,
        Self::UniformRate,
        Self::BoundaryRate,
        Self::VertexCount,
        Self::PolytopeUniform,
        Self::PolytopeBoundary,
        Self::CubeCorner,
        Self::InflatedDisk,
        Self::BestPolygon,
    ];

    fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Point distribution named in a config.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Uniform,
    BoundaryUniform,
    BoundaryCone,
    BoundaryAffine,
}

impl SamplerKind {
    fn model(self) -> PointModel {
        match self {
            Self::Uniform => PointModel::Uniform,
            Self::BoundaryUniform => PointModel::Boundary(BoundaryDensity::uniform()),
            Self::BoundaryCone => PointModel::Boundary(BoundaryDensity::cone()),
            Self::BoundaryAffine => PointModel::Boundary(BoundaryDensity::affine()),
        }
    }

    fn density(self) -> Option<BoundaryDensity> {
        match self {
            Self::Uniform => None,
            Self::BoundaryUniform => Some(BoundaryDensity::uniform()),
            Self::BoundaryCone => Some(BoundaryDensity::cone()),
            Self::BoundaryAffine => Some(BoundaryDensity::affine()),
        }
    }
}

/// `{"experiment": name, "body": bodyspec, "sampler": kind, "Ns": [...],
/// "trials": t, "seed": s, "budget_seconds": b}`.
///
/// `experiment` is either an experiment kind or a preset name; fields
/// given in the config override the preset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerKind>,
    #[serde(rename = "Ns", default, skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
    /// Escalate trials until the relative standard error is below this.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_rel_stderr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trials: Option<usize>,
}

impl ExperimentConfig {
    pub fn named(name: &str) -> Self {
        Self {
            experiment: name.to_string(),
            body: None,
            sampler: None,
            ns: None,
            trials: None,
            seed: 0,
            budget_seconds: None,
            target_rel_stderr: None,
            max_trials: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("experiment config: {e}")))
    }
}

/// A preset: kind plus defaults.
struct Preset {
    name: &'static str,
    kind: ExperimentKind,
    body: &'static str,
    sampler: SamplerKind,
    ns: fn() -> Vec<usize>,
    trials: usize,
}

fn pow2(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

const PRESETS: &[Preset] = &[
    Preset { name: "disk-uniform", kind: ExperimentKind::UniformRate, body: r#"{"kind":"ball","dim":2}"#, sampler: SamplerKind::Uniform, ns: || pow2(5, 12), trials: 2000 },
    Preset { name: "ball-uniform", kind: ExperimentKind::UniformRate, body: r#"{"kind":"ball","dim":3}"#, sampler: SamplerKind::Uniform, ns: || pow2(5, 11), trials: 400 },
    Preset { name: "circle-boundary", kind: ExperimentKind::BoundaryRate, body: r#"{"kind":"ball","dim":2}"#, sampler: SamplerKind::BoundaryUniform, ns: || pow2(5, 11), trials: 2000 },
    Preset { name: "ellipse-boundary-affine", kind: ExperimentKind::BoundaryRate, body: r#"{"kind":"ellipsoid","semiaxes":[2,1]}"#, sampler: SamplerKind::BoundaryAffine, ns: || pow2(5, 11), trials: 2000 },
    Preset { name: "ellipse-boundary-uniform", kind: ExperimentKind::BoundaryRate, body: r#"{"kind":"ellipsoid","semiaxes":[2,1]}"#, sampler: SamplerKind::BoundaryUniform, ns: || pow2(5, 11), trials: 2000 },
    Preset { name: "disk-vertices", kind: ExperimentKind::VertexCount, body: r#"{"kind":"ball","dim":2}"#, sampler: SamplerKind::Uniform, ns: || pow2(5, 12), trials: 400 },
    Preset { name: "ball-vertices", kind: ExperimentKind::VertexCount, body: r#"{"kind":"ball","dim":3}"#, sampler: SamplerKind::Uniform, ns: || pow2(5, 11), trials: 200 },
    Preset { name: "triangle-uniform", kind: ExperimentKind::PolytopeUniform, body: r#"{"kind":"simplex","dim":2}"#, sampler: SamplerKind::Uniform, ns: || pow2(4, 10), trials: 200 },
    Preset { name: "square-uniform", kind: ExperimentKind::PolytopeUniform, body: r#"{"kind":"cube","dim":2}"#, sampler: SamplerKind::Uniform, ns: || pow2(4, 10), trials: 200 },
    Preset { name: "square-boundary", kind: ExperimentKind::PolytopeBoundary, body: r#"{"kind":"cube","dim":2}"#, sampler: SamplerKind::BoundaryUniform, ns: || pow2(9, 15), trials: 1000 },
    Preset { name: "cube-boundary", kind: ExperimentKind::PolytopeBoundary, body: r#"{"kind":"cube","dim":3}"#, sampler: SamplerKind::BoundaryUniform, ns: || pow2(9, 15), trials: 300 },
    Preset { name: "cube-corner", kind: ExperimentKind::CubeCorner, body: r#"{"kind":"cube","dim":3}"#, sampler: SamplerKind::BoundaryUniform, ns: || vec![1, 10, 100, 1000], trials: 10_000 },
    Preset { name: "inflated-disk", kind: ExperimentKind::InflatedDisk, body: r#"{"kind":"ball","dim":2}"#, sampler: SamplerKind::BoundaryUniform, ns: || pow2(7, 11), trials: 200 },
    Preset { name: "best-polygon", kind: ExperimentKind::BestPolygon, body: r#"{"kind":"ball","dim":2}"#, sampler: SamplerKind::BoundaryUniform, ns: || pow2(2, 12), trials: 30 },
];

/// Names accepted by `experiment run`.
pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

/// A validated experiment ready to run.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub kind: ExperimentKind,
    pub body_spec: BodySpec,
    pub sampler: SamplerKind,
    pub ns: Vec<usize>,
    pub policy: TrialPolicy,
    body: Arc<dyn ConvexBody>,
}

impl std::fmt::Debug for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Experiment")
            .field("kind", &self.kind)
            .field("body", &self.body_spec)
            .field("ns", &self.ns)
            .finish()
    }
}

impl Experiment {
    /// Resolves presets and checks the configuration.
    pub fn new(config: ExperimentConfig) -> Result<Self> {
        let preset = PRESETS.iter().find(|p| p.name == config.experiment);
        let kind = match preset {
            Some(p) => p.kind,
            None => ExperimentKind::parse(&config.experiment).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown experiment '{}'; presets: {}",
                    config.experiment,
                    preset_names().join(", ")
                ))
            })?,
        };
        let body_spec = match (&config.body, preset) {
            (Some(b), _) => b.clone(),
            (None, Some(p)) => serde_json::from_str(p.body).expect("preset bodies parse"),
            (None, None) => return Err(Error::invalid(format!("{} needs a body", kind.name()))),
        };
        let sampler = config
            .sampler
            .or(preset.map(|p| p.sampler))
            .unwrap_or(SamplerKind::Uniform);
        let ns = match (&config.ns, preset) {
            (Some(ns), _) => ns.clone(),
            (None, Some(p)) => (p.ns)(),
            (None, None) => return Err(Error::invalid("config needs Ns")),
        };
        if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("Ns must be non-empty and strictly increasing"));
        }
        let trials = config.trials.or(preset.map(|p| p.trials)).unwrap_or(200);
        let policy = TrialPolicy {
            trials,
            target_rel_stderr: config.target_rel_stderr,
            max_trials: config.max_trials,
            budget_seconds: config.budget_seconds,
        };
        let body = body_spec.build()?;
        let exp = Self { config, kind, body_spec, sampler, ns, policy, body };
        exp.validate()?;
        Ok(exp)
    }

    fn validate(&self) -> Result<()> {
        let b = self.body.as_ref();
        let n = b.dim();
        let dim_ok = |lo: usize, hi: usize| {
            if (lo..=hi).contains(&n) {
                Ok(())
            } else {
                Err(Error::OutOfRange(format!("{} runs in dimension {lo}..={hi}", self.kind.name())))
            }
        };
        match self.kind {
            ExperimentKind::MissedVolume => dim_ok(2, 6)?,
            ExperimentKind::UniformRate | ExperimentKind::VertexCount => dim_ok(2, 3)?,
            ExperimentKind::BoundaryRate => {
                if !matches!(b.view(), BodyRef::Ball(_) | BodyRef::Ellipsoid(_)) {
                    return Err(Error::RollingConditionUnavailable);
                }
                dim_ok(2, 3)?;
                if self.sampler == SamplerKind::Uniform {
                    return Err(Error::invalid("boundary-rate needs a boundary sampler"));
                }
            }
            ExperimentKind::PolytopeUniform | ExperimentKind::PolytopeBoundary => {
                dim_ok(2, 3)?;
                let p = b
                    .polytope()
                    .ok_or_else(|| Error::invalid(format!("{} needs a polytope body", self.kind.name())))?;
                if self.kind == ExperimentKind::PolytopeBoundary && !is_simple(p) {
                    return Err(Error::NotSimple);
                }
            }
            ExperimentKind::CubeCorner => {
                if !matches!(b.view(), BodyRef::Cube(_)) {
                    return Err(Error::invalid("cube-corner needs a cube body"));
                }
                dim_ok(2, 4)?;
            }
            ExperimentKind::InflatedDisk => {
                if self.ns[0] < 4 {
                    return Err(Error::OutOfRange("inflated-disk needs N >= 4".into()));
                }
            }
            ExperimentKind::BestPolygon => {
                if self.ns[0] < 3 {
                    return Err(Error::OutOfRange("best-polygon needs N >= 3".into()));
                }
            }
        }
        let fitted = matches!(
            self.kind,
            ExperimentKind::UniformRate
                | ExperimentKind::BoundaryRate
                | ExperimentKind::VertexCount
                | ExperimentKind::PolytopeUniform
                | ExperimentKind::PolytopeBoundary
        );
        if fitted {
            check_n_range(self.ns.iter().map(|&n| n as f64))?;
        }
        let sampled = !matches!(self.kind, ExperimentKind::BestPolygon | ExperimentKind::CubeCorner);
        if sampled && self.ns[0] < n + 1 {
            return Err(Error::OutOfRange(format!("every N must be at least {}", n + 1)));
        }
        if self.policy.trials < super::montecarlo::MIN_TRIALS {
            return Err(Error::OutOfRange(format!(
                "at least {} trials are needed",
                super::montecarlo::MIN_TRIALS
            )));
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn body(&self) -> &dyn ConvexBody {
        self.body.as_ref()
    }

    /// The estimate for one N.
    pub fn cell(&self, n: usize) -> Result<EstimateRecord> {
        let seed = self.seed();
        let body = self.body();
        match self.kind {
            ExperimentKind::MissedVolume
            | ExperimentKind::UniformRate
            | ExperimentKind::BoundaryRate
            | ExperimentKind::PolytopeBoundary => {
                missed_volume(body, &self.sampler.model(), n, &self.policy, seed)
            }
            ExperimentKind::VertexCount => vertex_count(body, &PointModel::Uniform, n, &self.policy, seed),
            ExperimentKind::PolytopeUniform => {
                let unit = unit_volume_body(body)?;
                missed_volume(&unit, &PointModel::Uniform, n, &self.policy, seed)
            }
            ExperimentKind::CubeCorner => {
                Ok(cube_corner_bound(body.dim(), n, &self.policy, seed)?.miss_probability)
            }
            ExperimentKind::InflatedDisk => estimate(seed, n as u64, &self.policy, |rng| {
                let p = inflated_sphere_polytope(2, n, rng)?;
                let nf = n as f64;
                Ok(disk_polygon_symdiff(&p) * nf * nf / std::f64::consts::PI)
            }),
            ExperimentKind::BestPolygon => Ok(EstimateRecord::exact(best_polygon_disk(n)?)),
        }
    }

    /// Headline numbers from the finished cells. Rate experiments fit the
    /// means; the others report closed-form comparisons.
    pub fn summary(&self, cells: &[RatePoint]) -> Result<Summary> {
        let mut out = Summary::new();
        let body = self.body();
        let n = body.dim() as f64;
        let rate = |expected: f64, log_power: u32, reference: Option<f64>, corr: Correction| {
            rate_report(cells.to_vec(), expected, log_power, reference, corr)
        };
        let report: Option<RateReport> = match self.kind {
            ExperimentKind::UniformRate => Some(rate(
                -2.0 / (n + 1.0),
                0,
                Some(uniform_reference(body)?),
                Correction::Power(2.0 / (n + 1.0)),
            )?),
            ExperimentKind::BoundaryRate => {
                let d = self.sampler.density().expect("validated boundary sampler");
                Some(rate(-2.0 / (n - 1.0), 0, Some(boundary_reference(body, &d)?), Correction::Power(1.0))?)
            }
            ExperimentKind::VertexCount => {
                let q = (n - 1.0) / (n + 1.0);
                Some(rate(q, 0, None, Correction::Power(q))?)
            }
            ExperimentKind::PolytopeUniform => {
                let unit = unit_volume_body(body)?;
                let reference = polytope_uniform_reference(unit.inner())?;
                Some(rate(-1.0, body.dim() as u32 - 1, Some(reference), Correction::Log)?)
            }
            ExperimentKind::PolytopeBoundary => {
                let mut r = rate(-n / (n - 1.0), 0, None, Correction::Power(1.0))?;
                r.log_test = Some(log_term_test(&r.data())?);
                r.lower_bounds = corner_lower_bounds(body, &self.ns);
                Some(r)
            }
            ExperimentKind::MissedVolume => {
                if let Ok(fit) = rate_fit(&data_of(cells), RateModel::PurePower) {
                    out.set("exponent", fit.exponent);
                    out.set("exponent_half_width", fit.exponent_half_width);
                    out.set("constant", fit.constant);
                }
                None
            }
            ExperimentKind::CubeCorner => {
                let d = n;
                for c in cells {
                    let nf = c.n as f64;
                    out.set(&format!("printed_miss_{}", c.n), (1.0 - 1.0 / nf).powf(nf));
                    out.set(&format!("uniform_miss_{}", c.n), (1.0 - 1.0 / (2.0 * d * nf)).powf(nf));
                }
                None
            }
            ExperimentKind::InflatedDisk => {
                let xs: Vec<f64> = cells.iter().map(|c| (c.n as f64).ln()).collect();
                let ys: Vec<f64> = cells.iter().map(|c| c.estimate.value.ln()).collect();
                if xs.len() >= 3 {
                    let (slope, se) = slope_with_stderr(&xs, &ys);
                    out.set("slope", slope);
                    out.set("slope_stderr", se);
                    let up = slope > student_t_quantile(0.95, xs.len() as f64 - 2.0) * se;
                    out.set("upward_trend", if up { 1.0 } else { 0.0 });
                }
                None
            }
            ExperimentKind::BestPolygon => {
                if let Some(last) = cells.last() {
                    let nf = last.n as f64;
                    out.set("scaled_last", last.estimate.value * nf * nf);
                    out.set("limit", 2.0 * std::f64::consts::PI.powi(3) / 3.0);
                }
                None
            }
        };
        if let Some(r) = report {
            out.set("exponent", r.fit.exponent);
            out.set("exponent_half_width", r.fit.exponent_half_width);
            out.set("expected_exponent", r.expected_exponent);
            out.set("constant", r.fit.constant);
            out.set("tail_constant", r.tail_constant);
            out.set("last_scaled", r.last_scaled);
            if let Some(v) = r.reference {
                out.set("reference", v);
            }
            if let Some(v) = r.relative_deviation {
                out.set("relative_deviation", v);
            }
            if let Some(v) = r.extrapolated {
                out.set("extrapolated", v);
            }
            if let Some(t) = &r.log_test {
                out.set("log_term_p_value", t.p_value);
            }
        }
        Ok(out)
    }

    /// Runs every cell in order.
    pub fn run(&self) -> Result<(Vec<RatePoint>, Summary)> {
        let cells = self
            .ns
            .iter()
            .map(|&n| Ok(RatePoint { n, estimate: self.cell(n)? }))
            .collect::<Result<Vec<_>>>()?;
        let summary = self.summary(&cells)?;
        Ok((cells, summary))
    }
}

fn data_of(cells: &[RatePoint]) -> Vec<(f64, f64)> {
    cells.iter().map(|c| (c.n as f64, c.estimate.value)).collect()
}

fn slope_with_stderr(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    (slope, (rss / (k - 2.0) / sxx).sqrt())
}

/// Named scalar results, sorted by name.
pub type Summary = BTreeMap<String, f64>;

trait Set {
    fn set(&mut self, key: &str, value: f64);
}

impl Set for Summary {
    fn set(&mut self, key: &str, value: f64) {
        BTreeMap::insert(self, key.to_string(), value);
    }
}
