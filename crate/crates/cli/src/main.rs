//! `polyapprox` command-line tool.
//!
//! Exit status: 0 on success, 2 for configuration and input errors, 3 for
//! numerical failures.

mod experiment;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polyapprox::bodies::BodySpec;
use polyapprox::combinatorics::FlagReport;
use polyapprox::experiments::{constant, preset_names, vertex_removal_scan, ExperimentConfig};
use polyapprox::floating::{
    default_grid, delta_sequence, floating_body_algorithm, polytope_floating_rate, smooth_floating_rate,
};
use polyapprox::geometry::{convex_hull, PolytopeFile, VPolytope};
use polyapprox::sampling::sphere_covering;
use serde_json::{json, Value};

use output::{json_text, Cell, Format, Sink, Table};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl From<polyapprox::Error> for CliError {
    fn from(e: polyapprox::Error) -> Self {
        if e.is_config_error() {
            Self::Config(e.to_string())
        } else {
            Self::Numerical(e.to_string())
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "polyapprox", version, about = "Polytope approximation of convex bodies")]
struct Cli {
    /// Base seed for all random streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "POLYAPPROX_THREADS")]
    threads: Option<usize>,
    /// Output file; a manifest is written beside it. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Wall-clock limit for trial escalation.
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convex hull of a point set.
    Hull {
        /// JSON array of points.
        points: PathBuf,
    },
    /// Volume of a polytope file.
    Volume { polytope: PathBuf },
    /// Flag counts by face lattice and both recursions.
    Flags { polytope: PathBuf },
    /// Polar polytope with respect to the origin.
    Polar { polytope: PathBuf },
    /// Volume loss of floating bodies along a halving δ-sequence.
    Floatbody {
        /// Body as inline JSON or a path to a JSON file.
        #[arg(long)]
        body: String,
        /// Smallest δ as a fraction of the volume.
        #[arg(long, default_value_t = 1e-5)]
        smallest: f64,
        /// Number of cut directions for polytopes (0 for the default).
        #[arg(long, default_value_t = 0)]
        grid: usize,
    },
    /// Vertices chosen by the floating body algorithm.
    Fba {
        /// Body as inline JSON or a path to a JSON file.
        #[arg(long)]
        body: String,
        /// Cut volume δ.
        #[arg(long)]
        delta: f64,
        /// Number of search directions (0 for the default).
        #[arg(long, default_value_t = 0)]
        grid: usize,
    },
    /// Monte Carlo experiments.
    Experiment {
        #[command(subcommand)]
        action: ExperimentAction,
    },
    /// Closed-form dimensional constants.
    Constants {
        /// One of del-lower, del-limit, quotient, boroczky, random-uniform,
        /// random-boundary, barany-buchta, floating-smooth, floating-polytope.
        name: String,
        #[arg(long)]
        dim: usize,
    },
    /// Points on the sphere whose caps of angle `phi` cover it.
    Covering {
        /// Ambient dimension n (the sphere is n-1 dimensional).
        #[arg(long)]
        dim: usize,
        /// Cap angle in radians.
        #[arg(long)]
        phi: f64,
    },
    /// Relative volume lost by deleting each point of a set.
    VertexRemoval {
        /// JSON array of points.
        points: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentAction {
    /// Run a preset or an experiment config.
    Run {
        /// Preset or experiment kind.
        name: Option<String>,
        /// JSON experiment config; fields override the named preset.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Trials per N (at least 30).
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated N values.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<usize>>,
    },
    /// List the presets.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let sink = Sink::new(cli.out.clone());
    let fmt = |default: Format| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Hull { points } => {
            let pts = read_points(points)?;
            let p = convex_hull(&pts)?;
            let text = match fmt(Format::Json) {
                Format::Json => PolytopeFile::from_vpolytope(&p).to_json() + "\n",
                Format::Csv => polytope_table(&p).to_csv(),
            };
            sink.finish(&text, &json!({"command": "hull", "input": digest(points)?}), None)
        }
        Command::Volume { polytope } => {
            let p = read_polytope(polytope)?;
            let mut t = Table::new(["volume"]);
            t.rows.push(vec![Cell::Float(p.volume())]);
            sink.finish(&t.render(fmt(Format::Csv)), &json!({"command": "volume", "input": digest(polytope)?}), None)
        }
        Command::Flags { polytope } => {
            let p = read_polytope(polytope)?;
            let r = FlagReport::compute(&p)?;
            let text = match fmt(Format::Json) {
                Format::Json => {
                    json!({"flag_lattice": r.flag_lattice, "flag_phi": r.flag_phi, "flag_psi": r.flag_psi}).to_string()
                        + "\n"
                }
                Format::Csv => format!("flag_lattice,flag_phi,flag_psi\n{},{},{}\n", r.flag_lattice, r.flag_phi, r.flag_psi),
            };
            sink.finish(&text, &json!({"command": "flags", "input": digest(polytope)?}), None)
        }
        Command::Polar { polytope } => {
            let p = read_polytope(polytope)?.polar()?;
            let text = match fmt(Format::Json) {
                Format::Json => PolytopeFile::from_vpolytope(&p).to_json() + "\n",
                Format::Csv => polytope_table(&p).to_csv(),
            };
            sink.finish(&text, &json!({"command": "polar", "input": digest(polytope)?}), None)
        }
        Command::Floatbody { body, smallest, grid } => {
            let spec = read_body(body)?;
            let b = spec.build()?;
            let table = match b.polytope() {
                Some(p) => {
                    let grid = if *grid == 0 { default_grid(p.dim()) } else { *grid };
                    polytope_floating_rate(p, &delta_sequence(1.0, *smallest), grid)?
                }
                None => smooth_floating_rate(b.as_ref(), &delta_sequence(b.volume(), *smallest))?,
            };
            let mut t = Table::new(["delta", "loss", "ratio"]);
            for r in &table.rows {
                t.rows.push(vec![Cell::Float(r.delta), Cell::Float(r.loss), Cell::Float(r.ratio)]);
            }
            t.note_f64("limit", table.limit);
            if let Some(x) = table.extrapolated {
                t.note_f64("extrapolated", x);
            }
            let inv = json!({"command": "floatbody", "body": spec, "smallest": smallest, "grid": grid});
            sink.finish(&t.render(fmt(Format::Csv)), &inv, None)
        }
        Command::Fba { body, delta, grid } => {
            let spec = read_body(body)?;
            let b = spec.build()?;
            let run = floating_body_algorithm(b.as_ref(), *delta, *grid)?;
            let mut t = Table::points(b.dim(), &run.points);
            t.note("n_points", run.n());
            t.note("terminated", run.terminated);
            t.note_f64("final_gap", run.final_gap);
            let loss = run.floating.volume_loss();
            t.note_f64("cardinality_bound", polyapprox::floating::fba_bound(b.dim(), loss, *delta));
            if run.n() > b.dim() {
                t.note_f64("hull_volume", run.polytope()?.volume());
            }
            let inv = json!({"command": "fba", "body": spec, "delta": delta, "grid": grid});
            sink.finish(&t.render(fmt(Format::Csv)), &inv, None)
        }
        Command::Experiment { action } => match action {
            ExperimentAction::List => {
                let text: String = preset_names().iter().map(|n| format!("{n}\n")).collect();
                sink.finish(&text, &json!({"command": "experiment list"}), None)
            }
            ExperimentAction::Run { name, config, trials, ns } => {
                let mut cfg = match (name, config) {
                    (_, Some(path)) => {
                        let mut c = ExperimentConfig::parse(&read_text(path)?)?;
                        if let Some(n) = name {
                            c.experiment = n.clone();
                        }
                        c
                    }
                    (Some(n), None) => ExperimentConfig::named(n),
                    (None, None) => {
                        return Err(CliError::Config(format!(
                            "experiment run needs a name or --config; presets: {}",
                            preset_names().join(", ")
                        )))
                    }
                };
                if let Some(s) = cli.seed {
                    cfg.seed = s;
                }
                if cli.budget_seconds.is_some() {
                    cfg.budget_seconds = cli.budget_seconds;
                }
                if trials.is_some() {
                    cfg.trials = *trials;
                }
                if ns.is_some() {
                    cfg.ns = ns.clone();
                }
                experiment::run(experiment::RunArgs {
                    config: cfg,
                    format: fmt(Format::Csv),
                    out: cli.out.as_deref(),
                })
            }
        },
        Command::Constants { name, dim } => {
            let v = constant(name, *dim)?;
            let text = match cli.format {
                None => format!("{v}\n"),
                Some(Format::Csv) => format!("name,dim,value\n{name},{dim},{}\n", output::float(v)),
                Some(Format::Json) => json_text(&json!({"name": name, "dim": dim, "value": v})),
            };
            sink.finish(&text, &json!({"command": "constants", "name": name, "dim": dim}), None)
        }
        Command::Covering { dim, phi } => {
            let c = sphere_covering(*dim, *phi)?;
            let mut t = Table::points(*dim, &c.points);
            t.note("count", c.points.len());
            t.note("refinements", c.refinements);
            t.note_f64("hull_volume", c.polytope.volume());
            let inv = json!({"command": "covering", "dim": dim, "phi": phi});
            sink.finish(&t.render(fmt(Format::Csv)), &inv, None)
        }
        Command::VertexRemoval { points } => {
            let pts = read_points(points)?;
            let scan = vertex_removal_scan(&pts)?;
            let mut t = Table::new(["index", "loss", "vertex"]);
            for (i, &l) in scan.losses.iter().enumerate() {
                let v = scan.vertices.contains(&i) as u64;
                t.rows.push(vec![Cell::Int(i as u64), Cell::Float(l), Cell::Int(v)]);
            }
            t.note("vertices", scan.vertices.len());
            t.note_f64("volume", scan.volume);
            t.note_f64("epsilon", scan.epsilon);
            t.note_f64("quantile", scan.quantile);
            t.note_f64("c0", scan.c0);
            t.note("count_within_bound", scan.count_at_most(scan.bound(scan.c0)));
            sink.finish(&t.render(fmt(Format::Csv)), &json!({"command": "vertex-removal", "input": digest(points)?}), None)
        }
    }
}

fn polytope_table(p: &VPolytope) -> Table {
    let mut t = Table::points(p.dim(), p.vertices());
    t.note("vertices", p.vertices().len());
    t.note("facets", p.facets().len());
    t.note_f64("volume", p.volume());
    t
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

/// Hash of an input file, recorded in the manifest.
fn digest(path: &Path) -> Result<Value, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(json!({"path": path.display().to_string(), "sha256": output::sha256_hex(&bytes)}))
}

fn read_polytope(path: &Path) -> Result<VPolytope, CliError> {
    Ok(PolytopeFile::parse(&read_text(path)?)?.to_vpolytope()?)
}

/// A polytope file with vertices, or a bare array of points.
fn read_points(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = read_text(path)?;
    if let Ok(points) = serde_json::from_str::<Vec<Vec<f64>>>(&text) {
        return Ok(points);
    }
    match PolytopeFile::parse(&text)? {
        PolytopeFile::Vertices { vertices, .. } => Ok(vertices),
        PolytopeFile::Halfspaces { .. } => Err(CliError::Config("expected points, found halfspaces".into())),
    }
}

/// Inline JSON when the argument starts with '{', a file path otherwise.
fn read_body(arg: &str) -> Result<BodySpec, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read_text(Path::new(arg))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("body: {e}")))
}
