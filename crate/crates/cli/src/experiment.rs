//! `experiment run`: cells in N order with a per-N checkpoint.
//!
//! With `--out`, every finished cell is appended to `<out>.checkpoint.json`
//! together with the hash of the resolved config. A rerun with the same
//! config picks up the stored cells and computes only the rest; the
//! checkpoint is removed once the output is written. Cells depend only on
//! (seed, N, trial), so a resumed run writes the same file as an
//! uninterrupted one.

use std::fs;
use std::path::Path;
use std::time::Instant;

use polyapprox::experiments::{Experiment, ExperimentConfig, RatePoint};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::output::{json_text, sha256_hex, sibling, write_file, Cell, Format, Sink, Table};
use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    config_hash: String,
    cells: Vec<RatePoint>,
}

pub struct RunArgs<'a> {
    pub config: ExperimentConfig,
    pub format: Format,
    pub out: Option<&'a Path>,
}

pub fn run(args: RunArgs<'_>) -> Result<(), CliError> {
    let RunArgs { config, format, out } = args;
    let invocation = serde_json::to_value(&config).expect("configs serialize");
    let hash = sha256_hex(invocation.to_string().as_bytes());
    let seed = config.seed;
    let exp = Experiment::new(config)?;
    let sink = Sink::new(out.map(Path::to_path_buf));
    let checkpoint = out.map(|p| sibling(p, "checkpoint.json"));

    let mut cells = checkpoint
        .as_deref()
        .and_then(|p| load_checkpoint(p, &hash))
        .unwrap_or_default();
    cells.retain(|c| exp.ns.contains(&c.n));
    if !cells.is_empty() {
        eprintln!("resuming from {} finished cells", cells.len());
    }
    for &n in &exp.ns {
        if cells.iter().any(|c| c.n == n) {
            continue;
        }
        let start = Instant::now();
        let estimate = exp.cell(n)?;
        eprintln!(
            "N={n} mean={} stderr={} samples={} ({:.1}s)",
            crate::output::float(estimate.value),
            crate::output::float(estimate.stderr),
            estimate.samples,
            start.elapsed().as_secs_f64()
        );
        cells.push(RatePoint { n, estimate });
        cells.sort_by_key(|c| c.n);
        if let Some(p) = &checkpoint {
            let cp = Checkpoint { config_hash: hash.clone(), cells: cells.clone() };
            write_file(p, &json_text(&cp))?;
        }
    }

    let summary = exp.summary(&cells)?;
    let table = cells_table(&exp, &cells, &summary);
    sink.finish(&table.render(format), &invocation, Some(seed))?;
    if let Some(p) = checkpoint {
        let _ = fs::remove_file(p);
    }
    Ok(())
}

fn load_checkpoint(path: &Path, hash: &str) -> Option<Vec<RatePoint>> {
    let text = fs::read_to_string(path).ok()?;
    let cp: Checkpoint = serde_json::from_str(&text).ok()?;
    if cp.config_hash == hash {
        Some(cp.cells)
    } else {
        eprintln!("ignoring checkpoint from a different config");
        None
    }
}

fn cells_table(exp: &Experiment, cells: &[RatePoint], summary: &polyapprox::experiments::Summary) -> Table {
    let mut t = Table::new(["n", "mean", "stderr", "samples"]);
    for c in cells {
        t.rows.push(vec![
            Cell::Int(c.n as u64),
            Cell::Float(c.estimate.value),
            Cell::Float(c.estimate.stderr),
            Cell::Int(c.estimate.samples as u64),
        ]);
    }
    t.note("experiment", Value::from(exp.config.experiment.clone()));
    t.note("kind", Value::from(exp.kind.name()));
    t.note("body", Value::from(exp.body().name()));
    t.note("seed", Value::from(exp.seed()));
    for (k, v) in summary {
        t.note_f64(k, *v);
    }
    t
}
