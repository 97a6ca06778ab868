//! CSV and JSON result files.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::Strategy;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::RunResult;
use crate::sweep::{CellStats, CellSummary, MechanismKind, SweepGrid};

pub const GRID_HEADER: [&str; 8] =
    ["mechanism", "theta", "threshold", "mean_coop", "std_coop", "mean_cost", "std_cost", "samples"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub mechanism: MechanismKind,
    pub theta: f64,
    pub threshold: f64,
    pub mean_coop: f64,
    pub std_coop: f64,
    pub mean_cost: f64,
    pub std_cost: f64,
    pub samples: usize,
}

impl GridRow {
    fn from_cell(mechanism: MechanismKind, c: &CellSummary) -> Self {
        GridRow {
            mechanism,
            theta: c.theta,
            threshold: c.threshold,
            mean_coop: c.stats.mean_coop,
            std_coop: c.stats.std_coop,
            mean_cost: c.stats.mean_total_cost,
            std_cost: c.stats.std_total_cost,
            samples: c.stats.samples,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::format(line, format!("{other:?}")),
    }
}

/// One row per cell, in grid order, `\n` line endings.
pub fn write_grid_csv<W: Write>(grid: &SweepGrid, out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for cell in &grid.cells {
        writer.serialize(GridRow::from_cell(grid.mechanism, cell)).map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_grid_csv<R: Read>(input: R) -> Result<Vec<GridRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers().map_err(csv_error)?;
    if header.iter().ne(GRID_HEADER.iter().copied()) {
        return Err(Error::format(1, format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    reader.deserialize().map(|r| r.map_err(csv_error)).collect()
}

/// Rebuilds the aggregate part of a grid (per-run samples are not stored in
/// the CSV).
pub fn grid_from_rows(rows: &[GridRow], graph_count: usize, realisations_per_graph: usize) -> Result<SweepGrid> {
    let mechanism = rows.first().ok_or_else(|| Error::format(2, "grid has no rows"))?.mechanism;
    if rows.iter().any(|r| r.mechanism != mechanism) {
        return Err(Error::format(2, "grid mixes mechanisms"));
    }
    let cells = rows
        .iter()
        .map(|r| CellSummary {
            theta: r.theta,
            threshold: r.threshold,
            stats: CellStats {
                mean_coop: r.mean_coop,
                std_coop: r.std_coop,
                mean_total_cost: r.mean_cost,
                std_total_cost: r.std_cost,
                samples: r.samples,
            },
            per_graph_mean_coop: Vec::new(),
            per_graph_mean_cost: Vec::new(),
            run_tail_coop: Vec::new(),
            run_total_cost: Vec::new(),
        })
        .collect();
    Ok(SweepGrid { mechanism, graph_count, realisations_per_graph, cells })
}

/// Columns: generation, coop_fraction, generation_cost, cumulative_cost.
/// Row `t` describes state `t`; its cost is what was invested on that state,
/// so the final row always has zero generation cost.
pub fn write_trajectory_csv<S: Scalar, W: Write>(result: &RunResult<S>, theta: S, mut out: W) -> Result<()> {
    writeln!(out, "generation,coop_fraction,generation_cost,cumulative_cost")?;
    let mut invested = 0usize;
    for (t, frac) in result.coop_trajectory.iter().enumerate() {
        let now = result.per_generation_investments.get(t).copied().unwrap_or(0);
        invested += now;
        let cost = |k: usize| if k == 0 { 0.0 } else { (S::from_count(k) * theta).to_f64_lossy() };
        writeln!(out, "{t},{frac},{},{}", cost(now), cost(invested))?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Absorption {
    pub generation: usize,
    pub strategy: Strategy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub nodes: usize,
    pub generations: usize,
    pub tail_window: usize,
    pub tail_coop: f64,
    pub final_coop: f64,
    pub total_cost: f64,
    /// Total cost printed in the run's scalar type, e.g. `10` or `27/4`.
    pub total_cost_exact: String,
    pub investments: usize,
    pub absorbed_at: Option<Absorption>,
}

impl RunSummary {
    pub fn new<S: Scalar>(result: &RunResult<S>, nodes: usize, tail_window: usize) -> Self {
        RunSummary {
            nodes,
            generations: result.per_generation_cost.len(),
            tail_window,
            tail_coop: result.tail_coop,
            final_coop: *result.coop_trajectory.last().expect("trajectory includes the initial state"),
            total_cost: result.total_cost.to_f64_lossy(),
            total_cost_exact: result.total_cost.to_string(),
            investments: result.investments,
            absorbed_at: result.absorbed_at.map(|(generation, strategy)| Absorption { generation, strategy }),
        }
    }
}

/// Provenance written next to every sweep CSV. `config` alone reproduces
/// the CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub tool: String,
    pub version: String,
    pub csv: PathBuf,
    pub config: crate::cli::config::ExperimentConfig,
    pub master_seed: u64,
    pub seed_rule: String,
    pub graph_seeds: Vec<u64>,
    pub cells: usize,
    pub samples_per_cell: usize,
    pub workers: usize,
    pub wall_time_seconds: f64,
}

pub fn manifest_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    csv.with_file_name(name)
}

/// Writes `contents` to a sibling temp file and renames it into place, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp_name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    tmp_name.push(format!(".tmp-{}", std::process::id()));
    let tmp = dir.join(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}
