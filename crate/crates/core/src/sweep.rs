//! Parameter sweeps over (theta × threshold) grids.
//!
//! Every cell is evaluated on the same graphs and the same initial
//! strategy assignments (see [`crate::rng`] for the seed chain), so cells
//! differ only in mechanism parameters. Runs execute in parallel; results
//! are reduced in (cell, graph, realisation) order, which makes the output
//! independent of the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{Imitation, PayoffParams, PopulationState};
use crate::error::{Error, Result};
use crate::mechanisms::{MechanismSpec, NeighbourThreshold};
use crate::netgen::{generate, GenParams, Graph};
use crate::rng::{graph_seed, strategy_seed};
use crate::scalar::Scalar;
use crate::sim::{init_strategies, run_from, RunResult, SimConfig, DEFAULT_GENERATIONS, DEFAULT_TAIL_WINDOW};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MechanismKind {
    None,
    Pop,
    Ni,
    Lc,
    NiAndLc,
}

impl MechanismKind {
    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::None => "none",
            MechanismKind::Pop => "pop",
            MechanismKind::Ni => "ni",
            MechanismKind::Lc => "lc",
            MechanismKind::NiAndLc => "ni-and-lc",
        }
    }
}

impl std::str::FromStr for MechanismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "none" => Ok(MechanismKind::None),
            "pop" => Ok(MechanismKind::Pop),
            "ni" => Ok(MechanismKind::Ni),
            "lc" => Ok(MechanismKind::Lc),
            "ni-and-lc" | "combo" => Ok(MechanismKind::NiAndLc),
            other => {
                Err(Error::param(format!("unknown mechanism `{other}` (expected none, pop, ni, lc or ni-and-lc)")))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec<S> {
    /// Network model and size. The seed field is ignored; graph seeds are
    /// derived from `master_seed`.
    pub gen_params: GenParams,
    pub graph_count: usize,
    pub realisations_per_graph: usize,
    pub mechanism: MechanismKind,
    pub theta_grid: Vec<S>,
    /// Per mechanism: POP percent, NI influence, LC / NI∧LC local threshold.
    /// Ignored by `None`.
    pub threshold_grid: Vec<S>,
    /// Fixed influence threshold for NI∧LC sweeps.
    pub combo_influence: S,
    pub local_mode: NeighbourThreshold,
    pub payoff: PayoffParams<S>,
    pub generations: usize,
    pub tail_window: usize,
    pub imitation: Imitation,
    pub master_seed: u64,
}

impl<S: Scalar> SweepSpec<S> {
    pub fn new(gen_params: GenParams, mechanism: MechanismKind, payoff: PayoffParams<S>, master_seed: u64) -> Self {
        SweepSpec {
            gen_params,
            graph_count: 10,
            realisations_per_graph: 30,
            mechanism,
            theta_grid: vec![S::one()],
            threshold_grid: vec![S::zero()],
            combo_influence: S::from_config(0.05).expect("0.05 representable"),
            local_mode: NeighbourThreshold::Fraction,
            payoff,
            generations: DEFAULT_GENERATIONS,
            tail_window: DEFAULT_TAIL_WINDOW,
            imitation: Imitation::default(),
            master_seed,
        }
    }

    /// Mechanism used for one cell. A zero theta means no interference.
    pub fn cell_mechanism(&self, theta: S, threshold: S) -> MechanismSpec<S> {
        if theta == S::zero() {
            return MechanismSpec::none();
        }
        let mode = self.local_mode;
        let mut spec = match self.mechanism {
            MechanismKind::None => MechanismSpec::none(),
            MechanismKind::Pop => MechanismSpec::pop(threshold, theta),
            MechanismKind::Ni => MechanismSpec::node_influence(threshold, theta),
            MechanismKind::Lc => MechanismSpec::local_cooperation(threshold, theta),
            MechanismKind::NiAndLc => MechanismSpec::influence_and_local(self.combo_influence, threshold, theta),
        };
        match &mut spec.mechanism {
            crate::Mechanism::LocalCooperation { mode: m, .. }
            | crate::Mechanism::InfluenceAndLocal { mode: m, .. } => *m = mode,
            _ => {}
        }
        spec
    }

    /// `(theta, threshold)` pairs, theta-major.
    pub fn cells(&self) -> Vec<(S, S)> {
        self.theta_grid.iter().flat_map(|&t| self.threshold_grid.iter().map(move |&h| (t, h))).collect()
    }

    pub fn sim_config(&self, theta: S, threshold: S, strategy_seed: u64) -> SimConfig<S> {
        SimConfig {
            payoff: self.payoff,
            mechanism: self.cell_mechanism(theta, threshold),
            generations: self.generations,
            tail_window: self.tail_window,
            strategy_seed,
            imitation: self.imitation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.graph_count == 0 || self.realisations_per_graph == 0 {
            return Err(Error::param("graph_count and realisations_per_graph must be at least 1"));
        }
        if self.theta_grid.is_empty() || self.threshold_grid.is_empty() {
            return Err(Error::param("theta and threshold grids must be non-empty"));
        }
        self.gen_params.validate()?;
        for (theta, threshold) in self.cells() {
            if theta < S::zero() {
                return Err(Error::param(format!(
                    "cell (theta = {theta}, threshold = {threshold}): theta must be >= 0"
                )));
            }
            self.sim_config(theta, threshold, 0)
                .validate()
                .map_err(|e| Error::param(format!("cell (theta = {theta}, threshold = {threshold}): {e}")))?;
        }
        Ok(())
    }

    pub fn graph_params(&self, graph_index: usize) -> GenParams {
        self.gen_params.with_seed(graph_seed(self.master_seed, graph_index))
    }

    pub fn strategy_seed(&self, graph_index: usize, realisation: usize) -> u64 {
        strategy_seed(self.master_seed, graph_index, realisation)
    }

    pub fn samples_per_cell(&self) -> usize {
        self.graph_count * self.realisations_per_graph
    }
}

/// Mean and sample standard deviation. Values are summed in slice order as
/// offsets from the first element, so a constant input yields that constant
/// and a deviation of exactly zero.
pub fn mean_std(values: &[f64]) -> Result<(f64, f64)> {
    let (&first, _) = values.split_first().ok_or_else(|| Error::contract("cannot aggregate an empty sample"))?;
    let n = values.len() as f64;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for &v in values {
        let d = v - first;
        sum += d;
        sum_sq += d * d;
    }
    let mean = first + sum / n;
    let std = if values.len() < 2 { 0.0 } else { ((sum_sq - sum * sum / n) / (n - 1.0)).max(0.0).sqrt() };
    Ok((mean, std))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub mean_coop: f64,
    pub std_coop: f64,
    pub mean_total_cost: f64,
    pub std_total_cost: f64,
    pub samples: usize,
}

/// Aggregates runs in the given order.
pub fn aggregate<S: Scalar>(results: &[RunResult<S>]) -> Result<CellStats> {
    let coop: Vec<f64> = results.iter().map(|r| r.tail_coop).collect();
    let cost: Vec<f64> = results.iter().map(|r| r.total_cost.to_f64_lossy()).collect();
    stats_from_samples(&coop, &cost)
}

fn stats_from_samples(coop: &[f64], cost: &[f64]) -> Result<CellStats> {
    let (mean_coop, std_coop) = mean_std(coop)?;
    let (mean_total_cost, std_total_cost) = mean_std(cost)?;
    Ok(CellStats { mean_coop, std_coop, mean_total_cost, std_total_cost, samples: coop.len() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellSummary {
    pub theta: f64,
    pub threshold: f64,
    pub stats: CellStats,
    pub per_graph_mean_coop: Vec<f64>,
    pub per_graph_mean_cost: Vec<f64>,
    /// Tail cooperation of every run, graph-major.
    pub run_tail_coop: Vec<f64>,
    pub run_total_cost: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub mechanism: MechanismKind,
    pub graph_count: usize,
    pub realisations_per_graph: usize,
    /// Theta-major, matching [`SweepSpec::cells`].
    pub cells: Vec<CellSummary>,
}

impl SweepGrid {
    pub fn cell(&self, theta: f64, threshold: f64) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.theta == theta && c.threshold == threshold)
    }
}

/// Identifies one run inside a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunIndex {
    pub cell: usize,
    pub graph: usize,
    pub realisation: usize,
}

pub fn run_sweep<S: Scalar>(spec: &SweepSpec<S>, workers: Option<usize>) -> Result<SweepGrid> {
    run_sweep_inspect(spec, workers, |_, _, _| {})
}

/// Like [`run_sweep`], calling `inspect` on every completed run (from worker
/// threads, in no particular order).
pub fn run_sweep_inspect<S, F>(spec: &SweepSpec<S>, workers: Option<usize>, inspect: F) -> Result<SweepGrid>
where
    S: Scalar,
    F: Fn(RunIndex, &SimConfig<S>, &RunResult<S>) + Sync,
{
    spec.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder.build().map_err(|e| Error::param(format!("cannot start worker pool: {e}")))?;
    pool.install(|| execute(spec, &inspect))
}

fn execute<S, F>(spec: &SweepSpec<S>, inspect: &F) -> Result<SweepGrid>
where
    S: Scalar,
    F: Fn(RunIndex, &SimConfig<S>, &RunResult<S>) + Sync,
{
    let graphs: Vec<Graph> =
        (0..spec.graph_count).into_par_iter().map(|g| generate(&spec.graph_params(g))).collect::<Result<_>>()?;

    let reps = spec.realisations_per_graph;
    let initial: Vec<PopulationState> = (0..spec.graph_count * reps)
        .into_par_iter()
        .map(|k| {
            let (g, r) = (k / reps, k % reps);
            init_strategies(graphs[g].node_count(), spec.strategy_seed(g, r))
        })
        .collect();

    let cells = spec.cells();
    let per_cell = spec.samples_per_cell();
    let outcomes: Vec<(f64, f64)> = (0..cells.len() * per_cell)
        .into_par_iter()
        .map(|job| {
            let (cell, k) = (job / per_cell, job % per_cell);
            let index = RunIndex { cell, graph: k / reps, realisation: k % reps };
            let (theta, threshold) = cells[cell];
            let cfg = spec.sim_config(theta, threshold, spec.strategy_seed(index.graph, index.realisation));
            let result = run_from(&graphs[index.graph], &cfg, initial[k].clone())
                .map_err(|e| Error::param(format!("cell (theta = {theta}, threshold = {threshold}): {e}")))?;
            inspect(index, &cfg, &result);
            Ok((result.tail_coop, result.total_cost.to_f64_lossy()))
        })
        .collect::<Result<_>>()?;

    let summaries = cells
        .iter()
        .zip(outcomes.chunks(per_cell))
        .map(|(&(theta, threshold), runs)| {
            let coop: Vec<f64> = runs.iter().map(|r| r.0).collect();
            let cost: Vec<f64> = runs.iter().map(|r| r.1).collect();
            let per_graph =
                |v: &[f64]| -> Result<Vec<f64>> { v.chunks(reps).map(|c| mean_std(c).map(|s| s.0)).collect() };
            Ok(CellSummary {
                theta: theta.to_f64_lossy(),
                threshold: threshold.to_f64_lossy(),
                stats: stats_from_samples(&coop, &cost)?,
                per_graph_mean_coop: per_graph(&coop)?,
                per_graph_mean_cost: per_graph(&cost)?,
                run_tail_coop: coop,
                run_total_cost: cost,
            })
        })
        .collect::<Result<_>>()?;

    Ok(SweepGrid {
        mechanism: spec.mechanism,
        graph_count: spec.graph_count,
        realisations_per_graph: reps,
        cells: summaries,
    })
}
