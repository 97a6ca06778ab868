//! Experiment configuration shared by config files and command-line flags.
//!
//! A config file is a flat TOML table whose keys are the long flag names with
//! `-` replaced by `_`. Flags override file values; unknown keys are an
//! error.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::engine::{PayoffParams, PopulationState, Strategy};
use crate::error::{Error, Result};
use crate::mechanisms::{MechanismSpec, NeighbourThreshold};
use crate::netgen::{GenParams, NetworkModel};
use crate::scalar::Scalar;
use crate::sim::{init_strategies, SimConfig, DEFAULT_GENERATIONS, DEFAULT_TAIL_WINDOW};
use crate::sweep::{MechanismKind, SweepSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    #[default]
    F64,
    F32,
    /// 64-bit rationals; payoffs and costs are exact.
    Exact,
}

impl FromStr for ScalarKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f64" => Ok(ScalarKind::F64),
            "f32" => Ok(ScalarKind::F32),
            "exact" | "rational" => Ok(ScalarKind::Exact),
            other => Err(Error::param(format!("unknown scalar `{other}` (expected f64, f32 or exact)"))),
        }
    }
}

impl FromStr for NeighbourThreshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fraction" => Ok(NeighbourThreshold::Fraction),
            "count" => Ok(NeighbourThreshold::Count),
            other => Err(Error::param(format!("unknown local threshold mode `{other}` (expected fraction or count)"))),
        }
    }
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Network model: ba or dms.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<NetworkModel>,
    /// Number of nodes.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Edges per new node (BA; DMS always uses 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// BA seed clique size [default: m + 1].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m0: Option<usize>,
    /// Seed for a generated network.
    #[arg(long, visible_alias = "seed")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_seed: Option<u64>,
    /// Edge-list file to simulate on instead of generating one (run).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<PathBuf>,

    /// Temptation payoff b, 1 < b <= 2 [default: 1.8].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temptation: Option<f64>,
    /// Whether every agent also plays one game against itself [default: false].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub self_interaction: Option<bool>,
    /// Investment mechanism: none, pop, ni, lc or ni-and-lc [default: none].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mechanism: Option<MechanismKind>,
    /// Per-cooperator investment and cost (run).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// POP: invest while cooperators make up at most this percentage (run).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pop_threshold_percent: Option<f64>,
    /// NI: minimum degree / max-degree ratio in [0, 1] (run; also the fixed
    /// influence threshold of ni-and-lc sweeps) [default for sweeps: 0.05].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub influence_threshold: Option<f64>,
    /// LC: invest while the cooperating share of the neighbourhood is below this (run).
    #[arg(long, conflicts_with = "local_threshold_count")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_threshold_fraction: Option<f64>,
    /// LC: invest while the number of cooperating neighbours is below this (run).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_threshold_count: Option<f64>,
    /// Units of the local threshold grid in sweeps: fraction or count [default: fraction].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_threshold_mode: Option<NeighbourThreshold>,

    /// Generations per run [default: 75].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    /// States averaged into the tail cooperation [default: 25].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_window: Option<usize>,
    /// Seed of the initial strategy assignment (run) [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy_seed: Option<u64>,
    /// Initial population (run): random, all-c, all-d, or a C/D string.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,

    /// Networks per grid cell (sweep) [default: 10].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_count: Option<usize>,
    /// Initial assignments per network (sweep) [default: 30].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub realisations_per_graph: Option<usize>,
    /// Comma-separated theta values (sweep); 0 means no interference.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_grid: Option<Vec<f64>>,
    /// Comma-separated thresholds (sweep): POP percent, NI ratio, or LC threshold.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_grid: Option<Vec<f64>>,
    /// Root seed for graph and strategy seeds (sweep) [default: 0].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,

    /// Numeric type for payoffs and costs: f64, f32 or exact [default: f64].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar: Option<ScalarKind>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        ExperimentConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(1, |span| text[..span.start].matches('\n').count() + 1);
            Error::format(line, e.message().trim_end())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Values in `self` win over `base`.
    pub fn over(self, base: ExperimentConfig) -> ExperimentConfig {
        let top = self;
        overlay!(base, top;
            model, n, m, m0, graph_seed, graph_file, temptation, self_interaction, mechanism, theta,
            pop_threshold_percent, influence_threshold, local_threshold_fraction, local_threshold_count,
            local_threshold_mode, generations, tail_window, strategy_seed, initial, graph_count,
            realisations_per_graph, theta_grid, threshold_grid, master_seed, scalar,
        )
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        self.scalar.unwrap_or_default()
    }

    fn required<T: Copy>(value: Option<T>, key: &str) -> Result<T> {
        value.ok_or_else(|| Error::param(format!("missing required setting `{key}`")))
    }

    /// Generation parameters; `seed` is `graph_seed` or 0.
    pub fn gen_params(&self) -> Result<GenParams> {
        let model = Self::required(self.model, "model")?;
        let n = Self::required(self.n, "n")?;
        let params = match model {
            NetworkModel::Ba => {
                let m = self.m.unwrap_or(2);
                GenParams { model, n, m, m0: self.m0.unwrap_or(m + 1), seed: self.graph_seed.unwrap_or(0) }
            }
            NetworkModel::Dms => {
                if self.m0.is_some() {
                    return Err(Error::param("m0 applies only to the ba model"));
                }
                GenParams { m: self.m.unwrap_or(2), ..GenParams::dms(n, self.graph_seed.unwrap_or(0)) }
            }
        };
        params.validate()?;
        Ok(params)
    }

    fn scalar<S: Scalar>(value: f64, key: &str) -> Result<S> {
        S::from_config(value).ok_or_else(|| Error::param(format!("`{key}` = {value} is not representable")))
    }

    pub fn payoff<S: Scalar>(&self) -> Result<PayoffParams<S>> {
        let b = Self::scalar(self.temptation.unwrap_or(1.8), "temptation")?;
        Ok(PayoffParams::new(b)?.with_self_interaction(self.self_interaction.unwrap_or(false)))
    }

    fn local_threshold(&self) -> Result<(f64, NeighbourThreshold)> {
        match (self.local_threshold_fraction, self.local_threshold_count) {
            (Some(x), None) => Ok((x, NeighbourThreshold::Fraction)),
            (None, Some(x)) => Ok((x, NeighbourThreshold::Count)),
            (Some(_), Some(_)) => {
                Err(Error::param("set only one of `local_threshold_fraction` and `local_threshold_count`"))
            }
            (None, None) => {
                Err(Error::param("missing required setting `local_threshold_fraction` (or `local_threshold_count`)"))
            }
        }
    }

    /// Mechanism for a single run.
    pub fn mechanism_spec<S: Scalar>(&self) -> Result<MechanismSpec<S>> {
        let kind = self.mechanism.unwrap_or(MechanismKind::None);
        if kind == MechanismKind::None {
            return Ok(MechanismSpec::none());
        }
        let theta = Self::scalar(Self::required(self.theta, "theta")?, "theta")?;
        let spec = match kind {
            MechanismKind::None => unreachable!(),
            MechanismKind::Pop => {
                let p = Self::required(self.pop_threshold_percent, "pop_threshold_percent")?;
                MechanismSpec::pop(Self::scalar(p, "pop_threshold_percent")?, theta)
            }
            MechanismKind::Ni => {
                let c = Self::required(self.influence_threshold, "influence_threshold")?;
                MechanismSpec::node_influence(Self::scalar(c, "influence_threshold")?, theta)
            }
            MechanismKind::Lc => {
                let (x, mode) = self.local_threshold()?;
                MechanismSpec {
                    mechanism: crate::Mechanism::LocalCooperation {
                        threshold: Self::scalar(x, "local threshold")?,
                        mode,
                    },
                    theta,
                }
            }
            MechanismKind::NiAndLc => {
                let c = Self::required(self.influence_threshold, "influence_threshold")?;
                let (x, mode) = self.local_threshold()?;
                MechanismSpec {
                    mechanism: crate::Mechanism::InfluenceAndLocal {
                        min_influence: Self::scalar(c, "influence_threshold")?,
                        threshold: Self::scalar(x, "local threshold")?,
                        mode,
                    },
                    theta,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sim_config<S: Scalar>(&self) -> Result<SimConfig<S>> {
        let cfg = SimConfig::new(self.payoff()?, self.mechanism_spec()?, self.strategy_seed.unwrap_or(0))
            .with_generations(
                self.generations.unwrap_or(DEFAULT_GENERATIONS),
                self.tail_window.unwrap_or(DEFAULT_TAIL_WINDOW),
            );
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn initial_state(&self, n: usize, seed: u64) -> Result<PopulationState> {
        let state = match self.initial.as_deref().unwrap_or("random") {
            "random" => init_strategies(n, seed),
            "all-c" => PopulationState::uniform(n, Strategy::Cooperate),
            "all-d" => PopulationState::uniform(n, Strategy::Defect),
            symbols => PopulationState::from_symbols(symbols).map_err(|_| {
                Error::param(format!("`initial` must be random, all-c, all-d or a C/D string (got `{symbols}`)"))
            })?,
        };
        if state.len() != n {
            return Err(Error::param(format!(
                "initial population has {} entries but the network has {n} nodes",
                state.len()
            )));
        }
        Ok(state)
    }

    pub fn sweep_spec<S: Scalar>(&self) -> Result<SweepSpec<S>> {
        let mechanism = Self::required(self.mechanism, "mechanism")?;
        let mut spec = SweepSpec::new(self.gen_params()?, mechanism, self.payoff()?, self.master_seed.unwrap_or(0));
        if let Some(c) = self.graph_count {
            spec.graph_count = c;
        }
        if let Some(r) = self.realisations_per_graph {
            spec.realisations_per_graph = r;
        }
        let grid = |values: &Option<Vec<f64>>, key: &str| -> Result<Vec<S>> {
            values
                .as_ref()
                .ok_or_else(|| Error::param(format!("missing required setting `{key}`")))?
                .iter()
                .map(|&v| Self::scalar(v, key))
                .collect()
        };
        spec.theta_grid = grid(&self.theta_grid, "theta_grid")?;
        spec.threshold_grid = if mechanism == MechanismKind::None {
            self.threshold_grid
                .as_ref()
                .map_or(Ok(vec![S::zero()]), |_| grid(&self.threshold_grid, "threshold_grid"))?
        } else {
            grid(&self.threshold_grid, "threshold_grid")?
        };
        if let Some(c) = self.influence_threshold {
            spec.combo_influence = Self::scalar(c, "influence_threshold")?;
        }
        spec.local_mode = self.local_threshold_mode.unwrap_or_default();
        spec.generations = self.generations.unwrap_or(DEFAULT_GENERATIONS);
        spec.tail_window = self.tail_window.unwrap_or(DEFAULT_TAIL_WINDOW);
        spec.validate()?;
        Ok(spec)
    }
}
