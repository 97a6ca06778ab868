//! A single realisation: random initial strategies, then a fixed number of
//! generations of score → invest → imitate.

use rand::Rng;

use crate::engine::{
    apply_investments, cooperative_neighbours, imitation_update_with, is_homogeneous, scores_from_counts, Imitation,
    PayoffParams, PopulationState, Strategy,
};
use crate::error::{Error, Result};
use crate::mechanisms::{decide_with_counts, CostLedger, Mechanism, MechanismSpec};
use crate::netgen::Graph;
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;

pub const DEFAULT_GENERATIONS: usize = 75;
pub const DEFAULT_TAIL_WINDOW: usize = 25;

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig<S> {
    pub payoff: PayoffParams<S>,
    pub mechanism: MechanismSpec<S>,
    pub generations: usize,
    /// Number of final states averaged into `tail_coop`.
    pub tail_window: usize,
    pub strategy_seed: u64,
    pub imitation: Imitation,
}

impl<S: Scalar> SimConfig<S> {
    pub fn new(payoff: PayoffParams<S>, mechanism: MechanismSpec<S>, strategy_seed: u64) -> Self {
        SimConfig {
            payoff,
            mechanism,
            generations: DEFAULT_GENERATIONS,
            tail_window: DEFAULT_TAIL_WINDOW,
            strategy_seed,
            imitation: Imitation::default(),
        }
    }

    pub fn with_generations(mut self, generations: usize, tail_window: usize) -> Self {
        self.generations = generations;
        self.tail_window = tail_window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 {
            return Err(Error::param("generations must be at least 1"));
        }
        if self.tail_window == 0 || self.tail_window > self.generations {
            return Err(Error::param(format!(
                "tail window must lie in 1..={} (got {})",
                self.generations, self.tail_window
            )));
        }
        self.mechanism.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult<S> {
    /// Cooperation fraction of states `0..=generations`; entry 0 is the
    /// initial assignment.
    pub coop_trajectory: Vec<f64>,
    /// Cooperator counts matching `coop_trajectory`.
    pub cooperator_counts: Vec<usize>,
    /// Mean cooperation over the last `tail_window` states.
    pub tail_coop: f64,
    /// `per_generation_cost[t]` is what was spent on state `t`.
    pub per_generation_cost: Vec<S>,
    /// Number of cooperators invested in on state `t`.
    pub per_generation_investments: Vec<usize>,
    pub total_cost: S,
    /// Node-generations invested in.
    pub investments: usize,
    /// First homogeneous state and its strategy.
    pub absorbed_at: Option<(usize, Strategy)>,
}

/// Each node cooperates independently with probability 1/2.
pub fn init_strategies(n: usize, seed: u64) -> PopulationState {
    let mut rng = rng_from_seed(seed);
    let strategies =
        (0..n).map(|_| if rng.random::<bool>() { Strategy::Cooperate } else { Strategy::Defect }).collect();
    PopulationState::new(strategies)
}

pub fn run<S: Scalar>(g: &Graph, cfg: &SimConfig<S>) -> Result<RunResult<S>> {
    run_from(g, cfg, init_strategies(g.node_count(), cfg.strategy_seed))
}

/// Runs from an explicit initial state; `cfg.strategy_seed` is ignored.
pub fn run_from<S: Scalar>(g: &Graph, cfg: &SimConfig<S>, initial: PopulationState) -> Result<RunResult<S>> {
    cfg.validate()?;
    if initial.len() != g.node_count() {
        return Err(Error::contract(format!(
            "initial population has {} nodes but the graph has {}",
            initial.len(),
            g.node_count()
        )));
    }
    let needs_counts =
        matches!(cfg.mechanism.mechanism, Mechanism::LocalCooperation { .. } | Mechanism::InfluenceAndLocal { .. });

    let mut state = initial;
    let mut counts = Vec::with_capacity(cfg.generations + 1);
    counts.push(state.cooperator_count());
    let mut ledger = CostLedger::new(cfg.mechanism.theta);
    let mut invested_counts = Vec::with_capacity(cfg.generations);
    let mut absorbed_at = is_homogeneous(&state).map(|s| (0, s));

    for t in 0..cfg.generations {
        if absorbed_at.is_some() {
            ledger.record_idle();
            invested_counts.push(0);
            counts.push(state.cooperator_count());
            continue;
        }
        let coop_nbrs = cooperative_neighbours(g, &state);
        let scores = scores_from_counts(&state, &coop_nbrs, &cfg.payoff);
        let decision = decide_with_counts(g, &state, if needs_counts { &coop_nbrs } else { &[] }, &cfg.mechanism);
        let scores = if decision.invested.is_empty() {
            scores
        } else {
            apply_investments(scores, &decision.invested, cfg.mechanism.theta)?
        };
        ledger.record(&decision);
        invested_counts.push(decision.invested.len());
        state = imitation_update_with(g, &state, &scores, cfg.imitation);
        counts.push(state.cooperator_count());
        if let Some(s) = is_homogeneous(&state) {
            absorbed_at = Some((t + 1, s));
        }
    }

    let n = g.node_count();
    let coop_trajectory = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let tail_sum: usize = counts[counts.len() - cfg.tail_window..].iter().sum();
    let tail_coop = tail_sum as f64 / (cfg.tail_window * n) as f64;

    Ok(RunResult {
        coop_trajectory,
        cooperator_counts: counts,
        tail_coop,
        total_cost: ledger.cumulative(),
        investments: ledger.investments(),
        per_generation_cost: ledger.into_per_generation(),
        per_generation_investments: invested_counts,
        absorbed_at,
    })
}
