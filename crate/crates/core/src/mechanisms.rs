//! Investment mechanisms: which cooperators the external investor tops up
//! each generation, and what that costs.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::engine::{cooperative_neighbours, is_homogeneous, PopulationState};
use crate::error::{Error, Result};
use crate::netgen::Graph;
use crate::scalar::Scalar;

/// Units of the local-cooperation threshold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NeighbourThreshold {
    /// Share of the neighbourhood that cooperates, in `[0, 1]`.
    #[default]
    Fraction,
    /// Absolute number of cooperating neighbours.
    Count,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mechanism<S> {
    None,
    /// Invest in every cooperator while `100 * x_C / n <= threshold_percent`.
    Pop {
        threshold_percent: S,
    },
    /// Invest in cooperators with `degree / max_degree >= min_influence`.
    NodeInfluence {
        min_influence: S,
    },
    /// Invest in cooperators whose neighbourhood cooperation is strictly
    /// below `threshold`.
    LocalCooperation {
        threshold: S,
        mode: NeighbourThreshold,
    },
    /// Both node-influence and local-cooperation conditions must hold.
    InfluenceAndLocal {
        min_influence: S,
        threshold: S,
        mode: NeighbourThreshold,
    },
}

impl<S> Mechanism<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Mechanism::None => "none",
            Mechanism::Pop { .. } => "pop",
            Mechanism::NodeInfluence { .. } => "ni",
            Mechanism::LocalCooperation { .. } => "lc",
            Mechanism::InfluenceAndLocal { .. } => "ni-and-lc",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MechanismSpec<S> {
    pub mechanism: Mechanism<S>,
    /// Amount added to each invested cooperator's score, and its cost.
    pub theta: S,
}

impl<S: Scalar> MechanismSpec<S> {
    pub fn none() -> Self {
        MechanismSpec { mechanism: Mechanism::None, theta: S::zero() }
    }

    pub fn pop(threshold_percent: S, theta: S) -> Self {
        MechanismSpec { mechanism: Mechanism::Pop { threshold_percent }, theta }
    }

    pub fn node_influence(min_influence: S, theta: S) -> Self {
        MechanismSpec { mechanism: Mechanism::NodeInfluence { min_influence }, theta }
    }

    pub fn local_cooperation(threshold: S, theta: S) -> Self {
        MechanismSpec {
            mechanism: Mechanism::LocalCooperation { threshold, mode: NeighbourThreshold::Fraction },
            theta,
        }
    }

    pub fn influence_and_local(min_influence: S, threshold: S, theta: S) -> Self {
        MechanismSpec {
            mechanism: Mechanism::InfluenceAndLocal { min_influence, threshold, mode: NeighbourThreshold::Fraction },
            theta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let zero = S::zero();
        let one = S::one();
        let in_unit = |x: S| x >= zero && x <= one;
        let check_local = |threshold: S, mode: NeighbourThreshold| match mode {
            NeighbourThreshold::Fraction if !in_unit(threshold) => {
                Err(Error::param(format!("local cooperation threshold must lie in [0, 1] (got {threshold})")))
            }
            NeighbourThreshold::Count if threshold.partial_cmp(&zero).is_none_or(Ordering::is_lt) => {
                Err(Error::param(format!("local cooperation count threshold must be non-negative (got {threshold})")))
            }
            _ => Ok(()),
        };
        let check_influence = |c: S| {
            if in_unit(c) {
                Ok(())
            } else {
                Err(Error::param(format!("influence threshold must lie in [0, 1] (got {c})")))
            }
        };
        match self.mechanism {
            Mechanism::None => return Ok(()),
            Mechanism::Pop { threshold_percent } => {
                let hundred = S::from_count(100);
                if !(threshold_percent >= zero && threshold_percent <= hundred) {
                    return Err(Error::param(format!(
                        "population threshold must lie in [0, 100] percent (got {threshold_percent})"
                    )));
                }
            }
            Mechanism::NodeInfluence { min_influence } => check_influence(min_influence)?,
            Mechanism::LocalCooperation { threshold, mode } => check_local(threshold, mode)?,
            Mechanism::InfluenceAndLocal { min_influence, threshold, mode } => {
                check_influence(min_influence)?;
                check_local(threshold, mode)?;
            }
        }
        if self.theta.partial_cmp(&zero) != Some(Ordering::Greater) {
            return Err(Error::param(format!("investment theta must be positive (got {})", self.theta)));
        }
        Ok(())
    }
}

/// Investments chosen for one generation. `invested` is ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct InvestmentDecision<S> {
    pub invested: Vec<usize>,
    pub generation_cost: S,
}

impl<S: Scalar> InvestmentDecision<S> {
    pub fn empty() -> Self {
        InvestmentDecision { invested: Vec::new(), generation_cost: S::zero() }
    }
}

pub fn select_pop<S: Scalar>(state: &PopulationState, threshold_percent: S) -> Vec<usize> {
    let percent = S::from_count(100 * state.cooperator_count()) / S::from_count(state.len());
    if percent <= threshold_percent {
        state.cooperators().collect()
    } else {
        Vec::new()
    }
}

/// Relative degree `degree / max_degree`; zero on an edgeless graph.
pub fn influence<S: Scalar>(g: &Graph, node: usize) -> S {
    match g.max_degree() {
        0 => S::zero(),
        max => S::from_count(g.degree(node)) / S::from_count(max),
    }
}

pub fn select_ni<S: Scalar>(g: &Graph, state: &PopulationState, min_influence: S) -> Vec<usize> {
    state.cooperators().filter(|&i| influence::<S>(g, i) >= min_influence).collect()
}

fn below_local<S: Scalar>(g: &Graph, node: usize, coop_nbrs: u32, threshold: S, mode: NeighbourThreshold) -> bool {
    let count = S::from_count(coop_nbrs as usize);
    match mode {
        NeighbourThreshold::Count => count < threshold,
        NeighbourThreshold::Fraction => match g.degree(node) {
            0 => false,
            d => count / S::from_count(d) < threshold,
        },
    }
}

pub fn select_lc<S: Scalar>(g: &Graph, state: &PopulationState, threshold: S, mode: NeighbourThreshold) -> Vec<usize> {
    select_lc_with_counts(g, state, &cooperative_neighbours(g, state), threshold, mode)
}

fn select_lc_with_counts<S: Scalar>(
    g: &Graph,
    state: &PopulationState,
    coop_nbrs: &[u32],
    threshold: S,
    mode: NeighbourThreshold,
) -> Vec<usize> {
    state.cooperators().filter(|&i| below_local(g, i, coop_nbrs[i], threshold, mode)).collect()
}

pub fn select_combo<S: Scalar>(
    g: &Graph,
    state: &PopulationState,
    min_influence: S,
    threshold: S,
    mode: NeighbourThreshold,
) -> Vec<usize> {
    select_combo_with_counts(g, state, &cooperative_neighbours(g, state), min_influence, threshold, mode)
}

fn select_combo_with_counts<S: Scalar>(
    g: &Graph,
    state: &PopulationState,
    coop_nbrs: &[u32],
    min_influence: S,
    threshold: S,
    mode: NeighbourThreshold,
) -> Vec<usize> {
    state
        .cooperators()
        .filter(|&i| influence::<S>(g, i) >= min_influence && below_local(g, i, coop_nbrs[i], threshold, mode))
        .collect()
}

/// Selection and cost for the current state. Homogeneous populations never
/// receive investment.
pub fn decide<S: Scalar>(g: &Graph, state: &PopulationState, spec: &MechanismSpec<S>) -> InvestmentDecision<S> {
    match spec.mechanism {
        Mechanism::LocalCooperation { .. } | Mechanism::InfluenceAndLocal { .. } => {
            decide_with_counts(g, state, &cooperative_neighbours(g, state), spec)
        }
        _ => decide_with_counts(g, state, &[], spec),
    }
}

/// `coop_nbrs` may be empty for mechanisms that ignore neighbourhoods.
pub(crate) fn decide_with_counts<S: Scalar>(
    g: &Graph,
    state: &PopulationState,
    coop_nbrs: &[u32],
    spec: &MechanismSpec<S>,
) -> InvestmentDecision<S> {
    if is_homogeneous(state).is_some() {
        return InvestmentDecision::empty();
    }
    let invested = match spec.mechanism {
        Mechanism::None => Vec::new(),
        Mechanism::Pop { threshold_percent } => select_pop(state, threshold_percent),
        Mechanism::NodeInfluence { min_influence } => select_ni(g, state, min_influence),
        Mechanism::LocalCooperation { threshold, mode } => select_lc_with_counts(g, state, coop_nbrs, threshold, mode),
        Mechanism::InfluenceAndLocal { min_influence, threshold, mode } => {
            select_combo_with_counts(g, state, coop_nbrs, min_influence, threshold, mode)
        }
    };
    let generation_cost = S::from_count(invested.len()) * spec.theta;
    InvestmentDecision { invested, generation_cost }
}

/// Running cost account for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct CostLedger<S> {
    theta: S,
    per_generation: Vec<S>,
    investments: usize,
}

impl<S: Scalar> CostLedger<S> {
    pub fn new(theta: S) -> Self {
        CostLedger { theta, per_generation: Vec::new(), investments: 0 }
    }

    pub fn record(&mut self, decision: &InvestmentDecision<S>) {
        self.investments += decision.invested.len();
        self.per_generation.push(decision.generation_cost);
    }

    pub fn record_idle(&mut self) {
        self.per_generation.push(S::zero());
    }

    pub fn per_generation(&self) -> &[S] {
        &self.per_generation
    }

    /// Total number of node-generations invested in.
    pub fn investments(&self) -> usize {
        self.investments
    }

    /// `theta` times the number of investments. Equals the sum of the
    /// per-generation costs exactly for rational scalars and for dyadic
    /// `theta` in floating point.
    pub fn cumulative(&self) -> S {
        if self.investments == 0 {
            S::zero()
        } else {
            S::from_count(self.investments) * self.theta
        }
    }

    pub fn into_per_generation(self) -> Vec<S> {
        self.per_generation
    }
}
