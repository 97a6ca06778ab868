//! One generation of play: payoffs, investments and the synchronous
//! imitate-the-best update.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netgen::Graph;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Strategy {
    #[serde(rename = "D")]
    Defect = 0,
    #[serde(rename = "C")]
    Cooperate = 1,
}

impl Strategy {
    pub fn symbol(self) -> char {
        match self {
            Strategy::Cooperate => 'C',
            Strategy::Defect => 'D',
        }
    }
}

/// Weak Prisoner's Dilemma: `T = b`, `R = 1`, `P = S = 0`.
///
/// With `self_interaction` every agent also plays one game against itself,
/// as in the original Nowak–May spatial game: cooperators gain an extra
/// `R`, defectors an extra `P = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PayoffParams<S> {
    temptation: S,
    self_interaction: bool,
}

impl<S: Scalar> PayoffParams<S> {
    /// Requires `1 < b <= 2`.
    pub fn new(temptation: S) -> Result<Self> {
        if !(temptation > S::one() && temptation <= S::one() + S::one()) {
            return Err(Error::param(format!("temptation b must satisfy 1 < b <= 2 (got {temptation})")));
        }
        Ok(PayoffParams { temptation, self_interaction: false })
    }

    /// Neighbour games plus one self-game per agent.
    pub fn nowak_may(temptation: S) -> Result<Self> {
        Ok(Self::new(temptation)?.with_self_interaction(true))
    }

    pub fn with_self_interaction(mut self, enabled: bool) -> Self {
        self.self_interaction = enabled;
        self
    }

    pub fn temptation(&self) -> S {
        self.temptation
    }

    pub fn self_interaction(&self) -> bool {
        self.self_interaction
    }

    /// Payoff to the row player when `me` meets `other`.
    pub fn payoff(&self, me: Strategy, other: Strategy) -> S {
        match (me, other) {
            (Strategy::Cooperate, Strategy::Cooperate) => S::one(),
            (Strategy::Defect, Strategy::Cooperate) => self.temptation,
            (_, Strategy::Defect) => S::zero(),
        }
    }
}

pub fn pairwise_payoff<S: Scalar>(a: Strategy, b: Strategy, p: &PayoffParams<S>) -> (S, S) {
    (p.payoff(a, b), p.payoff(b, a))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopulationState {
    strategies: Vec<Strategy>,
    cooperators: usize,
}

impl PopulationState {
    pub fn new(strategies: Vec<Strategy>) -> Self {
        let cooperators = strategies.iter().map(|&s| s as usize).sum();
        PopulationState { strategies, cooperators }
    }

    pub fn uniform(n: usize, strategy: Strategy) -> Self {
        Self::new(vec![strategy; n])
    }

    /// Parses a `C`/`D` string, e.g. `"CCD"`.
    pub fn from_symbols(symbols: &str) -> Result<Self> {
        symbols
            .chars()
            .map(|c| match c {
                'C' | 'c' => Ok(Strategy::Cooperate),
                'D' | 'd' => Ok(Strategy::Defect),
                other => Err(Error::param(format!("unknown strategy symbol `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.strategies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strategies.is_empty()
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn get(&self, node: usize) -> Strategy {
        self.strategies[node]
    }

    pub fn is_cooperator(&self, node: usize) -> bool {
        self.strategies[node] == Strategy::Cooperate
    }

    pub fn cooperator_count(&self) -> usize {
        self.cooperators
    }

    pub fn cooperation_fraction(&self) -> f64 {
        self.cooperators as f64 / self.strategies.len() as f64
    }

    pub fn cooperators(&self) -> impl Iterator<Item = usize> + '_ {
        self.strategies.iter().enumerate().filter(|(_, &s)| s == Strategy::Cooperate).map(|(i, _)| i)
    }

    pub fn symbols(&self) -> String {
        self.strategies.iter().map(|s| s.symbol()).collect()
    }
}

/// Per-node score for the current generation.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreVector<S>(Vec<S>);

impl<S: Scalar> ScoreVector<S> {
    pub fn new(scores: Vec<S>) -> Self {
        ScoreVector(scores)
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<S> {
        self.0
    }

    pub fn get(&self, node: usize) -> S {
        self.0[node]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_sizes(g: &Graph, len: usize, what: &str) -> Result<()> {
    if g.node_count() != len {
        return Err(Error::contract(format!("{what} has {len} entries but the graph has {} nodes", g.node_count())));
    }
    Ok(())
}

/// Number of cooperating neighbours of every node.
pub fn cooperative_neighbours(g: &Graph, state: &PopulationState) -> Vec<u32> {
    let strategies = state.strategies();
    (0..g.node_count()).map(|i| g.neighbours(i).iter().map(|&j| strategies[j as usize] as u32).sum()).collect()
}

/// Sum of pairwise payoffs over each node's neighbourhood (plus the
/// self-game when enabled).
///
/// Only C opponents pay anything, so a node's score is its C-opponent count
/// times `R` (for a cooperator) or `T` (for a defector).
pub fn accumulate_scores<S: Scalar>(
    g: &Graph,
    state: &PopulationState,
    payoff: &PayoffParams<S>,
) -> Result<ScoreVector<S>> {
    check_sizes(g, state.len(), "population")?;
    Ok(scores_from_counts(state, &cooperative_neighbours(g, state), payoff))
}

pub(crate) fn scores_from_counts<S: Scalar>(
    state: &PopulationState,
    coop_neighbours: &[u32],
    payoff: &PayoffParams<S>,
) -> ScoreVector<S> {
    let own = usize::from(payoff.self_interaction);
    let scores = state
        .strategies()
        .iter()
        .zip(coop_neighbours)
        .map(|(&s, &c)| match s {
            Strategy::Cooperate => S::from_count(c as usize + own),
            Strategy::Defect => S::from_count(c as usize) * payoff.temptation,
        })
        .collect();
    ScoreVector(scores)
}

/// Adds `theta` to the score of every invested node.
pub fn apply_investments<S: Scalar>(
    mut scores: ScoreVector<S>,
    invested: &[usize],
    theta: S,
) -> Result<ScoreVector<S>> {
    if theta.partial_cmp(&S::zero()) != Some(Ordering::Greater) {
        return Err(Error::param(format!("investment theta must be positive (got {theta})")));
    }
    for &i in invested {
        let slot = scores.0.get_mut(i).ok_or_else(|| Error::contract(format!("invested node {i} out of range")))?;
        *slot = *slot + theta;
    }
    Ok(scores)
}

/// Who a node may imitate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Imitation {
    /// Best of the node and its neighbours. A node that attains the maximum
    /// keeps its strategy; otherwise the lowest-id best neighbour wins.
    #[default]
    BestIncludingSelf,
    /// Best neighbour only, lowest id on ties. Isolated nodes keep their
    /// strategy.
    BestNeighbour,
}

/// Node whose strategy `node` adopts. This is the only place the tie rule
/// lives.
pub fn role_model<S: Scalar>(g: &Graph, node: usize, scores: &[S], rule: Imitation) -> usize {
    let mut nbrs = g.neighbours(node).iter().map(|&j| j as usize);
    let (mut best, mut best_score) = match rule {
        Imitation::BestIncludingSelf => (node, scores[node]),
        Imitation::BestNeighbour => match nbrs.next() {
            Some(j) => (j, scores[j]),
            None => return node,
        },
    };
    // Neighbours are ascending, so a strict comparison keeps the lowest id.
    for j in nbrs {
        if scores[j] > best_score {
            best = j;
            best_score = scores[j];
        }
    }
    best
}

pub fn imitation_update<S: Scalar>(g: &Graph, state: &PopulationState, scores: &ScoreVector<S>) -> PopulationState {
    imitation_update_with(g, state, scores, Imitation::default())
}

/// Synchronous update: every node reads only the pre-update state.
pub fn imitation_update_with<S: Scalar>(
    g: &Graph,
    state: &PopulationState,
    scores: &ScoreVector<S>,
    rule: Imitation,
) -> PopulationState {
    debug_assert_eq!(g.node_count(), state.len());
    debug_assert_eq!(g.node_count(), scores.len());
    let next = (0..g.node_count()).map(|i| state.get(role_model(g, i, scores.as_slice(), rule))).collect();
    PopulationState::new(next)
}

pub fn is_homogeneous(state: &PopulationState) -> Option<Strategy> {
    match state.cooperator_count() {
        0 if !state.is_empty() => Some(Strategy::Defect),
        c if c == state.len() && c > 0 => Some(Strategy::Cooperate),
        _ => None,
    }
}
