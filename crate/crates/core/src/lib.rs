//! One-shot Prisoner's Dilemma dynamics on scale-free networks with an
//! external investor that tops up the payoff of selected cooperators.
//!
//! The simulation layers are generic over the payoff scalar (see
//! [`Scalar`]); the aliases at the bottom of this file pin the common
//! choices.

pub mod cli;
pub mod engine;
pub mod error;
pub mod mechanisms;
pub mod netgen;
pub mod rng;
pub mod scalar;
pub mod sim;
pub mod sweep;

pub use engine::{PayoffParams, PopulationState, ScoreVector, Strategy};
pub use error::{Error, Result};
pub use mechanisms::{CostLedger, InvestmentDecision, Mechanism, MechanismSpec, NeighbourThreshold};
pub use netgen::{GenParams, Graph, GraphStats, NetworkModel};
pub use scalar::Scalar;
pub use sim::{RunResult, SimConfig};
pub use sweep::{CellSummary, SweepGrid, SweepSpec};

/// Exact rational scalar used by the reference checks.
pub type Exact = num_rational::Rational64;

pub type PayoffParams64 = PayoffParams<f64>;
pub type MechanismSpec64 = MechanismSpec<f64>;
pub type SimConfig64 = SimConfig<f64>;
pub type RunResult64 = RunResult<f64>;
pub type SweepSpec64 = SweepSpec<f64>;

pub type PayoffParams32 = PayoffParams<f32>;
pub type MechanismSpec32 = MechanismSpec<f32>;
pub type SimConfig32 = SimConfig<f32>;
pub type RunResult32 = RunResult<f32>;

pub type PayoffParamsExact = PayoffParams<Exact>;
pub type MechanismSpecExact = MechanismSpec<Exact>;
pub type SimConfigExact = SimConfig<Exact>;
pub type RunResultExact = RunResult<Exact>;
