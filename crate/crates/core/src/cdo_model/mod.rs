//! Scenario-conditional asset model and exact tranche valuation.
//!
//! Conditioned on a scenario, good assets and lemons are independent draws
//! from their scenario distributions, so the value of one CDO depends on its
//! assets only through the number of good ones. [`value_profile`] tabulates
//! that dependence exactly; [`tv_vector`] lifts it to a whole CDO family.

mod dist;
mod io;
mod mc;
mod tranche;
mod value;

use thiserror::Error;

pub use dist::{validate_model, AssetModel, DiscreteDist, DominanceReport, Scenario};
pub use io::{model_to_json, parse_model, parse_tranches, read_model, read_tranches, tranches_to_text};
pub use mc::{mc_value, McEstimate};
pub use tranche::TrancheSpec;
pub use value::{tv_vector, value_profile, TrancheValueVector, ValueProfile, ATOM_GUARD};

use crate::expander::GraphError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("distribution has empty support")]
    EmptySupport,
    #[error("support has {support} points but probs has {probs}")]
    LengthMismatch { support: usize, probs: usize },
    #[error("payoff {value} at index {index} outside [0, 1]")]
    PayoffOutOfRange { index: usize, value: f64 },
    #[error("support not strictly ascending at index {index}")]
    NotAscending { index: usize },
    #[error("probability {value} at index {index} is negative or not finite")]
    NegativeProb { index: usize, value: f64 },
    #[error("probabilities sum to {sum}, not 1")]
    ProbSum { sum: f64 },
    #[error("model has no scenarios")]
    NoScenarios,
    #[error("scenario {index} has invalid weight {value}")]
    BadWeight { index: usize, value: f64 },
    #[error("scenario weights sum to {sum}, not 1")]
    WeightSum { sum: f64 },
    #[error("tranche spec: {0}")]
    Tranche(String),
    #[error("portfolio payoff {x} outside tranche range")]
    PayoffDomain { x: f64 },
    #[error("convolution would produce {atoms} atoms (limit {ATOM_GUARD}); use Monte Carlo")]
    AtomGuard { atoms: usize },
    #[error("graph right degree {found:?} does not match profile size {expected}")]
    RegularityMismatch { expected: usize, found: Option<usize> },
    #[error("good count {g} exceeds CDO size {r}")]
    GoodCount { g: usize, r: usize },
    #[error("trials must be at least 1")]
    Trials,
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, ModelError>;
