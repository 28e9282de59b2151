//! Lemon-placement search and the error bounds it is checked against.
//!
//! A placement is a set of left (asset) indices that are lemons. Its effect
//! on the family is summarized by the multiplicity histogram `t` over CDOs,
//! and every tranche total is linear in `t` (see [`crate::cdo_model::tv_vector`]).

mod bounds;
mod report;
mod search;

use thiserror::Error;

pub use bounds::{empirical_errors, theoretical_bounds, valuediff_bound, Applicability, BoundInputs, BoundReport, EmpiricalErrors, ValueDiff};
pub use report::{build_report, CombinedReport, Empirical, Witnesses};
pub use search::{search_worst, AttackResult, SearchMode, DEFAULT_BUDGET, DISTINCT_CAP};

use crate::cdo_model::ModelError;
use crate::expander::GraphError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdversaryError {
    #[error("exhaustive search needs C({n},{ell}) = {placements} placements, budget is {budget}")]
    Budget { n: usize, ell: usize, placements: u64, budget: u64 },
    #[error("cannot place {ell} lemons among {n} assets")]
    TooManyLemons { ell: usize, n: usize },
    #[error("dimension mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, AdversaryError>;
