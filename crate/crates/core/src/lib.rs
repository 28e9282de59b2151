//! Expander-backed CDO families.
//!
//! * [`galois`]: arithmetic in `F_{2^s}` and `F_q[Y]`.
//! * [`expander`]: explicit expander construction, biregularization and
//!   exhaustive expansion checks.
//! * [`cdo_model`]: scenario-conditional asset model, exact tranche values
//!   by good-asset count, and family-wide tranche totals.
//! * [`adversary`]: lemon-placement search and the error bounds it is
//!   checked against.
//! * [`cli`]: the `expander-cdo` command line.
//!
//! Valuation code is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! aliases below name the double-precision instantiations used by the CLI.

// NaN must fail these comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod cdo_model;
pub mod cli;
pub mod expander;
pub mod galois;
mod scalar;
mod subsets;

pub use scalar::Scalar;
pub use subsets::binomial;

pub type DiscreteDistF64 = cdo_model::DiscreteDist<f64>;
pub type ScenarioF64 = cdo_model::Scenario<f64>;
pub type AssetModelF64 = cdo_model::AssetModel<f64>;
pub type TrancheSpecF64 = cdo_model::TrancheSpec<f64>;
pub type ValueProfileF64 = cdo_model::ValueProfile<f64>;
pub type TrancheValueVectorF64 = cdo_model::TrancheValueVector<f64>;
pub type AttackResultF64 = adversary::AttackResult<f64>;
pub type BoundReportF64 = adversary::BoundReport<f64>;

pub type DiscreteDistF32 = cdo_model::DiscreteDist<f32>;
pub type AssetModelF32 = cdo_model::AssetModel<f32>;
pub type ValueProfileF32 = cdo_model::ValueProfile<f32>;
