//! Explicit unique-neighbor expanders for CDO families.
//!
//! Left vertices are assets, right vertices are CDOs. The construction is
//! the polynomial-evaluation expander over `F_q` (see [`GuvParams`]), cut
//! down to the requested sizes and then made biregular. Exhaustive
//! verification at small sizes is the correctness gate for the whole stack.

mod biregular;
mod graph;
mod guv;
mod verify;

use thiserror::Error;

pub use biregular::{biregularize, split_right_vertices};
pub use graph::{BipartiteGraph, NeighborCounts, GRAPH_MAGIC};
pub use guv::{build_cdo_graph, derive_guv_params, explicit_delta, BuildMode, ExpansionCertificate, GuvParams};
pub use verify::{verify_expansion, VerificationReport, VerifyMode, VERIFY_GUARD};

use crate::galois::GaloisError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("left vertex {left} has neighbor {right} outside 0..{m}")]
    NeighborOutOfRange { left: usize, right: usize, m: usize },
    #[error("duplicate edge ({left}, {right})")]
    DuplicateEdge { left: usize, right: usize },
    #[error("left vertex {left} outside 0..{n}")]
    LeftOutOfRange { left: usize, n: usize },
    #[error("left vertex {0} listed twice")]
    RepeatedLeft(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("enumeration guard: {0}")]
    Guard(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] GaloisError),
}

pub type Result<T> = std::result::Result<T, GraphError>;
