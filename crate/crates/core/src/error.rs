use thiserror::Error;

use crate::multigraph::Vertex;
use crate::trace::TraceStep;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range arguments.
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// A search ran out of its node budget before reaching a definitive answer.
    /// `lower`/`upper` carry the best bounds known when the search stopped.
    #[error("resource budget exhausted in {context} after {nodes} nodes (bounds {lower:?}..={upper:?})")]
    Resource {
        context: String,
        nodes: u64,
        lower: Option<u32>,
        upper: Option<u32>,
    },

    /// A combinatorial construction could not be completed at `vertex`.
    #[error("structural failure at vertex {vertex}: {reason}")]
    Structural { vertex: Vertex, reason: String },

    /// A recoloring case was asked to run in a state that does not satisfy it.
    #[error("case precondition failed: {0}")]
    Precondition(String),

    /// An invariant that the mathematics guarantees did not hold.
    #[error("defect: {reason}")]
    Defect { reason: String, trace: Vec<TraceStep> },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn defect(msg: impl Into<String>) -> Self {
        Error::Defect {
            reason: msg.into(),
            trace: Vec::new(),
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
