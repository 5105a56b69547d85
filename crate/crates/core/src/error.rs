use thiserror::Error;

use crate::model::{EdgeId, NodeId};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("time {t} is outside the horizon [{lo}, {hi}]")]
    Domain { t: Rational, lo: Rational, hi: Rational },

    #[error("edge {edge} is absent at time {t}")]
    EdgeAbsent { edge: EdgeId, t: Rational },

    #[error("network is disconnected at time {t}")]
    Disconnected { t: Rational },

    #[error("malformed network: {0}")]
    Structure(String),

    #[error("weight series: {0}")]
    Series(String),

    #[error("network failed validation: {0}")]
    Invalid(String),

    #[error("degeneracy could not be resolved after {passes} passes")]
    UnresolvedDegeneracy { passes: usize },

    #[error("edge {edge} is already in the tree")]
    EdgeInTree { edge: EdgeId },

    #[error("node {node} is out of range for a network of {nodes} nodes")]
    NodeOutOfRange { node: NodeId, nodes: usize },

    #[error("generator: {0}")]
    Generator(String),

    #[error("oracle refused: {0}")]
    OracleRefused(String),

    #[error("parse error at {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
