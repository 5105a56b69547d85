//! Time-aggregated graph model: undirected networks whose edges carry
//! piecewise-linear weight functions over a horizon `[1, K]`.

mod series;
mod validate;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use series::{absence_pad, WeightSeries};
pub(crate) use validate::checked_timeline;
pub use validate::{perturb_degenerate, perturbation_epsilon, validate, ValidationReport};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub weights: WeightSeries,
}

impl TemporalEdge {
    pub fn new(id: EdgeId, u: NodeId, v: NodeId, weights: WeightSeries) -> Self {
        TemporalEdge { id, u, v, weights }
    }

    /// The endpoint opposite `node`.
    pub fn other(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// Exact weight at `t`. Fails outside the sampled domain and while the
    /// edge is absent.
    pub fn weight_at(&self, t: &Rational) -> Result<Rational> {
        let value = self.weights.interpolate(t)?;
        if !self.weights.is_present_at(t) {
            return Err(Error::EdgeAbsent { edge: self.id, t: t.clone() });
        }
        Ok(value)
    }

    pub fn is_present_at(&self, t: &Rational) -> bool {
        self.weights.is_present_at(t)
    }
}

/// Free-function form of [`TemporalEdge::weight_at`].
pub fn weight_at(edge: &TemporalEdge, t: &Rational) -> Result<Rational> {
    edge.weight_at(t)
}

/// Provenance carried alongside a network.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkMeta {
    pub seed: Option<u64>,
    pub generator: Option<String>,
    pub perturbed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalNetwork {
    nodes: usize,
    horizon: u32,
    edges: Vec<TemporalEdge>,
    pub meta: NetworkMeta,
}

impl TemporalNetwork {
    /// Structural checks only: dense ids, endpoints in range and distinct,
    /// no parallel edges. Semantic checks live in [`validate`].
    pub fn new(nodes: usize, horizon: u32, edges: Vec<TemporalEdge>) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::Structure(format!("horizon must be at least 2, got {horizon}")));
        }
        if nodes == 0 {
            return Err(Error::Structure("network has no nodes".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.id != i {
                return Err(Error::Structure(format!("edge at position {i} has id {}", e.id)));
            }
            for node in [e.u, e.v] {
                if node >= nodes {
                    return Err(Error::NodeOutOfRange { node, nodes });
                }
            }
            if e.u == e.v {
                return Err(Error::Structure(format!("edge {i} is a self-loop on node {}", e.u)));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::Structure(format!("edge {i} duplicates ({}, {})", e.u, e.v)));
            }
        }
        Ok(TemporalNetwork { nodes, horizon, edges, meta: NetworkMeta::default() })
    }

    pub fn with_meta(mut self, meta: NetworkMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn horizon_start(&self) -> Rational {
        Rational::one()
    }

    pub fn horizon_end(&self) -> Rational {
        Rational::from_int(self.horizon as i64)
    }

    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &TemporalEdge {
        &self.edges[id]
    }

    /// Number of declared absence intervals over all edges.
    pub fn absence_interval_count(&self) -> usize {
        self.edges.iter().map(|e| e.weights.absence().len()).sum()
    }

    pub fn has_absence(&self) -> bool {
        self.edges.iter().any(|e| !e.weights.absence().is_empty())
    }

    /// Replace every edge's weights, keeping the topology.
    pub(crate) fn map_weights(&self, mut f: impl FnMut(&TemporalEdge) -> Result<WeightSeries>) -> Result<Self> {
        let edges =
            self.edges.iter().map(|e| Ok(TemporalEdge { weights: f(e)?, ..e.clone() })).collect::<Result<Vec<_>>>()?;
        Ok(TemporalNetwork { edges, ..self.clone() })
    }
}

/// Expand an edge's weight series around its absence intervals.
pub fn expand_absence(edge: &TemporalEdge) -> Result<WeightSeries> {
    edge.weights.expand_absence()
}
