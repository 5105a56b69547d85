use fixedbitset::FixedBitSet;

use crate::model::{EdgeId, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FcycleEntry {
    pub id: usize,
    /// Tree-path edges followed by the closing non-tree edge.
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FcycleTable {
    pub entries: Vec<FcycleEntry>,
}

impl FcycleTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// For every edge, the set of cycle ids it belongs to.
    pub fn columns(&self, edge_count: usize) -> Vec<FixedBitSet> {
        let mut cols = vec![FixedBitSet::with_capacity(self.entries.len()); edge_count];
        for entry in &self.entries {
            for &e in &entry.edges {
                cols[e].insert(entry.id);
            }
        }
        cols
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTableEntry {
    pub edge: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    /// `None` while the edge is absent.
    pub bcc: Option<usize>,
    pub fcycles: FixedBitSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTable {
    pub entries: Vec<EdgeTableEntry>,
}

impl EdgeTable {
    pub fn build(endpoints: &[(NodeId, NodeId)], bcc: &[Option<usize>], fcycles: &FcycleTable) -> Self {
        let entries = fcycles
            .columns(endpoints.len())
            .into_iter()
            .enumerate()
            .map(|(e, col)| EdgeTableEntry { edge: e, u: endpoints[e].0, v: endpoints[e].1, bcc: bcc[e], fcycles: col })
            .collect();
        EdgeTable { entries }
    }

    /// Number of cycles shared by both edges.
    pub fn shared_fcycles(&self, a: EdgeId, b: EdgeId) -> usize {
        self.entries[a].fcycles.intersection(&self.entries[b].fcycles).count()
    }
}
