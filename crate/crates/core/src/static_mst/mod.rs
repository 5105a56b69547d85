//! Minimum spanning trees at a fixed instant.

mod bcc;
mod reverse_delete;
mod tables;
mod tree;

pub use bcc::{bcc_labels, biconnected_components};
pub use reverse_delete::{modified_reverse_delete, reverse_delete_by};
pub use tables::{EdgeTable, EdgeTableEntry, FcycleEntry, FcycleTable};
pub use tree::{SpanningTree, TreeIndex};

use crate::error::{Error, Result};
use crate::model::{EdgeId, NodeId, TemporalNetwork};
use crate::rational::Rational;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Greedy scan of edges in ascending order. `None` if they do not span.
pub fn kruskal_in_order(
    nodes: usize,
    endpoints: &[(NodeId, NodeId)],
    order: impl IntoIterator<Item = EdgeId>,
) -> Option<SpanningTree> {
    let mut uf = UnionFind::new(nodes);
    let mut tree = SpanningTree::empty(endpoints.len());
    let mut needed = nodes.saturating_sub(1);
    for e in order {
        if needed == 0 {
            break;
        }
        let (u, v) = endpoints[e];
        if uf.union(u, v) {
            tree.insert(e);
            needed -= 1;
        }
    }
    (needed == 0).then_some(tree)
}

/// Kruskal over `(key, edge)` pairs; keys must already include the tie-break.
pub fn kruskal_by_keys<K: Ord>(
    nodes: usize,
    endpoints: &[(NodeId, NodeId)],
    mut keyed: Vec<(K, EdgeId)>,
) -> Option<SpanningTree> {
    keyed.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    kruskal_in_order(nodes, endpoints, keyed.into_iter().map(|(_, e)| e))
}

pub(crate) fn endpoints_of(net: &TemporalNetwork) -> Vec<(NodeId, NodeId)> {
    net.edges().iter().map(|e| (e.u, e.v)).collect()
}

/// MST at `t` over the edges present at `t`, ordered by `(weight, id)`.
pub fn kruskal_at(net: &TemporalNetwork, t: &Rational) -> Result<SpanningTree> {
    let keyed = weights_at(net, t)?;
    kruskal_by_keys(net.node_count(), &endpoints_of(net), keyed).ok_or(Error::Disconnected { t: t.clone() })
}

fn weights_at(net: &TemporalNetwork, t: &Rational) -> Result<Vec<(Rational, EdgeId)>> {
    let mut out = Vec::with_capacity(net.edge_count());
    for e in net.edges() {
        match e.weight_at(t) {
            Ok(w) => out.push((w, e.id)),
            Err(Error::EdgeAbsent { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

/// The cycle closed by adding `edge` to `tree`: the tree path from `u` to
/// `v`, followed by `edge` itself.
pub fn fundamental_cycle(net: &TemporalNetwork, tree: &SpanningTree, edge: EdgeId) -> Result<Vec<EdgeId>> {
    if tree.contains(edge) {
        return Err(Error::EdgeInTree { edge });
    }
    let endpoints = endpoints_of(net);
    let mut index = TreeIndex::new(net.node_count(), &endpoints, tree);
    let (u, v) = endpoints[edge];
    let mut cycle = index
        .path(u, v)
        .ok_or_else(|| Error::Internal(format!("endpoints of edge {edge} are not connected by the tree")))?;
    cycle.push(edge);
    Ok(cycle)
}

/// Sum of member weights at `t`.
pub fn total_cost(net: &TemporalNetwork, tree: &SpanningTree, t: &Rational) -> Result<Rational> {
    let mut cost = Rational::zero();
    for e in tree.edges() {
        cost = cost + net.edge(e).weight_at(t)?;
    }
    Ok(cost)
}
