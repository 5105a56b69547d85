use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::UnionFind;
use crate::model::{EdgeId, NodeId};

/// Edge membership bit vector; bit `e` is set iff edge `e` is in the tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    membership: FixedBitSet,
}

impl SpanningTree {
    pub fn empty(edge_count: usize) -> Self {
        SpanningTree { membership: FixedBitSet::with_capacity(edge_count) }
    }

    pub fn from_edges(edge_count: usize, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut t = Self::empty(edge_count);
        for e in edges {
            t.insert(e);
        }
        t
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.membership.contains(e)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.membership.ones()
    }

    pub fn len(&self) -> usize {
        self.membership.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.membership.is_clear()
    }

    pub fn membership(&self) -> &FixedBitSet {
        &self.membership
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.membership.insert(e);
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.membership.set(e, false);
    }

    /// Checks that the member edges form a spanning tree over `nodes` nodes.
    pub fn check_spanning(&self, nodes: usize, endpoints: &[(NodeId, NodeId)]) -> Result<(), String> {
        let count = self.len();
        if count + 1 != nodes {
            return Err(format!("tree has {count} edges, expected {}", nodes.saturating_sub(1)));
        }
        let mut uf = UnionFind::new(nodes);
        for e in self.edges() {
            let (u, v) = endpoints[e];
            if !uf.union(u, v) {
                return Err(format!("edge {e} closes a cycle"));
            }
        }
        Ok(())
    }
}

/// Adjacency lists of a spanning tree, kept in sync with edge exchanges.
#[derive(Debug, Clone)]
pub struct TreeIndex {
    adj: Vec<Vec<(NodeId, EdgeId)>>,
    endpoints: Vec<(NodeId, NodeId)>,
    prev: Vec<Option<(NodeId, EdgeId)>>,
    seen: Vec<u32>,
    stamp: u32,
    queue: VecDeque<NodeId>,
}

impl TreeIndex {
    pub fn new(nodes: usize, endpoints: &[(NodeId, NodeId)], tree: &SpanningTree) -> Self {
        let mut idx = TreeIndex {
            adj: vec![Vec::new(); nodes],
            endpoints: endpoints.to_vec(),
            prev: vec![None; nodes],
            seen: vec![0; nodes],
            stamp: 0,
            queue: VecDeque::new(),
        };
        for e in tree.edges() {
            idx.insert(e);
        }
        idx
    }

    pub fn insert(&mut self, e: EdgeId) {
        let (u, v) = self.endpoints[e];
        self.adj[u].push((v, e));
        self.adj[v].push((u, e));
    }

    pub fn remove(&mut self, e: EdgeId) {
        let (u, v) = self.endpoints[e];
        self.adj[u].retain(|&(_, x)| x != e);
        self.adj[v].retain(|&(_, x)| x != e);
    }

    /// Edges on the tree path from `from` to `to`, in walking order.
    pub fn path(&mut self, from: NodeId, to: NodeId) -> Option<Vec<EdgeId>> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.queue.clear();
        self.queue.push_back(from);
        self.seen[from] = stamp;
        self.prev[from] = None;
        while let Some(x) = self.queue.pop_front() {
            if x == to {
                break;
            }
            for &(y, e) in &self.adj[x] {
                if self.seen[y] != stamp {
                    self.seen[y] = stamp;
                    self.prev[y] = Some((x, e));
                    self.queue.push_back(y);
                }
            }
        }
        if self.seen[to] != stamp {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = to;
        while let Some((p, e)) = self.prev[cur] {
            path.push(e);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spanning_checks() {
        let ends = [(0, 1), (1, 2), (0, 2)];
        assert!(SpanningTree::from_edges(3, [0, 1]).check_spanning(3, &ends).is_ok());
        assert!(SpanningTree::from_edges(3, [0]).check_spanning(3, &ends).is_err());
        assert!(SpanningTree::from_edges(3, [0, 1, 2]).check_spanning(3, &ends).is_err());
        let ends4 = [(0, 1), (1, 0), (2, 3)];
        assert!(SpanningTree::from_edges(3, [0, 1, 2]).check_spanning(4, &ends4).is_err());
    }

    #[test]
    fn path_follows_exchanges() {
        let ends = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let tree = SpanningTree::from_edges(4, [0, 1, 2]);
        let mut idx = TreeIndex::new(4, &ends, &tree);
        assert_eq!(idx.path(0, 3), Some(vec![0, 1, 2]));
        assert_eq!(idx.path(3, 3), Some(vec![]));
        idx.remove(1);
        idx.insert(3);
        assert_eq!(idx.path(0, 2), Some(vec![3, 2]));
        idx.remove(3);
        assert_eq!(idx.path(0, 2), None);
    }
}
