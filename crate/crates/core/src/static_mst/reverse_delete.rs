use fixedbitset::FixedBitSet;

use super::tables::{FcycleEntry, FcycleTable};
use super::{endpoints_of, SpanningTree};
use crate::error::{Error, Result};
use crate::model::{EdgeId, NodeId, TemporalNetwork};
use crate::rational::Rational;

/// Reverse-delete driven by depth-first search: while the remaining graph has
/// a non-tree edge, close its cycle through the DFS parent pointers, delete
/// the heaviest edge of that cycle and record the cycle.
///
/// The DFS starts at node 0 and visits neighbours in ascending node id; the
/// non-tree edge with the lowest id is taken first. `keys[e]` is `None` for
/// edges that are not part of the graph. Keys must be totally ordered
/// (include the edge id as the last component).
pub fn reverse_delete_by<K: Ord>(
    nodes: usize,
    endpoints: &[(NodeId, NodeId)],
    keys: &[Option<K>],
) -> Option<(SpanningTree, FcycleTable)> {
    let m = endpoints.len();
    let mut adj: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); nodes];
    let mut alive = FixedBitSet::with_capacity(m);
    for (e, &(u, v)) in endpoints.iter().enumerate() {
        if keys[e].is_some() {
            adj[u].push((v, e));
            adj[v].push((u, e));
            alive.insert(e);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    let mut table = FcycleTable::default();
    let mut parent: Vec<Option<(NodeId, EdgeId)>> = vec![None; nodes];
    let mut depth = vec![usize::MAX; nodes];
    let mut dfs_tree = FixedBitSet::with_capacity(m);
    let mut stack: Vec<(NodeId, usize)> = Vec::new();
    loop {
        depth.iter_mut().for_each(|d| *d = usize::MAX);
        parent.iter_mut().for_each(|p| *p = None);
        dfs_tree.clear();
        if nodes > 0 {
            depth[0] = 0;
            stack.push((0, 0));
        }
        while let Some(&mut (x, ref mut i)) = stack.last_mut() {
            let mut next = None;
            while *i < adj[x].len() {
                let (y, e) = adj[x][*i];
                *i += 1;
                if alive.contains(e) && depth[y] == usize::MAX {
                    next = Some((y, e));
                    break;
                }
            }
            match next {
                Some((y, e)) => {
                    depth[y] = depth[x] + 1;
                    parent[y] = Some((x, e));
                    dfs_tree.insert(e);
                    stack.push((y, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return None;
        }

        let Some(chord) = alive.ones().find(|&e| !dfs_tree.contains(e)) else {
            break;
        };
        let (a, b) = endpoints[chord];
        let (mut low, high) = if depth[a] > depth[b] { (a, b) } else { (b, a) };
        let mut cycle = Vec::new();
        while low != high {
            let (p, e) = parent[low].expect("non-tree edges of a DFS join an ancestor and a descendant");
            cycle.push(e);
            low = p;
        }
        cycle.push(chord);
        let heaviest = *cycle.iter().max_by(|&&x, &&y| keys[x].cmp(&keys[y])).expect("cycle is non-empty");
        alive.set(heaviest, false);
        table.entries.push(FcycleEntry { id: table.entries.len(), edges: cycle });
    }
    let tree = SpanningTree::from_edges(m, alive.ones());
    Some((tree, table))
}

/// Modified reverse-delete at time `t` with the `(weight, id)` order; returns
/// the MST and the `m - n + 1` recorded cycles.
pub fn modified_reverse_delete(net: &TemporalNetwork, t: &Rational) -> Result<(SpanningTree, FcycleTable)> {
    let keys = net
        .edges()
        .iter()
        .map(|e| match e.weight_at(t) {
            Ok(w) => Ok(Some((w, e.id))),
            Err(Error::EdgeAbsent { .. }) => Ok(None),
            Err(err) => Err(err),
        })
        .collect::<Result<Vec<_>>>()?;
    reverse_delete_by(net.node_count(), &endpoints_of(net), &keys).ok_or(Error::Disconnected { t: t.clone() })
}
