use crate::model::{EdgeId, NodeId, TemporalNetwork};

/// Biconnected component label of every edge of the full topology.
pub fn biconnected_components(net: &TemporalNetwork) -> Vec<usize> {
    let endpoints = super::endpoints_of(net);
    bcc_labels(net.node_count(), &endpoints, |_| true).into_iter().map(|l| l.expect("every edge is included")).collect()
}

/// Hopcroft-Tarjan over the edges accepted by `include`; excluded edges get
/// `None`. Labels are dense, numbered in order of discovery.
pub fn bcc_labels(
    nodes: usize,
    endpoints: &[(NodeId, NodeId)],
    include: impl Fn(EdgeId) -> bool,
) -> Vec<Option<usize>> {
    let m = endpoints.len();
    let mut adj: Vec<Vec<(NodeId, EdgeId)>> = vec![Vec::new(); nodes];
    for (e, &(u, v)) in endpoints.iter().enumerate() {
        if include(e) {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
    }

    let mut labels = vec![None; m];
    let mut next_label = 0;
    let mut disc = vec![usize::MAX; nodes];
    let mut low = vec![0; nodes];
    let mut clock = 0;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    // (node, edge used to enter it, next adjacency index)
    let mut frames: Vec<(NodeId, Option<EdgeId>, usize)> = Vec::new();

    for root in 0..nodes {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = clock;
        low[root] = clock;
        clock += 1;
        frames.push((root, None, 0));
        while let Some(frame) = frames.last_mut() {
            let (x, via, i) = (frame.0, frame.1, frame.2);
            if i < adj[x].len() {
                frame.2 += 1;
                let (y, e) = adj[x][i];
                if Some(e) == via {
                    continue;
                }
                if disc[y] == usize::MAX {
                    disc[y] = clock;
                    low[y] = clock;
                    clock += 1;
                    edge_stack.push(e);
                    frames.push((y, Some(e), 0));
                } else if disc[y] < disc[x] {
                    edge_stack.push(e);
                    low[x] = low[x].min(disc[y]);
                }
                continue;
            }
            frames.pop();
            let (Some(&(p, _, _)), Some(e)) = (frames.last(), via) else {
                continue;
            };
            low[p] = low[p].min(low[x]);
            if low[x] >= disc[p] {
                while let Some(f) = edge_stack.pop() {
                    labels[f] = Some(next_label);
                    if f == e {
                        break;
                    }
                }
                next_label += 1;
            }
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridges_are_their_own_components() {
        // Two triangles joined by the bridge 2-3.
        let ends = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)];
        let l: Vec<usize> = bcc_labels(6, &ends, |_| true).into_iter().map(Option::unwrap).collect();
        assert_eq!(l[0], l[1]);
        assert_eq!(l[1], l[2]);
        assert_eq!(l[4], l[5]);
        assert_eq!(l[5], l[6]);
        assert_ne!(l[3], l[0]);
        assert_ne!(l[3], l[4]);
        assert_ne!(l[0], l[4]);
    }

    #[test]
    fn excluded_edges_split_components() {
        let ends = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let all = bcc_labels(4, &ends, |_| true);
        assert!(all.iter().all(|l| *l == all[0]));
        let cut = bcc_labels(4, &ends, |e| e != 3);
        assert_eq!(cut[3], None);
        assert_ne!(cut[0], cut[1]);
        assert_ne!(cut[1], cut[2]);
    }

    #[test]
    fn shared_cut_vertex() {
        // Bowtie: triangles 0-1-2 and 2-3-4 meet at node 2.
        let ends = [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)];
        let l = bcc_labels(5, &ends, |_| true);
        assert_eq!(l[0], l[2]);
        assert_eq!(l[3], l[5]);
        assert_ne!(l[0], l[3]);
    }

    #[test]
    fn forest_over_several_roots() {
        let ends = [(0, 1), (2, 3)];
        let l = bcc_labels(4, &ends, |_| true);
        assert_ne!(l[0], l[1]);
        assert!(l.iter().all(Option::is_some));
    }
}
