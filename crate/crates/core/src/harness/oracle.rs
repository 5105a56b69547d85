use crate::error::{Error, Result};
use crate::model::{EdgeId, TemporalNetwork};
use crate::rational::Rational;
use crate::static_mst::SpanningTree;

pub const ORACLE_MAX_NODES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    pub time: Rational,
    pub tree: SpanningTree,
    pub cost: Rational,
    /// Number of spanning trees attaining the minimum.
    pub optimal_count: usize,
    pub spanning_trees: usize,
}

impl OracleAnswer {
    pub fn is_strict(&self) -> bool {
        self.optimal_count == 1
    }
}

/// Minimum spanning tree at each time by enumerating every spanning tree
/// through edge contraction and deletion. Uses nothing but the weight
/// functions.
pub fn oracle_enumerate(net: &TemporalNetwork, times: &[Rational]) -> Result<Vec<OracleAnswer>> {
    let n = net.node_count();
    if n > ORACLE_MAX_NODES {
        return Err(Error::OracleRefused(format!("{n} nodes exceed the enumeration limit of {ORACLE_MAX_NODES}")));
    }
    times.iter().map(|t| enumerate_at(net, t)).collect()
}

struct Search<'a> {
    edges: &'a [(usize, usize, EdgeId, Rational)],
    best: Option<(Rational, Vec<EdgeId>)>,
    ties: usize,
    count: usize,
}

fn enumerate_at(net: &TemporalNetwork, t: &Rational) -> Result<OracleAnswer> {
    let mut edges = Vec::new();
    for e in net.edges() {
        match e.weight_at(t) {
            Ok(w) => edges.push((e.u, e.v, e.id, w)),
            Err(Error::EdgeAbsent { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    let n = net.node_count();
    let mut search = Search { edges: &edges, best: None, ties: 0, count: 0 };
    let labels: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    search.branch(0, labels, n, &mut chosen, Rational::zero());
    let (cost, members) = search.best.ok_or(Error::Disconnected { t: t.clone() })?;
    Ok(OracleAnswer {
        time: t.clone(),
        tree: SpanningTree::from_edges(net.edge_count(), members),
        cost,
        optimal_count: search.ties,
        spanning_trees: search.count,
    })
}

impl Search<'_> {
    /// `labels` maps each node to its contracted super-node; `parts` is the
    /// number of distinct super-nodes left.
    fn branch(&mut self, i: usize, labels: Vec<usize>, parts: usize, chosen: &mut Vec<EdgeId>, cost: Rational) {
        if parts == 1 {
            self.count += 1;
            match &self.best {
                Some((c, _)) if &cost > c => {}
                Some((c, _)) if &cost == c => self.ties += 1,
                _ => {
                    self.best = Some((cost, chosen.clone()));
                    self.ties = 1;
                }
            }
            return;
        }
        if i == self.edges.len() || !self.connectable(i, &labels, parts) {
            return;
        }
        let edges = self.edges;
        let (u, v, id, w) = &edges[i];
        let (u, v, id) = (*u, *v, *id);
        let (a, b) = (labels[u], labels[v]);
        if a != b {
            let merged: Vec<usize> = labels.iter().map(|&l| if l == b { a } else { l }).collect();
            chosen.push(id);
            self.branch(i + 1, merged, parts - 1, chosen, &cost + w);
            chosen.pop();
        }
        self.branch(i + 1, labels, parts, chosen, cost);
    }

    /// Whether edges `i..` can still join all super-nodes.
    fn connectable(&self, i: usize, labels: &[usize], parts: usize) -> bool {
        let mut root: Vec<usize> = (0..labels.len()).collect();
        fn find(root: &mut [usize], mut x: usize) -> usize {
            while root[x] != x {
                x = root[x];
            }
            x
        }
        let mut left = parts;
        for &(u, v, _, _) in &self.edges[i..] {
            let (a, b) = (find(&mut root, labels[u]), find(&mut root, labels[v]));
            if a != b {
                root[a] = b;
                left -= 1;
                if left == 1 {
                    return true;
                }
            }
        }
        left == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sample::sensor_network;
    use crate::model::{TemporalEdge, WeightSeries};

    fn constant(n: usize, edges: &[(usize, usize, i64)]) -> TemporalNetwork {
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, w))| {
                let w = Rational::from_int(w);
                TemporalEdge::new(i, u, v, WeightSeries::from_values(vec![w.clone(), w]).unwrap())
            })
            .collect();
        TemporalNetwork::new(n, 2, edges).unwrap()
    }

    #[test]
    fn triangle() {
        let net = constant(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]);
        let ans = &oracle_enumerate(&net, &[Rational::one()]).unwrap()[0];
        assert_eq!(ans.tree.edges().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(ans.cost, Rational::from_int(3));
        assert!(ans.is_strict());
        assert_eq!(ans.spanning_trees, 3);
    }

    #[test]
    fn complete_graph_tree_count() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                edges.push((u, v, (u * 5 + v) as i64));
            }
        }
        let ans = &oracle_enumerate(&constant(5, &edges), &[Rational::one()]).unwrap()[0];
        assert_eq!(ans.spanning_trees, 125);
    }

    #[test]
    fn sensor_example_costs() {
        let net = sensor_network();
        let at = |t: i64| oracle_enumerate(&net, &[Rational::from_int(t)]).unwrap().remove(0);
        assert_eq!(at(2).cost, Rational::from_int(7));
        assert!(at(2).is_strict());
        let four = at(4);
        assert_eq!(four.cost, Rational::from_int(5));
        // Any spanning tree of the unit-weight triangle plus (2, 3) and (2, 4).
        assert_eq!(four.optimal_count, 3);
    }

    #[test]
    fn refuses_large_networks() {
        let edges: Vec<(usize, usize, i64)> = (0..10).map(|i| (i, i + 1, 1)).collect();
        assert!(matches!(oracle_enumerate(&constant(11, &edges), &[]), Err(Error::OracleRefused(_))));
    }
}
