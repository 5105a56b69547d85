//! A small hand-made network: five sensors, six links, node 4 reachable
//! only through node 2, and no link between nodes 0 and 3.

use crate::model::{perturb_degenerate, TemporalEdge, TemporalNetwork, WeightSeries};
use crate::rational::Rational;

/// `(u, v, samples at t = 1..4)`, listed in edge-id order.
pub const SENSOR_EDGES: [(usize, usize, [i64; 4]); 6] = [
    (1, 2, [3, 4, 2, 1]),
    (1, 3, [4, 1, 1, 2]),
    (2, 3, [1, 2, 3, 1]),
    (0, 1, [2, 1, 2, 1]),
    (0, 2, [1, 4, 3, 1]),
    (2, 4, [4, 3, 5, 2]),
];

/// The network as sampled. Two spanning trees tie at `t = 4`, so solvers
/// need [`sensor_network_perturbed`].
pub fn sensor_network() -> TemporalNetwork {
    let edges = SENSOR_EDGES
        .iter()
        .enumerate()
        .map(|(id, &(u, v, w))| {
            let values = w.iter().map(|&x| Rational::from_int(x)).collect();
            TemporalEdge::new(id, u, v, WeightSeries::from_values(values).expect("four samples"))
        })
        .collect();
    TemporalNetwork::new(5, 4, edges).expect("well-formed example")
}

pub fn sensor_network_perturbed() -> TemporalNetwork {
    perturb_degenerate(&sensor_network()).expect("example resolves")
}
