use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenKind, GenSpec};
use crate::error::{Error, Result};
use crate::model::{perturb_degenerate, validate, NetworkMeta, TemporalEdge, TemporalNetwork, WeightSeries};
use crate::rational::Rational;

pub fn generate(spec: &GenSpec) -> Result<TemporalNetwork> {
    match spec.kind {
        GenKind::RandomSeries => gen_random(spec),
        GenKind::Trajectory { .. } => gen_trajectory(spec),
    }
}

/// Random spanning tree first, then distinct extra pairs, then independent
/// uniform integer samples per edge. Coincident segments are perturbed away.
pub fn gen_random(spec: &GenSpec) -> Result<TemporalNetwork> {
    let (n, m, k) = (spec.nodes, spec.edges, spec.horizon);
    if n == 0 || k < 2 {
        return Err(Error::Generator(format!("need at least one node and horizon >= 2 (n={n}, K={k})")));
    }
    let capacity = n * (n - 1) / 2;
    if m + 1 < n || m > capacity {
        return Err(Error::Generator(format!("{m} edges do not fit a connected simple graph on {n} nodes")));
    }
    let (lo, hi) = spec.weight_range;
    if lo > hi {
        return Err(Error::Generator(format!("empty weight range [{lo}, {hi}]")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ordered = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut pairs = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        pairs.insert(ordered(perm[i], perm[j]));
    }
    if 2 * m <= capacity {
        while pairs.len() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                pairs.insert(ordered(u, v));
            }
        }
    } else {
        let mut rest: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|p| !pairs.contains(p)).collect();
        rest.shuffle(&mut rng);
        let extra = m - pairs.len();
        pairs.extend(rest.into_iter().take(extra));
    }

    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(id, (u, v))| {
            let values = (0..k).map(|_| Rational::from_int(rng.gen_range(lo..=hi))).collect();
            Ok(TemporalEdge::new(id, u, v, WeightSeries::from_values(values)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let net = TemporalNetwork::new(n, k, edges)?.with_meta(NetworkMeta {
        seed: Some(spec.seed),
        generator: Some("random-series".into()),
        perturbed: false,
    });
    perturb_degenerate(&net)
}

/// Add up to `count` absence intervals at random, keeping only those after
/// which the network stays connected and free of coincidences.
pub fn inject_absence(net: &TemporalNetwork, count: usize, seed: u64) -> Result<TemporalNetwork> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xab5e_0ce0);
    let mut current = net.clone();
    let quarters = 4 * (net.horizon() as i64 - 1);
    let mut injected = 0;
    for _ in 0..count * 20 {
        if injected == count || net.edge_count() == 0 {
            break;
        }
        let id = rng.gen_range(0..net.edge_count());
        let a = rng.gen_range(0..quarters);
        let b = (a + rng.gen_range(0..=6)).min(quarters);
        let interval = (Rational::new(4 + a, 4), Rational::new(4 + b, 4));
        let candidate = current.map_weights(|e| {
            if e.id != id {
                return Ok(e.weights.clone());
            }
            let mut absence = e.weights.absence().to_vec();
            absence.push(interval.clone());
            absence.sort();
            e.weights.clone().with_absence(absence)
        });
        let Ok(candidate) = candidate else { continue };
        if validate(&candidate).is_valid() {
            current = candidate;
            injected += 1;
        }
    }
    Ok(current)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Waypoint {
    pub time: Rational,
    pub x: Rational,
    pub y: Rational,
}

impl Waypoint {
    pub fn new(time: i64, x: i64, y: i64) -> Self {
        Waypoint { time: Rational::from_int(time), x: Rational::from_int(x), y: Rational::from_int(y) }
    }
}

fn position(path: &[Waypoint], t: &Rational) -> (Rational, Rational) {
    let first = &path[0];
    if t <= &first.time || path.len() == 1 {
        return (first.x.clone(), first.y.clone());
    }
    for w in path.windows(2) {
        if t <= &w[1].time {
            let f = (t - &w[0].time) / (&w[1].time - &w[0].time);
            return (&w[0].x + &(&w[1].x - &w[0].x) * &f, &w[0].y + &(&w[1].y - &w[0].y) * &f);
        }
    }
    let last = &path[path.len() - 1];
    (last.x.clone(), last.y.clone())
}

/// Network of moving nodes. Edge weights are squared distances sampled at
/// the integer instants; a pair is linked when it is within `radius` at some
/// instant, and absent over every run of two or more consecutive instants
/// out of range.
pub fn trajectory_network(paths: &[Vec<Waypoint>], horizon: u32, radius: &Rational) -> Result<TemporalNetwork> {
    if paths.iter().any(|p| p.is_empty() || p.windows(2).any(|w| w[0].time >= w[1].time)) {
        return Err(Error::Generator("each node needs waypoints at increasing times".into()));
    }
    let n = paths.len();
    let limit = radius * radius;
    let positions: Vec<Vec<(Rational, Rational)>> =
        paths.iter().map(|p| (1..=horizon as i64).map(|t| position(p, &Rational::from_int(t))).collect()).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let d2: Vec<Rational> = (0..horizon as usize)
                .map(|k| {
                    let dx = &positions[u][k].0 - &positions[v][k].0;
                    let dy = &positions[u][k].1 - &positions[v][k].1;
                    &dx * &dx + &dy * &dy
                })
                .collect();
            if d2.iter().all(|d| d > &limit) {
                continue;
            }
            let mut absence = Vec::new();
            let mut k = 0;
            while k < d2.len() {
                if d2[k] <= limit {
                    k += 1;
                    continue;
                }
                let run = d2[k..].iter().take_while(|d| *d > &limit).count();
                if run >= 2 {
                    absence.push((Rational::from_int(k as i64 + 1), Rational::from_int((k + run) as i64)));
                }
                k += run;
            }
            let series = WeightSeries::from_values(d2)?.with_absence(absence)?;
            edges.push(TemporalEdge::new(edges.len(), u, v, series));
        }
    }
    let net = TemporalNetwork::new(n, horizon, edges)?;
    let net = perturb_degenerate(&net)?;
    let report = validate(&net);
    if let Some((a, b)) = report.disconnected.first() {
        return Err(Error::Disconnected { t: Rational::midpoint(a, b) });
    }
    report.into_result()?;
    Ok(net)
}

/// Random-waypoint motion in a 100 x 100 square. `spec.edges` is ignored;
/// the topology follows from the radius.
pub fn gen_trajectory(spec: &GenSpec) -> Result<TemporalNetwork> {
    let GenKind::Trajectory { waypoints, radius } = spec.kind else {
        return Err(Error::Generator("not a trajectory spec".into()));
    };
    if spec.nodes == 0 || spec.horizon < 2 || waypoints == 0 {
        return Err(Error::Generator("need nodes, horizon >= 2 and at least one waypoint".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let span = spec.horizon as i64 - 1;
    let paths: Vec<Vec<Waypoint>> = (0..spec.nodes)
        .map(|_| {
            (0..waypoints)
                .map(|i| {
                    let time = if waypoints == 1 {
                        Rational::one()
                    } else {
                        Rational::one() + Rational::new(span * i as i64, waypoints as i64 - 1)
                    };
                    let x = Rational::from_int(rng.gen_range(0..=100));
                    let y = Rational::from_int(rng.gen_range(0..=100));
                    Waypoint { time, x, y }
                })
                .collect()
        })
        .collect();
    let net = trajectory_network(&paths, spec.horizon, &Rational::from_int(radius as i64))?;
    let meta = NetworkMeta { seed: Some(spec.seed), generator: Some("trajectory".into()), ..net.meta.clone() };
    Ok(net.with_meta(meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_network() {
        let spec = GenSpec::random(5, 6, 4, 7);
        let a = gen_random(&spec).unwrap();
        assert_eq!(a, gen_random(&spec).unwrap());
        assert!(validate(&a).is_valid());
        assert_ne!(a, gen_random(&GenSpec::random(5, 6, 4, 8)).unwrap());
    }

    #[test]
    fn single_edge_network() {
        let net = gen_random(&GenSpec::random(2, 1, 2, 0)).unwrap();
        assert_eq!(net.edge_count(), 1);
        assert!(validate(&net).is_valid());
    }

    #[test]
    fn rejects_impossible_edge_counts() {
        assert!(gen_random(&GenSpec::random(4, 7, 3, 0)).is_err());
        assert!(gen_random(&GenSpec::random(4, 2, 3, 0)).is_err());
    }

    #[test]
    fn dense_and_sparse_paths_are_connected() {
        for (n, m) in [(10, 9), (10, 20), (10, 40), (10, 45)] {
            let net = gen_random(&GenSpec::random(n, m, 5, 3)).unwrap();
            assert_eq!(net.edge_count(), m);
            assert!(validate(&net).is_valid(), "n={n} m={m}");
        }
    }

    #[test]
    fn constant_range_is_perturbed() {
        let spec = GenSpec { weight_range: (5, 5), ..GenSpec::random(4, 5, 3, 1) };
        let net = gen_random(&spec).unwrap();
        assert!(net.meta.perturbed);
        assert!(validate(&net).is_valid());
    }

    #[test]
    fn injected_absence_keeps_validity() {
        let net = gen_random(&GenSpec::random(8, 16, 6, 11)).unwrap();
        let with = inject_absence(&net, 5, 11).unwrap();
        assert!(with.has_absence());
        assert!(validate(&with).is_valid());
    }

    #[test]
    fn stationary_pair_has_constant_weight() {
        let paths = vec![vec![Waypoint::new(1, 0, 0)], vec![Waypoint::new(1, 2, 0)]];
        let net = trajectory_network(&paths, 3, &Rational::from_int(5)).unwrap();
        assert_eq!(net.edge_count(), 1);
        assert!(net.edge(0).weights.values().all(|v| v == &Rational::from_int(4)));
    }

    #[test]
    fn converging_pair_samples_squared_distance() {
        let paths = vec![vec![Waypoint::new(1, 0, 0)], vec![Waypoint::new(1, 3, 0), Waypoint::new(2, 1, 0)]];
        let net = trajectory_network(&paths, 2, &Rational::from_int(5)).unwrap();
        let values: Vec<_> = net.edge(0).weights.values().cloned().collect();
        assert_eq!(values, vec![Rational::from_int(9), Rational::from_int(1)]);
        let mid = net.edge(0).weight_at(&"1.5".parse().unwrap()).unwrap();
        assert_eq!(mid, Rational::from_int(5));
    }

    #[test]
    fn sensor_layout_matches_expected_topology() {
        // Node 4 only ever comes near node 2; nodes 0 and 3 stay far apart.
        let at = |x, y| vec![Waypoint::new(1, x, y)];
        let paths = vec![at(0, 0), at(10, 0), at(5, 8), at(15, 8), at(5, 18)];
        let net = trajectory_network(&paths, 4, &Rational::from_int(11)).unwrap();
        let pairs: Vec<(usize, usize)> = net.edges().iter().map(|e| (e.u, e.v)).collect();
        assert!(!pairs.contains(&(0, 3)));
        assert_eq!(pairs.iter().filter(|p| p.0 == 4 || p.1 == 4).collect::<Vec<_>>(), vec![&(2, 4)]);
        assert_eq!(net.edge_count(), 6);
    }

    #[test]
    fn leaving_range_creates_absence() {
        let near = vec![Waypoint::new(1, 0, 0)];
        let away =
            vec![Waypoint::new(1, 1, 0), Waypoint::new(2, 50, 0), Waypoint::new(3, 50, 0), Waypoint::new(4, 1, 0)];
        let third = vec![Waypoint::new(1, 0, 1)];
        let relay = vec![Waypoint::new(1, 25, 0)];
        let net = trajectory_network(&[near, away, third, relay], 4, &Rational::from_int(30)).unwrap();
        let e = net.edges().iter().find(|e| (e.u, e.v) == (0, 1)).unwrap();
        assert_eq!(e.weights.absence(), &[(Rational::from_int(2), Rational::from_int(3))]);
    }

    #[test]
    fn random_trajectory_is_deterministic() {
        let spec = GenSpec { kind: GenKind::Trajectory { waypoints: 3, radius: 60 }, ..GenSpec::random(6, 0, 5, 21) };
        match gen_trajectory(&spec) {
            Ok(net) => {
                assert_eq!(net, gen_trajectory(&spec).unwrap());
                for e in net.edges() {
                    assert!(e.weights.values().all(|v| v >= &Rational::zero()));
                }
            }
            Err(Error::Disconnected { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
