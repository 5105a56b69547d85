//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tsmst_core::eio::{eio_with, EioOptions, TraceEntry};
use tsmst_core::geometry::Timeline;
use tsmst_core::harness::sample::{sensor_network, sensor_network_perturbed};
use tsmst_core::harness::{filter_stats, gen_random, inject_absence, oracle_enumerate, verify, GenSpec, VerifyOptions};
use tsmst_core::model::TemporalNetwork;
use tsmst_core::result::TsmstResult;
use tsmst_core::static_mst::{kruskal_at, kruskal_by_keys, modified_reverse_delete};
use tsmst_core::tso::tso;
use tsmst_core::{eio::eio, Rational};

const EQUIVALENCE_NETWORKS: usize = 500;
const EQUIVALENCE_BUDGET: Duration = Duration::from_secs(5 * 60);
const ORACLE_NETWORKS: usize = 100;
const ORACLE_SAMPLES: usize = 25;
const ORACLE_BUDGET: Duration = Duration::from_secs(2 * 60);
const AUDIT_NETWORKS: usize = 150;
const FILTER_BUDGET: Duration = Duration::from_secs(10 * 60);
const REFERENCE_COMBINED_PRUNED: f64 = 87.75;
const COMBINED_FLOOR: f64 = 80.0;
const COMBINED_TOLERANCE: f64 = 10.0;
const SPEEDUP_FLOOR: f64 = 3.0;
const DOUBLING_RANGE: (f64, f64) = (1.5, 2.5);
const PERFORMANCE_BUDGET: Duration = Duration::from_secs(15 * 60);
const TIMING_REPEATS: usize = 3;
const STRUCTURE_NETWORKS: usize = 200;
const ABSENCE_NETWORKS: usize = 50;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_spec(rng: &mut ChaCha8Rng, nodes: (usize, usize), horizon: (u32, u32), seed: u64) -> GenSpec {
    let n = rng.gen_range(nodes.0..=nodes.1);
    let cap = n * (n - 1) / 2;
    let m = rng.gen_range(n.min(cap)..=(3 * n).min(cap));
    let k = rng.gen_range(horizon.0..=horizon.1);
    GenSpec::random(n, m.max(n - 1), k, seed)
}

/// A network with at least one absence interval that never disconnects it.
fn with_absence(net: &TemporalNetwork, seed: u64) -> TemporalNetwork {
    for attempt in 0..20 {
        let candidate = inject_absence(net, 3, seed * 31 + attempt).expect("injection keeps validity");
        if candidate.has_absence() {
            return candidate;
        }
    }
    net.clone()
}

fn equivalence() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7150);
    let (mut mismatches, mut with_gaps, mut intervals) = (Vec::new(), 0, 0);
    for i in 0..EQUIVALENCE_NETWORKS {
        let spec = random_spec(&mut rng, (5, 60), (3, 40), 1_000 + i as u64);
        let mut net = gen_random(&spec).expect("generator");
        if i % 10 == 0 {
            net = with_absence(&net, spec.seed);
            with_gaps += usize::from(net.has_absence());
        }
        let (a, b) = (tso(&net).expect("tso"), eio(&net).expect("eio"));
        intervals += a.intervals.len();
        if !a.same_partition(&b) {
            mismatches.push(spec.seed);
        }
    }
    let elapsed = started.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < EQUIVALENCE_BUDGET,
        format!(
            "{EQUIVALENCE_NETWORKS} networks ({with_gaps} with absences, {intervals} intervals), \
             mismatches {} {:?}, {:.1}s (budget {}s)",
            mismatches.len(),
            mismatches,
            elapsed.as_secs_f64(),
            EQUIVALENCE_BUDGET.as_secs()
        ),
    )
}

fn oracle_optimality() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1);
    let options = VerifyOptions { samples_per_interval: ORACLE_SAMPLES, oracle_max_nodes: 7, seed: 9 };
    let (mut failures, mut samples) = (Vec::new(), 0);
    for i in 0..ORACLE_NETWORKS {
        let n = rng.gen_range(3..=7usize);
        let cap = n * (n - 1) / 2;
        let m = rng.gen_range(n - 1..=cap);
        let k = rng.gen_range(3..=10u32);
        let net = gen_random(&GenSpec::random(n, m, k, 2_000 + i as u64)).expect("generator");
        let report = verify(&net, &eio(&net).expect("eio"), &options).expect("verify");
        samples += report.oracle_samples;
        if !report.matched {
            failures.push((i, report.divergence.map(|d| d.kind)));
        }
    }
    let elapsed = started.elapsed();
    outcome(
        failures.is_empty() && samples > 0 && elapsed < ORACLE_BUDGET,
        format!(
            "{ORACLE_NETWORKS} networks, {samples} oracle samples, mismatches or ties {} {:?}, {:.1}s",
            failures.len(),
            failures,
            elapsed.as_secs_f64()
        ),
    )
}

fn worked_example() -> Outcome {
    let raw = sensor_network();
    let net = sensor_network_perturbed();
    let result = eio(&net).expect("eio");
    let boundaries: Vec<Rational> = result.intervals.iter().skip(1).map(|iv| iv.start.clone()).collect();
    let near = |x: &Rational, target: f64| (x.to_f64() - target).abs() < 0.01;
    let expected = [1.5, 8.0 / 3.0, 11.0 / 3.0];
    let boundaries_ok = boundaries.len() == 3 && boundaries.iter().zip(expected).all(|(b, t)| near(b, t));
    let tso_ok = tso(&net).expect("tso").same_partition(&result);

    let at = |t: i64| oracle_enumerate(&raw, &[Rational::from_int(t)]).expect("oracle").remove(0);
    let costs: Vec<String> = (1..=4).map(|t| at(t).cost.to_string()).collect();
    let pattern_ok = at(2).is_strict() && !at(4).is_strict();

    let mut consistent = true;
    for t in 1..=4 {
        let time = Rational::from_int(t);
        let ans = oracle_enumerate(&net, std::slice::from_ref(&time)).expect("oracle").remove(0);
        let reported = result.intervals[result.interval_index_at(&time).expect("covered")].cost_at(&time);
        consistent &= reported.as_ref() == Some(&ans.cost);
    }
    let report = verify(&net, &result, &VerifyOptions::default()).expect("verify");

    outcome(
        result.intervals.len() == 4 && boundaries_ok && tso_ok && pattern_ok && consistent && report.matched,
        format!(
            "{} intervals, boundaries {:?}, sampled costs {:?}, strict at t=2 {}, tie at t=4 {}, \
             perturbed costs match oracle {consistent}, oracle check {}",
            result.intervals.len(),
            boundaries.iter().map(|b| format!("{:.4}", b.to_f64())).collect::<Vec<_>>(),
            costs,
            at(2).is_strict(),
            !at(4).is_strict(),
            report.matched
        ),
    )
}

/// Kruskal with the edges of events processed so far at this instant in
/// their after-order, every other edge in its before-order. Only edges
/// present on both sides take part.
fn kruskal_mid_instant(tl: &Timeline, entry: &TraceEntry, after: &dyn Fn(&Rational) -> bool) -> Option<Vec<usize>> {
    let probe = tl.probe(&entry.time);
    let keyed: Vec<_> = (0..tl.edge_count())
        .filter(|&e| probe.present_before(e) && probe.present_after(e))
        .map(|e| {
            let before = probe.before_key(e).expect("present before");
            let key = if after(&before.0) { probe.after_key(e).expect("present after") } else { before };
            (key, e)
        })
        .collect();
    kruskal_by_keys(tl.node_count(), tl.all_endpoints(), keyed).map(|t| t.edges().collect())
}

fn filters() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF117);
    let (mut audited, mut violations, mut stale) = (0usize, Vec::new(), 0usize);
    let options = EioOptions { trace: true, ..EioOptions::default() };
    for i in 0..AUDIT_NETWORKS {
        let spec = random_spec(&mut rng, (5, 30), (3, 20), 3_000 + i as u64);
        let mut net = gen_random(&spec).expect("generator");
        if i % 5 == 0 {
            net = with_absence(&net, spec.seed);
        }
        let run = eio_with(&net, &options).expect("eio");
        let tl = Timeline::new(&net).expect("timeline");
        for entry in run.trace.iter().filter(|e| e.disposition.is_pruned()) {
            let pre = kruskal_mid_instant(&tl, entry, &|v| v < &entry.value);
            let post = kruskal_mid_instant(&tl, entry, &|v| v <= &entry.value);
            audited += 1;
            if pre != post {
                violations.push((spec.seed, entry.time.to_string(), entry.disposition.label()));
            }
            if pre.as_deref() != Some(&entry.tree_before.edges().collect::<Vec<_>>()[..]) {
                stale += 1;
            }
        }
    }

    let big = gen_random(&GenSpec::random(100, 650, 50, 42)).expect("generator");
    let row = filter_stats(&big).expect("stats");
    let shares = BTreeMap::from([
        ("only_tree", row.only_tree),
        ("only_non_tree", row.only_non_tree),
        ("different_bcc", row.different_bcc),
        ("no_order_change", row.no_order_change),
    ]);
    let non_tree_largest = shares.values().all(|&s| s <= row.only_non_tree);
    let combined_ok = row.total > COMBINED_FLOOR && (row.total - REFERENCE_COMBINED_PRUNED).abs() <= COMBINED_TOLERANCE;
    let elapsed = started.elapsed();
    outcome(
        violations.is_empty() && stale == 0 && non_tree_largest && combined_ok && elapsed < FILTER_BUDGET,
        format!(
            "audited {audited} pruned events on {AUDIT_NETWORKS} networks, violations {} {:?}, \
             tree/Kruskal disagreements {stale}; n=100 m=650 K=50: {} events, shares {:?}, \
             combined {:.2}% (reference {REFERENCE_COMBINED_PRUNED}%), {:.1}s",
            violations.len(),
            violations.iter().take(5).collect::<Vec<_>>(),
            row.events,
            shares.iter().map(|(k, v)| format!("{k}={v:.2}")).collect::<Vec<_>>(),
            row.total,
            elapsed.as_secs_f64()
        ),
    )
}

fn min_time(net: &TemporalNetwork, solve: fn(&TemporalNetwork) -> TsmstResult) -> f64 {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("pool");
    (0..TIMING_REPEATS)
        .map(|_| {
            let started = Instant::now();
            std::hint::black_box(pool.install(|| solve(net)));
            started.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn performance() -> Outcome {
    let started = Instant::now();
    let net = gen_random(&GenSpec::random(100, 400, 30, 5)).expect("generator");
    let t_tso = min_time(&net, |n| tso(n).expect("tso"));
    let t_eio = min_time(&net, |n| eio(n).expect("eio"));
    let speedup = t_tso / t_eio;

    let sweep: Vec<(u32, f64)> = [10, 20, 40, 80]
        .into_iter()
        .map(|k| {
            let net = gen_random(&GenSpec::random(100, 400, k, 5)).expect("generator");
            (k, min_time(&net, |n| eio(n).expect("eio")))
        })
        .collect();
    let ratios: Vec<f64> = sweep.windows(2).map(|w| w[1].1 / w[0].1).collect();
    let linear = ratios.iter().all(|r| (DOUBLING_RANGE.0..=DOUBLING_RANGE.1).contains(r));
    let elapsed = started.elapsed();
    outcome(
        speedup >= SPEEDUP_FLOOR && linear && elapsed < PERFORMANCE_BUDGET,
        format!(
            "n=100 m=400 K=30: tso {t_tso:.3}s, eio {t_eio:.3}s, ratio {speedup:.1} (floor {SPEEDUP_FLOOR}); \
             eio over K {:?}, doubling ratios {:?} (range {DOUBLING_RANGE:?}); {:.1}s",
            sweep.iter().map(|(k, t)| format!("{k}:{t:.3}s")).collect::<Vec<_>>(),
            ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    )
}

fn structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5707);
    let mut problems: Vec<String> = Vec::new();
    for i in 0..STRUCTURE_NETWORKS {
        let spec = random_spec(&mut rng, (2, 40), (2, 15), 4_000 + i as u64);
        let net = gen_random(&spec).expect("generator");
        let (n, m) = (net.node_count(), net.edge_count());
        let one = Rational::one();
        let (tree, cycles) = modified_reverse_delete(&net, &one).expect("reverse delete");
        if cycles.len() != m + 1 - n {
            problems.push(format!("seed {}: {} fcycles, expected {}", spec.seed, cycles.len(), m + 1 - n));
        }
        if tree != kruskal_at(&net, &one).expect("kruskal") {
            problems.push(format!("seed {}: reverse delete differs from Kruskal", spec.seed));
        }
        let endpoints: Vec<(usize, usize)> = net.edges().iter().map(|e| (e.u, e.v)).collect();
        for result in [tso(&net).expect("tso"), eio(&net).expect("eio")] {
            for iv in &result.intervals {
                if let Err(msg) = iv.tree.check_spanning(n, &endpoints) {
                    problems.push(format!("seed {}: {msg}", spec.seed));
                }
            }
            if let Err(e) = result.check_partition(net.horizon()) {
                problems.push(format!("seed {}: {e}", spec.seed));
            }
        }
    }
    outcome(
        problems.is_empty(),
        format!(
            "{STRUCTURE_NETWORKS} networks, violations {} {:?}",
            problems.len(),
            problems.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn absence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB5E);
    let (mut mismatches, mut leaks, mut gaps) = (Vec::new(), Vec::new(), 0);
    let mut built = 0;
    let mut seed = 5_000u64;
    while built < ABSENCE_NETWORKS {
        seed += 1;
        let spec = random_spec(&mut rng, (5, 30), (3, 20), seed);
        let net = with_absence(&gen_random(&spec).expect("generator"), seed);
        if !net.has_absence() {
            continue;
        }
        built += 1;
        gaps += net.absence_interval_count();
        let (a, b) = (tso(&net).expect("tso"), eio(&net).expect("eio"));
        if !a.same_partition(&b) {
            mismatches.push(seed);
        }
        let tl = Timeline::new(&net).expect("timeline");
        for iv in &b.intervals {
            for e in iv.tree.edges() {
                if tl.gaps(e).iter().any(|(lo, hi)| lo < &iv.end && &iv.start < hi) {
                    leaks.push((seed, e));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty() && leaks.is_empty(),
        format!(
            "{ABSENCE_NETWORKS} networks with {gaps} absence intervals, tso/eio mismatches {} {:?}, \
             absent tree members {} {:?}",
            mismatches.len(),
            mismatches,
            leaks.len(),
            leaks.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("solver equivalence", equivalence),
        ("oracle optimality", oracle_optimality),
        ("worked example", worked_example),
        ("filter soundness and effectiveness", filters),
        ("performance ordering", performance),
        ("structural invariants", structure),
        ("absence handling", absence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
