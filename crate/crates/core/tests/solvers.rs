use tsmst_core::eio::eio;
use tsmst_core::harness::sample::sensor_network_perturbed;
use tsmst_core::harness::{gen_random, inject_absence, verify, GenSpec, VerifyOptions};
use tsmst_core::tso::{tso, tso_incremental_sort};

#[test]
fn eio_matches_tso_on_small_fleet() {
    for seed in 0..60u64 {
        let n = 4 + (seed % 9) as usize;
        let m = (n - 1 + (seed as usize * 7) % (n * (n - 1) / 2 - n + 2)).min(n * (n - 1) / 2);
        let k = 3 + (seed % 8) as u32;
        let mut net = gen_random(&GenSpec::random(n, m, k, seed)).unwrap();
        if seed % 3 == 0 {
            net = inject_absence(&net, 3, seed).unwrap();
        }
        let a = tso(&net).unwrap();
        let b = eio(&net).unwrap();
        let c = tso_incremental_sort(&net).unwrap();
        assert!(a.same_partition(&b), "seed {seed}: tso {} intervals, eio {}", a.intervals.len(), b.intervals.len());
        assert!(a.same_partition(&c), "seed {seed}: incremental differs");
        let report = verify(&net, &a, &VerifyOptions::default()).unwrap();
        assert!(report.matched, "seed {seed}: {:?}", report.divergence);
    }
}

#[test]
fn sensor_example_has_four_intervals() {
    let net = sensor_network_perturbed();
    let r = eio(&net).unwrap();
    for iv in &r.intervals {
        println!("{} {} {:?}", iv.start.to_f64(), iv.end.to_f64(), iv.tree_edges());
    }
    assert_eq!(r.intervals.len(), 4);
}
