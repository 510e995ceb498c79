use tasep_shocks::backwards::*;
use tasep_shocks::initial::{flat_ic, Density, LabelRange};
use tasep_shocks::lattice::{generate_tape, run, SiteWindow};
use tasep_shocks::rng::replica_seed;

#[test]
fn path_follows_the_characteristic_label() {
    // N(u) tracks rho^2 u on flat density one half.
    let rho = Density::new(1, 2).unwrap();
    let t: f64 = 500.0;
    let label = 125;
    let config = flat_ic(rho, 0, LabelRange::new(-260, label).unwrap()).unwrap();
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t).unwrap();
    let mut mid: Vec<i64> = (0..41)
        .map(|i| {
            let tape = generate_tape(replica_seed(77, i), window).unwrap();
            let sim = run(&config, &tape, 0.0, t, true).unwrap();
            let path = reconstruct_from_trajectories(label, t, &sim.trajectories, &tape).unwrap();
            assert_eq!(path, reconstruct(label, t, sim.suppressions.as_ref().unwrap()).unwrap());
            path.label_at(t / 2.0)
        })
        .collect();
    mid.sort_unstable();
    let median = mid[mid.len() / 2] as f64;
    assert!((median - 0.25 * t / 2.0).abs() <= 5.0 * t.powf(2.0 / 3.0));
}

#[test]
fn path_is_monotone_and_ends_at_the_label() {
    let rho = Density::new(1, 3).unwrap();
    let t = 120.0;
    let config = flat_ic(rho, 2, LabelRange::new(-80, 30).unwrap()).unwrap();
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t).unwrap();
    let tape = generate_tape(5, window).unwrap();
    let sim = run(&config, &tape, 0.0, t, false).unwrap();
    let path = reconstruct_from_trajectories(30, t, &sim.trajectories, &tape).unwrap();
    assert_eq!(path.label_at(t), 30);
    let segs = path.segments();
    for w in segs.windows(2) {
        assert_eq!(w[1].0, w[0].0 + 1);
        assert_eq!(w[0].2, w[1].1);
    }
    let trace = position_trace(&path, &sim.trajectories).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().starts_with("u,N(u),x\n"));
    // The traced positions move right by at most one site at a time.
    for w in trace.points.windows(2) {
        assert!(w[1].x - w[0].x <= 1);
    }
}

#[test]
fn restart_identities_hold_for_a_sparse_profile() {
    let rho = Density::new(1, 4).unwrap();
    let t = 60.0;
    let label = 4;
    let depth = default_scan_depth(0.25, t);
    let base = flat_ic(rho, 0, LabelRange::new(label - depth - 20, label).unwrap()).unwrap();
    let window = SiteWindow::covering(base.leftmost(), base.rightmost(), t).unwrap();
    let check = IdentityCheck { taus: vec![0.0, 15.0, 30.0, 59.0], scan_depth: depth };
    for seed in 0..15 {
        let report = verify_eq26(label, t, &generate_tape(seed, window).unwrap(), &base, &check).unwrap();
        assert!(report.is_clean(), "{:?}", report.violations);
    }
}
