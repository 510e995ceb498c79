use proptest::prelude::*;
use tasep_shocks::backwards::{reconstruct, reconstruct_from_trajectories};
use tasep_shocks::initial::{flat_ic, step_ic};
use tasep_shocks::lattice::{generate_tape, reference, run, simulate, simulate_coupled, EventTape, SiteWindow};
use tasep_shocks::{Density, LabelRange, ParticleConfiguration};

fn config_from_gaps(first_label: i64, top: i64, gaps: &[i64]) -> ParticleConfiguration {
    let mut x = top;
    let mut pos = vec![x];
    for g in gaps {
        x -= g;
        pos.push(x);
    }
    ParticleConfiguration::new(first_label, pos).unwrap()
}

fn tape_for(seed: u64, c: &ParticleConfiguration, until: f64) -> EventTape {
    generate_tape(seed, SiteWindow::covering(c.leftmost() - 3, c.rightmost(), until).unwrap()).unwrap()
}

fn arb_config() -> impl Strategy<Value = ParticleConfiguration> {
    (-5i64..5, -3i64..3, prop::collection::vec(1i64..4, 0..14)).prop_map(|(l, top, gaps)| config_from_gaps(l, top, &gaps))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn matches_reference_sweep(c in arb_config(), seed in any::<u64>(), until in 0.0f64..25.0, from_frac in 0.0f64..0.5) {
        let tape = tape_for(seed, &c, until);
        let from = until * from_frac;
        let fast = run(&c, &tape, from, until, true).unwrap();
        let slow = reference::sweep(&c, &tape, from, until).unwrap();
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn exclusion_at_every_event(c in arb_config(), seed in any::<u64>()) {
        let tape = tape_for(seed, &c, 20.0);
        let sim = run(&c, &tape, 0.0, 20.0, false).unwrap();
        let traj = &sim.trajectories;
        let mut times: Vec<f64> = c.labels().flat_map(|n| traj.jump_times(n).to_vec()).collect();
        times.push(0.0);
        for t in times {
            let xs: Vec<i64> = c.labels().map(|n| traj.position(n, t)).collect();
            prop_assert!(xs.windows(2).all(|w| w[1] < w[0]), "order broken at {}", t);
        }
    }

    #[test]
    fn domination_persists(b in arb_config(), shifts in prop::collection::vec(0i64..4, 15), seed in any::<u64>()) {
        let mut a_pos: Vec<i64> = Vec::new();
        for (i, &x) in b.positions().iter().enumerate() {
            let cand = x + shifts[i];
            a_pos.push(match a_pos.last() { Some(&prev) => cand.min(prev - 1), None => cand });
        }
        let a = ParticleConfiguration::new(b.first_label(), a_pos).unwrap();
        prop_assert!(a.dominates(&b));
        let tape = tape_for(seed, &a, 15.0);
        let out = simulate_coupled(&[a, b], &tape, 15.0).unwrap();
        prop_assert!(out[0].0.dominates(&out[1].0));
    }

    #[test]
    fn thinning_pushes_right(c in arb_config(), drop in 0usize..14, seed in any::<u64>()) {
        prop_assume!(c.len() >= 2);
        let k = drop % (c.len() - 1) + 1;
        // Remove one particle; labels above it shift down by one to stay contiguous.
        let mut pos = c.positions().to_vec();
        pos.remove(k);
        let thin = ParticleConfiguration::new(c.first_label(), pos).unwrap();
        let tape = tape_for(seed, &c, 15.0);
        let (full, _) = simulate(&c, &tape, 15.0).unwrap();
        let (sparse, _) = simulate(&thin, &tape, 15.0).unwrap();
        for n in c.first_label()..c.first_label() + k as i64 {
            prop_assert_eq!(full.position(n), sparse.position(n));
        }
        for n in c.first_label() + k as i64 + 1..=c.last_label() {
            prop_assert!(sparse.position(n - 1).unwrap() >= full.position(n).unwrap());
        }
    }

    #[test]
    fn window_extension_invariance(c in arb_config(), seed in any::<u64>(), extra in 1i64..40) {
        let tape = tape_for(seed, &c, 12.0);
        let w = tape.window();
        let big = tape.with_window(SiteWindow::new(w.left() - extra, w.right() + extra, 30.0).unwrap()).unwrap();
        let a = run(&c, &tape, 0.0, 12.0, true).unwrap();
        let b = run(&c, &big, 0.0, 12.0, true).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn determinism(c in arb_config(), seed in any::<u64>()) {
        let tape = tape_for(seed, &c, 10.0);
        prop_assert_eq!(simulate(&c, &tape, 10.0).unwrap(), simulate(&c, &tape, 10.0).unwrap());
    }

    #[test]
    fn log_and_clock_routes_agree(c in arb_config(), seed in any::<u64>(), t_frac in 0.05f64..1.0) {
        let until = 20.0;
        let tape = tape_for(seed, &c, until);
        let sim = run(&c, &tape, 0.0, until, true).unwrap();
        let log = sim.suppressions.as_ref().unwrap();
        let t = until * t_frac;
        for n in c.labels() {
            let a = reconstruct(n, t, log).unwrap();
            let b = reconstruct_from_trajectories(n, t, &sim.trajectories, &tape).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn suppression_entries_are_blocked_rings(c in arb_config(), seed in any::<u64>()) {
        let tape = tape_for(seed, &c, 10.0);
        let sim = run(&c, &tape, 0.0, 10.0, true).unwrap();
        let traj = &sim.trajectories;
        for e in sim.suppressions.unwrap().entries() {
            let site = traj.position_before(e.label, e.time);
            prop_assert!(tape.site_rings(site, 0.0, 10.0).contains(&e.time));
            prop_assert_eq!(traj.position_before(e.label - 1, e.time), site + 1);
        }
    }
}

#[test]
fn step_release_identities_on_flat_data() {
    let rho = Density::new(1, 2).unwrap();
    let t = 30.0;
    for seed in 0..20u64 {
        let base = flat_ic(rho, 0, LabelRange::new(-60, 12).unwrap()).unwrap();
        let tape = tape_for(seed, &base, t);
        let check = tasep_shocks::backwards::IdentityCheck { taus: vec![0.0, 7.5, 15.0, 29.0], scan_depth: 60 };
        let r = tasep_shocks::backwards::verify_eq26(8, t, &tape, &base, &check).unwrap();
        assert!(r.is_clean(), "seed {seed}: {:?}", r.violations);
    }
}

#[test]
fn single_particle_is_poisson() {
    let t = 9.0;
    let reps = 4000u64;
    let c = step_ic(0, 1).unwrap();
    let mut sum = 0.0;
    for s in 0..reps {
        let tape = tape_for(s, &c, t);
        sum += simulate(&c, &tape, t).unwrap().0.position(1).unwrap() as f64;
    }
    let mean = sum / reps as f64;
    assert!((mean - t).abs() < 3.0 * (t / reps as f64).sqrt(), "mean {mean}");
}
