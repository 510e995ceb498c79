mod common;

use common::{airy_by_ode, painleve_tracy_widom, two_particle_law};

#[test]
fn ode_oracle_reproduces_reference_values() {
    // Independently tabulated values.
    let table = [
        (-10.0, 0.040_241_238_486_443_19, 0.996_265_044_132_790_1),
        (-1.0, 0.535_560_883_292_352_1, -0.010_160_567_116_645_21),
        (1.0, 0.135_292_416_312_881_4, -0.159_147_441_296_793_2),
        (10.0, 1.104_753_255_289_868_6e-10, -3.520_633_676_738_924e-10),
    ];
    for (x, ai, aip) in table {
        let (a, ap) = airy_by_ode(x);
        assert!((a - ai).abs() <= 1e-12 * ai.abs(), "Ai({x}) = {a}");
        assert!((ap - aip).abs() <= 1e-11 * aip.abs(), "Ai'({x}) = {ap}");
    }
}

#[test]
fn painleve_oracle_is_a_distribution() {
    let rows = painleve_tracy_widom(&[-6.0, -4.0, -2.0, 0.0, 2.0, 4.0]);
    for w in rows.windows(2) {
        assert!(w[0].1 < w[1].1 && w[0].2 < w[1].2);
    }
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r.1) && (0.0..=1.0).contains(&r.2)));
    assert!(rows[5].1 > 0.99 && rows[5].2 > 0.999);
}

#[test]
fn ctmc_law_sums_to_one() {
    let law = two_particle_law(0, -1, -1, 10, 1.0);
    let total: f64 = law.values().sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(law.keys().all(|(a, b)| b < a));
}
