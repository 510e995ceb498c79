//! Fraction of backwards paths leaving the tube around the characteristic.

use tasep_shocks::harness::{run_localization, RunSettings};
use tasep_shocks::initial::Density;

fn main() -> tasep_shocks::Result<()> {
    let rho = Density::new(1, 2)?;
    for t in [100.0, 200.0, 400.0] {
        let run = run_localization(rho, 0.05, t, &RunSettings::new(200, 3))?;
        let r = &run.report;
        println!(
            "t = {t:>5}: half width {:>6.1}, exit fraction {:.3} ± {:.3}",
            r.metric("half_width").unwrap(),
            r.metric("exit_fraction").unwrap(),
            r.metric("standard_error").unwrap()
        );
    }
    Ok(())
}
