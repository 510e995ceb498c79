//! Exceedance probability of the displacement along the characteristic.

use tasep_shocks::harness::{run_slow_decorrelation, RunSettings};
use tasep_shocks::initial::Density;

fn main() -> tasep_shocks::Result<()> {
    let rho = Density::new(1, 2)?;
    for t in [100.0, 200.0, 400.0] {
        let run = run_slow_decorrelation(rho, t, 0.8, 0.5, &RunSettings::new(300, 9))?;
        let r = &run.report;
        println!(
            "t = {t:>5}: lag {:>6.1}, P(|dx| >= 0.5 t^(1/3)) = {:.3} ± {:.3}",
            r.metric("lag").unwrap(),
            r.metric("probability").unwrap(),
            r.metric("standard_error").unwrap()
        );
    }
    Ok(())
}
