//! Step profile: GUE comparison and the asymmetry of the two tails.

use tasep_shocks::harness::{run_step_tails, RunSettings};

fn main() -> tasep_shocks::Result<()> {
    let run = run_step_tails(0.25, 400.0, &RunSettings::new(500, 13))?;
    let r = &run.report;
    println!("KS to F2(s / {:.4}): {:.4}", r.metric("sigma").unwrap(), r.ks.unwrap());
    println!("lower tail decay rate {:.3}", r.metric("tail_slope_negative_side").unwrap());
    println!("upper tail decay rate {:.3}", r.metric("tail_slope_positive_side").unwrap());
    let e = run.ecdf()?;
    for p in [0.01, 0.1, 0.5, 0.9, 0.99] {
        println!("quantile {p:>4}: {:>7.3}", e.quantile(p));
    }
    Ok(())
}
