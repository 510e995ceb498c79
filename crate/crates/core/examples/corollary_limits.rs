//! How the three-factor law collapses to two factors away from the merging time.

use tasep_shocks::initial::DensityTriple;
use tasep_shocks::scaling::{corollary_limits, ShockCase};
use tasep_shocks::tracy_widom::TwEvaluator;

fn main() -> tasep_shocks::Result<()> {
    let d = DensityTriple::from_f64(0.1, 0.4, 0.8, 700)?;
    let tw = TwEvaluator::goe(64)?;
    for case in [ShockCase::A, ShockCase::B, ShockCase::C] {
        let sign = if case == ShockCase::C { 1.0 } else { -1.0 };
        println!("case {case:?}");
        for tau in [5.0, 20.0, 50.0, 100.0, 200.0] {
            let lim = corollary_limits(&d, 0.0, sign * tau, 0.0, case, &tw)?;
            println!("  |tau| = {tau:>5}: three factors {:.10}, two factors {:.10}, gap {:.2e}", lim.full_product, lim.two_factor, lim.residual);
        }
    }
    Ok(())
}
