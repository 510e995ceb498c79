//! Prints the GOE and GUE Tracy-Widom distribution functions on a coarse grid.

use tasep_shocks::tracy_widom::TwEvaluator;

fn main() -> tasep_shocks::Result<()> {
    let goe = TwEvaluator::goe(64)?;
    let gue = TwEvaluator::gue(64)?;
    println!("{:>6} {:>14} {:>14}", "s", "F1(s)", "F2(s)");
    for k in 0..=16 {
        let s = -6.0 + 0.5 * k as f64;
        println!("{s:>6.1} {:>14.10} {:>14.10}", goe.cdf(s)?, gue.cdf(s)?);
    }
    Ok(())
}
