//! Limit law at a few points of the merging-shock window.

use tasep_shocks::initial::DensityTriple;
use tasep_shocks::scaling::{frame, product_prediction};
use tasep_shocks::tracy_widom::TwEvaluator;

fn main() -> tasep_shocks::Result<()> {
    let d = DensityTriple::from_f64(0.1, 0.4, 0.8, 700)?;
    let tw = TwEvaluator::goe(64)?;
    for (u, tau) in [(0.0, 0.0), (1.0, 0.0), (0.0, 2.0), (-1.0, -2.0)] {
        let fr = frame(&d, u, tau)?;
        print!("u = {u:>4}, tau = {tau:>4} (N = {}, t = {:.1}):", fr.label, fr.time);
        for s in [-2.0, 0.0, 2.0] {
            print!(" F({s}) = {:.4}", product_prediction(&d, u, tau, s, &tw)?);
        }
        println!();
    }
    Ok(())
}
