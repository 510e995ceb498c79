//! Runs the three-density profile once and prints particles around the merging point.

use tasep_shocks::initial::{triple_ic, DensityTriple, LabelRange};
use tasep_shocks::lattice::{generate_tape, run, SiteWindow};
use tasep_shocks::scaling::frame;

fn main() -> tasep_shocks::Result<()> {
    let d = DensityTriple::from_f64(0.1, 0.4, 0.8, 140)?;
    let fr = frame(&d, 0.0, 0.0)?;
    let config = triple_ic(&d, LabelRange::new(-d.middle_count() - 250, fr.label + 20)?)?;
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), fr.time)?;
    let tape = generate_tape(2024, window)?;
    let sim = run(&config, &tape, 0.0, fr.time, false)?;

    println!("T = {}, t = {:.1}, tracked label N = {}, centre X = {:.1}", d.big_t(), fr.time, fr.label, fr.center);
    println!("{:>6} {:>8} {:>8}", "label", "x(0)", "x(t)");
    for n in fr.label - 5..=fr.label + 5 {
        println!("{n:>6} {:>8} {:>8}", config.position(n).unwrap(), sim.final_config.position(n).unwrap());
    }
    let x = sim.final_config.position(fr.label).unwrap();
    println!("rescaled fluctuation s = {:.3}", fr.rescale(x));
    println!("total jumps: {}", sim.trajectories.total_jumps());
    Ok(())
}
