//! Reconstructs the backwards path of one particle and prints it as CSV.

use tasep_shocks::backwards::{position_trace, reconstruct, reconstruct_from_trajectories};
use tasep_shocks::initial::{flat_ic, Density, LabelRange};
use tasep_shocks::lattice::{generate_tape, run, SiteWindow};

fn main() -> tasep_shocks::Result<()> {
    let rho = Density::new(1, 2)?;
    let (t, label) = (100.0, 25);
    let config = flat_ic(rho, 0, LabelRange::new(-80, label)?)?;
    let tape = generate_tape(11, SiteWindow::covering(config.leftmost(), config.rightmost(), t)?)?;
    let sim = run(&config, &tape, 0.0, t, true)?;

    let from_log = reconstruct(label, t, sim.suppressions.as_ref().expect("logged"))?;
    let path = reconstruct_from_trajectories(label, t, &sim.trajectories, &tape)?;
    assert_eq!(from_log, path);
    eprintln!("N({t}) = {label}, N(0) = {}, {} steps", path.initial_label(), path.breakpoints().len());
    position_trace(&path, &sim.trajectories)?.write_csv(std::io::stdout().lock())
}
