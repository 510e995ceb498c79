//! Shows the three-way minimum identity on one shared clock realization.

use tasep_shocks::initial::{decomposition_ics, triple_ic, DensityTriple, LabelRange};
use tasep_shocks::lattice::{generate_tape, run, SiteWindow};

fn main() -> tasep_shocks::Result<()> {
    let d = DensityTriple::from_f64(0.1, 0.4, 0.8, 100)?;
    let t = 143.0;
    let range = LabelRange::new(-d.middle_count() - 130, 12)?;
    let full = triple_ic(&d, range)?;
    let parts = decomposition_ics(&d, range)?;
    let all = [&full, &parts.first, &parts.second, &parts.third];
    let left = all.iter().map(|c| c.leftmost()).min().unwrap();
    let right = all.iter().map(|c| c.rightmost()).max().unwrap();
    let tape = generate_tape(7, SiteWindow::covering(left, right, t)?)?;
    let sims: Vec<_> = all.iter().map(|c| run(c, &tape, 0.0, t, false)).collect::<tasep_shocks::Result<_>>()?;

    println!("{:>5} {:>6} {:>6} {:>6} {:>6}", "label", "x", "x1", "x2", "x3");
    for n in [1, 4, 8, 12] {
        let at = |k: usize| sims[k].final_config.position(n).map_or("-".to_string(), |x| x.to_string());
        let parts: Vec<i64> = sims[1..].iter().filter_map(|s| s.final_config.position(n)).collect();
        let x = sims[0].final_config.position(n).unwrap();
        assert_eq!(x, *parts.iter().min().unwrap());
        println!("{n:>5} {x:>6} {:>6} {:>6} {:>6}", at(1), at(2), at(3));
    }
    Ok(())
}
