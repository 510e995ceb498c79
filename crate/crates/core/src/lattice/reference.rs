//! Time-ordered sweep over the materialized tape.
//!
//! Slow and memory hungry; kept as an independent implementation of the
//! dynamics against which the fast solver is checked event for event.

use super::config::ParticleConfiguration;
use super::engine::{Simulation, Suppression, SuppressionLog, Trajectories};
use super::tape::EventTape;
use crate::error::{Error, Result};

pub fn sweep(config: &ParticleConfiguration, tape: &EventTape, from: f64, until: f64) -> Result<Simulation> {
    let w = *tape.window();
    if !(0.0 <= from && from <= until && until <= w.horizon()) {
        return Err(Error::contract("need 0 <= from <= until <= horizon"));
    }
    if config.leftmost() < w.left() || config.rightmost() > w.last_free_site() {
        return Err(Error::contract("configuration outside the window"));
    }
    let width = usize::try_from(w.width()).map_err(|_| Error::Capacity("window too wide to sweep".into()))?;
    let mut occupant: Vec<Option<usize>> = vec![None; width + 1];
    let slot = |site: i64| (site - w.left()) as usize;
    let mut pos = config.positions().to_vec();
    for (i, &x) in pos.iter().enumerate() {
        occupant[slot(x)] = Some(i);
    }
    let mut jumps: Vec<Vec<f64>> = vec![Vec::new(); pos.len()];
    let mut log = Vec::new();
    for ev in tape.events() {
        if ev.time <= from || ev.time > until {
            continue;
        }
        let Some(i) = occupant[slot(ev.site)] else { continue };
        let label = config.first_label() + i as i64;
        if ev.site < w.right() && occupant[slot(ev.site + 1)].is_some() {
            log.push(Suppression { time: ev.time, label });
            continue;
        }
        if ev.site >= w.last_free_site() {
            return Err(Error::Truncation { label, site: ev.site + 1, time: ev.time, right: w.right() });
        }
        occupant[slot(ev.site)] = None;
        occupant[slot(ev.site + 1)] = Some(i);
        pos[i] += 1;
        jumps[i].push(ev.time);
    }
    Ok(Simulation {
        final_config: ParticleConfiguration::new(config.first_label(), pos)?,
        trajectories: Trajectories::from_parts(config.first_label(), config.positions().to_vec(), jumps, from, until),
        suppressions: Some(SuppressionLog::from_entries(log)),
    })
}
