//! Label-sequential exact solver.
//!
//! Under the graphical construction the trajectory of particle `n` depends
//! only on the site clocks and on the trajectory of its blocker `n - 1`.
//! Particles are therefore resolved one at a time from the rightmost label,
//! each reading its blocker's recorded jump times. The result is identical,
//! event for event, to a time-ordered sweep of the tape with ties broken by
//! ascending site (see [`super::reference`]).

use super::config::ParticleConfiguration;
use super::tape::{EventTape, SiteClock};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A jump attempt of `label` blocked by `label - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suppression {
    pub time: f64,
    pub label: i64,
}

/// Blocked jump attempts, ordered by time then by ascending site.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuppressionLog {
    entries: Vec<Suppression>,
}

impl SuppressionLog {
    /// Wraps entries without checking their order.
    pub fn from_entries(entries: Vec<Suppression>) -> Self {
        SuppressionLog { entries }
    }

    pub fn entries(&self) -> &[Suppression] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_time_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].time <= w[1].time)
    }

    fn sort(&mut self) {
        // Equal times: larger label sits further left, so it comes first.
        self.entries.sort_unstable_by(|a, b| a.time.total_cmp(&b.time).then(b.label.cmp(&a.label)));
    }
}

/// Jump times of every particle over `(from, until]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectories {
    first_label: i64,
    start: Vec<i64>,
    offsets: Vec<usize>,
    jumps: Vec<f64>,
    from: f64,
    until: f64,
}

impl Trajectories {
    pub(crate) fn from_parts(first_label: i64, start: Vec<i64>, per_label: Vec<Vec<f64>>, from: f64, until: f64) -> Self {
        let mut offsets = Vec::with_capacity(per_label.len() + 1);
        offsets.push(0);
        let mut jumps = Vec::new();
        for j in per_label {
            jumps.extend(j);
            offsets.push(jumps.len());
        }
        Trajectories { first_label, start, offsets, jumps, from, until }
    }

    pub fn first_label(&self) -> i64 {
        self.first_label
    }

    pub fn last_label(&self) -> i64 {
        self.first_label + self.start.len() as i64 - 1
    }

    pub fn from_time(&self) -> f64 {
        self.from
    }

    pub fn until(&self) -> f64 {
        self.until
    }

    fn index(&self, label: i64) -> usize {
        assert!(
            (self.first_label..=self.last_label()).contains(&label),
            "label {label} outside {}..={}",
            self.first_label,
            self.last_label()
        );
        (label - self.first_label) as usize
    }

    pub fn start_position(&self, label: i64) -> i64 {
        self.start[self.index(label)]
    }

    /// Jump times of `label`, ascending; the k-th jump leaves `start + k`.
    pub fn jump_times(&self, label: i64) -> &[f64] {
        let i = self.index(label);
        &self.jumps[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Position after all rings at times `<= time` have been processed.
    pub fn position(&self, label: i64, time: f64) -> i64 {
        let j = self.jump_times(label);
        self.start_position(label) + j.partition_point(|&r| r <= time) as i64
    }

    /// Position after all rings at times `< time`.
    pub fn position_before(&self, label: i64, time: f64) -> i64 {
        let j = self.jump_times(label);
        self.start_position(label) + j.partition_point(|&r| r < time) as i64
    }

    pub fn final_position(&self, label: i64) -> i64 {
        self.start_position(label) + self.jump_times(label).len() as i64
    }

    pub fn total_jumps(&self) -> usize {
        self.jumps.len()
    }
}

/// Output of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Simulation {
    pub final_config: ParticleConfiguration,
    pub trajectories: Trajectories,
    /// Present when suppressions were requested.
    pub suppressions: Option<SuppressionLog>,
}

fn check_run(config: &ParticleConfiguration, tape: &EventTape, from: f64, until: f64) -> Result<()> {
    let w = tape.window();
    if !(from.is_finite() && from >= 0.0 && from <= until) {
        return Err(Error::contract(format!("need 0 <= from <= until, got from={from}, until={until}")));
    }
    if until > w.horizon() {
        return Err(Error::contract(format!("until {until} exceeds tape horizon {}", w.horizon())));
    }
    if config.leftmost() < w.left() || config.rightmost() > w.last_free_site() {
        return Err(Error::contract(format!(
            "particles span [{}, {}] but the window allows [{}, {}]",
            config.leftmost(),
            config.rightmost(),
            w.left(),
            w.last_free_site()
        )));
    }
    Ok(())
}

/// Runs `config` under `tape` over `(from, until]`.
pub fn run(config: &ParticleConfiguration, tape: &EventTape, from: f64, until: f64, log_suppressions: bool) -> Result<Simulation> {
    check_run(config, tape, from, until)?;
    let guard = tape.window().last_free_site();
    let start = config.positions();
    let n = start.len();
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    let mut jumps: Vec<f64> = Vec::with_capacity(n * ((until - from) as usize / 2 + 1));
    let mut finals = Vec::with_capacity(n);
    let mut log = Vec::new();
    let mut clock = SiteClock::default();

    for i in 0..n {
        let label = config.first_label() + i as i64;
        let mut pos = start[i];
        let mut now = from;
        let mut inclusive = false;
        let (b_start, b_lo, b_len) = if i > 0 { (start[i - 1], offsets[i - 1], offsets[i] - offsets[i - 1]) } else { (0, 0, 0) };
        // Jumps of the blocker strictly before the current ring.
        let mut b_done = 0usize;
        while let Some(r) = clock.next_ring(tape, pos, now, inclusive) {
            if r > until {
                break;
            }
            if i > 0 {
                while b_done < b_len && jumps[b_lo + b_done] < r {
                    b_done += 1;
                }
                if b_start + b_done as i64 == pos + 1 {
                    if log_suppressions {
                        log.push(Suppression { time: r, label });
                        now = r;
                    } else if b_done == b_len {
                        break;
                    } else {
                        // Rings up to and including the blocker's departure are all blocked.
                        now = jumps[b_lo + b_done];
                    }
                    inclusive = false;
                    continue;
                }
            }
            if pos >= guard {
                return Err(Error::Truncation { label, site: pos + 1, time: r, right: tape.window().right() });
            }
            pos += 1;
            jumps.push(r);
            now = r;
            inclusive = true;
        }
        offsets.push(jumps.len());
        finals.push(pos);
    }

    let suppressions = log_suppressions.then(|| {
        let mut l = SuppressionLog::from_entries(log);
        l.sort();
        l
    });
    Ok(Simulation {
        final_config: ParticleConfiguration::from_sorted_unchecked(config.first_label(), finals),
        trajectories: Trajectories { first_label: config.first_label(), start: start.to_vec(), offsets, jumps, from, until },
        suppressions,
    })
}

/// Runs `config` from time 0 to `until` and returns the final configuration and the suppression log.
pub fn simulate(config: &ParticleConfiguration, tape: &EventTape, until: f64) -> Result<(ParticleConfiguration, SuppressionLog)> {
    simulate_from(config, tape, 0.0, until)
}

/// As [`simulate`], with `config` placed at time `from`.
pub fn simulate_from(
    config: &ParticleConfiguration,
    tape: &EventTape,
    from: f64,
    until: f64,
) -> Result<(ParticleConfiguration, SuppressionLog)> {
    let sim = run(config, tape, from, until, true)?;
    Ok((sim.final_config, sim.suppressions.unwrap_or_default()))
}

/// Runs several configurations on the same clocks (basic coupling).
pub fn simulate_coupled(
    configs: &[ParticleConfiguration],
    tape: &EventTape,
    until: f64,
) -> Result<Vec<(ParticleConfiguration, SuppressionLog)>> {
    for c in configs {
        check_run(c, tape, 0.0, until)?;
    }
    configs.iter().map(|c| simulate(c, tape, until)).collect()
}
