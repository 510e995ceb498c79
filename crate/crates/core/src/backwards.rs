//! The backwards label path `N(u)`.
//!
//! Reading time backwards from `(N, t)`, the label drops by one whenever the
//! currently tracked particle had a jump blocked by its right neighbour.
//! `x_{N(u)}(u)` then describes which randomness determines `x_N(t)`.

use crate::error::{Error, Result};
use crate::initial::step_ic;
use crate::lattice::{run, EventTape, ParticleConfiguration, SuppressionLog, Trajectories};
use serde::Serialize;
use std::io::Write;

/// From `time` on (until the next breakpoint) the path sits on `label`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Breakpoint {
    pub time: f64,
    pub label: i64,
}

/// Piecewise constant, non-decreasing label path on `[0, t]`.
///
/// Invariant: breakpoint labels are `initial_label + 1, initial_label + 2, ..., terminal_label`
/// at strictly increasing times.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BackwardsPath {
    terminal_label: i64,
    terminal_time: f64,
    initial_label: i64,
    breakpoints: Vec<Breakpoint>,
}

impl BackwardsPath {
    pub fn terminal_label(&self) -> i64 {
        self.terminal_label
    }

    pub fn terminal_time(&self) -> f64 {
        self.terminal_time
    }

    /// `N(0)`.
    pub fn initial_label(&self) -> i64 {
        self.initial_label
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    /// `N(u)`, right-continuous.
    pub fn label_at(&self, u: f64) -> i64 {
        let k = self.breakpoints.partition_point(|b| b.time <= u);
        if k == 0 { self.initial_label } else { self.breakpoints[k - 1].label }
    }

    /// Constant stretches `(label, start, end)` covering `[0, t]`.
    pub fn segments(&self) -> Vec<(i64, f64, f64)> {
        let mut out = Vec::with_capacity(self.breakpoints.len() + 1);
        let mut label = self.initial_label;
        let mut start = 0.0;
        for b in &self.breakpoints {
            out.push((label, start, b.time));
            label = b.label;
            start = b.time;
        }
        out.push((label, start, self.terminal_time));
        out
    }
}

/// Builds `N(u)` from a time-sorted suppression log.
pub fn reconstruct(label: i64, t: f64, log: &SuppressionLog) -> Result<BackwardsPath> {
    if !log.is_time_sorted() {
        return Err(Error::contract("suppression log is not sorted by time"));
    }
    let mut current = label;
    let mut breakpoints = Vec::new();
    for e in log.entries().iter().rev() {
        if e.time <= t && e.label == current {
            breakpoints.push(Breakpoint { time: e.time, label: current });
            current -= 1;
        }
    }
    breakpoints.reverse();
    Ok(BackwardsPath { terminal_label: label, terminal_time: t, initial_label: current, breakpoints })
}

#[derive(Clone, Copy)]
struct Bound {
    at: f64,
    inclusive: bool,
}

impl Bound {
    fn raise(self, other: Bound) -> Bound {
        if other.at > self.at || (other.at == self.at && !other.inclusive) { other } else { self }
    }

    fn lower(self, other: Bound) -> Bound {
        if other.at < self.at || (other.at == self.at && !other.inclusive) { other } else { self }
    }
}

/// Latest blocked ring of `label` inside `(from, upper]` (or `upper)`).
fn latest_suppression(traj: &Trajectories, tape: &EventTape, label: i64, upper: Bound) -> Option<f64> {
    let start = Bound { at: traj.from_time(), inclusive: false };
    let own = traj.jump_times(label);
    let own_x0 = traj.start_position(label);
    let blk = traj.jump_times(label - 1);
    let blk_x0 = traj.start_position(label - 1);
    // `label` occupies own_x0 + k during [own[k-1], own[k]).
    let last = own.partition_point(|&r| r <= upper.at);
    for k in (0..=last).rev() {
        let site = own_x0 + k as i64;
        let kb = site + 1 - blk_x0;
        if kb < 0 || kb as usize > blk.len() {
            continue;
        }
        let kb = kb as usize;
        let mut lo = if k == 0 { start } else { Bound { at: own[k - 1], inclusive: true } };
        if kb > 0 {
            lo = lo.raise(Bound { at: blk[kb - 1], inclusive: true });
        }
        let mut hi = upper;
        if k < own.len() {
            hi = hi.lower(Bound { at: own[k], inclusive: false });
        }
        if kb < blk.len() {
            // A ring at the blocker's departure time is processed first, hence blocked.
            hi = hi.lower(Bound { at: blk[kb], inclusive: true });
        }
        if hi.at < lo.at || (hi.at == lo.at && !(hi.inclusive && lo.inclusive)) {
            continue;
        }
        if let Some(r) = tape.last_ring_in(site, lo.at, lo.inclusive, hi.at, hi.inclusive) {
            return Some(r);
        }
    }
    None
}

/// Builds `N(u)` directly from recorded trajectories and the clocks, without a log.
pub fn reconstruct_from_trajectories(label: i64, t: f64, traj: &Trajectories, tape: &EventTape) -> Result<BackwardsPath> {
    if !(traj.first_label()..=traj.last_label()).contains(&label) {
        return Err(Error::contract(format!("label {label} not simulated")));
    }
    if !(traj.from_time() <= t && t <= traj.until()) {
        return Err(Error::contract(format!("time {t} outside the simulated interval")));
    }
    let mut current = label;
    let mut upper = Bound { at: t, inclusive: true };
    let mut breakpoints = Vec::new();
    while current > traj.first_label() {
        match latest_suppression(traj, tape, current, upper) {
            Some(s) => {
                breakpoints.push(Breakpoint { time: s, label: current });
                current -= 1;
                upper = Bound { at: s, inclusive: false };
            }
            None => break,
        }
    }
    breakpoints.reverse();
    Ok(BackwardsPath { terminal_label: label, terminal_time: t, initial_label: current, breakpoints })
}

/// One sample of `x_{N(u)}(u)`; the trace is constant until the next sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub u: f64,
    pub label: i64,
    pub x: i64,
}

/// `x_{N(u)}(u)` sampled at every event where it changes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathTrace {
    pub points: Vec<TracePoint>,
    pub end: f64,
}

impl PathTrace {
    /// CSV with header `u,N(u),x`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let wrap = |e: csv::Error| Error::Numeric(format!("csv: {e}"));
        w.write_record(["u", "N(u)", "x"]).map_err(wrap)?;
        for p in &self.points {
            w.write_record([p.u.to_string(), p.label.to_string(), p.x.to_string()]).map_err(wrap)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }
}

/// Samples `x_{N(u)}(u)` at the start of each constant stretch and at each jump.
pub fn position_trace(path: &BackwardsPath, traj: &Trajectories) -> Result<PathTrace> {
    if path.initial_label() < traj.first_label() || path.terminal_label() > traj.last_label() {
        return Err(Error::contract("trajectories do not cover the path labels"));
    }
    let segs = path.segments();
    let mut points = Vec::new();
    for (i, &(label, s, e)) in segs.iter().enumerate() {
        let last = i + 1 == segs.len();
        let mut x = traj.position(label, s);
        points.push(TracePoint { u: s, label, x });
        for &r in traj.jump_times(label) {
            if r <= s {
                continue;
            }
            if r > e || (!last && r == e) {
                break;
            }
            x += 1;
            points.push(TracePoint { u: r, label, x });
        }
    }
    Ok(PathTrace { points, end: path.terminal_time() })
}

/// Space-time tube `|x - x0 - slope (u - u0)| < half_width`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cylinder {
    pub slope: f64,
    pub half_width: f64,
    pub anchor_time: f64,
    pub anchor_position: f64,
}

impl Cylinder {
    pub fn new(slope: f64, half_width: f64, anchor_time: f64, anchor_position: f64) -> Result<Self> {
        if !(half_width >= 0.0) {
            return Err(Error::contract("cylinder half width must be non-negative"));
        }
        Ok(Cylinder { slope, half_width, anchor_time, anchor_position })
    }

    pub fn contains(&self, u: f64, x: f64) -> bool {
        (x - self.anchor_position - self.slope * (u - self.anchor_time)).abs() < self.half_width
    }

    /// Whether the trace leaves the tube; each constant piece is tested at both ends.
    pub fn exited_by(&self, trace: &PathTrace) -> bool {
        let pts = &trace.points;
        pts.iter().enumerate().any(|(i, p)| {
            let until = pts.get(i + 1).map_or(trace.end, |q| q.u);
            !self.contains(p.u, p.x as f64) || !self.contains(until, p.x as f64)
        })
    }
}

/// Fraction of traces leaving the cylinder.
pub fn localization_fraction(traces: &[PathTrace], cyl: &Cylinder) -> f64 {
    if traces.is_empty() {
        return 0.0;
    }
    traces.iter().filter(|t| cyl.exited_by(t)).count() as f64 / traces.len() as f64
}

/// Depth of the step-release scan below `N`: `ceil(2 rho (t + ceil(8 sqrt t)))`.
pub fn default_scan_depth(rho: f64, t: f64) -> i64 {
    (2.0 * rho * (t + (8.0 * t.sqrt()).ceil())).ceil() as i64
}

/// Which identity checks to perform.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    /// Release times for the restart identity; each in `[0, t)`.
    pub taus: Vec<f64>,
    /// Labels `N - scan_depth ..= N` enter the minimum over step releases.
    pub scan_depth: i64,
}

/// Outcome of [`verify_eq26`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub seed: u64,
    pub label: i64,
    pub time: f64,
    pub position: i64,
    pub initial_label: i64,
    pub restarts_checked: usize,
    pub scan_lo: i64,
    pub argmin: Vec<i64>,
    pub violations: Vec<String>,
}

impl IdentityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        if self.is_clean() {
            Ok(self)
        } else {
            Err(Error::IdentityViolation { seed: self.seed, detail: self.violations.join("; ") })
        }
    }
}

/// Checks the restart identity `x_N(t) = x_{N(tau)}(tau) + y` and the
/// step-release minimum `x_N(t) = min_k x^{step, x_k(0)}_{N-k+1}(t)` exactly.
pub fn verify_eq26(label: i64, t: f64, tape: &EventTape, base: &ParticleConfiguration, check: &IdentityCheck) -> Result<IdentityReport> {
    if !base.contains_label(label) {
        return Err(Error::contract(format!("label {label} not in the base configuration")));
    }
    let sim = run(base, tape, 0.0, t, true)?;
    let log = sim.suppressions.as_ref().expect("logging requested");
    let path = reconstruct(label, t, log)?;
    let traj = &sim.trajectories;
    let x_final = traj.position(label, t);
    let mut violations = Vec::new();

    let mut restarts = 0;
    for &tau in &check.taus {
        if !(0.0..t).contains(&tau) {
            return Err(Error::contract(format!("release time {tau} outside [0, {t})")));
        }
        let k = path.label_at(tau);
        let z = traj.position(k, tau);
        let count = label - k + 1;
        let released = run(&step_ic(z, count)?, tape, tau, t, false)?;
        let y = released.final_config.position(count).expect("last step label");
        if y != x_final {
            violations.push(format!("restart at tau={tau} from label {k}: {y} != x_N(t)={x_final}"));
        }
        restarts += 1;
    }

    let scan_lo = (label - check.scan_depth).max(base.first_label());
    let mut best = i64::MAX;
    let mut argmin = Vec::new();
    for k in scan_lo..=label {
        let count = label - k + 1;
        let start = base.position(k).expect("label in base");
        let v = run(&step_ic(start, count)?, tape, 0.0, t, false)?.final_config.position(count).expect("last step label");
        if v < x_final {
            violations.push(format!("step release from label {k} ends at {v} < x_N(t)={x_final}"));
        }
        if v < best {
            best = v;
            argmin.clear();
        }
        if v == best {
            argmin.push(k);
        }
    }
    if best != x_final {
        violations.push(format!("minimum over step releases {best} != x_N(t)={x_final}"));
    }
    if !argmin.contains(&path.initial_label()) {
        violations.push(format!("N(0)={} not among minimizers {argmin:?}", path.initial_label()));
    }
    if scan_lo > base.first_label() && argmin.first() == Some(&scan_lo) {
        violations.push(format!("minimizer at the scan boundary {scan_lo}; scan depth too small"));
    }

    Ok(IdentityReport {
        seed: tape.master_seed(),
        label,
        time: t,
        position: x_final,
        initial_label: path.initial_label(),
        restarts_checked: restarts,
        scan_lo,
        argmin,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{generate_tape, SiteWindow, Suppression};

    #[test]
    fn empty_log_is_constant() {
        let p = reconstruct(7, 3.0, &SuppressionLog::default()).unwrap();
        assert_eq!(p.initial_label(), 7);
        assert_eq!(p.label_at(0.0), 7);
        assert!(p.breakpoints().is_empty());
    }

    #[test]
    fn single_decrement() {
        let log = SuppressionLog::from_entries(vec![Suppression { time: 0.5, label: 4 }]);
        let p = reconstruct(4, 1.0, &log).unwrap();
        assert_eq!(p.label_at(0.49), 3);
        assert_eq!(p.label_at(0.5), 4);
        assert_eq!(p.label_at(1.0), 4);
    }

    #[test]
    fn ignores_other_labels_and_late_entries() {
        let log = SuppressionLog::from_entries(vec![
            Suppression { time: 0.2, label: 2 },
            Suppression { time: 0.3, label: 5 },
            Suppression { time: 0.6, label: 3 },
            Suppression { time: 2.0, label: 4 },
        ]);
        let p = reconstruct(3, 1.0, &log).unwrap();
        assert_eq!(p.initial_label(), 1);
        assert_eq!(p.breakpoints(), &[Breakpoint { time: 0.2, label: 2 }, Breakpoint { time: 0.6, label: 3 }]);
    }

    #[test]
    fn unsorted_log_rejected() {
        let log = SuppressionLog::from_entries(vec![Suppression { time: 0.6, label: 3 }, Suppression { time: 0.2, label: 2 }]);
        assert!(matches!(reconstruct(3, 1.0, &log), Err(Error::Contract(_))));
    }

    #[test]
    fn cylinder_extremes() {
        let trace = PathTrace { points: vec![TracePoint { u: 0.0, label: 0, x: 0 }, TracePoint { u: 1.0, label: 0, x: 1 }], end: 2.0 };
        let wide = Cylinder::new(0.0, f64::INFINITY, 0.0, 0.0).unwrap();
        let none = Cylinder::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(localization_fraction(std::slice::from_ref(&trace), &wide), 0.0);
        assert_eq!(localization_fraction(&[trace], &none), 1.0);
    }

    #[test]
    fn lone_particle_restarts_trivially() {
        let tape = generate_tape(5, SiteWindow::new(-10, 80, 20.0).unwrap()).unwrap();
        let base = ParticleConfiguration::new(0, vec![0]).unwrap();
        let check = IdentityCheck { taus: vec![0.0, 5.0, 19.0], scan_depth: 0 };
        let r = verify_eq26(0, 20.0, &tape, &base, &check).unwrap();
        assert!(r.is_clean(), "{:?}", r.violations);
        assert_eq!(r.initial_label, 0);
        assert_eq!(r.argmin, vec![0]);
    }
}
