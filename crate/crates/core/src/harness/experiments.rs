//! The Monte Carlo experiments. Each returns a report plus per-replica rows.

use super::ecdf::{ks_distance_continuous, ks_standard_error, proportion_se, within_two_se, EmpiricalCdf};
use super::report::{ExperimentReport, SampleRow};
use super::{lowest_relevant_label, run_replicas, RunSettings};
use crate::backwards::{
    default_scan_depth, position_trace, reconstruct_from_trajectories, verify_eq26, Cylinder, IdentityCheck,
};
use crate::error::{Error, Result};
use crate::initial::{decomposition_ics, flat_ic, step_ic, triple_ic, Density, DensityTriple, LabelRange};
use crate::lattice::{generate_tape, run, ParticleConfiguration, SiteWindow};
use crate::scaling::{flat_prediction, frame, product_prediction, product_prediction_with, sigma_flat};
use crate::tracy_widom::TwEvaluator;
use serde_json::json;
use std::time::Instant;

/// Margin, in units of the fluctuation scale, kept around the leading-order minimum.
const SPAN_SIGMAS: f64 = 8.0;

/// Report plus the per-replica observations behind it.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub report: ExperimentReport,
    pub samples: Vec<SampleRow>,
}

impl ExperimentRun {
    pub fn ecdf(&self) -> Result<EmpiricalCdf> {
        EmpiricalCdf::new(self.samples.iter().map(|r| r.s).collect())
    }
}

fn check_replicas(settings: &RunSettings) -> Result<()> {
    if settings.replicas < 1 {
        return Err(Error::contract("at least one replica is required"));
    }
    Ok(())
}

fn finish(mut report: ExperimentReport, started: Instant, replicas: usize, aborts: usize) -> ExperimentReport {
    report.aborts = aborts;
    if aborts * 1000 > replicas {
        report.passed = false;
        report.notes.push(format!("{aborts} of {replicas} replicas aborted by window truncation (limit 0.1%)"));
    }
    report.runtime_secs = started.elapsed().as_secs_f64();
    report
}

fn ks_fields(report: &mut ExperimentReport, ecdf: &EmpiricalCdf, ks: f64, tolerance: f64) {
    report.samples = ecdf.len();
    report.ks = Some(ks);
    report.dkw_band = Some(super::dkw_band(ecdf.len(), 0.01));
    report.tolerance = Some(tolerance);
    report.passed = ks <= tolerance;
    report.metrics.insert("ks_standard_error".into(), ks_standard_error(ecdf.len()));
    report.metrics.insert("mean_s".into(), ecdf.mean());
    report.metrics.insert("sd_s".into(), ecdf.std_dev());
}

fn flat_window_config(rho: Density, label: i64, t: f64) -> Result<(ParticleConfiguration, SiteWindow)> {
    let margin = SPAN_SIGMAS * sigma_flat(rho.value()) * t.cbrt();
    let lo = lowest_relevant_label(|k| -rho.floor_div(k), label, t, margin);
    let config = flat_ic(rho, 0, LabelRange::new(lo, label)?)?;
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t)?;
    Ok((config, window))
}

/// Three-density profile observed at the merging point.
pub fn run_triple_point(d: &DensityTriple, u: f64, tau: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    if settings.replicas < 100 {
        return Err(Error::contract(format!("triple-point comparison needs at least 100 replicas, got {}", settings.replicas)));
    }
    let started = Instant::now();
    let fr = frame(d, u, tau)?;
    let (label, t) = (fr.label, fr.time);
    let spread = fr.constants.sigma.iter().copied().fold(0.0, f64::max);
    let lo = lowest_relevant_label(|k| d.position(k), label, t, SPAN_SIGMAS * spread * fr.scale());
    let config = triple_ic(d, LabelRange::new(lo, label)?)?;
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t)?;
    let reps = run_replicas(settings.replicas, settings.seed, |seed| {
        let tape = generate_tape(seed, window)?;
        Ok(run(&config, &tape, 0.0, t, false)?.final_config.position(label).expect("tracked label"))
    })?;
    let samples: Vec<SampleRow> = reps.ok.iter().map(|&(replica, seed, x)| SampleRow { replica, seed, raw: x, s: fr.rescale(x) }).collect();

    let mut report = ExperimentReport::new(
        "triple-point",
        json!({"rho1": d.values()[0], "rho2": d.values()[1], "rho3": d.values()[2], "T": d.big_t(), "u": u, "tau": tau,
               "replicas": settings.replicas, "seed": settings.seed, "quadrature_order": settings.quadrature_order}),
    );
    let tw = TwEvaluator::goe(settings.quadrature_order)?;
    let ecdf = EmpiricalCdf::new(samples.iter().map(|r| r.s).collect())?;
    let ks = ks_distance_continuous(&ecdf, |s| product_prediction(d, u, tau, s, &tw))?;
    ks_fields(&mut report, &ecdf, ks, settings.ks_tolerance);
    let reciprocal = fr.constants.with_reciprocal_scale(d);
    let ks_alt = ks_distance_continuous(&ecdf, |s| product_prediction_with(&reciprocal, u, tau, s, &tw))?;
    report.metrics.insert("ks_reciprocal_scale".into(), ks_alt);
    for (key, v) in [("label", label as f64), ("time", t), ("center", fr.center), ("lowest_label", lo as f64)] {
        report.metrics.insert(key.into(), v);
    }
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// Flat profile of density `rho`, particle `rho^2 t + rho alpha t`.
pub fn run_flat(rho: Density, alpha: f64, t: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    check_replicas(settings)?;
    let started = Instant::now();
    let r = rho.value();
    let label = (r * r * t + r * alpha * t).round() as i64;
    if label < 1 || !(t > 0.0) {
        return Err(Error::contract(format!("flat experiment needs t > 0 and label >= 1, got t={t}, label={label}")));
    }
    let center = (1.0 - 2.0 * r - alpha) * t;
    let scale = t.cbrt();
    let (config, window) = flat_window_config(rho, label, t)?;
    let reps = run_replicas(settings.replicas, settings.seed, |seed| {
        let tape = generate_tape(seed, window)?;
        Ok(run(&config, &tape, 0.0, t, false)?.final_config.position(label).expect("tracked label"))
    })?;
    let samples: Vec<SampleRow> =
        reps.ok.iter().map(|&(replica, seed, x)| SampleRow { replica, seed, raw: x, s: (center - x as f64) / scale }).collect();

    let mut report = ExperimentReport::new(
        "flat",
        json!({"rho": r, "alpha": alpha, "t": t, "replicas": settings.replicas, "seed": settings.seed,
               "quadrature_order": settings.quadrature_order}),
    );
    let tw = TwEvaluator::goe(settings.quadrature_order)?;
    let ecdf = EmpiricalCdf::new(samples.iter().map(|r| r.s).collect())?;
    let ks = ks_distance_continuous(&ecdf, |s| flat_prediction(r, s, &tw))?;
    ks_fields(&mut report, &ecdf, ks, settings.ks_tolerance);
    report.metrics.insert("label".into(), label as f64);
    report.metrics.insert("lowest_label".into(), config.first_label() as f64);
    report.metrics.insert("sigma".into(), sigma_flat(r));
    let ks_alt = ks_distance_continuous(&ecdf, |s| tw.cdf(s * sigma_flat(r)))?;
    report.metrics.insert("ks_reciprocal_scale".into(), ks_alt);
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// Checks `x_N(t) = min(x1_N, x2_N, x3_N)` on a label/time grid under shared clocks.
pub fn run_decomposition(d: &DensityTriple, t: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    check_replicas(settings)?;
    if !(t > 0.0) {
        return Err(Error::contract("decomposition needs t > 0"));
    }
    let started = Instant::now();
    let [r1, r2, r3] = d.values();
    let merge_label = ((r1 * r2 * d.big_t() as f64 / (r3 - r1)).floor() as i64).max(1);
    let mut labels = vec![1, merge_label, 2 * merge_label];
    labels.dedup();
    let top = *labels.iter().max().expect("non-empty");
    let bottom = -d.middle_count() - (r3 * t).ceil() as i64 - 20;
    let range = LabelRange::new(bottom, top)?;
    let x = triple_ic(d, range)?;
    let dec = decomposition_ics(d, range)?;
    let systems = [&x, &dec.first, &dec.second, &dec.third];
    let left = systems.iter().map(|c| c.leftmost()).min().expect("four systems");
    let right = systems.iter().map(|c| c.rightmost()).max().expect("four systems");
    let window = SiteWindow::covering(left, right, t)?;
    let times: Vec<f64> = (0..=4).map(|i| t * i as f64 / 4.0).collect();

    let reps = run_replicas(settings.replicas, settings.seed, |seed| {
        let tape = generate_tape(seed, window)?;
        let sims = systems.iter().map(|c| run(c, &tape, 0.0, t, false)).collect::<Result<Vec<_>>>()?;
        let mut bad = Vec::new();
        for &time in &times {
            for &n in &labels {
                let xn = sims[0].trajectories.position(n, time);
                let parts: Vec<i64> = sims[1..]
                    .iter()
                    .filter(|s| (s.trajectories.first_label()..=s.trajectories.last_label()).contains(&n))
                    .map(|s| s.trajectories.position(n, time))
                    .collect();
                let m = parts.iter().copied().min().expect("third subproblem holds every label");
                if m != xn || parts.iter().any(|&p| p < xn) {
                    bad.push(format!("label {n}, time {time}: x={xn}, parts={parts:?}"));
                }
            }
        }
        Ok((sims[0].trajectories.position(top, t), bad))
    })?;

    let mut report = ExperimentReport::new(
        "decomposition",
        json!({"rho1": r1, "rho2": r2, "rho3": r3, "T": d.big_t(), "t": t, "labels": labels, "times": times,
               "replicas": settings.replicas, "seed": settings.seed}),
    );
    let mut samples = Vec::with_capacity(reps.ok.len());
    for (replica, seed, (x_top, bad)) in &reps.ok {
        samples.push(SampleRow { replica: *replica, seed: *seed, raw: *x_top, s: *x_top as f64 });
        if !bad.is_empty() && report.notes.len() < 10 {
            report.notes.push(format!("seed {seed}: {}", bad[0]));
        }
        report.violations += bad.len();
    }
    report.samples = samples.len();
    report.passed = report.violations == 0;
    report.metrics.insert("checks_per_replica".into(), (times.len() * labels.len()) as f64);
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// Restart and step-release identities of the backwards path on flat data.
pub fn run_backwards_identities(rho: Density, t: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    check_replicas(settings)?;
    let started = Instant::now();
    let r = rho.value();
    let label = (r * r * t).round() as i64;
    let depth = default_scan_depth(r, t);
    let base = flat_ic(rho, 0, LabelRange::new(label - depth - 20, label)?)?;
    let window = SiteWindow::covering(base.leftmost(), base.rightmost(), t)?;
    let check = IdentityCheck { taus: (0..10).map(|i| t * i as f64 / 10.0).collect(), scan_depth: depth };
    let reps = run_replicas(settings.replicas, settings.seed, |seed| verify_eq26(label, t, &generate_tape(seed, window)?, &base, &check))?;

    let mut report = ExperimentReport::new(
        "backwards-identities",
        json!({"rho": r, "t": t, "label": label, "scan_depth": depth, "taus": check.taus, "replicas": settings.replicas, "seed": settings.seed}),
    );
    let mut samples = Vec::new();
    for (replica, seed, rep) in &reps.ok {
        samples.push(SampleRow { replica: *replica, seed: *seed, raw: rep.position, s: rep.initial_label as f64 });
        for v in &rep.violations {
            if report.notes.len() < 10 {
                report.notes.push(format!("seed {seed}: {v}"));
            }
        }
        report.violations += rep.violations.len();
    }
    report.samples = samples.len();
    report.passed = report.violations == 0;
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// Exceedance probability of the displacement along the characteristic over `[t - t^nu, t]`.
pub fn run_slow_decorrelation(rho: Density, t: f64, nu: f64, delta: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    check_replicas(settings)?;
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::contract(format!("exponent nu must lie in (0, 1), got {nu}")));
    }
    let started = Instant::now();
    let r = rho.value();
    let lag = t.powf(nu);
    let earlier = t - lag;
    let (n1, n2) = ((r * r * t).round() as i64, (r * r * earlier).round() as i64);
    if n2 < 1 {
        return Err(Error::contract("earlier label rounds below 1"));
    }
    let drift = (1.0 - 2.0 * r) * lag;
    let threshold = delta * t.cbrt();
    let margin = SPAN_SIGMAS * sigma_flat(r) * t.cbrt();
    let lo = lowest_relevant_label(|k| -rho.floor_div(k), n1, t, margin)
        .min(lowest_relevant_label(|k| -rho.floor_div(k), n2, earlier, margin));
    let config = flat_ic(rho, 0, LabelRange::new(lo, n1)?)?;
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t)?;
    let reps = run_replicas(settings.replicas, settings.seed, |seed| {
        let sim = run(&config, &generate_tape(seed, window)?, 0.0, t, false)?;
        Ok(sim.trajectories.position(n1, t) - sim.trajectories.position(n2, earlier))
    })?;
    let samples: Vec<SampleRow> =
        reps.ok.iter().map(|&(replica, seed, dx)| SampleRow { replica, seed, raw: dx, s: (dx as f64 - drift) / t.cbrt() }).collect();
    let n = samples.len();
    let exceed = samples.iter().filter(|row| (row.raw as f64 - drift).abs() >= threshold).count();
    let p = exceed as f64 / n.max(1) as f64;

    let mut report = ExperimentReport::new(
        "slow-decorrelation",
        json!({"rho": r, "t": t, "nu": nu, "delta": delta, "replicas": settings.replicas, "seed": settings.seed}),
    );
    report.samples = n;
    report.passed = true;
    for (key, v) in [("probability", p), ("standard_error", proportion_se(p, n.max(1))), ("lag", lag), ("threshold", threshold)] {
        report.metrics.insert(key.into(), v);
    }
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// GUE scale of particle `nu t` of a step profile, `nu^{-1/6} (1 - sqrt nu)^{2/3}`.
pub fn step_sigma(nu: f64) -> f64 {
    nu.powf(-1.0 / 6.0) * (1.0 - nu.sqrt()).powf(2.0 / 3.0)
}

/// Decay rate of `ln p` against distance from the median, over tail probabilities `ps`.
fn tail_slope(ecdf: &EmpiricalCdf, ps: &[f64], upper: bool) -> f64 {
    let med = ecdf.quantile(0.5);
    let pts: Vec<(f64, f64)> = ps
        .iter()
        .map(|&p| {
            let dist = if upper { ecdf.quantile(1.0 - p) - med } else { med - ecdf.quantile(p) };
            (dist, p.ln())
        })
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 { f64::INFINITY } else { -sxy / sxx }
}

pub const TAIL_PROBABILITIES: [f64; 6] = [0.2, 0.1, 0.05, 0.02, 0.01, 0.005];

/// Fluctuations of particle `nu t` of the packed block `x_n = 1 - n` against `F_2`.
pub fn run_step_tails(nu_fraction: f64, t: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    check_replicas(settings)?;
    if !(0.1..=0.9).contains(&nu_fraction) {
        return Err(Error::contract(format!("step fraction must lie in [0.1, 0.9], got {nu_fraction}")));
    }
    let started = Instant::now();
    let label = (nu_fraction * t).round() as i64;
    let center = (1.0 - 2.0 * nu_fraction.sqrt()) * t;
    let scale = t.cbrt();
    let config = step_ic(0, label)?;
    let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t)?;
    let reps = run_replicas(settings.replicas, settings.seed, |seed| {
        Ok(run(&config, &generate_tape(seed, window)?, 0.0, t, false)?.final_config.position(label).expect("tracked label"))
    })?;
    let samples: Vec<SampleRow> =
        reps.ok.iter().map(|&(replica, seed, x)| SampleRow { replica, seed, raw: x, s: (center - x as f64) / scale }).collect();

    let sigma = step_sigma(nu_fraction);
    let tw = TwEvaluator::gue(settings.quadrature_order)?;
    let ecdf = EmpiricalCdf::new(samples.iter().map(|r| r.s).collect())?;
    let ks = ks_distance_continuous(&ecdf, |s| tw.cdf(s / sigma))?;
    let mut report = ExperimentReport::new(
        "step-tails",
        json!({"nu_fraction": nu_fraction, "t": t, "replicas": settings.replicas, "seed": settings.seed,
               "quadrature_order": settings.quadrature_order}),
    );
    ks_fields(&mut report, &ecdf, ks, settings.ks_tolerance);
    let slope_neg = tail_slope(&ecdf, &TAIL_PROBABILITIES, false);
    let slope_pos = tail_slope(&ecdf, &TAIL_PROBABILITIES, true);
    let n = ecdf.len() as f64;
    let mass_neg = ecdf.eval_below(-4.0);
    let mass_pos = 1.0 - ecdf.eval(4.0);
    for (key, v) in [
        ("sigma", sigma),
        ("tail_slope_negative_side", slope_neg),
        ("tail_slope_positive_side", slope_pos),
        ("tail_mass_below_minus4", mass_neg),
        ("tail_mass_above_4", mass_pos),
        ("samples", n),
    ] {
        report.metrics.insert(key.into(), v);
    }
    report.passed = report.passed && slope_neg >= slope_pos;
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// Fraction of backwards paths leaving the tube of half width `t^{2/3 + eps}` around the characteristic.
pub fn run_localization(rho: Density, eps: f64, t: f64, settings: &RunSettings) -> Result<ExperimentRun> {
    check_replicas(settings)?;
    let started = Instant::now();
    let r = rho.value();
    let label = (r * r * t).round() as i64;
    if label < 1 {
        return Err(Error::contract("label rounds below 1"));
    }
    let half_width = t.powf(2.0 / 3.0 + eps);
    let cyl = Cylinder::new(1.0 - 2.0 * r, half_width, 0.0, 0.0)?;
    let (config, window) = flat_window_config(rho, label, t)?;
    let reps = run_replicas(settings.replicas, settings.seed, |seed| {
        let tape = generate_tape(seed, window)?;
        let sim = run(&config, &tape, 0.0, t, false)?;
        let path = reconstruct_from_trajectories(label, t, &sim.trajectories, &tape)?;
        if path.initial_label() == config.first_label() {
            return Err(Error::Truncation { label: path.initial_label(), site: config.rightmost(), time: 0.0, right: window.right() });
        }
        let trace = position_trace(&path, &sim.trajectories)?;
        let worst = trace.points.iter().map(|p| (p.x as f64 - cyl.slope * p.u).abs()).fold(0.0, f64::max);
        Ok((path.initial_label(), cyl.exited_by(&trace), worst))
    })?;
    let samples: Vec<SampleRow> = reps
        .ok
        .iter()
        .map(|&(replica, seed, (n0, _, worst))| SampleRow { replica, seed, raw: n0, s: worst / t.powf(2.0 / 3.0) })
        .collect();
    let n = reps.ok.len();
    let exits = reps.ok.iter().filter(|r| r.2 .1).count();
    let p = exits as f64 / n.max(1) as f64;
    let mut report = ExperimentReport::new(
        "localization",
        json!({"rho": r, "eps": eps, "t": t, "replicas": settings.replicas, "seed": settings.seed}),
    );
    report.samples = n;
    report.passed = true;
    for (key, v) in [("exit_fraction", p), ("standard_error", proportion_se(p, n.max(1))), ("half_width", half_width)] {
        report.metrics.insert(key.into(), v);
    }
    let aborts = reps.aborted.len();
    Ok(ExperimentRun { report: finish(report, started, settings.replicas, aborts), samples })
}

/// Probabilities over increasing scales: non-increasing within two standard errors, last one below `threshold`.
pub fn probability_trend(points: &[(f64, f64)], threshold: f64) -> (bool, bool) {
    let monotone = points.windows(2).all(|w| within_two_se(w[0].0, w[0].1, w[1].0, w[1].1));
    let last_ok = points.last().is_some_and(|p| p.0 < threshold);
    (monotone, last_ok)
}

/// Combines per-scale runs of a probability experiment into one verdict.
pub fn series_report(name: &str, runs: &[ExperimentRun], key: &str, scale_key: &str, threshold: f64) -> ExperimentReport {
    let mut report = ExperimentReport::new(name, json!({ "threshold": threshold }));
    let mut pts = Vec::new();
    for run in runs {
        let p = run.report.metric(key).unwrap_or(f64::NAN);
        let se = run.report.metric("standard_error").unwrap_or(f64::NAN);
        let scale = run.report.parameters.get(scale_key).and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        report.metrics.insert(format!("{key}@{scale}"), p);
        pts.push((p, se));
        report.samples += run.report.samples;
        report.aborts += run.report.aborts;
        report.runtime_secs += run.report.runtime_secs;
    }
    let (monotone, last_ok) = probability_trend(&pts, threshold);
    report.metrics.insert("non_increasing".into(), f64::from(u8::from(monotone)));
    report.metrics.insert("below_threshold".into(), f64::from(u8::from(last_ok)));
    report.passed = monotone && last_ok && runs.iter().all(|r| r.report.passed);
    report
}

/// KS trend across a doubling of scale: the larger scale may not be worse by more than two standard errors.
pub fn ks_trend(smaller: &ExperimentReport, larger: &ExperimentReport) -> Option<bool> {
    let (a, b) = (smaller.ks?, larger.ks?);
    Some(within_two_se(a, ks_standard_error(smaller.samples), b, ks_standard_error(larger.samples)))
}
