use super::config::{RunConfig, DEFAULT_DELTA, DEFAULT_EPS, DEFAULT_NU};
use super::Verb;
use crate::backwards::{position_trace, reconstruct_from_trajectories};
use crate::error::{Error, Result};
use crate::harness::{self, write_samples_csv, ExperimentReport, ExperimentRun, RunSettings, Verdict};
use crate::initial::{flat_ic, triple_ic, LabelRange};
use crate::lattice::{generate_tape, run, SiteWindow};
use crate::scaling::{flat_prediction, product_prediction};
use crate::tracy_widom::TwEvaluator;
use serde_json::json;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

/// Result of a dispatched verb.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub output_dir: PathBuf,
    pub summary_line: String,
    pub reports: Vec<ExperimentReport>,
}

fn settings(c: &RunConfig) -> RunSettings {
    let mut s = RunSettings::new(c.replicas(), c.seed());
    s.quadrature_order = c.quadrature_order();
    if let Some(tol) = c.ks_tolerance {
        s.ks_tolerance = tol;
    }
    s
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Numeric(format!("json: {e}")))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn single(dir: &Path, run: ExperimentRun) -> Result<Vec<ExperimentReport>> {
    write_samples_csv(&dir.join("samples.csv"), &run.samples)?;
    run.report.write_json(&dir.join("summary.json"))?;
    Ok(vec![run.report])
}

fn series(dir: &Path, name: &str, runs: Vec<ExperimentRun>, key: &str, threshold: f64) -> Result<Vec<ExperimentReport>> {
    for run in &runs {
        let t = run.report.parameters.get("t").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
        write_samples_csv(&dir.join(format!("samples_t{t}.csv")), &run.samples)?;
    }
    let summary = harness::series_report(name, &runs, key, "t", threshold);
    let reports: Vec<ExperimentReport> = runs.into_iter().map(|r| r.report).collect();
    write_json(&dir.join("summary.json"), &json!({ "series": summary, "runs": reports }))?;
    Ok(std::iter::once(summary).chain(reports).collect())
}

/// Validates `config`, runs `verb` and writes its outputs plus `manifest.json`.
pub fn dispatch(verb: Verb, config: &RunConfig) -> Result<Outcome> {
    config.validate_common()?;
    if let Some(name) = &config.experiment {
        if Verb::from_name(name).is_none() {
            return Err(Error::config("experiment", format!("unknown experiment `{name}`")));
        }
    }
    let dir = config.output_dir();
    let started_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let body = || execute(verb, config, &dir);
    let reports = match config.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?
            .install(body),
        None => body(),
    }?;
    let head = &reports[0];
    let verdict = head.verdict();
    let mut config_echo = config.clone();
    config_echo.experiment = Some(verb.name().to_string());
    config_echo.replicas = Some(config.replicas());
    config_echo.master_seed = Some(config.seed());
    config_echo.quadrature_order = Some(config.quadrature_order());
    config_echo.output_dir = Some(dir.clone());
    write_json(
        &dir.join("manifest.json"),
        &json!({
            "verb": verb.name(),
            "config": config_echo,
            "config_toml": config_echo.to_toml_string(),
            "version": env!("CARGO_PKG_VERSION"),
            "started_at_unix": started_at,
            "wall_time_secs": clock.elapsed().as_secs_f64(),
            "verdict": verdict,
        }),
    )?;
    let mut summary_line = format!("{}: {:?}", verb.name(), verdict);
    if let Some(ks) = head.ks {
        summary_line.push_str(&format!(", ks = {ks:.4}"));
    }
    if head.violations > 0 {
        summary_line.push_str(&format!(", {} violations", head.violations));
    }
    for (k, v) in &head.metrics {
        summary_line.push_str(&format!(", {k} = {v:.4}"));
    }
    Ok(Outcome { verdict, output_dir: dir, summary_line, reports })
}

fn execute(verb: Verb, c: &RunConfig, dir: &Path) -> Result<Vec<ExperimentReport>> {
    // Inputs are checked before the output directory is touched.
    let plan = plan(verb, c)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    plan(dir)
}

type Job<'a> = Box<dyn FnOnce(&Path) -> Result<Vec<ExperimentReport>> + Send + 'a>;

fn plan<'a>(verb: Verb, c: &'a RunConfig) -> Result<Job<'a>> {
    let s = settings(c);
    Ok(match verb {
        Verb::TriplePoint => {
            let d = c.triple()?;
            let (u, tau) = (c.u.unwrap_or(0.0), c.tau.unwrap_or(0.0));
            crate::scaling::frame(&d, u, tau).map_err(|e| Error::config("u", e.to_string()))?;
            if s.replicas < 100 {
                return Err(Error::config("replicas", "triple-point needs at least 100"));
            }
            Box::new(move |dir| single(dir, harness::run_triple_point(&d, u, tau, &s)?))
        }
        Verb::Flat => {
            let rho = c.single_density()?;
            let t = c.require_f64("t", c.t)?;
            let alpha = c.alpha.unwrap_or(0.0);
            Box::new(move |dir| single(dir, harness::run_flat(rho, alpha, t, &s)?))
        }
        Verb::Decomposition => {
            let d = c.triple()?;
            let t = c.t.unwrap_or_else(|| (d.big_t() as f64 / (d.values()[2] - d.values()[0])).round());
            Box::new(move |dir| single(dir, harness::run_decomposition(&d, t, &s)?))
        }
        Verb::SlowDecorrelation => {
            let rho = c.single_density()?;
            let times = c.times_or_t()?;
            let nu = c.nu.unwrap_or(DEFAULT_NU);
            if !(nu > 0.0 && nu < 1.0) {
                return Err(Error::config("nu", "must lie in (0, 1)"));
            }
            let delta = c.delta.unwrap_or(DEFAULT_DELTA);
            if !(delta > 0.0) {
                return Err(Error::config("delta", "must be positive"));
            }
            let threshold = c.threshold.unwrap_or(0.1);
            Box::new(move |dir| {
                let runs = times.iter().map(|&t| harness::run_slow_decorrelation(rho, t, nu, delta, &s)).collect::<Result<Vec<_>>>()?;
                series(dir, "slow-decorrelation", runs, "probability", threshold)
            })
        }
        Verb::StepTails => {
            let t = c.require_f64("t", c.t)?;
            let nu = c.nu.unwrap_or(DEFAULT_NU);
            if !(0.1..=0.9).contains(&nu) {
                return Err(Error::config("nu", "step fraction must lie in [0.1, 0.9]"));
            }
            Box::new(move |dir| single(dir, harness::run_step_tails(nu, t, &s)?))
        }
        Verb::Localization => {
            let rho = c.single_density()?;
            let times = c.times_or_t()?;
            let eps = c.eps.unwrap_or(DEFAULT_EPS);
            if !(eps > 0.0 && eps < 1.0 / 3.0) {
                return Err(Error::config("eps", "must lie in (0, 1/3)"));
            }
            let threshold = c.threshold.unwrap_or(0.05);
            Box::new(move |dir| {
                let runs = times.iter().map(|&t| harness::run_localization(rho, eps, t, &s)).collect::<Result<Vec<_>>>()?;
                series(dir, "localization", runs, "exit_fraction", threshold)
            })
        }
        Verb::TwTable => {
            let f1 = TwEvaluator::goe(s.quadrature_order)?;
            let f2 = TwEvaluator::gue(s.quadrature_order)?;
            let grid = c.grid_points();
            Box::new(move |dir| {
                let rows = grid.iter().map(|&x| Ok(vec![fmt(x), fmt(f1.cdf(x)?), fmt(f2.cdf(x)?)])).collect::<Result<Vec<_>>>()?;
                write_rows(&dir.join("tw_table.csv"), &["s", "F1", "F2"], rows)?;
                Ok(vec![table_report("tw-table", json!({"grid": grid.len(), "quadrature_order": s.quadrature_order}))])
            })
        }
        Verb::Predict => {
            let tw = TwEvaluator::goe(s.quadrature_order)?;
            let grid = c.grid_points();
            let law: Box<dyn Fn(f64) -> Result<f64> + Send> = match c.densities.as_deref() {
                Some([_]) => {
                    let rho = c.single_density()?.value();
                    Box::new(move |x| flat_prediction(rho, x, &tw))
                }
                _ => {
                    let mut with_scale = c.clone();
                    with_scale.big_t = Some(c.big_t.unwrap_or(1));
                    let d = with_scale.triple()?;
                    let (u, tau) = (c.u.unwrap_or(0.0), c.tau.unwrap_or(0.0));
                    Box::new(move |x| product_prediction(&d, u, tau, x, &tw))
                }
            };
            Box::new(move |dir| {
                let rows = grid.iter().map(|&x| Ok(vec![fmt(x), fmt(law(x)?)])).collect::<Result<Vec<_>>>()?;
                write_rows(&dir.join("prediction.csv"), &["s", "prediction"], rows)?;
                Ok(vec![table_report("predict", json!({"grid": grid.len()}))])
            })
        }
        Verb::Simulate => simulate_job(c)?,
    })
}

fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

fn table_report(name: &str, params: serde_json::Value) -> ExperimentReport {
    let mut r = ExperimentReport::new(name, params);
    r.passed = true;
    r
}

fn simulate_job(c: &RunConfig) -> Result<Job<'_>> {
    let (config, t) = match c.densities.as_deref() {
        Some([_]) => {
            let rho = c.single_density()?;
            let t = c.require_f64("t", c.t)?;
            let [lo, hi] = c.labels.unwrap_or([1 - t.ceil() as i64, t.ceil() as i64]);
            let range = LabelRange::new(lo, hi).map_err(|e| Error::config("labels", e.to_string()))?;
            (flat_ic(rho, 0, range)?, t)
        }
        _ => {
            let d = c.triple()?;
            let t = c.t.unwrap_or_else(|| d.big_t() as f64 / (d.values()[2] - d.values()[0]));
            let reach = t.ceil() as i64;
            let [lo, hi] = c.labels.unwrap_or([-d.middle_count() - reach, reach]);
            let range = LabelRange::new(lo, hi).map_err(|e| Error::config("labels", e.to_string()))?;
            (triple_ic(&d, range)?, t)
        }
    };
    let seed = c.seed();
    Ok(Box::new(move |dir| {
        let started = Instant::now();
        let window = SiteWindow::covering(config.leftmost(), config.rightmost(), t)?;
        let tape = generate_tape(seed, window)?;
        let sim = run(&config, &tape, 0.0, t, true)?;
        write_rows(
            &dir.join("configuration.csv"),
            &["label", "initial", "final"],
            config.iter().map(|(n, x0)| vec![n.to_string(), x0.to_string(), sim.final_config.position(n).unwrap_or(x0).to_string()]),
        )?;
        let top = config.last_label();
        let path = reconstruct_from_trajectories(top, t, &sim.trajectories, &tape)?;
        let trace = position_trace(&path, &sim.trajectories)?;
        let file = File::create(dir.join("path.csv")).map_err(|e| Error::io(dir.join("path.csv"), e))?;
        trace.write_csv(BufWriter::new(file))?;
        let mut report = table_report("simulate", json!({"t": t, "seed": seed, "first_label": config.first_label(), "last_label": top}));
        report.metrics.insert("jumps".into(), sim.trajectories.total_jumps() as f64);
        report.metrics.insert("suppressions".into(), sim.suppressions.as_ref().map_or(0, |l| l.len()) as f64);
        report.metrics.insert("path_initial_label".into(), path.initial_label() as f64);
        report.runtime_secs = started.elapsed().as_secs_f64();
        report.write_json(&dir.join("summary.json"))?;
        Ok(vec![report])
    }))
}
