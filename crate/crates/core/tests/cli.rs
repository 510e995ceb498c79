use std::ffi::OsString;
use std::fs;
use std::path::Path;
use tasep_shocks::cli::run;

fn call(args: &[&str]) -> i32 {
    run(std::iter::once("tasep-shocks").chain(args.iter().copied()).map(OsString::from))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tw_table_columns_are_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(call(&["tw-table", "--grid", "-10,6,0.1", "--out", out]), 0);
    let mut rd = csv::Reader::from_path(dir.path().join("tw_table.csv")).unwrap();
    assert_eq!(rd.headers().unwrap(), vec!["s", "F1", "F2"]);
    let rows: Vec<[f64; 3]> = rd.records().map(|r| {
        let r = r.unwrap();
        [r[0].parse().unwrap(), r[1].parse().unwrap(), r[2].parse().unwrap()]
    }).collect();
    assert_eq!(rows.len(), 161);
    for w in rows.windows(2) {
        assert!(w[1][1] >= w[0][1] && w[1][2] >= w[0][2]);
    }
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn decomposition_exit_code_tracks_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = call(&["decomposition", "--densities", "0.1,0.4,0.8", "--T", "40", "--replicas", "30", "--seed", "5", "--out", out]);
    let summary = json(&dir.path().join("summary.json"));
    let violations = summary["violations"].as_u64().unwrap();
    assert_eq!(code == 3, violations > 0);
    assert_eq!(code, 0);
}

#[test]
fn identical_configs_give_identical_samples() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let code = call(&["flat", "--densities", "0.5", "--t", "60", "--replicas", "40", "--seed", "11", "--out", d.path().to_str().unwrap()]);
        assert!(code == 0 || code == 2);
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("samples.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    let first = String::from_utf8(read(&a)).unwrap();
    assert!(first.starts_with("replica,seed,raw,s\n"));
    assert_eq!(first.lines().count(), 41);
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    call(&["step-tails", "--t", "40", "--nu", "0.25", "--replicas", "25", "--out", out]);
    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["verb"], "step-tails");
    assert_eq!(manifest["config"]["replicas"], 25);
    assert_eq!(manifest["config"]["master_seed"], 1);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["wall_time_secs"].as_f64().unwrap() >= 0.0);

    // Replaying the echoed configuration reproduces the samples.
    let replay = tempfile::tempdir().unwrap();
    let cfg = replay.path().join("run.toml");
    let toml = manifest["config_toml"].as_str().unwrap().replace(out, replay.path().to_str().unwrap());
    fs::write(&cfg, toml).unwrap();
    call(&["step-tails", "--config", cfg.to_str().unwrap()]);
    assert_eq!(fs::read(dir.path().join("samples.csv")).unwrap(), fs::read(replay.path().join("samples.csv")).unwrap());
}

#[test]
fn flags_override_file_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "densities = [0.5]\nt = 30.0\nreplicas = 3\n").unwrap();
    let out = dir.path().join("out");
    call(&["flat", "--config", cfg.to_str().unwrap(), "--replicas", "7", "--out", out.to_str().unwrap()]);
    assert_eq!(json(&out.join("summary.json"))["samples"], 7);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "replicas = 3\nrho = 0.5\n").unwrap();
    let out = dir.path().join("never");
    let out = out.to_str().unwrap();
    assert_eq!(call(&["flat", "--config", cfg.to_str().unwrap(), "--out", out]), 1);
    assert_eq!(call(&["triple-point", "--densities", "0.4,0.1,0.8", "--T", "70", "--out", out]), 1);
    assert_eq!(call(&["flat", "--densities", "0.5", "--out", out]), 1);
    assert_eq!(call(&["no-such-verb"]), 1);
    assert_eq!(call(&["localization", "--densities", "0.5", "--t", "50", "--eps", "0.5", "--out", out]), 1);
    assert!(!Path::new(out).exists());
}

#[test]
fn environment_sets_default_output() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(tasep_shocks::cli::OUTPUT_ENV, dir.path());
    assert_eq!(call(&["predict", "--densities", "0.1,0.4,0.8", "--grid", "-1,1,0.5"]), 0);
    std::env::remove_var(tasep_shocks::cli::OUTPUT_ENV);
    let text = fs::read_to_string(dir.path().join("prediction.csv")).unwrap();
    assert_eq!(text.lines().next(), Some("s,prediction"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn simulate_writes_configuration_and_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(call(&["simulate", "--densities", "0.5", "--t", "20", "--labels", "-30,10", "--out", out]), 0);
    let conf = fs::read_to_string(dir.path().join("configuration.csv")).unwrap();
    assert_eq!(conf.lines().count(), 42);
    let path = fs::read_to_string(dir.path().join("path.csv")).unwrap();
    assert!(path.starts_with("u,N(u),x\n"));
}
