//! Run configuration: a TOML file overlaid by command-line flags.

use crate::error::{Error, Result};
use crate::initial::{Density, DensityTriple};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "TASEP_SHOCKS_OUT";
pub const DEFAULT_OUTPUT: &str = "tasep-shocks-out";

pub const DEFAULT_REPLICAS: usize = 10_000;
pub const DEFAULT_EPS: f64 = 0.15;
pub const DEFAULT_NU: f64 = 0.8;
pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 1;

/// Every key is optional; unset keys fall back to documented defaults at validation time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    /// One density (flat and step-like verbs) or three increasing densities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<f64>>,
    /// Macroscopic scale of the three-density profile.
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub big_t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Several times, for the verbs that report a trend.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Exit-threshold for the probability verbs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Label range `[lo, hi]` for `simulate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<[i64; 2]>,
    /// Grid `[start, stop, step]` for `tw-table` and `predict`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<[f64; 3]>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => { $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )* };
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let msg = e.message().to_string();
            let key = msg.split('`').nth(1).unwrap_or("<file>").to_string();
            Error::config(key, msg)
        })
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::from_toml_str(&text)
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlaid(mut self, flags: &RunConfig) -> Self {
        overlay!(self, flags; experiment, densities, big_t, t, times, u, tau, alpha, eps, nu, delta, threshold,
                 ks_tolerance, replicas, master_seed, output_dir, quadrature_order, workers, labels, grid);
        self
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).unwrap_or_default()
    }

    pub fn replicas(&self) -> usize {
        self.replicas.unwrap_or(DEFAULT_REPLICAS)
    }

    pub fn seed(&self) -> u64 {
        self.master_seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn quadrature_order(&self) -> usize {
        self.quadrature_order.unwrap_or(crate::tracy_widom::DEFAULT_ORDER)
    }

    /// Flag or file value, then the environment variable, then a fixed directory name.
    pub fn output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
    }

    pub fn require_f64(&self, key: &str, value: Option<f64>) -> Result<f64> {
        let v = value.ok_or_else(|| Error::config(key, "required for this experiment"))?;
        if !v.is_finite() {
            return Err(Error::config(key, "must be finite"));
        }
        Ok(v)
    }

    pub fn single_density(&self) -> Result<Density> {
        match self.densities.as_deref() {
            Some([rho]) => Density::from_f64(*rho).map_err(|e| Error::config("densities", e.to_string())),
            Some(_) => Err(Error::config("densities", "this experiment takes exactly one density")),
            None => Err(Error::config("densities", "required for this experiment")),
        }
    }

    pub fn triple(&self) -> Result<DensityTriple> {
        let big_t = self.big_t.ok_or_else(|| Error::config("T", "required for this experiment"))?;
        if big_t < 1 {
            return Err(Error::config("T", format!("must be at least 1, got {big_t}")));
        }
        match self.densities.as_deref() {
            Some(&[a, b, c]) => {
                if !(a < b && b < c) {
                    return Err(Error::config("densities", format!("ordering rho1 < rho2 < rho3 violated by {a}, {b}, {c}")));
                }
                DensityTriple::from_f64(a, b, c, big_t).map_err(|e| Error::config("densities", e.to_string()))
            }
            Some(_) => Err(Error::config("densities", "this experiment takes three densities")),
            None => Err(Error::config("densities", "required for this experiment")),
        }
    }

    /// Checks the keys shared by every experiment.
    pub fn validate_common(&self) -> Result<()> {
        if self.replicas() < 1 {
            return Err(Error::config("replicas", "must be at least 1"));
        }
        if self.quadrature_order() < 8 {
            return Err(Error::config("quadrature_order", "must be at least 8"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if let Some(tol) = self.ks_tolerance {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::config("ks_tolerance", "must lie in (0, 1)"));
            }
        }
        if let Some(t) = self.t {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::config("t", "must be positive"));
            }
        }
        if let Some(times) = &self.times {
            if times.is_empty() || times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                return Err(Error::config("times", "must be a non-empty list of positive times"));
            }
        }
        if let Some([start, stop, step]) = self.grid {
            if !(start <= stop && step > 0.0 && start.is_finite() && stop.is_finite()) {
                return Err(Error::config("grid", "expects [start, stop, step] with start <= stop and step > 0"));
            }
        }
        Ok(())
    }

    /// Points of the grid, defaulting to `[-10, 6]` in steps of 0.1.
    pub fn grid_points(&self) -> Vec<f64> {
        let [start, stop, step] = self.grid.unwrap_or([-10.0, 6.0, 0.1]);
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|k| start + k as f64 * step).collect()
    }

    pub fn times_or_t(&self) -> Result<Vec<f64>> {
        match (&self.times, self.t) {
            (Some(ts), _) => Ok(ts.clone()),
            (None, Some(t)) => Ok(vec![t]),
            (None, None) => Err(Error::config("times", "give `times` or `t`")),
        }
    }
}
