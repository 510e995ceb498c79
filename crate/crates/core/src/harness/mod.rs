//! Replica orchestration, empirical distributions and the experiments.

pub mod ecdf;
pub mod experiments;
pub mod report;

pub use ecdf::{dkw_band, ks_distance, ks_distance_continuous, ks_distance_with, ks_standard_error, ks_two_sample, EmpiricalCdf};
pub use experiments::*;
pub use report::{write_samples_csv, ExperimentReport, SampleRow, Verdict};

use crate::error::{Error, Result};
use crate::rng::replica_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Knobs shared by every experiment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub replicas: usize,
    pub seed: u64,
    /// Quadrature order of the Tracy-Widom evaluator.
    pub quadrature_order: usize,
    /// Pass threshold on the KS distance.
    pub ks_tolerance: f64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings { replicas: 10_000, seed: 1, quadrature_order: crate::tracy_widom::DEFAULT_ORDER, ks_tolerance: 0.05 }
    }
}

impl RunSettings {
    pub fn new(replicas: usize, seed: u64) -> Self {
        RunSettings { replicas, seed, ..Default::default() }
    }
}

/// Completed and aborted replicas, in replica order.
pub(crate) struct Replicas<T> {
    pub ok: Vec<(u64, u64, T)>,
    pub aborted: Vec<(u64, u64, String)>,
}

/// Runs `job(seed)` for every replica; window truncations are recorded, other errors abort the run.
pub(crate) fn run_replicas<T, F>(replicas: usize, master_seed: u64, job: F) -> Result<Replicas<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let results: Vec<(u64, u64, Result<T>)> = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let seed = replica_seed(master_seed, i);
            (i, seed, job(seed))
        })
        .collect();
    let mut out = Replicas { ok: Vec::with_capacity(results.len()), aborted: Vec::new() };
    for (i, seed, r) in results {
        match r {
            Ok(v) => out.ok.push((i, seed, v)),
            Err(e @ Error::Truncation { .. }) => out.aborted.push((i, seed, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Leading-order position at time `t` of particle `m` of a packed block released from 0.
pub fn step_front(m: f64, t: f64) -> f64 {
    if m <= t {
        t - 2.0 * (m * t).sqrt()
    } else {
        1.0 - m
    }
}

/// Lowest label that can matter for `x_label(t)`.
///
/// `x_label(t)` is the minimum over `k <= label` of step releases from
/// `x_k(0)`; a release is kept when its leading-order value is within
/// `margin` of the smallest one. The scan stops once the trivial lower bound
/// `x_k(0) - (label - k)` of every further release exceeds that level.
pub fn lowest_relevant_label(position: impl Fn(i64) -> i64, label: i64, t: f64, margin: f64) -> i64 {
    let mut best = f64::INFINITY;
    let mut lowest = label;
    let mut k = label;
    loop {
        let x0 = position(k) as f64;
        let f = x0 + step_front((label - k + 1) as f64, t);
        best = best.min(f);
        if f <= best + margin {
            lowest = k;
        }
        if x0 - (label - k) as f64 > best + margin {
            return lowest;
        }
        k -= 1;
    }
}
