use crate::error::{Error, Result};

/// Sorted sample with `F(x) = #{samples <= x} / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::contract("empirical CDF needs at least one sample"));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite sample".into()));
        }
        samples.sort_unstable_by(f64::total_cmp);
        Ok(EmpiricalCdf { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.samples.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Left limit `#{samples < x} / n`.
    pub fn eval_below(&self, x: f64) -> f64 {
        self.samples.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    /// Distinct sample values with the left limit and value of the ECDF there.
    pub fn steps(&self) -> Vec<(f64, f64, f64)> {
        let n = self.len() as f64;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.samples.len() {
            let v = self.samples[i];
            let mut j = i;
            while j < self.samples.len() && self.samples[j] == v {
                j += 1;
            }
            out.push((v, i as f64 / n, j as f64 / n));
            i = j;
        }
        out
    }

    /// Smallest sample `x` with `F(x) >= p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let k = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.samples[k - 1]
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    pub fn std_dev(&self) -> f64 {
        let m = self.mean();
        let v = self.samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (self.len().max(2) - 1) as f64;
        v.sqrt()
    }
}

/// `sup |F_n - F|` over the sample points, both one-sided gaps.
///
/// The left gap compares left limits, with `F(v-)` read at the next float below `v`.
pub fn ks_distance(ecdf: &EmpiricalCdf, mut cdf: impl FnMut(f64) -> f64) -> f64 {
    ks_distance_with(ecdf, |x| Ok(cdf(x))).expect("infallible")
}

/// As [`ks_distance`] for a fallible reference CDF, evaluated once per distinct value.
pub fn ks_distance_with(ecdf: &EmpiricalCdf, mut cdf: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut d: f64 = 0.0;
    for (v, below, at) in ecdf.steps() {
        d = d.max((at - cdf(v)?).abs()).max((cdf(v.next_down())? - below).abs());
    }
    Ok(d.min(1.0))
}

/// As [`ks_distance_with`] for a continuous reference, one evaluation per distinct value.
pub fn ks_distance_continuous(ecdf: &EmpiricalCdf, mut cdf: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let mut d: f64 = 0.0;
    for (v, below, at) in ecdf.steps() {
        let f = cdf(v)?;
        d = d.max((at - f).abs()).max((f - below).abs());
    }
    Ok(d.min(1.0))
}

/// Two-sample statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let mut d: f64 = 0.0;
    for &x in a.samples().iter().chain(b.samples()) {
        d = d.max((a.eval(x) - b.eval(x)).abs());
    }
    d
}

/// Dvoretzky-Kiefer-Wolfowitz band `sqrt(ln(2/alpha) / (2n))`.
pub fn dkw_band(n: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}

/// Standard deviation of the one-sample KS statistic under the null, `0.2603 / sqrt(n)`.
pub fn ks_standard_error(n: usize) -> f64 {
    let kolmogorov_var = std::f64::consts::PI.powi(2) / 12.0 - std::f64::consts::FRAC_PI_2 * std::f64::consts::LN_2.powi(2);
    kolmogorov_var.sqrt() / (n as f64).sqrt()
}

/// Standard error of an estimated proportion.
pub fn proportion_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// True when `later <= earlier + 2 sqrt(se_earlier^2 + se_later^2)`.
pub fn within_two_se(earlier: f64, se_earlier: f64, later: f64, se_later: f64) -> bool {
    later <= earlier + 2.0 * se_earlier.hypot(se_later)
}
