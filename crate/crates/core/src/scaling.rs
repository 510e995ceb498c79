//! Scaling algebra of the merging-shock limit law and its degenerations.
//!
//! With `T` the macroscopic scale, the observation point is
//! `N = rho1 rho2 T/(rho3 - rho1) + u T^{1/3}`, `t = T/(rho3 - rho1) + tau T^{1/3}`,
//! centred at `X = (1 - rho1 - rho2) T/(rho3 - rho1)`, and
//! `P((X - x_N(t))/T^{1/3} <= s) -> prod_k F_1((s - mu_k u + nu_k tau)/sigma_k)`.

use crate::error::{Error, Result};
use crate::initial::DensityTriple;
use crate::tracy_widom::{Ensemble, TwEvaluator};
use serde::{Deserialize, Serialize};

/// Flat-profile fluctuation scale `2^{2/3} rho^{1/3} / (1 - rho)^{2/3}`.
pub fn sigma_flat(rho: f64) -> f64 {
    2f64.powf(2.0 / 3.0) * rho.cbrt() / (1.0 - rho).powf(2.0 / 3.0)
}

/// Per-density constants of the three factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShockConstants {
    pub sigma: [f64; 3],
    pub mu: [f64; 3],
    pub nu: [f64; 3],
}

impl ShockConstants {
    pub fn new(d: &DensityTriple) -> Self {
        let r = d.values();
        let gap = (r[2] - r[0]).powf(-1.0 / 3.0);
        ShockConstants {
            sigma: r.map(|rho| gap * sigma_flat(rho)),
            mu: r.map(|rho| 1.0 / rho),
            nu: r.map(|rho| 1.0 - rho),
        }
    }

    /// Same constants with each flat scale replaced by its reciprocal.
    pub fn with_reciprocal_scale(&self, d: &DensityTriple) -> Self {
        let r = d.values();
        let gap = (r[2] - r[0]).powf(-1.0 / 3.0);
        ShockConstants { sigma: r.map(|rho| gap / sigma_flat(rho)), ..*self }
    }

    /// Arguments of the three factors.
    pub fn arguments(&self, u: f64, tau: f64, s: f64) -> [f64; 3] {
        [0, 1, 2].map(|k| (s - self.mu[k] * u + self.nu[k] * tau) / self.sigma[k])
    }
}

/// Where the two shocks meet, to leading order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TriplePoint {
    pub time: f64,
    pub position: f64,
    pub label: f64,
}

/// Observation point and centring for given `(u, tau)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalingFrame {
    pub densities: DensityTriple,
    pub u: f64,
    pub tau: f64,
    /// Unrounded label.
    pub label_exact: f64,
    /// Nearest integer to `label_exact`.
    pub label: i64,
    pub time: f64,
    pub center: f64,
    pub constants: ShockConstants,
}

impl ScalingFrame {
    /// `T^{1/3}`.
    pub fn scale(&self) -> f64 {
        (self.densities.big_t() as f64).cbrt()
    }

    pub fn triple_point(&self) -> TriplePoint {
        let [r1, r2, r3] = self.densities.values();
        let big_t = self.densities.big_t() as f64;
        TriplePoint {
            time: big_t / (r3 - r1),
            position: (1.0 - r1 - r2) * big_t / (r3 - r1),
            label: r1 * r2 * big_t / (r3 - r1),
        }
    }

    /// `(X - x) / T^{1/3}`.
    pub fn rescale(&self, position: i64) -> f64 {
        (self.center - position as f64) / self.scale()
    }
}

pub fn frame(d: &DensityTriple, u: f64, tau: f64) -> Result<ScalingFrame> {
    if !(u.is_finite() && tau.is_finite()) {
        return Err(Error::contract("u and tau must be finite"));
    }
    let [r1, r2, r3] = d.values();
    let big_t = d.big_t() as f64;
    let scale = big_t.cbrt();
    let label_exact = r1 * r2 * big_t / (r3 - r1) + u * scale;
    let time = big_t / (r3 - r1) + tau * scale;
    let label = label_exact.round() as i64;
    if label < 1 {
        return Err(Error::contract(format!("frame label {label_exact} rounds below 1")));
    }
    if !(time > 0.0) {
        return Err(Error::contract(format!("frame time {time} is not positive")));
    }
    Ok(ScalingFrame {
        densities: *d,
        u,
        tau,
        label_exact,
        label,
        time,
        center: (1.0 - r1 - r2) * big_t / (r3 - r1),
        constants: ShockConstants::new(d),
    })
}

fn require_goe(tw: &TwEvaluator) -> Result<()> {
    if tw.ensemble() != Ensemble::Goe {
        return Err(Error::contract("limit laws here need the GOE evaluator"));
    }
    Ok(())
}

/// `prod_k F_1((s - mu_k u + nu_k tau)/sigma_k)`.
pub fn product_prediction(d: &DensityTriple, u: f64, tau: f64, s: f64, tw: &TwEvaluator) -> Result<f64> {
    require_goe(tw)?;
    let args = ShockConstants::new(d).arguments(u, tau, s);
    args.iter().try_fold(1.0, |acc, &a| Ok(acc * tw.cdf(a)?))
}

/// Product law evaluated with an explicit set of constants.
pub fn product_prediction_with(c: &ShockConstants, u: f64, tau: f64, s: f64, tw: &TwEvaluator) -> Result<f64> {
    require_goe(tw)?;
    c.arguments(u, tau, s).iter().try_fold(1.0, |acc, &a| Ok(acc * tw.cdf(a)?))
}

/// `F_1(s / sigma(rho))`.
pub fn flat_prediction(rho: f64, s: f64, tw: &TwEvaluator) -> Result<f64> {
    require_goe(tw)?;
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::contract(format!("density {rho} outside (0, 1)")));
    }
    tw.cdf(s / sigma_flat(rho))
}

/// Which pair of densities survives as a single shock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShockCase {
    /// Before merging: the shock between `rho1` and `rho2`, `tau -> -inf`.
    A,
    /// Before merging: the shock between `rho2` and `rho3`, `tau -> -inf`.
    B,
    /// After merging: the shock between `rho1` and `rho3`, `tau -> +inf`.
    C,
}

impl ShockCase {
    /// Indices of the surviving factors.
    pub fn pair(&self) -> [usize; 2] {
        match self {
            ShockCase::A => [0, 1],
            ShockCase::B => [1, 2],
            ShockCase::C => [0, 2],
        }
    }

    /// `(u, s)` moved along the surviving shock.
    pub fn substitute(&self, d: &DensityTriple, u: f64, tau: f64, s: f64) -> (f64, f64) {
        let r = d.values();
        let [i, j] = self.pair();
        (u + tau * r[i] * r[j], s - (1.0 - r[i] - r[j]) * tau)
    }
}

/// Full three-factor product, surviving two-factor product and their gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorollaryLimit {
    pub full_product: f64,
    pub two_factor: f64,
    pub residual: f64,
}

pub fn corollary_limits(d: &DensityTriple, u: f64, tau: f64, s: f64, case: ShockCase, tw: &TwEvaluator) -> Result<CorollaryLimit> {
    require_goe(tw)?;
    let (us, ss) = case.substitute(d, u, tau, s);
    let args = ShockConstants::new(d).arguments(us, tau, ss);
    let f = [tw.cdf(args[0])?, tw.cdf(args[1])?, tw.cdf(args[2])?];
    let [i, j] = case.pair();
    let full_product = f[0] * f[1] * f[2];
    let two_factor = f[i] * f[j];
    Ok(CorollaryLimit { full_product, two_factor, residual: (full_product - two_factor).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference(big_t: i64) -> DensityTriple {
        DensityTriple::from_f64(0.1, 0.4, 0.8, big_t).unwrap()
    }

    #[test]
    fn reference_frame() {
        let f = frame(&reference(700), 0.0, 0.0).unwrap();
        assert_eq!(f.label, 40);
        assert!((f.time - 1000.0).abs() < 1e-9);
        assert!((f.center - 500.0).abs() < 1e-9);
        let tp = f.triple_point();
        assert!((tp.label - 40.0).abs() < 1e-9 && (tp.position - 500.0).abs() < 1e-9);
    }

    #[test]
    fn constants() {
        let c = ShockConstants::new(&reference(10));
        for (a, b) in c.mu.iter().zip([10.0, 2.5, 1.25]) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in c.nu.iter().zip([0.9, 0.6, 0.2]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((sigma_flat(0.5) - 2.0).abs() < 1e-14);
        assert!(sigma_flat(0.999) > 50.0);
    }

    #[test]
    fn linear_in_u_and_tau() {
        let d = reference(1000);
        let a = frame(&d, 0.0, 0.0).unwrap();
        let b = frame(&d, 1.0, 2.0).unwrap();
        assert!((b.label_exact - a.label_exact - 10.0).abs() < 1e-9);
        assert!((b.time - a.time - 20.0).abs() < 1e-9);
        assert_eq!(a.center, b.center);
    }

    #[test]
    fn degenerate_frame_rejected() {
        assert!(frame(&reference(10), -100.0, 0.0).is_err());
        assert!(frame(&reference(10), 0.0, -100.0).is_err());
    }

    #[test]
    fn case_a_first_arguments_are_tau_free() {
        let d = reference(10);
        let c = ShockConstants::new(&d);
        for tau in [-50.0, -5.0, 3.0] {
            let (u, s) = ShockCase::A.substitute(&d, 0.3, tau, 0.7);
            let args = c.arguments(u, tau, s);
            for k in 0..2 {
                let want = (0.7 - c.mu[k] * 0.3) / c.sigma[k];
                assert!((args[k] - want).abs() < 1e-12, "k={k} tau={tau}");
            }
        }
    }

    #[test]
    fn requires_goe() {
        let gue = TwEvaluator::gue(16).unwrap();
        assert!(flat_prediction(0.5, 0.0, &gue).is_err());
    }
}
