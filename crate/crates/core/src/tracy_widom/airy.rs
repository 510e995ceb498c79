//! The Airy function `Ai` and its derivative.
//!
//! Maclaurin series in double-double arithmetic for `|x| <= SWITCH`, the
//! exponentially decaying expansion beyond `SWITCH` and the oscillatory one
//! below `-SWITCH`. The series cancels by roughly `e^{2|x|^{3/2}/3}` for
//! positive `x`, so the extra 53 bits keep it accurate up to the switch.

use std::f64::consts::{FRAC_PI_4, PI};
use twofloat::TwoFloat;

/// Regime boundary.
pub const SWITCH: f64 = 8.0;

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)`.
pub const AI0: f64 = 0.355_028_053_887_817_2;
const AI0_LO: f64 = 2.052_336_324_362_12e-17;
/// `-Ai'(0) = 3^{-1/3} / Gamma(1/3)`.
pub const NEG_AI1_0: f64 = 0.258_819_403_792_806_8;
const NEG_AI1_0_LO: f64 = -2.522_243_111_610_832e-17;

/// Stateless evaluator of `Ai` and `Ai'`.
#[derive(Clone, Copy, Debug, Default)]
pub struct AiryEvaluator;

impl AiryEvaluator {
    pub fn threshold(&self) -> f64 {
        SWITCH
    }

    pub fn ai(&self, x: f64) -> f64 {
        airy_pair(x).0
    }

    pub fn pair(&self, x: f64) -> (f64, f64) {
        airy_pair(x)
    }
}

/// `Ai(x)`.
pub fn airy(x: f64) -> f64 {
    airy_pair(x).0
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.abs() <= SWITCH {
        series(x)
    } else {
        asymptotic(x)
    }
}

pub(crate) fn series(x: f64) -> (f64, f64) {
    let c1 = TwoFloat::new_add(AI0, AI0_LO);
    let c2 = TwoFloat::new_add(NEG_AI1_0, NEG_AI1_0_LO);
    let xd = TwoFloat::from(x);
    let x3 = xd * xd * xd;
    // f = sum t_k, g = sum s_k and their derivatives sum p_k, sum q_k.
    let mut t = TwoFloat::from(1.0);
    let mut s = xd;
    let mut p = xd * xd / 2.0;
    let mut q = TwoFloat::from(1.0);
    let (mut f, mut g, mut fp, mut gp) = (t, s, p, q);
    for k in 1..200 {
        let k3 = 3.0 * f64::from(k);
        t = t * x3 / ((k3 - 1.0) * k3);
        s = s * x3 / (k3 * (k3 + 1.0));
        q = q * x3 / (k3 * (k3 - 2.0));
        if k > 1 {
            p = p * x3 / ((k3 - 1.0) * (k3 - 3.0));
            fp += p;
        }
        f += t;
        g += s;
        gp += q;
        let small = |term: TwoFloat, sum: TwoFloat| term.hi().abs() <= 1e-33 * sum.hi().abs().max(1e-300);
        if k > 2 && small(t, f) && small(s, g) && small(p, fp) && small(q, gp) {
            break;
        }
    }
    let ai = c1 * f - c2 * g;
    let aip = c1 * fp - c2 * gp;
    (ai.hi() + ai.lo(), aip.hi() + aip.lo())
}

/// Coefficients `u_k` of the large-argument expansions.
fn u_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
    }
    u
}

const TERMS: usize = 40;

pub(crate) fn asymptotic(x: f64) -> (f64, f64) {
    let u = u_coefficients(TERMS);
    let v: Vec<f64> = (0..TERMS).map(|k| if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u[k] }).collect();
    let a = x.abs();
    let zeta = 2.0 / 3.0 * a * a.sqrt();
    let quarter = a.powf(0.25);
    if x > 0.0 {
        let (su, sv) = alternating_sums(&u, &v, zeta);
        let e = (-zeta).exp() / (2.0 * PI.sqrt());
        (e / quarter * su, -e * quarter * sv)
    } else {
        // Even and odd parts of the expansions, each alternating.
        let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
        let mut zk = 1.0;
        let mut last = f64::INFINITY;
        for k in 0..TERMS {
            let term = u[k].abs() * zk;
            if term > last || term < 1e-18 {
                break;
            }
            last = term;
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                ue += sign * u[k] * zk;
                ve += sign * v[k] * zk;
            } else {
                uo += sign * u[k] * zk;
                vo += sign * v[k] * zk;
            }
            zk /= zeta;
        }
        let (sn, cs) = (zeta - FRAC_PI_4).sin_cos();
        let amp = 1.0 / PI.sqrt();
        (amp / quarter * (cs * ue + sn * uo), amp * quarter * (sn * ve - cs * vo))
    }
}

fn alternating_sums(u: &[f64], v: &[f64], zeta: f64) -> (f64, f64) {
    let (mut su, mut sv) = (0.0, 0.0);
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..u.len() {
        let term = u[k] * zk;
        if term > last || term < 1e-18 {
            break;
        }
        last = term;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * u[k] * zk;
        sv += sign * v[k] * zk;
        zk /= zeta;
    }
    (su, sv)
}
