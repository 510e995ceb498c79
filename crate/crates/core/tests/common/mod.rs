//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use std::collections::HashMap;
use twofloat::TwoFloat;

const AI0: (f64, f64) = (0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const NEG_AI1_0: (f64, f64) = (0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// `(Ai(x), Ai'(x))` by Taylor stepping `y'' = x y` from the exact values at 0,
/// in double-double arithmetic (the growing solution amplifies rounding by up to e^{4|x|^{3/2}/3}).
pub fn airy_by_ode(x: f64) -> (f64, f64) {
    let steps = (x.abs() / 0.05).ceil().max(1.0) as usize;
    let h = TwoFloat::from(x) / steps as f64;
    let mut y = TwoFloat::new_add(AI0.0, AI0.1);
    let mut dy = -TwoFloat::new_add(NEG_AI1_0.0, NEG_AI1_0.1);
    let mut x0 = TwoFloat::from(0.0);
    let order = 40;
    let mut a = vec![TwoFloat::from(0.0); order + 2];
    for _ in 0..steps {
        // Coefficients of y(x0 + e) = sum a_k e^k with (k+1)(k+2) a_{k+2} = x0 a_k + a_{k-1}.
        a[0] = y;
        a[1] = dy;
        for k in 0..order {
            let prev = if k == 0 { TwoFloat::from(0.0) } else { a[k - 1] };
            a[k + 2] = (x0 * a[k] + prev) / (((k + 1) * (k + 2)) as f64);
        }
        let (mut ny, mut ndy) = (TwoFloat::from(0.0), TwoFloat::from(0.0));
        let mut hp = TwoFloat::from(1.0);
        for k in 0..order + 2 {
            ny += a[k] * hp;
            if k + 1 < order + 2 {
                ndy += a[k + 1] * hp * ((k + 1) as f64);
            }
            hp *= h;
        }
        y = ny;
        dy = ndy;
        x0 += h;
    }
    (y.hi() + y.lo(), dy.hi() + dy.lo())
}

/// `(s, F_1(s), F_2(s))` on a grid, from the Hastings-McLeod solution of
/// `q'' = s q + 2 q^3` integrated backwards from `s = 12` with `q ~ Ai`.
pub fn painleve_tracy_widom(points: &[f64]) -> Vec<(f64, f64, f64)> {
    let s0 = 12.0;
    let (a, ap) = airy_by_ode_or_asymptotic(s0);
    // state: q, q', I1 = int q, I2 = int q^2, I3 = int x q^2 (all over (s, inf))
    let rhs = |s: f64, y: [f64; 5]| -> [f64; 5] {
        let q = y[0];
        [y[1], s * q + 2.0 * q * q * q, -q, -q * q, -s * q * q]
    };
    let h = -1.0e-4;
    let mut s = s0;
    let mut y = [a, ap, 0.0, 0.0, 0.0];
    let mut targets: Vec<(usize, f64)> = points.iter().copied().enumerate().collect();
    targets.sort_by(|p, q| q.1.total_cmp(&p.1));
    let mut out = vec![(0.0, 0.0, 0.0); points.len()];
    for (idx, target) in targets {
        let n = ((target - s) / h).round() as i64;
        for _ in 0..n {
            let k1 = rhs(s, y);
            let k2 = rhs(s + h / 2.0, add(y, k1, h / 2.0));
            let k3 = rhs(s + h / 2.0, add(y, k2, h / 2.0));
            let k4 = rhs(s + h, add(y, k3, h));
            for i in 0..5 {
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            s += h;
        }
        s = target;
        let f2 = (-(y[4] - s * y[3])).exp();
        let f1 = (-0.5 * y[2]).exp() * f2.sqrt();
        out[idx] = (target, f1, f2);
    }
    out
}

fn add(y: [f64; 5], k: [f64; 5], h: f64) -> [f64; 5] {
    let mut r = y;
    for i in 0..5 {
        r[i] += h * k[i];
    }
    r
}

/// Leading decaying expansion for large positive `x`, enough for the boundary value at 12.
fn airy_by_ode_or_asymptotic(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut u = [1.0; 12];
    for k in 1..12 {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    let (mut su, mut sv) = (0.0, 0.0);
    for k in 0..12 {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let v = if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u[k] };
        su += sign * u[k] / zeta.powi(k as i32);
        sv += sign * v / zeta.powi(k as i32);
    }
    let e = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (e / x.powf(0.25) * su, -e * x.powf(0.25) * sv)
}

/// Exact law at time `t` of two particles started at `(front, back)` on sites
/// `left..=right`, by exponentiating the generator of the continuous-time chain.
pub fn two_particle_law(front: i64, back: i64, left: i64, right: i64, t: f64) -> HashMap<(i64, i64), f64> {
    let mut states = Vec::new();
    for a in left..=right {
        for b in left..a {
            states.push((a, b));
        }
    }
    let index: HashMap<(i64, i64), usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = states.len();
    let mut q = DMatrix::<f64>::zeros(n, n);
    for (i, &(a, b)) in states.iter().enumerate() {
        if a < right {
            q[(i, index[&(a + 1, b)])] += 1.0;
            q[(i, i)] -= 1.0;
        }
        if b + 1 < a {
            q[(i, index[&(a, b + 1)])] += 1.0;
            q[(i, i)] -= 1.0;
        }
    }
    let p = (q * t).exp();
    let start = index[&(front, back)];
    states.iter().enumerate().map(|(j, &s)| (s, p[(start, j)])).collect()
}

/// One line of the acceptance summary.
///
/// Written straight to the process stdout so it shows without `--nocapture`.
pub fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    use std::io::Write;
    let line = format!("criterion {id:>2} [{}] {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}
