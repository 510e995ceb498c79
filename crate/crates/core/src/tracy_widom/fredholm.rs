//! Nyström discretization of `det(I - K)` on the half-line.
//!
//! Gauss-Legendre nodes `u_i` on (-1, 1) are mapped to `x = L (1 + u) / (1 - u)`,
//! and the square roots of the mapped weights are folded into both sides of
//! the kernel matrix so that it stays symmetric.

use super::airy::airy_pair;
use crate::error::{Error, Result};
use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::num::NonZeroUsize;

pub const DEFAULT_ORDER: usize = 64;
pub const HALF_LINE_SCALE: f64 = 10.0;
const MIN_ORDER: usize = 8;
const DIAGONAL_GAP: f64 = 1e-6;
const CLAMP_WARN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// `F_1`, kernel `Ai((x + y)/2 + s) / 2`.
    Goe,
    /// `F_2`, the Airy kernel shifted by `s`.
    Gue,
}

/// Evaluates `F_1` or `F_2` at a fixed quadrature order.
#[derive(Clone, Debug)]
pub struct TwEvaluator {
    ensemble: Ensemble,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    sqrt_weights: Vec<f64>,
}

impl TwEvaluator {
    pub fn new(ensemble: Ensemble, order: usize) -> Result<Self> {
        if order < MIN_ORDER {
            return Err(Error::contract(format!("quadrature order must be at least {MIN_ORDER}, got {order}")));
        }
        let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("order >= 8"));
        let (nodes, weights): (Vec<f64>, Vec<f64>) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(u, w)| {
                let x = HALF_LINE_SCALE * (1.0 + u) / (1.0 - u);
                let jac = 2.0 * HALF_LINE_SCALE / ((1.0 - u) * (1.0 - u));
                (x, w * jac)
            })
            .unzip();
        let sqrt_weights = weights.iter().map(|w| w.sqrt()).collect();
        Ok(TwEvaluator { ensemble, order, nodes, weights, sqrt_weights })
    }

    pub fn goe(order: usize) -> Result<Self> {
        TwEvaluator::new(Ensemble::Goe, order)
    }

    pub fn gue(order: usize) -> Result<Self> {
        TwEvaluator::new(Ensemble::Gue, order)
    }

    pub fn ensemble(&self) -> Ensemble {
        self.ensemble
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Mapped nodes on `(0, inf)`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Mapped weights, Jacobian included.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Kernel values at the node pairs, before weighting.
    pub fn kernel_matrix(&self, s: f64) -> Result<DMatrix<f64>> {
        if !s.is_finite() {
            return Err(Error::Numeric(format!("non-finite argument {s}")));
        }
        let m = self.order;
        let x = &self.nodes;
        let mut k = DMatrix::zeros(m, m);
        match self.ensemble {
            Ensemble::Goe => {
                for i in 0..m {
                    for j in 0..=i {
                        let v = 0.5 * airy_pair(0.5 * (x[i] + x[j]) + s).0;
                        k[(i, j)] = v;
                        k[(j, i)] = v;
                    }
                }
            }
            Ensemble::Gue => {
                let vals: Vec<(f64, f64, f64)> = x.iter().map(|&xi| {
                    let z = xi + s;
                    let (a, ap) = airy_pair(z);
                    (z, a, ap)
                }).collect();
                for i in 0..m {
                    for j in 0..=i {
                        let (zi, ai, api) = vals[i];
                        let (zj, aj, apj) = vals[j];
                        let v = if (zi - zj).abs() < DIAGONAL_GAP {
                            let zm = 0.5 * (zi + zj);
                            let (a, ap) = airy_pair(zm);
                            ap * ap - zm * a * a
                        } else {
                            (ai * apj - api * aj) / (zi - zj)
                        };
                        k[(i, j)] = v;
                        k[(j, i)] = v;
                    }
                }
            }
        }
        if k.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite kernel entry at s = {s}")));
        }
        Ok(k)
    }

    /// `det(I - K_s)` clamped to [0, 1].
    pub fn cdf(&self, s: f64) -> Result<f64> {
        let mut a = self.kernel_matrix(s)?;
        let m = self.order;
        for i in 0..m {
            for j in 0..m {
                a[(i, j)] *= -self.sqrt_weights[i] * self.sqrt_weights[j];
            }
            a[(i, i)] += 1.0;
        }
        let det = a.lu().determinant();
        if !det.is_finite() {
            return Err(Error::Numeric(format!("non-finite determinant at s = {s}")));
        }
        if !(-CLAMP_WARN..=1.0 + CLAMP_WARN).contains(&det) {
            log::warn!("{:?} determinant {det} at s = {s} outside [0, 1]; clamping", self.ensemble);
        }
        Ok(det.clamp(0.0, 1.0))
    }
}

/// `F_1(s)` at quadrature order `m`.
pub fn f_goe(s: f64, m: usize) -> Result<f64> {
    TwEvaluator::goe(m)?.cdf(s)
}

/// `F_2(s)` at quadrature order `m`.
pub fn f_gue(s: f64, m: usize) -> Result<f64> {
    TwEvaluator::gue(m)?.cdf(s)
}
