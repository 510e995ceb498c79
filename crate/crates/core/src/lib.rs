//! Exact simulation of the totally asymmetric simple exclusion process (TASEP)
//! from site Poisson clocks, with the tools needed to study two merging shocks:
//! backwards label paths, decompositions of the initial data, Tracy-Widom
//! distribution functions and a Monte Carlo harness comparing them.
//!
//! Labels run right to left: `x_{n+1} < x_n`.

// NaN-rejecting guards are written as negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backwards;
pub mod cli;
pub mod error;
pub mod harness;
pub mod initial;
pub mod lattice;
pub mod rng;
pub mod scaling;
pub mod tracy_widom;

pub use error::{Error, Result};
pub use initial::{Density, DensityTriple, LabelRange};
pub use lattice::{EventTape, ParticleConfiguration, SiteWindow, SuppressionLog};
