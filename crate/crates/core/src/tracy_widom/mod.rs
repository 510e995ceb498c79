//! Tracy-Widom distribution functions by Fredholm determinant quadrature.

pub mod airy;
mod fredholm;

pub use airy::{airy, airy_pair, AiryEvaluator};
pub use fredholm::{f_goe, f_gue, Ensemble, TwEvaluator, DEFAULT_ORDER, HALF_LINE_SCALE};
