use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Sites at the right edge of a window that no particle may enter.
pub const GUARD_SITES: i64 = 2;

/// Largest admissible horizon; one Poisson block per unit time is addressed by a `u32`.
pub(crate) const MAX_HORIZON: f64 = 4.0e9;

/// A finite space-time box `[left, right] x [0, horizon]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteWindow {
    left: i64,
    right: i64,
    horizon: f64,
}

impl SiteWindow {
    pub fn new(left: i64, right: i64, horizon: f64) -> Result<Self> {
        if left >= right {
            return Err(Error::contract(format!("window needs left < right, got [{left}, {right}]")));
        }
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(Error::contract(format!("window horizon must be finite and >= 0, got {horizon}")));
        }
        if horizon > MAX_HORIZON {
            return Err(Error::Capacity(format!("horizon {horizon} exceeds {MAX_HORIZON}")));
        }
        Ok(SiteWindow { left, right, horizon })
    }

    /// Window wide enough for `config` to run until `until` without touching the guard.
    pub fn covering(leftmost: i64, rightmost: i64, until: f64) -> Result<Self> {
        let right = rightmost
            .checked_add(recommended_margin(until) + GUARD_SITES)
            .ok_or_else(|| Error::Capacity("window right edge overflows".into()))?;
        SiteWindow::new(leftmost.min(right - 1), right, until)
    }

    pub fn left(&self) -> i64 {
        self.left
    }

    pub fn right(&self) -> i64 {
        self.right
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of sites, `right - left + 1`.
    pub fn width(&self) -> u128 {
        (i128::from(self.right) - i128::from(self.left)) as u128 + 1
    }

    pub fn contains(&self, site: i64) -> bool {
        (self.left..=self.right).contains(&site)
    }

    /// Last site a particle may occupy.
    pub fn last_free_site(&self) -> i64 {
        self.right - GUARD_SITES
    }
}

/// Right margin for a run of length `until`: `ceil(until + 8 sqrt(until max(1, ln until)))`.
pub fn recommended_margin(until: f64) -> i64 {
    if until <= 0.0 {
        return 0;
    }
    let spread = (until * until.ln().max(1.0)).sqrt();
    (until + 8.0 * spread).ceil() as i64
}
