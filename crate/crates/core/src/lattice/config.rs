use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::RangeInclusive;

/// Positions of the particles with labels `first_label ..= last_label()`.
///
/// Invariant: `positions` is strictly decreasing, so `x_{n+1} < x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParticleConfiguration {
    first_label: i64,
    positions: Vec<i64>,
}

impl ParticleConfiguration {
    pub fn new(first_label: i64, positions: Vec<i64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::contract("configuration needs at least one particle"));
        }
        if let Some(i) = positions.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::contract(format!(
                "positions must strictly decrease in label: x[{}] = {} but x[{}] = {}",
                first_label + i as i64,
                positions[i],
                first_label + i as i64 + 1,
                positions[i + 1]
            )));
        }
        Ok(ParticleConfiguration { first_label, positions })
    }

    /// Builds from a label range and a position rule.
    pub fn from_fn(labels: RangeInclusive<i64>, rule: impl Fn(i64) -> i64) -> Result<Self> {
        let first = *labels.start();
        ParticleConfiguration::new(first, labels.map(rule).collect())
    }

    pub(crate) fn from_sorted_unchecked(first_label: i64, positions: Vec<i64>) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[1] < w[0]));
        ParticleConfiguration { first_label, positions }
    }

    pub fn first_label(&self) -> i64 {
        self.first_label
    }

    pub fn last_label(&self) -> i64 {
        self.first_label + self.positions.len() as i64 - 1
    }

    pub fn labels(&self) -> RangeInclusive<i64> {
        self.first_label..=self.last_label()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains_label(&self, label: i64) -> bool {
        self.labels().contains(&label)
    }

    pub fn position(&self, label: i64) -> Option<i64> {
        let i = label.checked_sub(self.first_label)?;
        usize::try_from(i).ok().and_then(|i| self.positions.get(i).copied())
    }

    /// Positions ordered by increasing label.
    pub fn positions(&self) -> &[i64] {
        &self.positions
    }

    /// Position of the lowest label, the rightmost particle.
    pub fn rightmost(&self) -> i64 {
        self.positions[0]
    }

    pub fn leftmost(&self) -> i64 {
        *self.positions.last().expect("non-empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.positions.iter().enumerate().map(move |(i, &x)| (self.first_label + i as i64, x))
    }

    /// Sub-configuration on the labels shared with `labels`.
    pub fn restrict(&self, labels: RangeInclusive<i64>) -> Result<Self> {
        let lo = (*labels.start()).max(self.first_label);
        let hi = (*labels.end()).min(self.last_label());
        if lo > hi {
            return Err(Error::contract(format!("no labels of {:?} in {:?}", labels, self.labels())));
        }
        let a = (lo - self.first_label) as usize;
        let b = (hi - self.first_label) as usize;
        Ok(ParticleConfiguration { first_label: lo, positions: self.positions[a..=b].to_vec() })
    }

    pub fn translated(&self, dx: i64) -> Self {
        ParticleConfiguration {
            first_label: self.first_label,
            positions: self.positions.iter().map(|x| x + dx).collect(),
        }
    }

    /// Labels present in both configurations.
    pub fn shared_labels(&self, other: &Self) -> Option<RangeInclusive<i64>> {
        let lo = self.first_label.max(other.first_label);
        let hi = self.last_label().min(other.last_label());
        (lo <= hi).then_some(lo..=hi)
    }

    /// True when `self` is weakly to the right of `other` on every shared label.
    pub fn dominates(&self, other: &Self) -> bool {
        match self.shared_labels(other) {
            Some(r) => r.into_iter().all(|n| self.position(n) >= other.position(n)),
            None => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ParticleConfiguration::new(0, vec![]).is_err());
        assert!(ParticleConfiguration::new(0, vec![0, 0]).is_err());
        assert!(ParticleConfiguration::new(0, vec![0, 1]).is_err());
        let c = ParticleConfiguration::new(-2, vec![5, 3, 0]).unwrap();
        assert_eq!(c.labels(), -2..=0);
        assert_eq!(c.position(-1), Some(3));
        assert_eq!(c.position(1), None);
        assert_eq!(c.position(-3), None);
        assert_eq!(c.rightmost(), 5);
        assert_eq!(c.leftmost(), 0);
    }

    #[test]
    fn restrict_and_dominate() {
        let c = ParticleConfiguration::from_fn(0..=9, |n| -2 * n).unwrap();
        let r = c.restrict(3..=20).unwrap();
        assert_eq!(r.labels(), 3..=9);
        assert_eq!(r.position(3), Some(-6));
        assert!(c.restrict(20..=30).is_err());
        let shifted = c.translated(1);
        assert!(shifted.dominates(&c));
        assert!(!c.dominates(&shifted));
    }
}
