//! Initial configurations: the three-density profile, flat and step data,
//! and the three subproblems whose minimum reproduces the three-density run.

use crate::error::{Error, Result};
use crate::lattice::ParticleConfiguration;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::RangeInclusive;

const MAX_DENOMINATOR: i64 = 1_000_000;

/// A particle density in (0, 1), stored as an exact reduced fraction so that
/// integer parts such as `floor(n / rho)` are computed without rounding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Density {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

impl Density {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if !(num > 0 && den > num) {
            return Err(Error::contract(format!("density {num}/{den} must lie in (0, 1)")));
        }
        let g = gcd(num, den);
        Ok(Density { num: num / g, den: den / g })
    }

    /// Closest fraction with denominator at most 10^6, required to match `x` to 1e-9.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::contract(format!("density {x} must lie in (0, 1)")));
        }
        // Continued-fraction convergents h/k.
        let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
        let mut rest = x;
        let mut best = None;
        for _ in 0..64 {
            let a = rest.floor();
            if a > MAX_DENOMINATOR as f64 {
                break;
            }
            let a = a as i64;
            let (h2, k2) = (a * h1 + h0, a * k1 + k0);
            if k2 > MAX_DENOMINATOR {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if h1 > 0 && (h1 as f64 / k1 as f64 - x).abs() <= 1e-9 {
                best = Some((h1, k1));
                break;
            }
            let frac = rest - a as f64;
            if frac < 1e-15 {
                break;
            }
            rest = 1.0 / frac;
        }
        match best {
            Some((p, q)) => Density::new(p, q),
            None => Err(Error::contract(format!("density {x} is not a fraction with denominator <= {MAX_DENOMINATOR}"))),
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `floor(n / rho)`.
    pub fn floor_div(&self, n: i64) -> i64 {
        (i128::from(n) * i128::from(self.den)).div_euclid(i128::from(self.num)) as i64
    }

    /// `floor(n * rho)`.
    pub fn floor_mul(&self, n: i64) -> i64 {
        (i128::from(n) * i128::from(self.num)).div_euclid(i128::from(self.den)) as i64
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl Serialize for Density {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Density {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        Density::from_f64(x).map_err(serde::de::Error::custom)
    }
}

/// Three densities `rho1 < rho2 < rho3` and the length `T` of the middle block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DensityTriple {
    rho1: Density,
    rho2: Density,
    rho3: Density,
    big_t: i64,
}

impl DensityTriple {
    pub fn new(rho1: Density, rho2: Density, rho3: Density, big_t: i64) -> Result<Self> {
        let (a, b, c) = (rho1.value(), rho2.value(), rho3.value());
        if !(a < b && b < c) {
            return Err(Error::contract(format!("densities must satisfy rho1 < rho2 < rho3, got {a}, {b}, {c}")));
        }
        if big_t < 1 {
            return Err(Error::contract(format!("T must be at least 1, got {big_t}")));
        }
        Ok(DensityTriple { rho1, rho2, rho3, big_t })
    }

    pub fn from_f64(rho1: f64, rho2: f64, rho3: f64, big_t: i64) -> Result<Self> {
        DensityTriple::new(Density::from_f64(rho1)?, Density::from_f64(rho2)?, Density::from_f64(rho3)?, big_t)
    }

    pub fn rho1(&self) -> Density {
        self.rho1
    }

    pub fn rho2(&self) -> Density {
        self.rho2
    }

    pub fn rho3(&self) -> Density {
        self.rho3
    }

    pub fn densities(&self) -> [Density; 3] {
        [self.rho1, self.rho2, self.rho3]
    }

    pub fn values(&self) -> [f64; 3] {
        [self.rho1.value(), self.rho2.value(), self.rho3.value()]
    }

    pub fn big_t(&self) -> i64 {
        self.big_t
    }

    /// Same densities, different `T`.
    pub fn with_big_t(&self, big_t: i64) -> Result<Self> {
        DensityTriple::new(self.rho1, self.rho2, self.rho3, big_t)
    }

    /// `floor(T rho2)`, the number of particles in the middle block.
    pub fn middle_count(&self) -> i64 {
        self.rho2.floor_mul(self.big_t)
    }

    /// Initial position of label `n` in the three-density profile.
    pub fn position(&self, n: i64) -> i64 {
        let m = self.middle_count();
        if n >= 0 {
            -self.rho1.floor_div(n)
        } else if n >= -m {
            -self.rho2.floor_div(n)
        } else {
            self.big_t - self.rho3.floor_div(n + m)
        }
    }
}

/// Inclusive label range `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelRange {
    pub lo: i64,
    pub hi: i64,
}

impl LabelRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::contract(format!("empty label range [{lo}, {hi}]")));
        }
        Ok(LabelRange { lo, hi })
    }

    pub fn range(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl From<LabelRange> for RangeInclusive<i64> {
    fn from(r: LabelRange) -> Self {
        r.range()
    }
}

/// Three-density profile on `labels`.
pub fn triple_ic(d: &DensityTriple, labels: LabelRange) -> Result<ParticleConfiguration> {
    ParticleConfiguration::from_fn(labels.range(), |n| d.position(n))
}

/// Flat profile `x_n = -floor((n + shift) / rho)`.
pub fn flat_ic(rho: Density, shift: i64, labels: LabelRange) -> Result<ParticleConfiguration> {
    ParticleConfiguration::from_fn(labels.range(), |n| -rho.floor_div(n + shift))
}

/// Packed block `x_n = z + 1 - n` for `n = 1..=count`.
pub fn step_ic(z: i64, count: i64) -> Result<ParticleConfiguration> {
    if count < 1 {
        return Err(Error::contract(format!("step configuration needs count >= 1, got {count}")));
    }
    ParticleConfiguration::from_fn(1..=count, |n| z + 1 - n)
}

/// The three subproblems of a three-density profile.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub first: ParticleConfiguration,
    pub second: ParticleConfiguration,
    pub third: ParticleConfiguration,
}

impl Decomposition {
    pub fn parts(&self) -> [&ParticleConfiguration; 3] {
        [&self.first, &self.second, &self.third]
    }
}

/// Subproblems on `labels`:
/// the first keeps only the `rho1` region (`n >= 0`);
/// the second packs `n >= 0` behind the origin and keeps the middle block;
/// the third packs everything down to the bottom of the middle block behind `T`.
pub fn decomposition_ics(d: &DensityTriple, labels: LabelRange) -> Result<Decomposition> {
    let m = d.middle_count();
    let first_labels = LabelRange::new(labels.lo.max(0), labels.hi)
        .map_err(|_| Error::contract("label range contains no label n >= 0 for the first subproblem"))?;
    let second_labels = LabelRange::new(labels.lo.max(-m), labels.hi)
        .map_err(|_| Error::contract("label range lies entirely below the middle block"))?;
    let first = ParticleConfiguration::from_fn(first_labels.range(), |n| d.position(n))?;
    let second = ParticleConfiguration::from_fn(second_labels.range(), |n| if n >= 0 { -n } else { d.position(n) })?;
    let third = ParticleConfiguration::from_fn(labels.range(), |n| if n >= -m { d.big_t - (n + m) } else { d.position(n) })?;
    Ok(Decomposition { first, second, third })
}

/// Full-line flat profiles matching each subproblem on its retained labels.
pub fn extended_ics(d: &DensityTriple, labels: LabelRange) -> Result<Decomposition> {
    let m = d.middle_count();
    Ok(Decomposition {
        first: flat_ic(d.rho1(), 0, labels)?,
        second: flat_ic(d.rho2(), 0, labels)?,
        third: flat_ic(d.rho3(), m, labels)?.translated(d.big_t()),
    })
}
