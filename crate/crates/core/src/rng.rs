//! Philox4x32-10 counter-based generator.
//!
//! Every random quantity in the crate is a pure function of a 64-bit key and
//! a 128-bit counter, so streams can be addressed directly by (site, block)
//! or (replica index) without any sequential state.

const M0: u32 = 0xD251_1F53;
const M1: u32 = 0xCD9E_8D57;
const W0: u32 = 0x9E37_79B9;
const W1: u32 = 0xBB67_AE85;

/// Counter word reserved for seed derivation; never used as a time block.
const DERIVE_TAG: u32 = u32::MAX;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

/// One Philox4x32 block with ten rounds.
#[inline]
pub fn philox4x32(counter: [u32; 4], key: [u32; 2]) -> [u32; 4] {
    let mut c = counter;
    let mut k = key;
    for round in 0..10 {
        if round > 0 {
            k[0] = k[0].wrapping_add(W0);
            k[1] = k[1].wrapping_add(W1);
        }
        let (hi0, lo0) = mulhilo(M0, c[0]);
        let (hi1, lo1) = mulhilo(M1, c[2]);
        c = [hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0];
    }
    c
}

/// Uniform on [0, 1) with 53 random bits.
#[inline]
pub fn unit_f64(hi: u32, lo: u32) -> f64 {
    let bits = ((u64::from(hi) << 32) | u64::from(lo)) >> 11;
    bits as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A keyed Philox stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Philox {
    key: [u32; 2],
}

impl Philox {
    pub fn new(seed: u64) -> Self {
        Philox { key: [seed as u32, (seed >> 32) as u32] }
    }

    pub fn seed(&self) -> u64 {
        u64::from(self.key[0]) | (u64::from(self.key[1]) << 32)
    }

    #[inline]
    pub fn block(&self, counter: [u32; 4]) -> [u32; 4] {
        philox4x32(counter, self.key)
    }

    /// Two independent uniforms from one block.
    #[inline]
    pub fn uniform_pair(&self, counter: [u32; 4]) -> (f64, f64) {
        let b = self.block(counter);
        (unit_f64(b[0], b[1]), unit_f64(b[2], b[3]))
    }

    /// Child seed for an indexed sub-stream (e.g. a replica).
    pub fn derive(&self, index: u64) -> u64 {
        let b = self.block([index as u32, (index >> 32) as u32, DERIVE_TAG, DERIVE_TAG]);
        u64::from(b[0]) | (u64::from(b[1]) << 32)
    }
}

/// Seed of replica `index` under `master_seed`.
pub fn replica_seed(master_seed: u64, index: u64) -> u64 {
    Philox::new(master_seed).derive(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Known-answer vectors of the Random123 reference implementation.
    #[test]
    fn known_answers() {
        assert_eq!(
            philox4x32([0; 4], [0; 2]),
            [0x6627_e8d5, 0xe169_c58d, 0xbc57_ac4c, 0x9b00_dbd8]
        );
        assert_eq!(
            philox4x32([u32::MAX; 4], [u32::MAX; 2]),
            [0x408f_276d, 0x41c8_3b0e, 0xa20b_c7c6, 0x6d54_51fd]
        );
        assert_eq!(
            philox4x32(
                [0x243f_6a88, 0x85a3_08d3, 0x1319_8a2e, 0x0370_7344],
                [0xa409_3822, 0x299f_31d0]
            ),
            [0xd16c_fe09, 0x94fd_cceb, 0x5001_e420, 0x2412_6ea1]
        );
    }

    #[test]
    fn unit_range() {
        assert_eq!(unit_f64(0, 0), 0.0);
        assert!(unit_f64(u32::MAX, u32::MAX) < 1.0);
    }

    #[test]
    fn seed_roundtrip_and_derivation() {
        let p = Philox::new(0x0123_4567_89ab_cdef);
        assert_eq!(p.seed(), 0x0123_4567_89ab_cdef);
        assert_ne!(p.derive(0), p.derive(1));
        assert_eq!(replica_seed(7, 3), replica_seed(7, 3));
        assert_ne!(replica_seed(7, 3), replica_seed(8, 3));
    }

    #[test]
    fn uniform_moments() {
        let p = Philox::new(99);
        let n = 200_000u32;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let (a, b) = p.uniform_pair([i, 0, 0, 0]);
            s += a + b;
            s2 += a * a + b * b;
        }
        let m = s / f64::from(2 * n);
        let v = s2 / f64::from(2 * n) - m * m;
        assert!((m - 0.5).abs() < 0.003, "mean {m}");
        assert!((v - 1.0 / 12.0).abs() < 0.002, "var {v}");
    }
}
