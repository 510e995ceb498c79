//! Lazily evaluated site clocks.
//!
//! Site `j` carries a rate-one Poisson process cut into unit blocks
//! `[m, m+1)`. The number of rings in a block and their offsets are drawn
//! from the Philox counter `(j, m, draw)` under the master seed, so the ring
//! times at a site depend on nothing but `(master_seed, site)`.

use super::window::SiteWindow;
use crate::error::{Error, Result};
use crate::rng::Philox;
use smallvec::SmallVec;

const INV_E: f64 = 0.367_879_441_171_442_33;
const MAX_BLOCK_RINGS: usize = 40;

pub(crate) type BlockRings = SmallVec<[f64; 8]>;

/// One ring of a site clock.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingEvent {
    pub time: f64,
    pub site: i64,
}

/// The graphical construction restricted to a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EventTape {
    rng: Philox,
    window: SiteWindow,
}

/// Builds the tape for `window` under `master_seed`.
///
/// Rings are generated on demand, so this is O(1); the capacity check guards
/// callers that materialize the full event list.
pub fn generate_tape(master_seed: u64, window: SiteWindow) -> Result<EventTape> {
    let expected = window.width() as f64 * window.horizon().max(1.0);
    let bytes = expected * std::mem::size_of::<RingEvent>() as f64;
    if bytes > isize::MAX as f64 {
        return Err(Error::Capacity(format!(
            "window {}..={} over horizon {} holds ~{expected:.3e} events, beyond the address space",
            window.left(),
            window.right(),
            window.horizon()
        )));
    }
    Ok(EventTape { rng: Philox::new(master_seed), window })
}

/// Poisson(1) by inversion of a uniform.
#[inline]
fn poisson_one(u: f64) -> usize {
    let mut k = 0;
    let mut p = INV_E;
    let mut cdf = p;
    while u >= cdf && k < MAX_BLOCK_RINGS {
        k += 1;
        p /= k as f64;
        cdf += p;
    }
    k
}

impl EventTape {
    pub fn master_seed(&self) -> u64 {
        self.rng.seed()
    }

    pub fn window(&self) -> &SiteWindow {
        &self.window
    }

    /// Same clocks on a different window.
    pub fn with_window(&self, window: SiteWindow) -> Result<EventTape> {
        generate_tape(self.master_seed(), window)
    }

    /// Sorted ring times of `site` in block `[block, block + 1)`, ignoring the horizon.
    pub(crate) fn block_rings(&self, site: i64, block: u32, out: &mut BlockRings) {
        out.clear();
        let s = site as u64;
        let ctr = |draw: u32| [s as u32, (s >> 32) as u32, block, draw];
        let (u_count, u_first) = self.rng.uniform_pair(ctr(0));
        let count = poisson_one(u_count);
        if count == 0 {
            return;
        }
        let base = f64::from(block);
        let ceiling = (base + 1.0).next_down();
        let at = |u: f64| (base + u).min(ceiling);
        out.push(at(u_first));
        let mut draw = 1;
        while out.len() < count {
            let (a, b) = self.rng.uniform_pair(ctr(draw));
            out.push(at(a));
            if out.len() < count {
                out.push(at(b));
            }
            draw += 1;
        }
        out.sort_unstable_by(f64::total_cmp);
    }

    /// All ring times of `site` in `(from, until]`, clipped to the horizon.
    pub fn site_rings(&self, site: i64, from: f64, until: f64) -> Vec<f64> {
        let until = until.min(self.window.horizon());
        let mut rings = Vec::new();
        if !(until > from) || until <= 0.0 {
            return rings;
        }
        let mut buf = BlockRings::new();
        let first = from.max(0.0).floor() as u32;
        let last = until.floor() as u32;
        for block in first..=last {
            self.block_rings(site, block, &mut buf);
            rings.extend(buf.iter().copied().filter(|&r| r > from && r > 0.0 && r <= until));
        }
        rings
    }

    /// Every ring in the window, sorted by time then ascending site.
    pub fn events(&self) -> Vec<RingEvent> {
        let horizon = self.window.horizon();
        let mut events = Vec::new();
        for site in self.window.left()..=self.window.right() {
            events.extend(self.site_rings(site, 0.0, horizon).into_iter().map(|time| RingEvent { time, site }));
        }
        events.sort_unstable_by(|a, b| a.time.total_cmp(&b.time).then(a.site.cmp(&b.site)));
        events
    }

    /// Latest ring of `site` within the given bounds; both bounds finite.
    pub(crate) fn last_ring_in(&self, site: i64, lo: f64, lo_inclusive: bool, hi: f64, hi_inclusive: bool) -> Option<f64> {
        let hi = hi.min(self.window.horizon());
        if hi < lo || hi <= 0.0 {
            return None;
        }
        let mut buf = BlockRings::new();
        let first = lo.max(0.0).floor() as u32;
        let mut block = hi.floor() as u32;
        loop {
            self.block_rings(site, block, &mut buf);
            let hit = buf.iter().rev().copied().find(|&r| {
                let above = if lo_inclusive { r >= lo } else { r > lo };
                let below = if hi_inclusive { r <= hi } else { r < hi };
                above && below && r > 0.0
            });
            if hit.is_some() {
                return hit;
            }
            if block == first {
                return None;
            }
            block -= 1;
        }
    }
}

/// Forward cursor over one site's clock, caching the current block.
#[derive(Clone, Debug, Default)]
pub(crate) struct SiteClock {
    site: i64,
    block: u32,
    loaded: bool,
    rings: BlockRings,
}

impl SiteClock {
    /// First ring of `site` after `after` (at `after` too if `inclusive`), within the horizon.
    #[inline]
    pub(crate) fn next_ring(&mut self, tape: &EventTape, site: i64, after: f64, inclusive: bool) -> Option<f64> {
        let horizon = tape.window.horizon();
        if after > horizon {
            return None;
        }
        let mut block = after.max(0.0).floor() as u32;
        loop {
            if f64::from(block) > horizon {
                return None;
            }
            if !(self.loaded && self.site == site && self.block == block) {
                tape.block_rings(site, block, &mut self.rings);
                self.site = site;
                self.block = block;
                self.loaded = true;
            }
            for &r in &self.rings {
                if r > after || (inclusive && r == after) {
                    return (r <= horizon && r > 0.0).then_some(r);
                }
            }
            block += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tape(seed: u64, left: i64, right: i64, horizon: f64) -> EventTape {
        generate_tape(seed, SiteWindow::new(left, right, horizon).unwrap()).unwrap()
    }

    #[test]
    fn poisson_inversion_boundaries() {
        assert_eq!(poisson_one(0.0), 0);
        assert_eq!(poisson_one(INV_E - 1e-12), 0);
        assert_eq!(poisson_one(INV_E + 1e-12), 1);
        assert_eq!(poisson_one(2.0 * INV_E + 1e-12), 2);
        assert!(poisson_one(1.0 - 1e-16) < MAX_BLOCK_RINGS);
    }

    #[test]
    fn zero_horizon_is_empty() {
        assert!(tape(42, 0, 10, 0.0).events().is_empty());
    }

    #[test]
    fn events_sorted_and_inside() {
        let t = tape(5, -7, 9, 12.5);
        let ev = t.events();
        assert!(!ev.is_empty());
        for w in ev.windows(2) {
            assert!(w[0].time < w[1].time || (w[0].time == w[1].time && w[0].site < w[1].site));
        }
        assert!(ev.iter().all(|e| e.time > 0.0 && e.time <= 12.5 && (-7..=9).contains(&e.site)));
    }

    #[test]
    fn window_extension_invariance() {
        let small = tape(17, 0, 10, 30.0);
        let big = tape(17, -5, 20, 30.0);
        for site in 0..=10 {
            assert_eq!(small.site_rings(site, 0.0, 30.0), big.site_rings(site, 0.0, 30.0));
        }
        let from_events: Vec<f64> = big.events().into_iter().filter(|e| e.site == 3).map(|e| e.time).collect();
        assert_eq!(from_events, small.site_rings(3, 0.0, 30.0));
    }

    #[test]
    fn horizon_extension_invariance() {
        let short = tape(3, 0, 4, 7.3);
        let long = tape(3, 0, 4, 50.0);
        assert_eq!(short.site_rings(2, 0.0, 7.3), long.site_rings(2, 0.0, 7.3));
    }

    #[test]
    fn cursor_matches_site_list() {
        let t = tape(11, 0, 3, 40.0);
        let rings = t.site_rings(2, 0.0, 40.0);
        let mut clock = SiteClock::default();
        let mut seen = Vec::new();
        let mut now = 0.0;
        while let Some(r) = clock.next_ring(&t, 2, now, false) {
            seen.push(r);
            now = r;
        }
        assert_eq!(seen, rings);
        assert_eq!(clock.next_ring(&t, 2, rings[3], true), Some(rings[3]));
        assert_eq!(clock.next_ring(&t, 2, rings[3], false), Some(rings[4]));
    }

    #[test]
    fn backward_lookup_matches_site_list() {
        let t = tape(12, 0, 3, 40.0);
        let rings = t.site_rings(1, 0.0, 40.0);
        let k = rings.len() / 2;
        assert_eq!(t.last_ring_in(1, 0.0, false, rings[k], true), Some(rings[k]));
        assert_eq!(t.last_ring_in(1, 0.0, false, rings[k], false), Some(rings[k - 1]));
        assert_eq!(t.last_ring_in(1, rings[k], false, rings[k], true), None);
        assert_eq!(t.last_ring_in(1, 0.0, false, 1e9, true), rings.last().copied());
    }

    #[test]
    fn mean_count_is_horizon() {
        let h = 5.0;
        let reps = 20_000;
        let total: usize = (0..reps).map(|s| tape(s, 0, 1, h).site_rings(0, 0.0, h).len()).sum();
        let mean = total as f64 / reps as f64;
        let sigma = (h / reps as f64).sqrt();
        assert!((mean - h).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn capacity_error() {
        let w = SiteWindow::new(i64::MIN / 2, i64::MAX / 2, 1e9).unwrap();
        assert!(matches!(generate_tape(1, w), Err(Error::Capacity(_))));
    }
}
