//! Exact continuous-time TASEP driven by site clocks.

mod config;
mod engine;
pub mod reference;
mod tape;
mod window;

pub use config::ParticleConfiguration;
pub use engine::{
    run, simulate, simulate_coupled, simulate_from, Simulation, Suppression, SuppressionLog,
    Trajectories,
};
pub use tape::{generate_tape, EventTape, RingEvent};
pub use window::{recommended_margin, SiteWindow, GUARD_SITES};
