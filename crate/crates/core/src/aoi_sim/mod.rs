//! Seeded Monte Carlo simulation of the literal update processes.
//!
//! Ages are integrated exactly: every event time is an integer slot count,
//! so twice the area under the sawtooth is accumulated as an integer and the
//! only error left in an estimate is statistical.

mod config;
mod run;
mod sampler;
mod sawtooth;
mod stats;

pub use config::{Scheme, SimConfig, VariateMode};
pub use run::{simulate, simulate_sweep, stream_seed, ReplicationOutcome, SimResult, Simulator};
pub use sampler::DelaySampler;
pub use sawtooth::{Delivery, SawtoothIntegrator};
pub use stats::SampleStats;
