//! Age of information for status updates sent over a symbol-erasure channel.
//!
//! Two transmission strategies are covered:
//!
//! * **IIR** (infinite incremental redundancy): a rateless code keeps sending
//!   symbols until the monitor (or every one of `m` monitors) has collected
//!   `k` un-erased symbols, then the next update starts.
//! * **FR** (fixed redundancy): every update is an `n`-symbol packet sent
//!   without feedback and is decoded only if at least `k` symbols survive.
//!
//! [`erasure_stats`] evaluates the negative binomial delivery-time law,
//! [`aoi_analytic`] turns it into average ages, bounds and optimal packet
//! lengths, and [`aoi_sim`] simulates the literal processes with exact
//! sawtooth integration so every formula has an independent check.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aoi_analytic;
pub mod aoi_sim;
pub mod erasure_stats;
mod error;
mod numeric;

pub use erasure_stats::ChannelSpec;
pub use error::{Error, Result};
