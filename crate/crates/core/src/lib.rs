//! Rate analysis of time-multiplexed quantum repeater chains.
//!
//! A chain of `n` repeater stations splits an end-to-end fiber into `n + 1`
//! elementary links. Every link attempts `M` heralded entanglements per time
//! slot, and each station swaps one pair of stored qubits per block of `m`
//! slots. The crate covers
//!
//! * the exact rate equation and memory/latency budget ([`model`]),
//! * closed-form and transcendental bounds on the optimized envelope ([`bounds`]),
//! * the integer-optimized envelope itself ([`envelope`]),
//! * seeded Monte Carlo of the protocol and its wait times ([`sim`]),
//! * config ingestion, sweep records and the command line ([`io`], [`cli`]).
//!
//! ```
//! use repeaterlab::{model, params::{presets, LossModel, RepeaterConfig}};
//!
//! let cfg = RepeaterConfig::new(4, 10).unwrap();
//! let rate = model::end_to_end_rate(&presets::fiber(100.0), &presets::hardware(1), &cfg, LossModel::Ideal);
//! assert!((rate - 4898.78).abs() < 0.01);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN.

pub mod bounds;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod io;
pub mod model;
pub mod params;
pub mod roots;
pub mod sim;

pub use error::{Error, Result};
pub use params::{ChannelParams, HardwareParams, LossModel, RepeaterConfig};
