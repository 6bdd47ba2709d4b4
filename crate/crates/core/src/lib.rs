//! Link-level model of a three-node MIMO multi-way channel in which one node
//! (an aerial relay-like terminal, node 0 here) is only intermittently
//! available. Every node holds an independent message for each of the other
//! two, giving six unicast messages in total. The crate evaluates achievable
//! sum rates of several transmission schemes over i.i.d. Rayleigh channel
//! draws:
//!
//! * interference-alignment / zero-forcing beamforming (`iazf`),
//! * broadcast rounds with dirty-paper-optimal per-round rates (`bc`),
//! * the same rounds without availability knowledge (`blind-bc`),
//! * point-to-point rounds treating interference as noise (`p2p-tin`),
//! * two-way (pairwise bidirectional) rounds (`2w`).
//!
//! The library is split into `matcore` (complex matrix and capacity
//! primitives), `channel` (topology, fading draws, availability model),
//! `schemes` (stream allocation, beamformers, per-scheme rates) and
//! `simulate` (seeded Monte Carlo sweeps). Everything is deterministic for a
//! fixed seed, and results do not depend on how trials are scheduled.
//!
//! The crate is `no_std`-compatible (with `alloc`) when built without the
//! default `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod channel;
mod error;
pub(crate) mod fmath;
pub mod matcore;
pub mod rng;
pub mod schemes;
pub mod simulate;

pub use error::{Error, Result};
