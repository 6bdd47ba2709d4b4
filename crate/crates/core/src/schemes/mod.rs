//! Transmission schemes and their per-realisation achievable rates.
//!
//! The star of the show is the interference-alignment / zero-forcing scheme
//! (`iazf`): every node splits each message into zero-forced streams (sent in
//! the null space of the channel towards the unintended receiver) and
//! alignment streams (cross traffic of the other two nodes is pairwise
//! aligned at the non-addressed receiver to save dimensions there). Four
//! time-sharing baselines are evaluated on the same channel realisation:
//! broadcast rounds (`bc`), availability-blind broadcast rounds (`blind-bc`),
//! cyclic point-to-point rounds treating interference as noise (`p2p-tin`)
//! and pairwise two-way rounds (`2w`).
//!
//! Rates of messages to or from the aerial node are scaled by its
//! availability probability: those signals pass through an erasure channel,
//! so the analytic expectation multiplies by `tau` instead of sampling
//! states.

mod alloc;
mod beamform;
mod rates;

use ::alloc::format;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::fmath;

pub use self::alloc::{allocate_streams, dof_formula, weighted_dof, StreamAllocation};
pub use self::beamform::{
    build_ia_beamformers, build_zf_beamformers, decoding_stages, effective_channels,
    BeamformerSet, DecodingStage,
};
pub use self::rates::{
    bc_sum_rate, blind_bc_sum_rate, iazf_rates, p2p_tin_sum_rate, prepare_iazf,
    two_way_sum_rate, IazfPrepared,
};
pub(crate) use self::rates::{prepare_broadcast, prepare_tin, prepare_two_way};

/// The five evaluated transmission schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    IaZf,
    Bc,
    BlindBc,
    P2pTin,
    TwoWay,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::IaZf,
        Scheme::Bc,
        Scheme::BlindBc,
        Scheme::P2pTin,
        Scheme::TwoWay,
    ];

    /// Token used on the command line and in CSV output.
    pub fn token(&self) -> &'static str {
        match self {
            Scheme::IaZf => "iazf",
            Scheme::Bc => "bc",
            Scheme::BlindBc => "blind-bc",
            Scheme::P2pTin => "p2p-tin",
            Scheme::TwoWay => "2w",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iazf" => Ok(Scheme::IaZf),
            "bc" => Ok(Scheme::Bc),
            "blind-bc" => Ok(Scheme::BlindBc),
            "p2p-tin" => Ok(Scheme::P2pTin),
            "2w" => Ok(Scheme::TwoWay),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected iazf, bc, blind-bc, p2p-tin or 2w)"
            ))),
        }
    }
}

impl core::fmt::Display for Scheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.token())
    }
}

/// Per-node transmit power and noise variance (both linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Transmit power available at every node.
    pub power: f64,
    /// Noise variance per receive antenna.
    pub noise: f64,
}

impl LinkBudget {
    /// Validates both quantities positive and finite.
    pub fn new(power: f64, noise: f64) -> Result<Self> {
        if !(power > 0.0) || !power.is_finite() || !(noise > 0.0) || !noise.is_finite() {
            return Err(Error::InvalidInput(format!(
                "link budget needs positive finite power and noise, got P={power}, noise={noise}"
            )));
        }
        Ok(LinkBudget { power, noise })
    }

    /// Budget at a given SNR in dB with unit noise variance.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::InvalidInput(format!("SNR must be finite, got {snr_db} dB")));
        }
        LinkBudget::new(fmath::exp10(snr_db / 10.0), 1.0)
    }

    /// Signal-to-noise ratio P / noise.
    pub fn rho(&self) -> f64 {
        self.power / self.noise
    }
}

/// Achievable rate of each of the six messages, bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    rates: [f64; 6],
}

impl RateReport {
    /// Rates indexed like [`crate::channel::PAIRS`]; all must be finite and
    /// non-negative.
    pub fn new(rates: [f64; 6]) -> Result<Self> {
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::NumericalFailure(format!(
                "rates must be finite and non-negative, got {rates:?}"
            )));
        }
        Ok(RateReport { rates })
    }

    /// Rate of the message `from -> to`.
    pub fn rate(&self, from: usize, to: usize) -> f64 {
        self.rates[crate::channel::pair_index(from, to)]
    }

    /// All six rates in [`crate::channel::PAIRS`] order.
    pub fn rates(&self) -> [f64; 6] {
        self.rates
    }

    /// Sum rate over all messages.
    pub fn sum(&self) -> f64 {
        self.rates.iter().sum()
    }
}
