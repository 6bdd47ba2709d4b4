//! Network topology, fading draws and the availability model.
//!
//! Three full-duplex nodes exchange unicast messages in both directions of
//! every pair. Node 0 is the aerial node: it is present in a slot only with
//! probability `tau`, which ties to geometry through a line-of-sight model.
//! Nodes 1 and 2 are ground nodes and always present. Antenna counts are
//! non-increasing in the node index.
//!
//! All channels are i.i.d. circularly symmetric complex Gaussian with unit
//! entry variance and stay fixed over a simulation trial.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::fmath;
use crate::matcore::CMat;
use crate::rng::complex_gaussian;

/// Directed node pairs in canonical order; all per-message tables in this
/// crate are indexed this way.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)];

/// Index of the directed pair `from -> to` in [`PAIRS`].
pub fn pair_index(from: usize, to: usize) -> usize {
    PAIRS
        .iter()
        .position(|&(f, t)| f == from && t == to)
        .expect("pair_index needs two distinct nodes below 3")
}

/// The two nodes other than `node`, in ascending order.
pub fn others(node: usize) -> (usize, usize) {
    match node {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("node index out of range"),
    }
}

/// The node that is neither `a` nor `b`.
pub fn third(a: usize, b: usize) -> usize {
    3 - a - b
}

/// Antenna counts per node, non-increasing from the aerial node down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntennaConfig {
    m: [usize; 3],
}

impl AntennaConfig {
    /// Validates `m0 >= m1 >= m2 >= 1`.
    pub fn new(m0: usize, m1: usize, m2: usize) -> Result<Self> {
        if m2 < 1 || m0 < m1 || m1 < m2 {
            return Err(Error::InvalidInput(format!(
                "antenna counts must be non-increasing and at least 1, got {m0},{m1},{m2}"
            )));
        }
        Ok(AntennaConfig { m: [m0, m1, m2] })
    }

    /// Antennas at `node`.
    pub fn at(&self, node: usize) -> usize {
        self.m[node]
    }

    pub fn as_array(&self) -> [usize; 3] {
        self.m
    }
}

/// One fading realisation: the six matrices `H[from -> to]`, each sized
/// (receive antennas) x (transmit antennas).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    cfg: AntennaConfig,
    mats: [CMat; 6],
}

impl ChannelSet {
    /// Wrap externally built matrices, checking dimensions and finiteness.
    pub fn new(cfg: AntennaConfig, mats: [CMat; 6]) -> Result<Self> {
        for (idx, &(from, to)) in PAIRS.iter().enumerate() {
            let m = &mats[idx];
            if m.rows() != cfg.at(to) || m.cols() != cfg.at(from) {
                return Err(Error::InvalidInput(format!(
                    "channel {from}->{to} must be {}x{}, got {}x{}",
                    cfg.at(to),
                    cfg.at(from),
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.all_finite() {
                return Err(Error::InvalidInput(format!(
                    "channel {from}->{to} has non-finite entries"
                )));
            }
        }
        Ok(ChannelSet { cfg, mats })
    }

    pub fn config(&self) -> AntennaConfig {
        self.cfg
    }

    /// Channel matrix of the directed link `from -> to`.
    pub fn h(&self, from: usize, to: usize) -> &CMat {
        &self.mats[pair_index(from, to)]
    }
}

/// Draw a full channel realisation. Matrices are filled in [`PAIRS`] order,
/// column-major within each matrix, so a given rng state always yields the
/// same set.
pub fn sample_channel_set<R: RngCore + ?Sized>(cfg: AntennaConfig, rng: &mut R) -> ChannelSet {
    let mats = core::array::from_fn(|idx| {
        let (from, to) = PAIRS[idx];
        CMat::from_fn(cfg.at(to), cfg.at(from), |_, _| complex_gaussian(rng))
    });
    ChannelSet { cfg, mats }
}

/// Bernoulli availability of the aerial node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntermittencyModel {
    tau: f64,
}

impl IntermittencyModel {
    /// Validates `0 <= tau <= 1`.
    pub fn new(tau: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::InvalidInput(format!(
                "availability probability must lie in [0, 1], got {tau}"
            )));
        }
        Ok(IntermittencyModel { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Draw `count` i.i.d. availability states (`true` = aerial node present).
pub fn sample_state_sequence<R: RngCore + ?Sized>(
    model: IntermittencyModel,
    count: usize,
    rng: &mut R,
) -> Vec<bool> {
    (0..count).map(|_| rng.gen::<f64>() < model.tau).collect()
}

/// Propagation environment classes for the line-of-sight model, each with
/// its pair of sigmoid constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Environment {
    Suburban,
    Urban,
    DenseUrban,
    UrbanHighRise,
}

impl Environment {
    /// Sigmoid constants (a1, a2) of this environment class.
    pub fn sigmoid_constants(&self) -> (f64, f64) {
        match self {
            Environment::Suburban => (4.88, 0.43),
            Environment::Urban => (9.61, 0.16),
            Environment::DenseUrban => (12.08, 0.11),
            Environment::UrbanHighRise => (27.23, 0.08),
        }
    }

    /// Token used on the command line and in reports.
    pub fn token(&self) -> &'static str {
        match self {
            Environment::Suburban => "suburban",
            Environment::Urban => "urban",
            Environment::DenseUrban => "dense-urban",
            Environment::UrbanHighRise => "urban-high-rise",
        }
    }

    pub const ALL: [Environment; 4] = [
        Environment::Suburban,
        Environment::Urban,
        Environment::DenseUrban,
        Environment::UrbanHighRise,
    ];
}

impl core::str::FromStr for Environment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "suburban" => Ok(Environment::Suburban),
            "urban" => Ok(Environment::Urban),
            "dense-urban" => Ok(Environment::DenseUrban),
            "urban-high-rise" => Ok(Environment::UrbanHighRise),
            other => Err(Error::Config(format!(
                "unknown environment '{other}' (expected suburban, urban, dense-urban or urban-high-rise)"
            ))),
        }
    }
}

impl core::fmt::Display for Environment {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.token())
    }
}

/// Aerial node placement relative to the ground nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    /// Altitude of the aerial node in metres.
    pub altitude_m: f64,
    /// Slant distance from the aerial node to the ground nodes in metres.
    pub distance_m: f64,
}

impl Geometry {
    /// Validates `0 < altitude <= distance`.
    pub fn new(altitude_m: f64, distance_m: f64) -> Result<Self> {
        if !(altitude_m > 0.0) || !(distance_m > 0.0) || altitude_m > distance_m {
            return Err(Error::InvalidInput(format!(
                "geometry needs 0 < altitude <= distance, got altitude {altitude_m} m, distance {distance_m} m"
            )));
        }
        Ok(Geometry { altitude_m, distance_m })
    }
}

/// Elevation angle of the aerial node seen from the ground, in degrees.
pub fn elevation_angle_deg(geom: Geometry) -> f64 {
    fmath::asin(geom.altitude_m / geom.distance_m) * 180.0 / core::f64::consts::PI
}

/// Line-of-sight probability at elevation `theta_deg` (degrees, in [0, 90]):
/// a sigmoid in the elevation angle with environment-specific constants,
/// `1 / (1 + a1 exp(-a2 (theta - a1)))`.
pub fn los_probability(env: Environment, theta_deg: f64) -> Result<f64> {
    if !(0.0..=90.0).contains(&theta_deg) {
        return Err(Error::InvalidInput(format!(
            "elevation angle must lie in [0, 90] degrees, got {theta_deg}"
        )));
    }
    let (a1, a2) = env.sigmoid_constants();
    Ok(1.0 / (1.0 + a1 * fmath::exp(-a2 * (theta_deg - a1))))
}

/// Availability probability implied by environment and geometry: the
/// line-of-sight probability at the resulting elevation angle.
pub fn tau_from_environment(env: Environment, geom: Geometry) -> Result<f64> {
    los_probability(env, elevation_angle_deg(geom))
}
