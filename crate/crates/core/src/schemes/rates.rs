//! Achievable rates of the five schemes on one channel realisation.
//!
//! Every scheme comes in two layers: a `prepare_*` step doing the
//! SNR-independent work (beamformers, covariances, effective gains) and a
//! cheap report step that applies a link budget and the availability
//! probability. The sweep engine reuses prepared parts across grid points.

use alloc::format;
use alloc::vec::Vec;

use rand::RngCore;

use crate::channel::{others, pair_index, ChannelSet, PAIRS};
use crate::error::{Error, Result};
use crate::fmath;
use crate::matcore::{
    logdet2_hpd, mac_corner_rates, mac_sum_capacity, p2p_capacity, svd, wf_covariance, CMat,
};
use crate::schemes::alloc::pair_weight;
use crate::schemes::beamform::{decoding_stages, BeamformerSet};
use crate::schemes::{LinkBudget, RateReport, StreamAllocation};

/// Iterative water-filling defaults for the broadcast baselines. The
/// tolerance is an absolute objective improvement per round; high-SNR
/// objectives reach tens of bits, where demanding 1e-9 stalls against the
/// averaging step's slow tail for no accuracy worth having.
const MAC_TOL: f64 = 1e-8;
const MAC_MAX_ITER: usize = 5000;

fn check_tau(tau: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidInput(format!(
            "availability probability must lie in [0, 1], got {tau}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------- IA / ZF

/// SNR-independent part of the IA/ZF evaluation: squared effective stream
/// gains per message after post-coding, and per-node stream counts for the
/// power split.
#[derive(Debug, Clone)]
pub struct IazfPrepared {
    gains: [Vec<f64>; 6],
    tx_streams: [usize; 3],
}

/// Build beamformers and post-coders for `alloc` and extract the effective
/// gains. `rng` feeds only the generic alignment directions.
pub fn prepare_iazf<R: RngCore + ?Sized>(
    ch: &ChannelSet,
    alloc: &StreamAllocation,
    rng: &mut R,
) -> Result<IazfPrepared> {
    let bf = BeamformerSet::build(ch, alloc, rng)?;
    let mut gains: [Vec<f64>; 6] = core::array::from_fn(|_| Vec::new());
    for stage in decoding_stages(ch, &bf, alloc)? {
        let g = &stage.postcoder.adjoint() * &stage.desired;
        let dec = svd(&g)?;
        gains[pair_index(stage.from, stage.to)] = dec.sigma.iter().map(|s| s * s).collect();
    }
    Ok(IazfPrepared {
        gains,
        tx_streams: core::array::from_fn(|node| alloc.tx_streams(node)),
    })
}

impl IazfPrepared {
    /// Rates under `budget`, with node 0's messages scaled by `tau`. Each
    /// node splits its power evenly over its own streams.
    pub fn report(&self, budget: LinkBudget, tau: f64) -> Result<RateReport> {
        check_tau(tau)?;
        let mut rates = [0.0; 6];
        for (p, &(from, to)) in PAIRS.iter().enumerate() {
            if self.gains[p].is_empty() {
                continue;
            }
            let per_stream = budget.power / (self.tx_streams[from] as f64 * budget.noise);
            let r: f64 = self.gains[p].iter().map(|g| fmath::log2(1.0 + per_stream * g)).sum();
            rates[p] = pair_weight(from, to, tau) * r;
        }
        RateReport::new(rates)
    }
}

/// Rates of the IA/ZF scheme: zero-forcing post-coders on top of the built
/// beamformers, equal power per transmitted stream, aerial messages scaled
/// by `tau`.
pub fn iazf_rates<R: RngCore + ?Sized>(
    ch: &ChannelSet,
    alloc: &StreamAllocation,
    budget: LinkBudget,
    tau: f64,
    rng: &mut R,
) -> Result<RateReport> {
    prepare_iazf(ch, alloc, rng)?.report(budget, tau)
}

// ----------------------------------------------------- broadcast baselines

/// Corner rates of the three broadcast rounds (one per broadcasting node),
/// computed through the dual multiple-access channel under the same total
/// power. `corners[i]` holds the rates towards the two peers of node `i` in
/// ascending node order.
#[derive(Debug, Clone)]
pub(crate) struct BroadcastParts {
    corners: [[f64; 2]; 3],
}

pub(crate) fn prepare_broadcast(ch: &ChannelSet, budget: LinkBudget) -> Result<BroadcastParts> {
    let cfg = ch.config();
    let mut corners = [[0.0; 2]; 3];
    for node in 0..3 {
        let (j, k) = others(node);
        let duals = [ch.h(node, j).adjoint(), ch.h(node, k).adjoint()];
        let (_, covs) = mac_sum_capacity(&duals, budget.power, budget.noise, MAC_TOL, MAC_MAX_ITER)?;
        // Successive decoding: the peer with more antennas is decoded last;
        // on ties the lower node index goes last.
        let order = if cfg.at(k) > cfg.at(j) { [0, 1] } else { [1, 0] };
        let rates = mac_corner_rates(&duals, &covs, &order, budget.noise)?;
        corners[node] = [rates[0].max(0.0), rates[1].max(0.0)];
    }
    Ok(BroadcastParts { corners })
}

impl BroadcastParts {
    /// Rounds are used only while the aerial node is present: every message
    /// runs at one third of that time.
    pub(crate) fn bc(&self, tau: f64) -> Result<RateReport> {
        check_tau(tau)?;
        let mut rates = [0.0; 6];
        for node in 0..3 {
            let (j, k) = others(node);
            rates[pair_index(node, j)] = tau / 3.0 * self.corners[node][0];
            rates[pair_index(node, k)] = tau / 3.0 * self.corners[node][1];
        }
        RateReport::new(rates)
    }

    /// Availability-blind rounds: same covariances, but the schedule always
    /// runs. Only components touching the aerial node suffer the erasure.
    pub(crate) fn blind(&self, tau: f64) -> Result<RateReport> {
        check_tau(tau)?;
        let mut rates = [0.0; 6];
        for node in 0..3 {
            let (j, k) = others(node);
            let w_j = pair_weight(node, j, tau) / 3.0;
            let w_k = pair_weight(node, k, tau) / 3.0;
            rates[pair_index(node, j)] = w_j * self.corners[node][0];
            rates[pair_index(node, k)] = w_k * self.corners[node][1];
        }
        RateReport::new(rates)
    }
}

/// Broadcast rounds scheduled only when the aerial node is present; per-round
/// rates are the dual-MAC corner rates under the full power budget.
pub fn bc_sum_rate(ch: &ChannelSet, budget: LinkBudget, tau: f64) -> Result<RateReport> {
    prepare_broadcast(ch, budget)?.bc(tau)
}

/// Broadcast rounds scheduled blindly (as if the aerial node were always
/// present); its missing slots erase exactly the components that involve it.
pub fn blind_bc_sum_rate(ch: &ChannelSet, budget: LinkBudget, tau: f64) -> Result<RateReport> {
    prepare_broadcast(ch, budget)?.blind(tau)
}

// ------------------------------------------------- point-to-point with TIN

/// Directed links of the two cyclic modes: everyone transmits to the next
/// node (mode A) or to the previous one (mode B).
const MODE_A: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];
const MODE_B: [(usize, usize); 3] = [(0, 2), (2, 1), (1, 0)];

#[derive(Debug, Clone)]
pub(crate) struct TinParts {
    mode_a: [f64; 3],
    mode_b: [f64; 3],
    /// Interference-free capacities of the ground pair (1 -> 2, 2 -> 1).
    ground: [f64; 2],
}

fn tin_mode_rates(ch: &ChannelSet, budget: LinkBudget, links: &[(usize, usize); 3]) -> Result<[f64; 3]> {
    // Every node water-fills its own direct link, oblivious to interference.
    let mut covs: [Option<CMat>; 3] = [None, None, None];
    for &(tx, rx) in links {
        covs[tx] = Some(wf_covariance(ch.h(tx, rx), budget.power, budget.noise)?);
    }
    let mut rates = [0.0; 3];
    for (slot, &(tx, rx)) in links.iter().enumerate() {
        let interferer = crate::channel::third(tx, rx);
        let qi = covs[interferer].as_ref().unwrap();
        let hi = ch.h(interferer, rx);
        let qd = covs[tx].as_ref().unwrap();
        let hd = ch.h(tx, rx);
        let mut floor = (&(hi * qi) * &hi.adjoint()).scaled(1.0 / budget.noise);
        for i in 0..floor.rows() {
            floor[(i, i)] += num_complex::Complex64::new(1.0, 0.0);
        }
        let mut full = floor.clone();
        full.add_assign(&(&(hd * qd) * &hd.adjoint()).scaled(1.0 / budget.noise));
        rates[slot] = (logdet2_hpd(&full)? - logdet2_hpd(&floor)?).max(0.0);
    }
    Ok(rates)
}

pub(crate) fn prepare_tin(ch: &ChannelSet, budget: LinkBudget) -> Result<TinParts> {
    Ok(TinParts {
        mode_a: tin_mode_rates(ch, budget, &MODE_A)?,
        mode_b: tin_mode_rates(ch, budget, &MODE_B)?,
        ground: [
            p2p_capacity(ch.h(1, 2), budget.power, budget.noise)?,
            p2p_capacity(ch.h(2, 1), budget.power, budget.noise)?,
        ],
    })
}

impl TinParts {
    pub(crate) fn report(&self, tau: f64) -> Result<RateReport> {
        check_tau(tau)?;
        let mut rates = [0.0; 6];
        // While the aerial node is present the two cyclic modes split the
        // time evenly; otherwise the ground pair runs plain two-way traffic.
        for (slot, &(tx, rx)) in MODE_A.iter().enumerate() {
            rates[pair_index(tx, rx)] += tau / 2.0 * self.mode_a[slot];
        }
        for (slot, &(tx, rx)) in MODE_B.iter().enumerate() {
            rates[pair_index(tx, rx)] += tau / 2.0 * self.mode_b[slot];
        }
        rates[pair_index(1, 2)] += (1.0 - tau) * self.ground[0];
        rates[pair_index(2, 1)] += (1.0 - tau) * self.ground[1];
        RateReport::new(rates)
    }
}

/// Cyclic point-to-point rounds treating interference as noise while the
/// aerial node is present; the ground pair falls back to interference-free
/// two-way traffic while it is absent.
pub fn p2p_tin_sum_rate(ch: &ChannelSet, budget: LinkBudget, tau: f64) -> Result<RateReport> {
    prepare_tin(ch, budget)?.report(tau)
}

// ------------------------------------------------------- two-way baseline

#[derive(Debug, Clone)]
pub(crate) struct TwoWayParts {
    caps: [f64; 6],
}

pub(crate) fn prepare_two_way(ch: &ChannelSet, budget: LinkBudget) -> Result<TwoWayParts> {
    let mut caps = [0.0; 6];
    for (p, &(from, to)) in PAIRS.iter().enumerate() {
        caps[p] = p2p_capacity(ch.h(from, to), budget.power, budget.noise)?;
    }
    Ok(TwoWayParts { caps })
}

impl TwoWayParts {
    pub(crate) fn report(&self, tau: f64) -> Result<RateReport> {
        check_tau(tau)?;
        let mut rates = [0.0; 6];
        for (p, &(from, to)) in PAIRS.iter().enumerate() {
            // Each pair gets a third of the aerial node's presence time; the
            // ground pair additionally owns all of its absence time.
            let ground = from != 0 && to != 0;
            let share = tau / 3.0 + if ground { 1.0 - tau } else { 0.0 };
            rates[p] = share * self.caps[p];
        }
        RateReport::new(rates)
    }
}

/// Pairwise two-way (full-duplex) rounds: each pair runs both directions at
/// water-filled point-to-point capacity during its share of the time.
pub fn two_way_sum_rate(ch: &ChannelSet, budget: LinkBudget, tau: f64) -> Result<RateReport> {
    prepare_two_way(ch, budget)?.report(tau)
}
