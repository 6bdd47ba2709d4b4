//! Monte Carlo sweeps over the (tau, SNR) grid.
//!
//! One channel realisation per trial, shared by every scheme, every tau and
//! every SNR point, so scheme comparisons are paired. Trials are pure
//! functions of (config, trial index); any execution order, serial or
//! parallel, assembles into the same result.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::{sample_channel_set, AntennaConfig, ChannelSet};
use crate::error::{Error, Result};
use crate::fmath;
use crate::rng::{substream, STREAM_BEAMFORMER, STREAM_CHANNEL};
use crate::schemes::{
    allocate_streams, prepare_broadcast, prepare_iazf, prepare_tin, prepare_two_way, LinkBudget,
    Scheme,
};

/// Degenerate draws are resampled at most this many times per trial.
const MAX_RETRIES: u64 = 3;

/// Everything a sweep needs. Noise power is fixed to 1, so each SNR point in
/// dB maps to transmit power 10^(snr/10).
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub cfg: AntennaConfig,
    pub taus: Vec<f64>,
    pub snrs_db: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trial count must be at least 1".into()));
        }
        if self.taus.is_empty() {
            return Err(Error::Config("no availability probabilities given".into()));
        }
        for &tau in &self.taus {
            if !(0.0..=1.0).contains(&tau) {
                return Err(Error::Config(format!(
                    "availability probability must lie in [0, 1], got {tau}"
                )));
            }
        }
        if self.snrs_db.is_empty() {
            return Err(Error::Config("no SNR points given".into()));
        }
        for w in self.snrs_db.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Config(format!(
                    "SNR points must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &s in &self.snrs_db {
            if !s.is_finite() {
                return Err(Error::Config(format!("SNR point {s} is not finite")));
            }
        }
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        for (i, a) in self.schemes.iter().enumerate() {
            if self.schemes[..i].contains(a) {
                return Err(Error::Config(format!("scheme {a} listed twice")));
            }
        }
        Ok(())
    }

    fn grid_len(&self) -> usize {
        self.schemes.len() * self.taus.len() * self.snrs_db.len()
    }

    fn grid_index(&self, scheme: usize, tau: usize, snr: usize) -> usize {
        (scheme * self.taus.len() + tau) * self.snrs_db.len() + snr
    }
}

/// Sum rates of one trial, flattened over (scheme, tau, snr), plus how many
/// degenerate draws had to be replaced to get them.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub samples: Vec<f64>,
    pub retries: u64,
}

/// One aggregated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub scheme: Scheme,
    pub tau: f64,
    pub snr_db: f64,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Aggregated sweep: one record per (scheme, tau, snr) sorted by scheme
/// token, then tau, then SNR, plus the total number of resampled draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub records: Vec<SweepRecord>,
    pub resamples: u64,
}

/// Run one trial: draw the trial's channel and evaluate every selected
/// scheme on the whole grid. Degenerate draws (measure-zero alignment or
/// rank failures) are resampled from derived substreams, at most
/// `MAX_RETRIES` times, so trial counts stay uniform across schemes.
pub fn run_trial(sc: &SimConfig, trial: u64) -> Result<TrialOutcome> {
    let mut retries = 0;
    loop {
        let mut ch_rng = substream(sc.seed, &[STREAM_CHANNEL, trial, retries]);
        let ch = sample_channel_set(sc.cfg, &mut ch_rng);
        match eval_on_channel(sc, &ch, trial, retries) {
            Ok(samples) => return Ok(TrialOutcome { samples, retries }),
            Err(e @ (Error::DegenerateChannel(_) | Error::NumericalFailure(_))) => {
                if retries == MAX_RETRIES {
                    return Err(e);
                }
                retries += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Evaluate one trial on a caller-supplied channel realisation (no
/// resampling). This is the injection hook for deterministic tests.
pub fn run_trial_with_channel(sc: &SimConfig, ch: &ChannelSet, trial: u64) -> Result<TrialOutcome> {
    Ok(TrialOutcome { samples: eval_on_channel(sc, ch, trial, 0)?, retries: 0 })
}

fn eval_on_channel(sc: &SimConfig, ch: &ChannelSet, trial: u64, retry: u64) -> Result<Vec<f64>> {
    let mut samples = vec![0.0; sc.grid_len()];
    let budgets: Vec<LinkBudget> = sc
        .snrs_db
        .iter()
        .map(|&s| LinkBudget::from_snr_db(s))
        .collect::<Result<_>>()?;

    // SNR-dependent, tau-independent parts are computed once per SNR point.
    for (ki, &scheme) in sc.schemes.iter().enumerate() {
        match scheme {
            Scheme::IaZf => {
                for (ti, &tau) in sc.taus.iter().enumerate() {
                    let alloc = allocate_streams(sc.cfg, tau)?;
                    // An identically seeded stream per tau: rate differences
                    // across tau then come from the allocation and weighting
                    // alone, not from different random alignment directions.
                    let mut rng = substream(sc.seed, &[STREAM_BEAMFORMER, trial, retry]);
                    let prepared = prepare_iazf(ch, &alloc, &mut rng)?;
                    for (si, &budget) in budgets.iter().enumerate() {
                        samples[sc.grid_index(ki, ti, si)] = prepared.report(budget, tau)?.sum();
                    }
                }
            }
            Scheme::Bc | Scheme::BlindBc => {
                for (si, &budget) in budgets.iter().enumerate() {
                    let parts = prepare_broadcast(ch, budget)?;
                    for (ti, &tau) in sc.taus.iter().enumerate() {
                        let report = match scheme {
                            Scheme::Bc => parts.bc(tau)?,
                            _ => parts.blind(tau)?,
                        };
                        samples[sc.grid_index(ki, ti, si)] = report.sum();
                    }
                }
            }
            Scheme::P2pTin => {
                for (si, &budget) in budgets.iter().enumerate() {
                    let parts = prepare_tin(ch, budget)?;
                    for (ti, &tau) in sc.taus.iter().enumerate() {
                        samples[sc.grid_index(ki, ti, si)] = parts.report(tau)?.sum();
                    }
                }
            }
            Scheme::TwoWay => {
                for (si, &budget) in budgets.iter().enumerate() {
                    let parts = prepare_two_way(ch, budget)?;
                    for (ti, &tau) in sc.taus.iter().enumerate() {
                        samples[sc.grid_index(ki, ti, si)] = parts.report(tau)?.sum();
                    }
                }
            }
        }
    }
    Ok(samples)
}

/// Mean and standard error of the mean (0 for a single sample).
pub fn aggregate(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("cannot aggregate zero samples".into()));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    Ok((mean, fmath::sqrt(var / n)))
}

/// Reduce per-trial outcomes (ordered by trial index) into the final table.
pub fn assemble(sc: &SimConfig, outcomes: &[TrialOutcome]) -> Result<SweepResult> {
    if outcomes.len() != sc.trials {
        return Err(Error::InvalidInput(format!(
            "expected {} trial outcomes, got {}",
            sc.trials,
            outcomes.len()
        )));
    }
    // Sort by scheme token, then tau, then SNR; SNRs are already increasing.
    let mut scheme_order: Vec<usize> = (0..sc.schemes.len()).collect();
    scheme_order.sort_by_key(|&k| sc.schemes[k].token());
    let mut tau_order: Vec<usize> = (0..sc.taus.len()).collect();
    tau_order.sort_by(|&a, &b| sc.taus[a].partial_cmp(&sc.taus[b]).unwrap());

    let mut records = Vec::with_capacity(sc.grid_len());
    let mut column = Vec::with_capacity(sc.trials);
    for &ki in &scheme_order {
        for &ti in &tau_order {
            for si in 0..sc.snrs_db.len() {
                column.clear();
                let idx = sc.grid_index(ki, ti, si);
                column.extend(outcomes.iter().map(|o| o.samples[idx]));
                let (mean, stderr) = aggregate(&column)?;
                records.push(SweepRecord {
                    scheme: sc.schemes[ki],
                    tau: sc.taus[ti],
                    snr_db: sc.snrs_db[si],
                    trials: sc.trials,
                    mean,
                    stderr,
                });
            }
        }
    }
    Ok(SweepResult { records, resamples: outcomes.iter().map(|o| o.retries).sum() })
}

/// Serial sweep. Callers wanting parallelism run `run_trial` per index
/// themselves, keep the outcomes in trial order and call `assemble`.
pub fn run_sweep(sc: &SimConfig) -> Result<SweepResult> {
    sc.validate()?;
    let outcomes: Vec<TrialOutcome> =
        (0..sc.trials as u64).map(|t| run_trial(sc, t)).collect::<Result<_>>()?;
    assemble(sc, &outcomes)
}

/// Least-squares slope of `means[window]` against log2 of the linear SNR,
/// i.e. the empirical degrees of freedom over that window.
pub fn estimate_slope(
    snrs_db: &[f64],
    means: &[f64],
    window: core::ops::Range<usize>,
) -> Result<f64> {
    if snrs_db.len() != means.len() {
        return Err(Error::InvalidInput(format!(
            "{} SNR points but {} means",
            snrs_db.len(),
            means.len()
        )));
    }
    if window.end > snrs_db.len() || window.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "slope window {}..{} must hold at least 2 of the {} points",
            window.start,
            window.end,
            snrs_db.len()
        )));
    }
    let xs: Vec<f64> = snrs_db[window.clone()].iter().map(|&s| s / 10.0 * fmath::log2(10.0)).collect();
    let ys = &means[window];
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidInput("slope window has no SNR spread".into()));
    }
    Ok(sxy / sxx)
}
