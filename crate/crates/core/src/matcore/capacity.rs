//! Gaussian capacity primitives: closed-form water-filling over parallel
//! subchannels, point-to-point MIMO capacity, and the sum capacity of a
//! multiple-access channel under a total power constraint (iterative
//! water-filling with covariance averaging).

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, NonConvergence, Result};
use crate::fmath;
use crate::matcore::chol::{cholesky, logdet2_hpd, solve_lower};
use crate::matcore::svd::svd;
use crate::matcore::CMat;

/// Water-filling solution over parallel subchannels.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// Per-subchannel powers, aligned with the gain vector.
    pub powers: Vec<f64>,
    /// Total power budget the powers were filled against.
    pub budget: f64,
}

impl PowerAllocation {
    /// Sum of the per-subchannel powers.
    pub fn total(&self) -> f64 {
        self.powers.iter().sum()
    }
}

/// Water-filling over subchannels with power gains `gains` and common noise
/// variance `noise`: maximise `sum log2(1 + p_k g_k / noise)` subject to
/// `sum p_k <= budget`, `p_k >= 0`. Exact closed form on the sorted
/// noise-to-gain levels, no iteration. Zero gains receive zero power; an
/// all-zero gain vector yields all-zero powers.
pub fn waterfill(gains: &[f64], budget: f64, noise: f64) -> Result<PowerAllocation> {
    if !(budget > 0.0) || !budget.is_finite() {
        return Err(Error::InvalidInput(format!("power budget must be positive, got {budget}")));
    }
    if !(noise > 0.0) || !noise.is_finite() {
        return Err(Error::InvalidInput(format!("noise variance must be positive, got {noise}")));
    }
    if gains.iter().any(|g| !g.is_finite() || *g < 0.0) {
        return Err(Error::InvalidInput("gains must be finite and non-negative".into()));
    }

    let mut powers = vec![0.0; gains.len()];
    // Indices of usable subchannels sorted by ascending noise-to-gain level.
    let mut idx: Vec<usize> = (0..gains.len()).filter(|&k| gains[k] > 0.0).collect();
    idx.sort_by(|&a, &b| (noise / gains[a]).partial_cmp(&(noise / gains[b])).unwrap());

    let mut active = idx.len();
    let mut level_sum: f64 = idx.iter().map(|&k| noise / gains[k]).sum();
    let mut water = 0.0;
    while active > 0 {
        water = (budget + level_sum) / active as f64;
        let worst = noise / gains[idx[active - 1]];
        if water > worst {
            break;
        }
        level_sum -= worst;
        active -= 1;
    }
    for &k in &idx[..active] {
        powers[k] = water - noise / gains[k];
    }
    Ok(PowerAllocation { powers, budget })
}

/// Capacity of a point-to-point MIMO link `y = H x + n` under total transmit
/// power `power` and white noise of variance `noise` per receive antenna, in
/// bits per channel use. Water-filling over the squared singular values.
pub fn p2p_capacity(h: &CMat, power: f64, noise: f64) -> Result<f64> {
    let dec = svd(h)?;
    let gains: Vec<f64> = dec.sigma.iter().map(|s| s * s).collect();
    let pa = waterfill(&gains, power, noise)?;
    let mut c = 0.0;
    for (p, g) in pa.powers.iter().zip(&gains) {
        if *p > 0.0 {
            c += fmath::log2(1.0 + p * g / noise);
        }
    }
    Ok(c)
}

/// Capacity-achieving transmit covariance of a point-to-point link: right
/// singular vectors carrying water-filled powers.
pub fn wf_covariance(h: &CMat, power: f64, noise: f64) -> Result<CMat> {
    let dec = svd(h)?;
    let gains: Vec<f64> = dec.sigma.iter().map(|s| s * s).collect();
    let pa = waterfill(&gains, power, noise)?;
    Ok(&(&dec.v * &CMat::from_real_diag(&pa.powers)) * &dec.v.adjoint())
}

fn mac_objective(h_list: &[CMat], covs: &[CMat], noise: f64) -> Result<f64> {
    let n = h_list[0].rows();
    let mut acc = CMat::identity(n);
    for (h, q) in h_list.iter().zip(covs) {
        acc.add_assign(&(&(h * q) * &h.adjoint()).scaled(1.0 / noise));
    }
    logdet2_hpd(&acc)
}

/// Sum capacity of a Gaussian MAC `y = sum_u H_u x_u + n` under a total
/// power constraint across users, with the maximising transmit covariances.
/// Iterative water-filling: each round water-fills all users jointly against
/// the interference of the previous iterate, then averages new and old
/// covariances, which keeps the objective non-decreasing. Stops when the
/// objective improves by less than `tol`.
pub fn mac_sum_capacity(
    h_list: &[CMat],
    power: f64,
    noise: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(f64, Vec<CMat>)> {
    if h_list.is_empty() {
        return Err(Error::InvalidInput("mac needs at least one user".into()));
    }
    if !(power > 0.0) || !(noise > 0.0) || !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidInput(
            "mac needs positive power, noise and tolerance and at least one iteration".into(),
        ));
    }
    let n = h_list[0].rows();
    for h in h_list {
        if h.rows() != n {
            return Err(Error::InvalidInput("mac users must share the receive dimension".into()));
        }
        if !h.all_finite() {
            return Err(Error::InvalidInput("mac channel has non-finite entries".into()));
        }
    }

    let k_users = h_list.len();
    // Uniform power split over users and antennas as the starting iterate.
    let mut covs: Vec<CMat> = h_list
        .iter()
        .map(|h| CMat::identity(h.cols()).scaled(power / k_users as f64 / h.cols() as f64))
        .collect();
    let mut objective = mac_objective(h_list, &covs, noise)?;

    for _ in 0..max_iter {
        // Water-fill every user against the others' previous covariances.
        let mut gains: Vec<f64> = Vec::new();
        let mut spans: Vec<(usize, usize)> = Vec::with_capacity(k_users);
        let mut bases: Vec<CMat> = Vec::with_capacity(k_users);
        for u in 0..k_users {
            let mut z = CMat::identity(n).scaled(noise);
            for v in 0..k_users {
                if v != u {
                    z.add_assign(&(&(&h_list[v] * &covs[v]) * &h_list[v].adjoint()));
                }
            }
            let l = cholesky(&z)?;
            let white = solve_lower(&l, &h_list[u]);
            let dec = svd(&white)?;
            let lo = gains.len();
            gains.extend(dec.sigma.iter().map(|s| s * s));
            spans.push((lo, gains.len()));
            bases.push(dec.v);
        }
        let pa = waterfill(&gains, power, 1.0)?;
        for u in 0..k_users {
            let (lo, hi) = spans[u];
            let fresh =
                &(&bases[u] * &CMat::from_real_diag(&pa.powers[lo..hi])) * &bases[u].adjoint();
            // Averaging step: new = (1/K) fresh + (K-1)/K old.
            covs[u] = fresh
                .scaled(1.0 / k_users as f64)
                .plus(&covs[u].scaled((k_users as f64 - 1.0) / k_users as f64));
        }
        let next = mac_objective(h_list, &covs, noise)?;
        let improvement = next - objective;
        objective = objective.max(next);
        if improvement < tol {
            return Ok((objective, covs));
        }
    }
    Err(Error::NonConvergence(Box::new(NonConvergence {
        what: "mac iterative water-filling",
        last_objective: objective,
        last_covariances: covs,
    })))
}

/// Per-user rates of a MAC under successive decoding with the given transmit
/// covariances. `order[0]` is decoded first (sees all later users as noise),
/// `order[K-1]` last (sees only noise). Returned rates are indexed by user,
/// not by decode position; they always sum to the full-sum log-determinant.
pub fn mac_corner_rates(
    h_list: &[CMat],
    covs: &[CMat],
    order: &[usize],
    noise: f64,
) -> Result<Vec<f64>> {
    let k_users = h_list.len();
    if covs.len() != k_users || order.len() != k_users {
        return Err(Error::InvalidInput("corner rates need one covariance and one decode slot per user".into()));
    }
    let mut seen = vec![false; k_users];
    for &u in order {
        if u >= k_users || seen[u] {
            return Err(Error::InvalidInput("decode order must be a permutation of the users".into()));
        }
        seen[u] = true;
    }
    if !(noise > 0.0) {
        return Err(Error::InvalidInput(format!("noise variance must be positive, got {noise}")));
    }

    let n = h_list[0].rows();
    let mut acc = CMat::identity(n).scaled(noise);
    let mut before = logdet2_hpd(&acc)?;
    let mut rates = vec![0.0; k_users];
    // Walk from the user decoded last back to the first; each step adds one
    // more user's signal on top of the interference it is decoded against.
    for &u in order.iter().rev() {
        acc.add_assign(&(&(&h_list[u] * &covs[u]) * &h_list[u].adjoint()));
        let after = logdet2_hpd(&acc)?;
        rates[u] = after - before;
        before = after;
    }
    Ok(rates)
}
