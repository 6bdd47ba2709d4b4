//! Spatial stream allocation for the IA/ZF scheme.
//!
//! Each directed message `i -> j` carries `zf` zero-forced streams (bounded
//! by the null-space dimension towards the third node) and `ia` alignment
//! streams. At each receiver, the cross traffic of the other two nodes can be
//! pairwise aligned in up to `aligned[i]` dimensions, which must fit the
//! intersection bound `(M_j + M_k - M_i)^+`. The solver maximises the
//! availability-weighted stream count by exhaustive enumeration; antenna
//! counts are single digits, so the search space is tiny.

use alloc::format;
use alloc::vec::Vec;

use crate::channel::{others, pair_index, third, AntennaConfig, PAIRS};
use crate::error::{Error, Result};

/// Stream counts of one allocation. Per-pair tables are indexed like
/// [`PAIRS`]; `aligned[i]` counts aligned cross-traffic pairs at receiver `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamAllocation {
    pub zf: [usize; 6],
    pub ia: [usize; 6],
    pub aligned: [usize; 3],
}

impl StreamAllocation {
    /// The all-zero allocation.
    pub fn empty() -> Self {
        StreamAllocation { zf: [0; 6], ia: [0; 6], aligned: [0; 3] }
    }

    /// Total streams of the message `from -> to`.
    pub fn streams(&self, from: usize, to: usize) -> usize {
        let p = pair_index(from, to);
        self.zf[p] + self.ia[p]
    }

    /// Total streams transmitted by `node`.
    pub fn tx_streams(&self, node: usize) -> usize {
        let (j, k) = others(node);
        self.streams(node, j) + self.streams(node, k)
    }

    /// Desired streams arriving at `node`.
    pub fn rx_desired(&self, node: usize) -> usize {
        let (j, k) = others(node);
        self.streams(j, node) + self.streams(k, node)
    }

    /// Null-space dimension available for zero-forcing on `from -> to`.
    pub fn zf_cap(cfg: AntennaConfig, from: usize, to: usize) -> usize {
        cfg.at(from).saturating_sub(cfg.at(third(from, to)))
    }

    /// Upper bound on aligned pairs at receiver `node`.
    pub fn alignment_cap(&self, cfg: AntennaConfig, node: usize) -> usize {
        let (j, k) = others(node);
        let intersect = (cfg.at(j) + cfg.at(k)).saturating_sub(cfg.at(node));
        self.ia[pair_index(j, k)]
            .min(self.ia[pair_index(k, j)])
            .min(intersect)
    }

    /// Check every transmit, receive and alignment constraint against `cfg`.
    pub fn validate(&self, cfg: AntennaConfig) -> Result<()> {
        for (p, &(from, to)) in PAIRS.iter().enumerate() {
            let cap = Self::zf_cap(cfg, from, to);
            if self.zf[p] > cap {
                return Err(Error::InfeasibleAllocation(format!(
                    "zf[{from}->{to}] = {} exceeds the null-space dimension {cap}",
                    self.zf[p]
                )));
            }
        }
        for node in 0..3 {
            if self.tx_streams(node) > cfg.at(node) {
                return Err(Error::InfeasibleAllocation(format!(
                    "node {node} transmits {} streams with {} antennas",
                    self.tx_streams(node),
                    cfg.at(node)
                )));
            }
            if self.aligned[node] > self.alignment_cap(cfg, node) {
                return Err(Error::InfeasibleAllocation(format!(
                    "aligned[{node}] = {} exceeds the alignment bound {}",
                    self.aligned[node],
                    self.alignment_cap(cfg, node)
                )));
            }
            let (j, k) = others(node);
            let cross = self.ia[pair_index(j, k)] + self.ia[pair_index(k, j)];
            let occupied = self.rx_desired(node) + cross - self.aligned[node];
            if occupied > cfg.at(node) {
                return Err(Error::InfeasibleAllocation(format!(
                    "receiver {node} needs {occupied} dimensions with {} antennas",
                    cfg.at(node)
                )));
            }
        }
        Ok(())
    }
}

/// Availability weight of the message `from -> to`: messages touching the
/// aerial node count only when it is present.
pub fn pair_weight(from: usize, to: usize, tau: f64) -> f64 {
    if from == 0 || to == 0 {
        tau
    } else {
        1.0
    }
}

/// Availability-weighted stream count of an allocation; for the solver's
/// output this is the sum degrees of freedom.
pub fn weighted_dof(alloc: &StreamAllocation, tau: f64) -> f64 {
    let mut acc = 0.0;
    for (p, &(from, to)) in PAIRS.iter().enumerate() {
        acc += pair_weight(from, to, tau) * (alloc.zf[p] + alloc.ia[p]) as f64;
    }
    acc
}

/// Closed-form sum degrees of freedom: `2 tau M1 + 2 (1 - tau) M2` with the
/// antenna counts of the two ground nodes (non-increasing order).
pub fn dof_formula(cfg: AntennaConfig, tau: f64) -> f64 {
    2.0 * tau * cfg.at(1) as f64 + 2.0 * (1.0 - tau) * cfg.at(2) as f64
}

/// Candidate outgoing streams of one node: (zf, ia) toward each of its two
/// peers in ascending node order.
#[derive(Clone, Copy)]
struct NodeChoice {
    zf: [usize; 2],
    ia: [usize; 2],
}

fn node_choices(cfg: AntennaConfig, node: usize) -> Vec<NodeChoice> {
    let m = cfg.at(node);
    let (j, k) = others(node);
    let cap_j = StreamAllocation::zf_cap(cfg, node, j);
    let cap_k = StreamAllocation::zf_cap(cfg, node, k);
    let mut out = Vec::new();
    for zf_j in 0..=cap_j {
        for zf_k in 0..=cap_k.min(m - zf_j) {
            let left = m - zf_j - zf_k;
            for ia_j in 0..=left {
                for ia_k in 0..=left - ia_j {
                    out.push(NodeChoice { zf: [zf_j, zf_k], ia: [ia_j, ia_k] });
                }
            }
        }
    }
    out
}

/// Tie-break key: maximise the weighted objective, then fewest streams in
/// total (zero-weight streams would otherwise linger and couple the absent
/// node's channels into every post-coder), then prefer zero-forced over
/// alignment streams, then the smallest allocation vector in the fixed order
/// (zf, ia, aligned).
fn better(
    obj_a: f64,
    a: &StreamAllocation,
    obj_b: f64,
    b: &StreamAllocation,
) -> bool {
    if obj_a != obj_b {
        return obj_a > obj_b;
    }
    let zf_a: usize = a.zf.iter().sum();
    let zf_b: usize = b.zf.iter().sum();
    let tot_a: usize = zf_a + a.ia.iter().sum::<usize>();
    let tot_b: usize = zf_b + b.ia.iter().sum::<usize>();
    if tot_a != tot_b {
        return tot_a < tot_b;
    }
    if zf_a != zf_b {
        return zf_a > zf_b;
    }
    let key = |x: &StreamAllocation| {
        let mut v = [0usize; 15];
        v[..6].copy_from_slice(&x.zf);
        v[6..12].copy_from_slice(&x.ia);
        v[12..].copy_from_slice(&x.aligned);
        v
    };
    key(a) < key(b)
}

/// Find the allocation maximising the availability-weighted stream count.
/// Exhaustive search over per-node stream splits; alignment at each receiver
/// takes the smallest count that makes the receive dimension fit (ties in the
/// objective are then broken by the fixed lexicographic rule, under which a
/// smaller aligned count wins).
pub fn allocate_streams(cfg: AntennaConfig, tau: f64) -> Result<StreamAllocation> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidInput(format!(
            "availability probability must lie in [0, 1], got {tau}"
        )));
    }

    let choices: [Vec<NodeChoice>; 3] = core::array::from_fn(|node| node_choices(cfg, node));
    let mut best = StreamAllocation::empty();
    let mut best_obj = weighted_dof(&best, tau);

    for c0 in &choices[0] {
        for c1 in &choices[1] {
            for c2 in &choices[2] {
                let per_node = [c0, c1, c2];
                let mut cand = StreamAllocation::empty();
                for (node, choice) in per_node.iter().enumerate() {
                    let (j, k) = others(node);
                    cand.zf[pair_index(node, j)] = choice.zf[0];
                    cand.zf[pair_index(node, k)] = choice.zf[1];
                    cand.ia[pair_index(node, j)] = choice.ia[0];
                    cand.ia[pair_index(node, k)] = choice.ia[1];
                }
                let mut feasible = true;
                for node in 0..3 {
                    let (j, k) = others(node);
                    let cross = cand.ia[pair_index(j, k)] + cand.ia[pair_index(k, j)];
                    let need =
                        (cand.rx_desired(node) + cross).saturating_sub(cfg.at(node));
                    if need > cand.alignment_cap(cfg, node) {
                        feasible = false;
                        break;
                    }
                    cand.aligned[node] = need;
                }
                if !feasible {
                    continue;
                }
                let obj = weighted_dof(&cand, tau);
                if better(obj, &cand, best_obj, &best) {
                    best = cand;
                    best_obj = obj;
                }
            }
        }
    }

    debug_assert!(best.validate(cfg).is_ok());
    Ok(best)
}
