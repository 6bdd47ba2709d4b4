//! Beamformer synthesis for the IA/ZF scheme and the effective channels the
//! receivers see.
//!
//! Zero-forced streams of `i -> j` live in the null space of the channel
//! towards the third node, so they simply vanish there. Alignment streams of
//! the cross pair `j <-> k` are built at receiver `i` from the null space of
//! the stacked matrix `[H[j->i], -H[k->i]]`: a null vector `(u; v)` gives
//! `H[j->i] u = H[k->i] v`, one shared interference dimension. Alignment
//! streams beyond the aligned count are random directions projected off the
//! transmitter's other beamformer columns, so one node's superposition never
//! overlaps itself.

use alloc::format;
use alloc::vec::Vec;

use rand::RngCore;

use crate::channel::{others, pair_index, third, ChannelSet, PAIRS};
use crate::error::{Error, Result};
use crate::matcore::{
    col_space_basis, null_space_basis, numerical_rank, orth_complement_basis, CMat,
    DEFAULT_RANK_TOL,
};
use crate::rng::complex_gaussian;
use crate::schemes::StreamAllocation;

/// Smallest vector-part norm accepted when splitting a stacked null vector.
const SPLIT_NORM_TOL: f64 = 1e-12;

/// Unit-norm transmit beamformer columns per directed message.
#[derive(Debug, Clone)]
pub struct BeamformerSet {
    zf: [CMat; 6],
    ia: [CMat; 6],
}

impl BeamformerSet {
    /// Build zero-forcing and alignment beamformers and verify that every
    /// node's combined column set has full rank.
    pub fn build<R: RngCore + ?Sized>(
        ch: &ChannelSet,
        alloc: &StreamAllocation,
        rng: &mut R,
    ) -> Result<Self> {
        let zf = build_zf_beamformers(ch, alloc)?;
        let ia = build_ia_beamformers(ch, alloc, &zf, rng)?;
        let set = BeamformerSet { zf, ia };
        for node in 0..3 {
            let stack = set.tx_stack(node);
            if numerical_rank(&stack, DEFAULT_RANK_TOL)? < stack.cols() {
                return Err(Error::DegenerateChannel(format!(
                    "node {node} beamformer columns are rank deficient"
                )));
            }
        }
        Ok(set)
    }

    /// Zero-forcing columns of the message `from -> to`.
    pub fn zf(&self, from: usize, to: usize) -> &CMat {
        &self.zf[pair_index(from, to)]
    }

    /// Alignment-stream columns of the message `from -> to`.
    pub fn ia(&self, from: usize, to: usize) -> &CMat {
        &self.ia[pair_index(from, to)]
    }

    /// All beamformer columns transmitted by `node`, ZF before IA.
    pub fn tx_stack(&self, node: usize) -> CMat {
        let (j, k) = others(node);
        let rows = self.zf[pair_index(node, j)].rows();
        CMat::hcat(
            rows,
            &[
                &self.zf[pair_index(node, j)],
                &self.zf[pair_index(node, k)],
                &self.ia[pair_index(node, j)],
                &self.ia[pair_index(node, k)],
            ],
        )
    }
}

/// Zero-forcing beamformers: for each message `i -> j` with `zf > 0`, take
/// orthonormal columns of the null space of `H[i -> third]`.
pub fn build_zf_beamformers(ch: &ChannelSet, alloc: &StreamAllocation) -> Result<[CMat; 6]> {
    let cfg = ch.config();
    let mut out: [CMat; 6] = core::array::from_fn(|p| CMat::zeros(cfg.at(PAIRS[p].0), 0));
    for (p, &(from, to)) in PAIRS.iter().enumerate() {
        let want = alloc.zf[p];
        if want == 0 {
            continue;
        }
        let k = third(from, to);
        let basis = null_space_basis(ch.h(from, k), DEFAULT_RANK_TOL)?;
        if basis.cols() < want {
            return Err(Error::InfeasibleAllocation(format!(
                "message {from}->{to} requests {want} zero-forced streams but the null space has dimension {}",
                basis.cols()
            )));
        }
        out[p] = basis.col_range(0, want);
    }
    Ok(out)
}

/// Alignment beamformers. For each receiver `r` with a positive aligned
/// count, paired columns come from the stacked null space described in the
/// module docs; the remaining streams get random directions, each projected
/// off the span of the transmitter's columns built so far (ZF, aligned and
/// earlier fills) and renormalised.
pub fn build_ia_beamformers<R: RngCore + ?Sized>(
    ch: &ChannelSet,
    alloc: &StreamAllocation,
    zf: &[CMat; 6],
    rng: &mut R,
) -> Result<[CMat; 6]> {
    let cfg = ch.config();
    alloc.validate(cfg)?;

    let mut cols: [Vec<CMat>; 6] = core::array::from_fn(|_| Vec::new());
    for r in 0..3 {
        let b = alloc.aligned[r];
        if b == 0 {
            continue;
        }
        let (j, k) = others(r);
        let stacked = CMat::hcat(cfg.at(r), &[ch.h(j, r), &ch.h(k, r).scaled(-1.0)]);
        let basis = null_space_basis(&stacked, DEFAULT_RANK_TOL)?;
        if basis.cols() < b {
            return Err(Error::DegenerateChannel(format!(
                "stacked interference null space at receiver {r} has dimension {} < {b}",
                basis.cols()
            )));
        }
        for col in 0..b {
            let (u, v) = split_unit(&basis, col, cfg.at(j))?;
            cols[pair_index(j, k)].push(u);
            cols[pair_index(k, j)].push(v);
        }
    }

    for node in 0..3 {
        let m = cfg.at(node);
        let (j, k) = others(node);
        let pairs = [pair_index(node, j), pair_index(node, k)];
        let fixed: Vec<&CMat> = [&zf[pairs[0]], &zf[pairs[1]]]
            .into_iter()
            .chain(cols[pairs[0]].iter())
            .chain(cols[pairs[1]].iter())
            .collect();
        let stack = CMat::hcat(m, &fixed);
        let mut basis = if stack.cols() == 0 {
            CMat::zeros(m, 0)
        } else {
            col_space_basis(&stack, DEFAULT_RANK_TOL)?
        };
        for p in pairs {
            debug_assert!(cols[p].len() <= alloc.ia[p]);
            for _ in cols[p].len()..alloc.ia[p] {
                let g = CMat::from_fn(m, 1, |_, _| complex_gaussian(rng));
                let r = if basis.cols() > 0 {
                    g.plus(&(&basis * &(&basis.adjoint() * &g)).scaled(-1.0))
                } else {
                    g
                };
                let norm = r.col_norm(0);
                if norm < SPLIT_NORM_TOL {
                    return Err(Error::DegenerateChannel(format!(
                        "random direction collapses into node {node}'s occupied signal space"
                    )));
                }
                let q = r.scaled(1.0 / norm);
                basis = CMat::hcat(m, &[&basis, &q]);
                cols[p].push(q);
            }
        }
    }

    let mut out: [CMat; 6] = core::array::from_fn(|p| CMat::zeros(cfg.at(PAIRS[p].0), 0));
    for (p, &(from, _)) in PAIRS.iter().enumerate() {
        let refs: Vec<&CMat> = cols[p].iter().collect();
        out[p] = CMat::hcat(cfg.at(from), &refs);
    }
    Ok(out)
}

/// Split column `col` of a stacked null basis into its upper (`rows_u`) and
/// lower parts, normalised to unit columns.
fn split_unit(basis: &CMat, col: usize, rows_u: usize) -> Result<(CMat, CMat)> {
    let full = basis.col(col);
    let u = CMat::from_fn(rows_u, 1, |i, _| full[i]);
    let v = CMat::from_fn(full.len() - rows_u, 1, |i, _| full[rows_u + i]);
    let (nu, nv) = (u.col_norm(0), v.col_norm(0));
    if nu < SPLIT_NORM_TOL || nv < SPLIT_NORM_TOL {
        return Err(Error::DegenerateChannel(
            "aligned null vector collapses on one transmitter".into(),
        ));
    }
    Ok((u.scaled(1.0 / nu), v.scaled(1.0 / nv)))
}

/// Per-receiver effective channels: `Hd` holds the desired columns in the
/// fixed order (ZF of the lower-indexed peer, ZF of the higher, then IA of
/// each), `Hdbar` the cross-traffic interference columns.
pub fn effective_channels(
    ch: &ChannelSet,
    bf: &BeamformerSet,
    receiver: usize,
) -> (CMat, CMat) {
    let rows = ch.config().at(receiver);
    let (j, k) = others(receiver);
    let hd = CMat::hcat(
        rows,
        &[
            &(ch.h(j, receiver) * bf.zf(j, receiver)),
            &(ch.h(k, receiver) * bf.zf(k, receiver)),
            &(ch.h(j, receiver) * bf.ia(j, receiver)),
            &(ch.h(k, receiver) * bf.ia(k, receiver)),
        ],
    );
    let hdbar = CMat::hcat(
        rows,
        &[
            &(ch.h(j, receiver) * bf.ia(j, k)),
            &(ch.h(k, receiver) * bf.ia(k, j)),
        ],
    );
    (hd, hdbar)
}

/// Zero-forcing receive stage of one message: the post-coder projects onto
/// the orthogonal complement of everything except the message's own columns.
#[derive(Debug, Clone)]
pub struct DecodingStage {
    pub from: usize,
    pub to: usize,
    /// Columns carrying this message at the receiver.
    pub desired: CMat,
    /// All other columns arriving at the receiver (other desired message,
    /// cross-traffic interference).
    pub excluded: CMat,
    /// Orthonormal basis of the complement of `excluded`.
    pub postcoder: CMat,
}

/// Build the receive stage of every message with a positive stream count,
/// ordered by receiver and then by transmitter index. Errors when a
/// post-coder leaves fewer dimensions than the message has streams.
pub fn decoding_stages(
    ch: &ChannelSet,
    bf: &BeamformerSet,
    alloc: &StreamAllocation,
) -> Result<Vec<DecodingStage>> {
    let cfg = ch.config();
    let mut stages = Vec::new();
    for receiver in 0..3 {
        let rows = cfg.at(receiver);
        let (j, k) = others(receiver);
        let blocks = [
            &(ch.h(j, receiver) * bf.zf(j, receiver)),
            &(ch.h(k, receiver) * bf.zf(k, receiver)),
            &(ch.h(j, receiver) * bf.ia(j, receiver)),
            &(ch.h(k, receiver) * bf.ia(k, receiver)),
        ];
        let bar = [
            &(ch.h(j, receiver) * bf.ia(j, k)),
            &(ch.h(k, receiver) * bf.ia(k, j)),
        ];
        for (from, own, other) in [(j, [0usize, 2], [1usize, 3]), (k, [1, 3], [0, 2])] {
            let streams = alloc.streams(from, receiver);
            if streams == 0 {
                continue;
            }
            let desired = CMat::hcat(rows, &[blocks[own[0]], blocks[own[1]]]);
            let excluded = CMat::hcat(
                rows,
                &[blocks[other[0]], blocks[other[1]], bar[0], bar[1]],
            );
            let postcoder = orth_complement_basis(&excluded)?;
            if postcoder.cols() < streams {
                return Err(Error::DegenerateChannel(format!(
                    "receiver {receiver} keeps {} clean dimensions for {streams} streams of {from}->{receiver}",
                    postcoder.cols()
                )));
            }
            stages.push(DecodingStage { from, to: receiver, desired, excluded, postcoder });
        }
    }
    Ok(stages)
}
