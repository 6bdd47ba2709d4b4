//! Cross-checks of the in-house numerics against nalgebra. Singular values,
//! ranks, subspace bases and log-determinants are recomputed with a second,
//! independently written decomposition and must agree; the beamformer
//! constructions are validated through nalgebra ranks only.

use multiway_core::channel::{others, pair_index, sample_channel_set, AntennaConfig, PAIRS};
use multiway_core::matcore::{
    col_space_basis, logdet2_hpd, null_space_basis, numerical_rank, orth_complement_basis,
    p2p_capacity, svd, CMat, Complex64, DEFAULT_RANK_TOL,
};
use multiway_core::rng::{complex_gaussian, substream};
use multiway_core::schemes::{allocate_streams, BeamformerSet};
use nalgebra::DMatrix;

fn na(a: &CMat) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

fn na_singular_values(a: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = na(a).svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

fn na_rank(a: &CMat) -> usize {
    let s = na_singular_values(a);
    let smax = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > DEFAULT_RANK_TOL * smax).count()
}

fn random_cmat(seed: u64, rows: usize, cols: usize) -> CMat {
    let mut rng = substream(seed, &[90, rows as u64, cols as u64]);
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(&mut rng))
}

/// Frobenius distance between a CMat and a nalgebra matrix.
fn diff_norm(a: &CMat, b: &DMatrix<Complex64>) -> f64 {
    (na(a) - b).norm()
}

const SHAPES: [(usize, usize); 10] =
    [(1, 1), (2, 3), (3, 2), (4, 4), (5, 3), (2, 6), (6, 2), (5, 5), (1, 6), (6, 1)];

#[test]
fn singular_values_match_nalgebra() {
    for (rows, cols) in SHAPES {
        for seed in 0..5 {
            let a = random_cmat(seed, rows, cols);
            let mine = svd(&a).unwrap().sigma;
            let theirs = na_singular_values(&a);
            let smax = theirs[0].max(1e-300);
            // The one-sided decomposition reports one value per column; the
            // values beyond min(rows, cols) must vanish.
            assert_eq!(mine.len(), cols);
            for (k, s) in theirs.iter().enumerate() {
                assert!(
                    (mine[k] - s).abs() <= 1e-10 * smax,
                    "{rows}x{cols} seed {seed}: sigma[{k}] = {} vs nalgebra {s}",
                    mine[k]
                );
            }
            for s in &mine[theirs.len()..] {
                assert!(*s <= 1e-10 * smax);
            }
        }
    }
}

#[test]
fn ranks_match_nalgebra_on_deficient_matrices() {
    // Outer products have known rank; duplicated columns force deficiency.
    let a = random_cmat(3, 5, 2);
    let b = random_cmat(4, 2, 5);
    let prod = &a * &b;
    assert_eq!(numerical_rank(&prod, DEFAULT_RANK_TOL).unwrap(), 2);
    assert_eq!(na_rank(&prod), 2);

    let c = random_cmat(5, 4, 2);
    let dup = CMat::hcat(4, &[&c, &c]);
    assert_eq!(numerical_rank(&dup, DEFAULT_RANK_TOL).unwrap(), 2);
    assert_eq!(na_rank(&dup), 2);

    assert_eq!(numerical_rank(&CMat::zeros(3, 4), DEFAULT_RANK_TOL).unwrap(), 0);
    for (rows, cols) in SHAPES {
        let a = random_cmat(11, rows, cols);
        assert_eq!(numerical_rank(&a, DEFAULT_RANK_TOL).unwrap(), na_rank(&a));
    }
}

#[test]
fn null_space_basis_agrees_with_nalgebra_rank() {
    let mut deficient_cases = 0;
    for (rows, cols) in [(3, 5), (2, 6), (4, 4), (5, 3), (1, 4)] {
        for seed in 0..4 {
            let a = random_cmat(seed, rows, cols);
            let n = null_space_basis(&a, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(n.cols(), cols - na_rank(&a));
            if n.cols() == 0 {
                continue;
            }
            deficient_cases += 1;
            let smax = na_singular_values(&a)[0];
            let image = &a * &n;
            assert!(image.fro_norm() <= 1e-10 * smax * (n.cols() as f64).sqrt());
            let gram = &n.adjoint() * &n;
            assert!(diff_norm(&gram, &DMatrix::identity(n.cols(), n.cols())) <= 1e-10);
        }
    }
    assert!(deficient_cases >= 12, "null-space checks were mostly vacuous");
}

#[test]
fn orth_complement_agrees_with_nalgebra_rank() {
    for (rows, cols) in [(5, 2), (6, 3), (4, 1), (3, 3)] {
        for seed in 0..4u64 {
            let b = random_cmat(seed.wrapping_add(40), rows, cols);
            let t = orth_complement_basis(&b).unwrap();
            assert_eq!(t.cols(), rows - na_rank(&b));
            if t.cols() == 0 {
                continue;
            }
            let cross = &t.adjoint() * &b;
            assert!(cross.fro_norm() <= 1e-10 * b.fro_norm());
            let gram = &t.adjoint() * &t;
            assert!(diff_norm(&gram, &DMatrix::identity(t.cols(), t.cols())) <= 1e-10);
        }
    }
    // Duplicated columns: the complement sees through the repetition.
    let b = random_cmat(77, 5, 2);
    let t = orth_complement_basis(&CMat::hcat(5, &[&b, &b])).unwrap();
    assert_eq!(t.cols(), 3);
}

#[test]
fn column_space_projector_matches_nalgebra() {
    for (rows, cols, seed) in [(4, 2, 0u64), (5, 3, 1), (3, 6, 2), (6, 6, 3)] {
        let b = random_cmat(seed.wrapping_add(60), rows, cols);
        let c = col_space_basis(&b, DEFAULT_RANK_TOL).unwrap();
        let r = na_rank(&b);
        assert_eq!(c.cols(), r);
        let dec = na(&b).svd(true, false);
        let u = dec.u.expect("left vectors requested");
        let ur = u.columns(0, r).clone_owned();
        let p_theirs = &ur * ur.adjoint();
        let p_mine = &c * &c.adjoint();
        assert!(
            diff_norm(&p_mine, &p_theirs) <= 1e-9,
            "{rows}x{cols}: projector mismatch {}",
            diff_norm(&p_mine, &p_theirs)
        );
    }
}

#[test]
fn logdet_matches_nalgebra_determinant() {
    for (n, k, seed) in [(2, 2, 0u64), (3, 5, 1), (4, 4, 2), (6, 3, 3), (5, 8, 4)] {
        let a = random_cmat(seed.wrapping_add(80), n, k);
        // I + A A^H is Hermitian positive definite by construction.
        let m = a.aat_scaled_plus_identity(1.0);
        let mine = logdet2_hpd(&m).unwrap();
        let det = na(&m).determinant();
        assert!(det.im.abs() <= 1e-9 * det.re.abs());
        let theirs = det.re.log2();
        assert!(
            (mine - theirs).abs() <= 1e-9 * mine.abs().max(1.0),
            "n={n} k={k}: logdet {mine} vs nalgebra {theirs}"
        );
    }
}

/// Independent water level search: bisect on the level, then evaluate the
/// rate sum the level implies.
fn bisected_capacity(gains: &[f64], power: f64, noise: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = power
        + gains
            .iter()
            .filter(|g| **g > 0.0)
            .map(|g| noise / g)
            .fold(0.0, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let spent: f64 =
            gains.iter().filter(|g| **g > 0.0).map(|g| (mid - noise / *g).max(0.0)).sum();
        if spent > power {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    gains
        .iter()
        .filter(|g| **g > 0.0)
        .map(|g| {
            let p = (mu - noise / *g).max(0.0);
            (1.0 + p * g / noise).log2()
        })
        .sum()
}

#[test]
fn p2p_capacity_matches_bisection_over_nalgebra_sigmas() {
    for (rows, cols, seed) in [(2, 2, 0u64), (3, 5, 1), (5, 3, 2), (4, 6, 3), (6, 1, 4)] {
        let h = random_cmat(seed.wrapping_add(100), rows, cols);
        for (power, noise) in [(0.5, 1.0), (10.0, 1.0), (100.0, 0.25)] {
            let mine = p2p_capacity(&h, power, noise).unwrap();
            let gains: Vec<f64> = na_singular_values(&h).iter().map(|s| s * s).collect();
            let theirs = bisected_capacity(&gains, power, noise);
            assert!(
                (mine - theirs).abs() <= 1e-8 * mine.max(1.0),
                "{rows}x{cols} P={power}: capacity {mine} vs bisection {theirs}"
            );
        }
    }
}

#[test]
fn beamformer_subspaces_validated_by_nalgebra_ranks() {
    let mut zf_checked = 0;
    let mut aligned_checked = 0;
    for (m0, m1, m2, tau) in [(5, 3, 2, 0.7), (4, 3, 2, 0.75), (3, 3, 3, 0.5)] {
        let cfg = AntennaConfig::new(m0, m1, m2).unwrap();
        let alloc = allocate_streams(cfg, tau).unwrap();
        for seed in 0..10u64 {
            let mut rng = substream(seed, &[91, m0 as u64, m1 as u64, m2 as u64]);
            let ch = sample_channel_set(cfg, &mut rng);
            let bf = BeamformerSet::build(&ch, &alloc, &mut rng).unwrap();

            for (p, &(from, to)) in PAIRS.iter().enumerate() {
                if alloc.zf[p] == 0 {
                    continue;
                }
                zf_checked += 1;
                let victim = 3 - from - to;
                let leak = ch.h(from, victim) * bf.zf(from, to);
                let smax = na_singular_values(ch.h(from, victim))[0];
                assert!(
                    na_singular_values(&leak)[0] <= 1e-10 * smax,
                    "({m0},{m1},{m2}) seed {seed}: {from}->{to} leaks into {victim}"
                );
                assert_eq!(na_rank(bf.zf(from, to)), alloc.zf[p]);
            }

            for r in 0..3 {
                let (j, k) = others(r);
                let cross_jk = alloc.ia[pair_index(j, k)];
                let cross_kj = alloc.ia[pair_index(k, j)];
                if cross_jk + cross_kj == 0 {
                    continue;
                }
                let g = CMat::hcat(
                    cfg.at(r),
                    &[&(ch.h(j, r) * bf.ia(j, k)), &(ch.h(k, r) * bf.ia(k, j))],
                );
                // Every aligned pair collapses to one dimension at the victim.
                let want = cross_jk + cross_kj - alloc.aligned[r];
                assert_eq!(
                    na_rank(&g),
                    want,
                    "({m0},{m1},{m2}) seed {seed}: cross rank at receiver {r}"
                );
                if alloc.aligned[r] > 0 {
                    aligned_checked += 1;
                }
            }
        }
    }
    assert!(zf_checked > 0 && aligned_checked > 0, "rank identities were vacuous");
}

#[test]
fn corner_rate_sum_matches_nalgebra_logdet() {
    use multiway_core::matcore::{mac_corner_rates, mac_sum_capacity};
    let h = [random_cmat(120, 3, 2), random_cmat(121, 3, 3)];
    let noise = 0.8;
    let (cap, covs) = mac_sum_capacity(&h, 6.0, noise, 1e-10, 500).unwrap();
    let rates = mac_corner_rates(&h, &covs, &[1, 0], noise).unwrap();
    let sum: f64 = rates.iter().sum();
    // Rebuild the covariance form in nalgebra and take its determinant.
    let mut m = DMatrix::<Complex64>::identity(3, 3);
    for (hu, qu) in h.iter().zip(&covs) {
        m += na(hu) * na(qu) * na(hu).adjoint() / Complex64::new(noise, 0.0);
    }
    let theirs = m.determinant().re.log2();
    assert!((sum - theirs).abs() <= 1e-8, "corner sum {sum} vs nalgebra {theirs}");
    assert!((cap - theirs).abs() <= 1e-8, "capacity {cap} vs nalgebra {theirs}");
}
