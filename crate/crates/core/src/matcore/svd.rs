//! Singular value decomposition via one-sided Jacobi rotations, plus the
//! rank-revealing subspace helpers built on top of it (null space, orthogonal
//! complement, column space). One-sided Jacobi applies right rotations until
//! the columns of the working copy are mutually orthogonal; it is slow for
//! large matrices but extremely accurate, and every matrix here is tiny.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;
use crate::matcore::CMat;

/// Relative threshold under which a singular value counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Pairwise column orthogonality target for the Jacobi sweep.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;
/// Columns of the unit-scaled working copy below this norm are numerically
/// zero. Flushing them (and skipping pairs that touch them) keeps every
/// rotation in the normal f64 range; rank-deficient inputs otherwise drive
/// the debris columns into subnormals, where the rotation phase loses digits
/// and the pair criterion stops making progress.
const COLUMN_FLOOR: f64 = 1e-140;

/// Result of a one-sided Jacobi SVD of `A` (m x n): `A V = W` with `V`
/// unitary (n x n) and the columns of `W` (m x n) mutually orthogonal with
/// norms `sigma`, sorted descending. Left singular vectors are `W` columns
/// normalised by their sigma.
#[derive(Debug, Clone)]
pub struct Svd {
    pub sigma: Vec<f64>,
    pub v: CMat,
    pub w: CMat,
}

impl Svd {
    /// Left singular vectors for singular values above `tol * sigma_max`.
    pub fn left_vectors(&self, tol: f64) -> CMat {
        let r = rank_from_sigma(&self.sigma, tol);
        let mut u = CMat::zeros(self.w.rows(), r);
        for j in 0..r {
            let s = 1.0 / self.sigma[j];
            let (src, dst) = (self.w.col(j), u.col_mut(j));
            for i in 0..src.len() {
                dst[i] = src[i] * s;
            }
        }
        u
    }
}

fn rank_from_sigma(sigma: &[f64], tol: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    sigma.iter().filter(|&&s| s > tol * smax).count()
}

/// One-sided Jacobi SVD. Requires finite entries.
pub fn svd(a: &CMat) -> Result<Svd> {
    if !a.all_finite() {
        return Err(Error::InvalidInput(format!(
            "svd input {}x{} has non-finite entries",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.cols();
    let scale = a.fro_norm();
    let mut w = if scale > 0.0 { a.scaled(1.0 / scale) } else { a.clone() };
    let mut v = CMat::identity(n);

    if n > 1 && scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            flush_tiny_columns(&mut w);
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let mut app = 0.0;
                    let mut aqq = 0.0;
                    let mut apq = Complex64::new(0.0, 0.0);
                    {
                        let (cp, cq) = (w.col(p), w.col(q));
                        for i in 0..cp.len() {
                            app += cp[i].norm_sqr();
                            aqq += cq[i].norm_sqr();
                            apq += cp[i].conj() * cq[i];
                        }
                    }
                    if app <= COLUMN_FLOOR * COLUMN_FLOOR || aqq <= COLUMN_FLOOR * COLUMN_FLOOR {
                        continue;
                    }
                    // hypot instead of sqrt(norm_sqr): squaring tiny inner
                    // products underflows and wrecks the phase below.
                    let g = fmath::hypot(apq.re, apq.im);
                    if g <= JACOBI_TOL * fmath::sqrt(app) * fmath::sqrt(aqq) || g == 0.0 {
                        continue;
                    }
                    rotated = true;
                    // Absorb the phase so the 2x2 Gram block becomes real
                    // symmetric, then zero it with a classic Jacobi rotation.
                    let d = apq.conj() / g;
                    // hypot keeps huge tau (strongly graded column pairs)
                    // from overflowing into an identity rotation.
                    let tau = (aqq - app) / (2.0 * g);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + fmath::hypot(1.0, tau))
                    } else {
                        -1.0 / (-tau + fmath::hypot(1.0, tau))
                    };
                    let c = 1.0 / fmath::sqrt(1.0 + t * t);
                    let s = t * c;
                    rotate_pair(&mut w, p, q, c, s, d);
                    rotate_pair(&mut v, p, q, c, s, d);
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NumericalFailure(format!(
                "jacobi svd did not converge within {MAX_SWEEPS} sweeps"
            )));
        }
        flush_tiny_columns(&mut w);
    }

    if scale > 0.0 && scale != 1.0 {
        w = w.scaled(scale);
    }
    let mut sigma: Vec<f64> = (0..n).map(|j| w.col_norm(j)).collect();
    // Stable sort by descending sigma, permuting W and V alike.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].partial_cmp(&sigma[i]).unwrap());
    let wp = permute_cols(&w, &order);
    let vp = permute_cols(&v, &order);
    sigma = order.iter().map(|&j| sigma[j]).collect();
    Ok(Svd { sigma, v: vp, w: wp })
}

fn flush_tiny_columns(w: &mut CMat) {
    for j in 0..w.cols() {
        if w.col_norm(j) <= COLUMN_FLOOR {
            w.col_mut(j).fill(Complex64::new(0.0, 0.0));
        }
    }
}

fn rotate_pair(m: &mut CMat, p: usize, q: usize, c: f64, s: f64, d: Complex64) {
    for i in 0..m.rows() {
        let vp = m[(i, p)];
        let vq = m[(i, q)] * d;
        m[(i, p)] = vp * c - vq * s;
        m[(i, q)] = vp * s + vq * c;
    }
}

fn permute_cols(m: &CMat, order: &[usize]) -> CMat {
    let mut out = CMat::zeros(m.rows(), m.cols());
    for (dst, &src) in order.iter().enumerate() {
        out.col_mut(dst).copy_from_slice(m.col(src));
    }
    out
}

/// Number of singular values above `tol * sigma_max`.
pub fn numerical_rank(a: &CMat, tol: f64) -> Result<usize> {
    Ok(rank_from_sigma(&svd(a)?.sigma, tol))
}

/// Orthonormal basis of the (right) null space of `a`: columns `x` with
/// `a x ~ 0`. Returns an `n x k` matrix; `k` may be zero. `tol` is the
/// relative rank threshold (`DEFAULT_RANK_TOL` is the usual choice).
pub fn null_space_basis(a: &CMat, tol: f64) -> Result<CMat> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be positive, got {tol}")));
    }
    let dec = svd(a)?;
    let r = rank_from_sigma(&dec.sigma, tol);
    Ok(dec.v.col_range(r, a.cols()))
}

/// Orthonormal basis of the orthogonal complement of the column span of `b`
/// inside its ambient space: an `m x (m - rank b)` matrix `T` with
/// `T^H b = 0`. Computed as the null space of `b^H`.
pub fn orth_complement_basis(b: &CMat) -> Result<CMat> {
    null_space_basis(&b.adjoint(), DEFAULT_RANK_TOL)
}

/// Orthonormal basis of the column space of `b` (`m x rank`).
pub fn col_space_basis(b: &CMat, tol: f64) -> Result<CMat> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be positive, got {tol}")));
    }
    Ok(svd(b)?.left_vectors(tol))
}
