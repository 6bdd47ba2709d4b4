//! Cholesky factorisation of Hermitian positive definite matrices, the
//! log-determinants built on it, and triangular solves used for noise
//! whitening.

use alloc::format;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;
use crate::matcore::CMat;

/// Lower-triangular `L` with `L L^H = a`. Errors if `a` is not (numerically)
/// Hermitian positive definite.
pub fn cholesky(a: &CMat) -> Result<CMat> {
    if a.rows() != a.cols() {
        return Err(Error::InvalidInput(format!(
            "cholesky needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut l = CMat::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if !(diag > 0.0) || !diag.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "cholesky pivot {j} is non-positive or non-finite ({diag})"
            )));
        }
        let d = fmath::sqrt(diag);
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / d;
        }
    }
    Ok(l)
}

/// Base-2 log-determinant of a Hermitian positive definite matrix.
pub fn logdet2_hpd(a: &CMat) -> Result<f64> {
    let l = cholesky(a)?;
    let mut acc = 0.0;
    for j in 0..a.rows() {
        acc += fmath::log2(l[(j, j)].re);
    }
    Ok(2.0 * acc)
}

/// Solve `L X = B` for lower-triangular `L` by forward substitution.
pub fn solve_lower(l: &CMat, b: &CMat) -> CMat {
    assert_eq!(l.rows(), l.cols());
    assert_eq!(l.rows(), b.rows());
    let n = l.rows();
    let mut x = b.clone();
    for j in 0..b.cols() {
        for i in 0..n {
            let mut v = x[(i, j)];
            for k in 0..i {
                v -= l[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = v / l[(i, i)].re;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hpd(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        let a = CMat::from_fn(n, n + 1, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        a.aat_scaled_plus_identity(1.0)
    }

    #[test]
    fn cholesky_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hpd(&mut rng, 5);
        let l = cholesky(&a).unwrap();
        let back = &l * &l.adjoint();
        let mut diff = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                diff += (back[(i, j)] - a[(i, j)]).norm_sqr();
            }
        }
        assert!(diff.sqrt() < 1e-10 * a.fro_norm());
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = CMat::identity(2);
        a[(1, 1)] = Complex64::new(-1.0, 0.0);
        assert!(matches!(cholesky(&a), Err(Error::NumericalFailure(_))));
    }

    #[test]
    fn logdet_of_diagonal_matrix() {
        let a = CMat::from_real_diag(&[2.0, 4.0, 8.0]);
        // log2(2*4*8) = 6
        assert!((logdet2_hpd(&a).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn forward_solve_inverts_lower_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hpd(&mut rng, 4);
        let l = cholesky(&a).unwrap();
        let x = solve_lower(&l, &CMat::identity(4));
        let back = &l * &x;
        let mut diff = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                diff += (back[(i, j)] - Complex64::new(want, 0.0)).norm_sqr();
            }
        }
        assert!(diff.sqrt() < 1e-12);
    }
}
