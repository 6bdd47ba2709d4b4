//! Dense column-major complex matrix. Dimensions in this crate never exceed
//! a handful of antennas, so everything is plain loops over `Vec` storage;
//! zero-row and zero-column matrices are legal and show up routinely as empty
//! beamformer blocks.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::fmath;

/// Column-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a closure over (row, column).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Square diagonal matrix from real entries.
    pub fn from_real_diag(d: &[f64]) -> Self {
        let mut m = CMat::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Horizontal concatenation. `rows` disambiguates the empty block list.
    pub fn hcat(rows: usize, blocks: &[&CMat]) -> Self {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = CMat::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hcat row mismatch");
            m.data[at * rows..(at + b.cols) * rows].copy_from_slice(&b.data);
            at += b.cols;
        }
        m
    }

    /// Vertical concatenation. `cols` disambiguates the empty block list.
    pub fn vcat(cols: usize, blocks: &[&CMat]) -> Self {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = CMat::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vcat column mismatch");
            for j in 0..cols {
                for i in 0..b.rows {
                    m[(at + i, j)] = b[(i, j)];
                }
            }
            at += b.rows;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Column `j` as a slice of length `rows`.
    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Copy of columns `lo..hi`.
    pub fn col_range(&self, lo: usize, hi: usize) -> CMat {
        assert!(lo <= hi && hi <= self.cols);
        CMat {
            rows: self.rows,
            cols: hi - lo,
            data: self.data[lo * self.rows..hi * self.rows].to_vec(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entry-wise scaling by a real factor.
    pub fn scaled(&self, s: f64) -> CMat {
        let mut m = self.clone();
        for v in &mut m.data {
            *v *= s;
        }
        m
    }

    /// Matrix sum; dimensions must agree.
    pub fn plus(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v += w;
        }
        m
    }

    /// In-place `self += other`.
    pub fn add_assign(&mut self, other: &CMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (v, w) in self.data.iter_mut().zip(&other.data) {
            *v += w;
        }
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        fmath::sqrt(self.data.iter().map(|v| v.norm_sqr()).sum())
    }

    /// Euclidean norm of column `j`.
    pub fn col_norm(&self, j: usize) -> f64 {
        fmath::sqrt(self.col(j).iter().map(|v| v.norm_sqr()).sum())
    }

    /// True when every entry is finite.
    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `self * self^H`, the outer Gram matrix.
    pub fn aat(&self) -> CMat {
        let mut g = CMat::zeros(self.rows, self.rows);
        for k in 0..self.cols {
            let c = self.col(k);
            for j in 0..self.rows {
                let cj = c[j].conj();
                for i in 0..self.rows {
                    g[(i, j)] += c[i] * cj;
                }
            }
        }
        g
    }

    /// `I + s * self * self^H`.
    pub fn aat_scaled_plus_identity(&self, s: f64) -> CMat {
        let mut g = self.aat().scaled(s);
        for i in 0..self.rows {
            g[(i, i)] += Complex64::new(1.0, 0.0);
        }
        g
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl Mul<&CMat> for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            for k in 0..self.cols {
                let r = rhs[(k, j)];
                if r.re == 0.0 && r.im == 0.0 {
                    continue;
                }
                let a = self.col(k);
                let o = out.col_mut(j);
                for i in 0..a.len() {
                    o[i] += a[i] * r;
                }
            }
        }
        out
    }
}

impl core::fmt::Debug for CMat {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let v = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_against_hand_computation() {
        // [1+i, 2; 0, 1-i] * [1; i]
        let a = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.0, 1.0),
            (0, 1) => c(2.0, 0.0),
            (1, 0) => c(0.0, 0.0),
            _ => c(1.0, -1.0),
        });
        let b = CMat::from_fn(2, 1, |i, _| if i == 0 { c(1.0, 0.0) } else { c(0.0, 1.0) });
        let p = &a * &b;
        assert_eq!(p[(0, 0)], c(1.0, 3.0));
        assert_eq!(p[(1, 0)], c(1.0, 1.0));
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = CMat::from_fn(2, 3, |i, j| c(i as f64, j as f64));
        let ah = a.adjoint();
        assert_eq!(ah.rows(), 3);
        assert_eq!(ah.cols(), 2);
        assert_eq!(ah[(2, 1)], c(1.0, -2.0));
    }

    #[test]
    fn hcat_handles_empty_blocks() {
        let a = CMat::zeros(3, 0);
        let b = CMat::identity(3);
        let m = CMat::hcat(3, &[&a, &b, &a]);
        assert_eq!(m.cols(), 3);
        assert_eq!(m[(1, 1)], c(1.0, 0.0));
        let empty = CMat::hcat(4, &[]);
        assert_eq!((empty.rows(), empty.cols()), (4, 0));
    }

    #[test]
    fn aat_matches_explicit_product() {
        let a = CMat::from_fn(3, 2, |i, j| c((i + j) as f64, (i as f64) - (j as f64)));
        let g = a.aat();
        let g2 = &a * &a.adjoint();
        for i in 0..3 {
            for j in 0..3 {
                assert!((g[(i, j)] - g2[(i, j)]).norm() < 1e-12);
            }
        }
    }
}
