//! Complex matrix and information-theoretic primitives: a small dense matrix
//! type, one-sided Jacobi SVD with rank-revealing subspace extraction,
//! Cholesky-based log-determinants, water-filling and MAC capacities.

mod capacity;
mod chol;
mod cmat;
mod svd;

pub use capacity::{
    mac_corner_rates, mac_sum_capacity, p2p_capacity, waterfill, wf_covariance, PowerAllocation,
};
pub use chol::{cholesky, logdet2_hpd, solve_lower};
pub use cmat::CMat;
pub use num_complex::Complex64;
pub use svd::{
    col_space_basis, null_space_basis, numerical_rank, orth_complement_basis, svd, Svd,
    DEFAULT_RANK_TOL,
};
