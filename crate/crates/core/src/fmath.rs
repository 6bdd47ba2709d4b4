//! Scalar float helpers routed through `libm` so that the same code paths
//! (and bit patterns) are used with and without `std`.

pub(crate) use libm::{asin, cos, exp, hypot, sin, sqrt};

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// 10^x, used for dB conversions.
pub(crate) fn exp10(x: f64) -> f64 {
    libm::pow(10.0, x)
}
