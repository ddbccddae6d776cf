//! Scalar functions routed through `libm` so results do not depend on the
//! platform's C math library.

use crate::C64;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn cabs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// `−x log₂ x` with `0 · log 0 = 0` below `threshold`.
#[inline]
pub(crate) fn entropy_term(x: f64, threshold: f64) -> f64 {
    if x <= threshold {
        0.0
    } else {
        -x * log2(x)
    }
}
