//! Fisher–Hartwig symbols on the unit circle, exact Toeplitz and
//! Toeplitz+Hankel determinants, their large-n expansions (including the
//! merging-singularity regime governed by a σ-form Painlevé V transcendent),
//! Haar sampling on the orthogonal and symplectic groups, and truncated
//! Gaussian multiplicative chaos.

pub mod asymptotics;
pub mod error;
pub mod gmc;
pub mod lindet;
pub mod painleve;
pub mod quad;
pub mod rmt;
pub mod specfun;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Shorthand for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);
