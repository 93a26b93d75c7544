//! Complex log-Gamma and log-Barnes-G.
//!
//! Both functions are computed by upward recurrence to a region where the
//! Stirling-type expansions are accurate, with principal logs throughout.
//! The resulting branch is the one analytic in the plane cut along the
//! negative real axis, i.e. continuous along horizontal rays from +∞.

use crate::{Complex64, Error, Result};
use std::f64::consts::PI;

/// ζ'(−1)
pub const ZETA_PRIME_M1: f64 = -0.165_421_143_700_450_93;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Bernoulli numbers B_2, B_4, ..., B_24.
const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

// Shift target for the asymptotic expansions. At |z| >= 18 the truncated
// series below are accurate far beyond double precision.
const SHIFT_RE: f64 = 18.0;

fn check_pole(z: Complex64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(format!("{z}")));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

fn shift_count(z: Complex64) -> usize {
    if z.re >= SHIFT_RE {
        0
    } else {
        (SHIFT_RE - z.re).ceil() as usize
    }
}

fn stirling(z: Complex64) -> Complex64 {
    let zi = z.inv();
    let z2i = zi * zi;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = zi;
    for (k, b) in BERNOULLI.iter().take(10).enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        series += pow * (b / (m * (m - 1.0)));
        pow *= z2i;
    }
    (z - 0.5) * z.ln() - z + 0.5 * LN_2PI + series
}

/// log Γ(z), principal branch continued along horizontal rays.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let n = shift_count(z);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (z + k as f64).ln();
    }
    Ok(stirling(z + n as f64) - acc)
}

/// log G(z+1) for large |z|.
fn barnes_asym(z: Complex64) -> Complex64 {
    let lz = z.ln();
    let z2 = z * z;
    let z2i = z2.inv();
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = z2i;
    for (k, b) in BERNOULLI.iter().skip(1).take(10).enumerate() {
        let k = k as f64 + 1.0;
        series += pow * (b / (4.0 * k * (k + 1.0)));
        pow *= z2i;
    }
    0.5 * z2 * lz - 0.75 * z2 + 0.5 * LN_2PI * z - lz / 12.0 + ZETA_PRIME_M1 + series
}

/// log G(z) for the Barnes G-function, same branch convention as
/// [`log_gamma`].
pub fn log_barnes_g(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    let n = shift_count(z).max(1);
    // log G(z) = log G(z+n) - Σ_{k<n} log Γ(z+k); the Γ values come from
    // one anchor at z+n by downward recurrence.
    let top = z + n as f64;
    let mut lg = stirling_shifted(top);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        lg -= (z + k as f64).ln();
        sum += lg;
    }
    Ok(barnes_asym(top - 1.0) - sum)
}

fn stirling_shifted(z: Complex64) -> Complex64 {
    if z.re >= SHIFT_RE {
        stirling(z)
    } else {
        let n = shift_count(z);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += (z + k as f64).ln();
        }
        stirling(z + n as f64) - acc
    }
}

/// Real log-Gamma for positive arguments.
pub fn ln_gamma_real(x: f64) -> f64 {
    log_gamma(Complex64::new(x, 0.0)).map(|v| v.re).unwrap_or(f64::NAN)
}

/// Reduce the imaginary part of a log to (−π, π].
pub fn principal_im(z: Complex64) -> Complex64 {
    let mut im = z.im % (2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    } else if im <= -PI {
        im += 2.0 * PI;
    }
    Complex64::new(z.re, im)
}
