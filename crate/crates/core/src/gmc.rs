//! Truncated Gaussian fields Y^{(k)}_{α,β}, their covariance, Sobolev norms
//! and the truncated chaos measures μ^{(k)}_{α,β}(dθ) = e^{Y}/E e^{Y} dθ.
//!
//! The field is Σ_{j≤k} (1/√j)(N_j ± η_j/√j) c_j(θ) with
//! c_j(θ) = 2α cos jθ − 2iβ sin jθ and η_j = 1 for even j, 0 otherwise.

use crate::quad::{gauss_legendre, mapped};
use crate::symbols::im_ln_one_minus_exp;
use crate::{c64, Complex64, Error, Result, I};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Which deterministic shift the field carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shift {
    /// +x, the orthogonal groups.
    Orthogonal,
    /// −x, the symplectic group.
    Symplectic,
}

impl Shift {
    pub fn sign(self) -> f64 {
        match self {
            Shift::Orthogonal => 1.0,
            Shift::Symplectic => -1.0,
        }
    }
}

/// Standard normals N_1..N_k and the shift they are paired with.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDraw {
    pub gaussians: Vec<f64>,
    pub shift: Shift,
}

impl FieldDraw {
    /// Draw number `index` of the stream family `seed`.
    pub fn sample(k: usize, shift: Shift, seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let gaussians = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        FieldDraw { gaussians, shift }
    }

    /// The draw with every N_j = 0, leaving the deterministic part.
    pub fn zero(k: usize, shift: Shift) -> Self {
        FieldDraw { gaussians: vec![0.0; k], shift }
    }
}

fn eta(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        0.0
    }
}

fn coeff(j: usize, theta: f64, alpha: f64, beta: Complex64) -> Complex64 {
    let jt = j as f64 * theta;
    c64(2.0 * alpha * jt.cos(), 0.0) - 2.0 * I * beta * jt.sin()
}

fn check_k(k: usize, have: usize) -> Result<()> {
    if k > have {
        Err(Error::Window { need: k as i64, have: have as i64 })
    } else {
        Ok(())
    }
}

/// Y^{(k)}_{α,β}(θ) for one draw.
pub fn truncated_field(draw: &FieldDraw, theta: f64, alpha: f64, beta: Complex64, k: usize) -> Result<Complex64> {
    check_k(k, draw.gaussians.len())?;
    let s = draw.shift.sign();
    Ok((1..=k)
        .map(|j| {
            let sj = (j as f64).sqrt();
            (draw.gaussians[j - 1] + s * eta(j) / sj) / sj * coeff(j, theta, alpha, beta)
        })
        .sum())
}

/// Partial sums of x(θ) = Σ η_j cos jθ / j and x̂(θ) = −Σ η_j sin jθ / j.
pub fn deterministic_shift(theta: f64, kmax: usize) -> (f64, f64) {
    let mut x = 0.0;
    let mut xh = 0.0;
    for j in (2..=kmax).step_by(2) {
        let jt = j as f64 * theta;
        x += jt.cos() / j as f64;
        xh -= jt.sin() / j as f64;
    }
    (x, xh)
}

/// Cov(Y^{(k)}(θ), Y^{(k)}(θ')) without conjugation.
pub fn covariance_partial(theta: f64, theta2: f64, alpha: f64, beta: Complex64, k: usize) -> Complex64 {
    let a2 = c64(alpha * alpha, 0.0);
    let b2 = beta * beta;
    let (d, s) = (theta - theta2, theta + theta2);
    (1..=k)
        .map(|j| {
            let jf = j as f64;
            (2.0 * (a2 - b2) * (jf * d).cos() + 2.0 * (a2 + b2) * (jf * s).cos() - 4.0 * I * alpha * beta * (jf * s).sin()) / jf
        })
        .sum()
}

/// k → ∞ limit of [`covariance_partial`]:
/// −2(α²−β²) ln|e^{iθ}−e^{iθ'}| − 2(α²+β²) ln|e^{iθ}−e^{−iθ'}| + 4iαβ Im ln(1 − e^{i(θ+θ')}).
pub fn covariance_closed_form(theta: f64, theta2: f64, alpha: f64, beta: Complex64) -> Result<Complex64> {
    let diag = (Complex64::from_polar(1.0, theta) - Complex64::from_polar(1.0, theta2)).norm();
    let anti = (Complex64::from_polar(1.0, theta) - Complex64::from_polar(1.0, -theta2)).norm();
    if diag < 1e-14 || anti < 1e-14 {
        return Err(Error::Singular(theta));
    }
    let a2 = c64(alpha * alpha, 0.0);
    let b2 = beta * beta;
    Ok(-2.0 * (a2 - b2) * diag.ln() - 2.0 * (a2 + b2) * anti.ln()
        + 4.0 * I * alpha * beta * im_ln_one_minus_exp(theta + theta2))
}

/// Var Y^{(k)}(θ), real for imaginary β.
pub fn variance(theta: f64, alpha: f64, beta: Complex64, k: usize) -> Complex64 {
    covariance_partial(theta, theta, alpha, beta, k)
}

/// μ^{(k)} cell masses for one draw.
#[derive(Clone, Debug, PartialEq)]
pub struct GMCGrid {
    /// Cell boundaries, ascending.
    pub boundaries: Vec<f64>,
    pub masses: Vec<f64>,
    pub k: usize,
    pub alpha: f64,
    pub beta: Complex64,
}

impl GMCGrid {
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// n equal cells partitioning [0, 2π).
pub fn uniform_cells(n: usize) -> Vec<f64> {
    (0..=n).map(|i| TAU * i as f64 / n as f64).collect()
}

const BASE_POINTS: usize = 64;
const MAX_POINTS: usize = 4096;
const CELL_RTOL: f64 = 1e-9;

/// ln of the normalised density Y − E Y − ½ Var Y at θ, in real arithmetic.
fn log_density(draw: &FieldDraw, theta: f64, a: f64, b: f64, k: usize) -> f64 {
    // With β = ib, c_j = 2α cos jθ + 2b sin jθ is real; the shift cancels
    // against E Y and only the Gaussian part and the variance remain.
    let (mut s, mut var) = (0.0, 0.0);
    let (c1, s1) = (theta.cos(), theta.sin());
    let (mut cj, mut sj) = (1.0, 0.0);
    for j in 1..=k {
        (cj, sj) = (cj * c1 - sj * s1, sj * c1 + cj * s1);
        let c = 2.0 * a * cj + 2.0 * b * sj;
        let jf = j as f64;
        s += draw.gaussians[j - 1] * c / jf.sqrt();
        var += c * c / jf;
    }
    s - 0.5 * var
}

fn cell_mass(draw: &FieldDraw, lo: f64, hi: f64, a: f64, b: f64, k: usize) -> Result<f64> {
    let integrate = |m: usize| -> f64 {
        let rule = gauss_legendre(m);
        mapped(&rule, lo, hi).map(|(x, w)| w * log_density(draw, x, a, b, k).exp()).sum()
    };
    let mut m = BASE_POINTS;
    let mut prev = integrate(m);
    while m < MAX_POINTS {
        m *= 2;
        let cur = integrate(m);
        if (cur - prev).abs() <= CELL_RTOL * cur.abs().max(f64::MIN_POSITIVE) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "cell [{lo:.4}, {hi:.4}] unresolved with {MAX_POINTS} quadrature points at k = {k}"
    )))
}

fn real_beta(beta: Complex64) -> Result<f64> {
    if beta.re != 0.0 {
        return Err(Error::Domain(format!("measure densities need imaginary β, got {beta}")));
    }
    Ok(beta.im)
}

/// Cell masses of μ^{(k)}_{α,β} for one draw over the cells between
/// consecutive `boundaries`.
pub fn gmc_measure(draw: &FieldDraw, k: usize, alpha: f64, beta: Complex64, boundaries: &[f64]) -> Result<GMCGrid> {
    check_k(k, draw.gaussians.len())?;
    let b = real_beta(beta)?;
    if boundaries.len() < 2 || boundaries.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("cell boundaries must be strictly increasing".into()));
    }
    let masses = boundaries
        .windows(2)
        .map(|w| cell_mass(draw, w[0], w[1], alpha, b, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(GMCGrid { boundaries: boundaries.to_vec(), masses, k, alpha, beta })
}

/// `replicates` independent draws of [`gmc_measure`], in draw order.
pub fn gmc_replicates(
    k: usize,
    alpha: f64,
    beta: Complex64,
    boundaries: &[f64],
    shift: Shift,
    replicates: usize,
    seed: u64,
) -> Result<Vec<GMCGrid>> {
    (0..replicates)
        .into_par_iter()
        .map(|i| gmc_measure(&FieldDraw::sample(k, shift, seed, i as u64), k, alpha, beta, boundaries))
        .collect()
}

/// Per-cell sample mean and variance over replicates.
pub fn cell_statistics(runs: &[GMCGrid]) -> (Vec<f64>, Vec<f64>) {
    let cells = runs.first().map_or(0, |r| r.masses.len());
    let n = runs.len() as f64;
    let mut mean = vec![0.0; cells];
    let mut var = vec![0.0; cells];
    for c in 0..cells {
        mean[c] = runs.iter().map(|r| r.masses[c]).sum::<f64>() / n;
        var[c] = runs.iter().map(|r| (r.masses[c] - mean[c]).powi(2)).sum::<f64>() / (n - 1.0);
    }
    (mean, var)
}

/// E μ^{(k)}(A)² = ∫∫_{A×A} exp Cov(Y^{(k)}(θ), Y^{(k)}(θ')) dθ dθ' for the arc A = [a, b].
pub fn second_moment(a: f64, b: f64, alpha: f64, beta: Complex64, k: usize, points: usize) -> Complex64 {
    let rule = gauss_legendre(points);
    let mut s = c64(0.0, 0.0);
    for (x, wx) in mapped(&rule, a, b) {
        for (y, wy) in mapped(&rule, a, b) {
            s += wx * wy * covariance_partial(x, y, alpha, beta, k).exp();
        }
    }
    s
}

/// sqrt(Σ_j (1+j²)^s |f_j|²) over a two-sided coefficient list.
pub fn sobolev_norm(coeffs: &[(i64, Complex64)], s: f64) -> f64 {
    coeffs
        .iter()
        .map(|(j, f)| (1.0 + (*j as f64).powi(2)).powf(s) * f.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Two-sided Fourier coefficients of Re ln p_n(θ) = −Σ_j Tr U^j cos jθ / j.
pub fn re_log_coefficients(traces: &[f64]) -> Vec<(i64, Complex64)> {
    traces
        .iter()
        .enumerate()
        .flat_map(|(i, t)| {
            let j = (i + 1) as i64;
            let f = c64(-t / (2.0 * j as f64), 0.0);
            [(j, f), (-j, f)]
        })
        .collect()
}

/// Where (α, β) sits relative to the range in which positivity of the
/// limiting measure on I_ε is established (α > −1/4, α² − β² < 1/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParameterFlags {
    pub alpha_below_quarter: bool,
    pub variance_above_half: bool,
}

impl ParameterFlags {
    pub fn in_established_range(&self) -> bool {
        !self.alpha_below_quarter && !self.variance_above_half
    }
}

pub fn parameter_flags(alpha: f64, beta: Complex64) -> ParameterFlags {
    ParameterFlags {
        alpha_below_quarter: alpha <= -0.25,
        variance_above_half: (alpha * alpha - (beta * beta).re) >= 0.5,
    }
}
