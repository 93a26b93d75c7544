//! Haar sampling on SO(n), O⁻(n), O(n) and Sp(2n), eigenangle statistics
//! and the characteristic-polynomial weights f_{n,α,β}, f^{(k)}_{n,α,β}.
//!
//! Sample i of a run with seed s draws from ChaCha8 seeded with s on stream
//! i, so Monte Carlo results do not depend on scheduling.

use crate::lindet::{Family, GroupSpec};
use crate::symbols::{im_ln_one_minus_exp, ln_chord};
use crate::{c64, Complex64, Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Tolerance for the group identities checked on every sample.
pub const GROUP_TOL: f64 = 1e-10;

const CHUNK: usize = 1024;

/// Eigenangles in [0, 2π) of one sampled matrix, closed under θ ↦ 2π − θ.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenAngleSet {
    pub group: GroupSpec,
    pub angles: Vec<f64>,
}

/// Re ln p_n(θ) and Im ln p_n(θ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldValue {
    /// −∞ when θ is an eigenangle.
    pub re_log: f64,
    pub im_log: f64,
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn haar_orthogonal(n: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Quaternionic Gram–Schmidt: each Gaussian column u_k is orthogonalised
/// against all earlier u_j and their partners −J ū_j, and U = [u | −J ū].
fn haar_symplectic(n: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let m = 2 * n;
    let partner = |u: &DVector<Complex64>| -> DVector<Complex64> {
        // −J ū with J = [[0, I], [−I, 0]]: (−ū_lower, ū_upper).
        DVector::from_fn(m, |i, _| if i < n { -u[i + n].conj() } else { u[i - n].conj() })
    };
    let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(m);
    for _ in 0..n {
        let mut v = DVector::from_fn(m, |_, _| {
            c64(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
        });
        // Two passes of classical Gram–Schmidt keep orthogonality at 1e-15.
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let nrm = v.norm();
        v /= c64(nrm, 0.0);
        let w = partner(&v);
        cols.push(v);
        cols.push(w);
    }
    let mut u = DMatrix::zeros(m, m);
    for k in 0..n {
        u.set_column(k, &cols[2 * k]);
        u.set_column(k + n, &cols[2 * k + 1]);
    }
    u
}

fn j_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if j == i + n {
            c64(1.0, 0.0)
        } else if i == j + n {
            c64(-1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// Pair the angles of a conjugation-symmetric spectrum, after removing
/// `fixed` (the eigenvalues forced to ±1), and return an exactly symmetric
/// list.
fn symmetrize(raw: &[f64], plus: usize, minus: usize) -> Result<Vec<f64>> {
    let mut rest: Vec<f64> = raw.to_vec();
    let mut out = Vec::with_capacity(raw.len());
    for (count, target) in [(plus, 0.0), (minus, PI)] {
        for _ in 0..count {
            let (i, _) = rest
                .iter()
                .enumerate()
                .map(|(i, a)| (i, (a - target).abs().min(TAU - (a - target).abs())))
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .ok_or_else(|| Error::Numeric("spectrum shorter than its fixed part".into()))?;
            rest.swap_remove(i);
            out.push(target);
        }
    }
    // Fold to [0, π], sort, and pair neighbours.
    let mut folded: Vec<f64> = rest.iter().map(|a| if *a > PI { TAU - a } else { *a }).collect();
    folded.sort_by(f64::total_cmp);
    if folded.len() % 2 != 0 {
        return Err(Error::Numeric("unpaired eigenvalue in a real or symplectic spectrum".into()));
    }
    for pair in folded.chunks(2) {
        if (pair[0] - pair[1]).abs() > 1e-6 {
            return Err(Error::Numeric(format!("eigenangles {} and {} do not pair", pair[0], pair[1])));
        }
        let th = 0.5 * (pair[0] + pair[1]);
        out.push(th);
        out.push(if th == 0.0 { 0.0 } else { TAU - th });
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn angle(z: Complex64) -> f64 {
    z.arg().rem_euclid(TAU)
}

fn sample_with(group: GroupSpec, rng: &mut ChaCha8Rng) -> Result<EigenAngleSet> {
    let n = group.dim;
    if n == 0 {
        return Ok(EigenAngleSet { group, angles: vec![] });
    }
    if group.family == Family::Sp {
        let u = haar_symplectic(n / 2, rng);
        let eye = DMatrix::<Complex64>::identity(n, n);
        let j = j_matrix(n / 2);
        let unit = (u.adjoint() * &u - eye).camax();
        let symp = (u.transpose() * &j * &u - &j).camax();
        if unit > GROUP_TOL || symp > GROUP_TOL {
            return Err(Error::Numeric(format!("symplectic sample failed its identities ({unit:.1e}, {symp:.1e})")));
        }
        let ev = u
            .schur()
            .eigenvalues()
            .ok_or_else(|| Error::Numeric("Schur form did not converge".into()))?;
        let raw: Vec<f64> = ev.iter().map(|z| angle(*z)).collect();
        return Ok(EigenAngleSet { group, angles: symmetrize(&raw, 0, 0)? });
    }
    let mut q = haar_orthogonal(n, rng);
    let want_det = match group.family {
        Family::SoEven | Family::SoOdd => Some(1.0),
        Family::OminusEven | Family::OminusOdd => Some(-1.0),
        _ => None,
    };
    let det = q.determinant();
    if let Some(d) = want_det {
        if det * d < 0.0 {
            q.column_mut(0).neg_mut();
        }
    }
    let unit = (q.transpose() * &q - DMatrix::<f64>::identity(n, n)).abs().max();
    if unit > GROUP_TOL {
        return Err(Error::Numeric(format!("orthogonal sample failed QᵀQ = I ({unit:.1e})")));
    }
    let det = q.determinant();
    let (plus, minus) = match (n % 2 == 0, det > 0.0) {
        (true, true) => (0, 0),
        (true, false) => (1, 1),
        (false, true) => (1, 0),
        (false, false) => (0, 1),
    };
    let ev = q.complex_eigenvalues();
    let raw: Vec<f64> = ev.iter().map(|z| angle(*z)).collect();
    Ok(EigenAngleSet { group, angles: symmetrize(&raw, plus, minus)? })
}

/// Eigenangles of a Haar-distributed matrix, deterministic in `seed`.
pub fn sample_haar(group: GroupSpec, seed: u64) -> Result<EigenAngleSet> {
    sample_indexed(group, seed, 0)
}

/// Sample number `index` of the stream family `seed`.
pub fn sample_indexed(group: GroupSpec, seed: u64, index: u64) -> Result<EigenAngleSet> {
    sample_with(group, &mut rng_for(seed, index))
}

/// Tr U^k = Σ_l cos kθ_l for k = 1..=kmax.
pub fn traces(set: &EigenAngleSet, kmax: usize) -> Vec<f64> {
    (1..=kmax).map(|k| set.angles.iter().map(|a| (k as f64 * a).cos()).sum()).collect()
}

/// Σ_l ln(1 − e^{i(θ_l − θ)}) with each Im in (−π/2, π/2] and Im ln 0 = π/2.
pub fn log_char_poly(set: &EigenAngleSet, theta: f64) -> FieldValue {
    let mut re = 0.0;
    let mut im = 0.0;
    for &a in &set.angles {
        re += ln_chord(a, theta);
        im += im_ln_one_minus_exp(a - theta);
    }
    FieldValue { re_log: re, im_log: im }
}

/// f_{n,α,β}(θ) = |p_n(θ)|^{2α} e^{2iβ Im ln p_n(θ)}.
pub fn field_weight(set: &EigenAngleSet, theta: f64, alpha: f64, beta: Complex64) -> Complex64 {
    let v = log_char_poly(set, theta);
    let phase = 2.0 * c64(0.0, 1.0) * beta * v.im_log;
    if alpha == 0.0 {
        return phase.exp();
    }
    if v.re_log == f64::NEG_INFINITY {
        return if alpha > 0.0 { c64(0.0, 0.0) } else { c64(f64::INFINITY, 0.0) };
    }
    (phase + 2.0 * alpha * v.re_log).exp()
}

/// f^{(k)}(θ) = exp(−Σ_{j≤k} (Tr U^j / j)(2α cos jθ − 2iβ sin jθ)).
pub fn field_weight_truncated(tr: &[f64], theta: f64, alpha: f64, beta: Complex64, k: usize) -> Result<Complex64> {
    if k > tr.len() {
        return Err(Error::Window { need: k as i64, have: tr.len() as i64 });
    }
    let mut s = c64(0.0, 0.0);
    for (j, t) in tr.iter().take(k).enumerate() {
        let jf = (j + 1) as f64;
        let c = c64(2.0 * alpha * (jf * theta).cos(), 0.0) - 2.0 * c64(0.0, 1.0) * beta * (jf * theta).sin();
        s -= t / jf * c;
    }
    Ok(s.exp())
}

/// One value per sample, in sample order.
pub fn mc_collect<T, F>(group: GroupSpec, samples: usize, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&EigenAngleSet) -> T + Sync,
{
    let chunks: Vec<Result<Vec<T>>> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            (lo..hi).map(|i| sample_indexed(group, seed, i as u64).map(|s| f(&s))).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(samples);
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Mean and standard error of a Monte Carlo estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: Complex64,
    /// sqrt(Σ|x − x̄|² / (N(N−1))).
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Mean and standard error of complex values.
pub fn mean_stderr(values: &[Complex64]) -> (Complex64, f64) {
    let n = values.len() as f64;
    let mean: Complex64 = values.iter().sum::<Complex64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).norm_sqr()).sum();
    (mean, (ss / (n * (n - 1.0))).sqrt())
}

/// E f(U) over `samples` Haar draws.
pub fn mc_average<F>(group: GroupSpec, samples: usize, seed: u64, f: F) -> Result<McEstimate>
where
    F: Fn(&EigenAngleSet) -> Complex64 + Sync,
{
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let v = mc_collect(group, samples, seed, f)?;
    let (mean, stderr) = mean_stderr(&v);
    Ok(McEstimate { mean, stderr, samples, seed })
}

/// mean(num)/(mean(a)·mean(b)) for real per-sample values, with a
/// delta-method standard error.
pub fn ratio_of_means(num: &[f64], a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = num.len() as f64;
    let m = |x: &[f64]| x.iter().sum::<f64>() / n;
    let (mn, ma, mb) = (m(num), m(a), m(b));
    let r = mn / (ma * mb);
    // Linearise r around the means: dr = r (dn/mn − da/ma − db/mb).
    let lin: Vec<f64> = (0..num.len()).map(|i| r * ((num[i] - mn) / mn - (a[i] - ma) / ma - (b[i] - mb) / mb)).collect();
    let var = lin.iter().map(|x| x * x).sum::<f64>() / (n - 1.0);
    (r, (var / n).sqrt())
}

/// det h(U) = Π_l h(e^{iθ_l}) for a polynomial h.
pub fn det_h_polynomial(set: &EigenAngleSet, coeffs: &[Complex64]) -> Complex64 {
    set.angles.iter().map(|a| crate::lindet::HFunction::eval_polynomial(coeffs, *a)).product()
}
