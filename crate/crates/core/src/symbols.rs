//! Fisher–Hartwig symbols: construction, pointwise evaluation, Fourier
//! coefficients, the merging symbol f_{p,t} and the σ-symbols used by the
//! Baik–Rains averages.

use crate::quad::{gauss_legendre, graded_panels, mapped};
use crate::specfun::log_gamma;
use crate::{c64, Complex64, Error, Result, I};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Angles closer than this are treated as equal.
pub const ANGLE_EPS: f64 = 1e-13;

/// Reduce an angle to [0, 2π).
pub fn wrap_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU - ANGLE_EPS {
        0.0
    } else {
        r
    }
}

/// Im ln(1 − e^{iψ}) on the principal branch, with the value π/2 at ψ ≡ 0.
pub fn im_ln_one_minus_exp(psi: f64) -> f64 {
    let r = psi.rem_euclid(TAU);
    if r < ANGLE_EPS || r > TAU - ANGLE_EPS {
        PI / 2.0
    } else {
        0.5 * (r - PI)
    }
}

/// ln|e^{ia} − e^{ib}|
pub fn ln_chord(a: f64, b: f64) -> f64 {
    (2.0 * (0.5 * (a - b)).sin().abs()).ln()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Singularity {
    pub theta: f64,
    pub alpha: f64,
    pub beta: Complex64,
}

impl Singularity {
    pub fn new(theta: f64, alpha: f64, beta: Complex64) -> Self {
        Singularity { theta: wrap_angle(theta), alpha, beta }
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha == 0.0 && self.beta == c64(0.0, 0.0)
    }
}

/// e^{V} z^{Σβ_j} ∏ |z − z_j|^{2α_j} g_{z_j,β_j}(z) z_j^{−β_j} with a
/// finite Laurent polynomial V.
#[derive(Clone, Debug, PartialEq)]
pub struct FisherHartwigSymbol {
    v0: f64,
    v_plus: Vec<f64>,
    v_minus: Vec<f64>,
    sing: Vec<Singularity>,
}

impl FisherHartwigSymbol {
    /// General constructor; `v_coeffs` lists (k, V_k) pairs and need not be
    /// symmetric.
    pub fn new(v_coeffs: &[(i64, f64)], singularities: Vec<Singularity>) -> Result<Self> {
        let kmax = v_coeffs.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut v0 = 0.0;
        let mut v_plus = vec![0.0; kmax];
        let mut v_minus = vec![0.0; kmax];
        for &(k, v) in v_coeffs {
            if !v.is_finite() {
                return Err(Error::Domain(format!("V_{k} is not finite")));
            }
            match k.cmp(&0) {
                std::cmp::Ordering::Equal => v0 += v,
                std::cmp::Ordering::Greater => v_plus[k as usize - 1] += v,
                std::cmp::Ordering::Less => v_minus[(-k) as usize - 1] += v,
            }
        }
        let mut sing: Vec<Singularity> = singularities
            .into_iter()
            .map(|s| Singularity::new(s.theta, s.alpha, s.beta))
            .collect();
        for s in &sing {
            if !(s.alpha > -0.5) || !s.theta.is_finite() || !s.beta.re.is_finite() || !s.beta.im.is_finite() {
                return Err(Error::Domain(format!(
                    "singularity at θ={} needs α > −1/2 (got {})",
                    s.theta, s.alpha
                )));
            }
        }
        sing.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        for w in sing.windows(2) {
            if (w[1].theta - w[0].theta).abs() < ANGLE_EPS {
                return Err(Error::Domain(format!("duplicate singularity angle {}", w[0].theta)));
            }
        }
        Ok(FisherHartwigSymbol { v0, v_plus, v_minus, sing })
    }

    /// Symmetric V given as V_0, V_1, ..., V_K (V_{−k} = V_k).
    pub fn symmetric(v: &[f64], singularities: Vec<Singularity>) -> Result<Self> {
        let mut pairs = Vec::with_capacity(2 * v.len());
        for (k, &vk) in v.iter().enumerate() {
            pairs.push((k as i64, vk));
            if k > 0 {
                pairs.push((-(k as i64), vk));
            }
        }
        Self::new(&pairs, singularities)
    }

    /// The constant symbol 1.
    pub fn identity() -> Self {
        FisherHartwigSymbol { v0: 0.0, v_plus: vec![], v_minus: vec![], sing: vec![] }
    }

    /// Merge singularities sharing an angle by adding exponents.
    pub fn merged(v: &[f64], singularities: Vec<Singularity>) -> Result<Self> {
        let mut out: Vec<Singularity> = Vec::new();
        for s in singularities.into_iter().map(|s| Singularity::new(s.theta, s.alpha, s.beta)) {
            match out.iter_mut().find(|o| (o.theta - s.theta).abs() < ANGLE_EPS) {
                Some(o) => {
                    o.alpha += s.alpha;
                    o.beta += s.beta;
                }
                None => out.push(s),
            }
        }
        Self::symmetric(v, out)
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.sing
    }

    /// V_k for any integer k.
    pub fn v(&self, k: i64) -> f64 {
        match k.cmp(&0) {
            std::cmp::Ordering::Equal => self.v0,
            std::cmp::Ordering::Greater => self.v_plus.get(k as usize - 1).copied().unwrap_or(0.0),
            std::cmp::Ordering::Less => self.v_minus.get((-k) as usize - 1).copied().unwrap_or(0.0),
        }
    }

    /// Largest |k| with a stored V_k.
    pub fn v_degree(&self) -> usize {
        self.v_plus.len().max(self.v_minus.len())
    }

    pub fn is_v_symmetric(&self) -> bool {
        (1..=self.v_degree() as i64).all(|k| self.v(k) == self.v(-k))
    }

    /// Σ_k V_k z^k on the unit circle.
    pub fn v_at(&self, z: Complex64) -> Complex64 {
        let (bp, bm, v0) = self.wiener_hopf_eval(z);
        bp + bm + v0
    }

    /// (Σ_{k≥1} V_k z^k, Σ_{k≤−1} V_k z^k, V_0).
    pub fn wiener_hopf_eval(&self, z: Complex64) -> (Complex64, Complex64, f64) {
        let zi = z.inv();
        let mut bp = c64(0.0, 0.0);
        let mut bm = c64(0.0, 0.0);
        let mut zp = z;
        let mut zm = zi;
        for k in 0..self.v_degree() {
            bp += zp * self.v_plus.get(k).copied().unwrap_or(0.0);
            bm += zm * self.v_minus.get(k).copied().unwrap_or(0.0);
            zp *= z;
            zm *= zi;
        }
        (bp, bm, self.v0)
    }

    /// ln f(e^{iφ}); the real part is −∞ at a zero of the symbol.
    pub fn eval_log(&self, phi: f64) -> Result<Complex64> {
        let phi = wrap_angle(phi);
        let mut acc = self.v_at(Complex64::from_polar(1.0, phi));
        for s in &self.sing {
            let jump = if phi < s.theta { PI } else { -PI };
            acc += I * s.beta * (phi - s.theta + jump);
            if s.alpha != 0.0 {
                let d = (phi - s.theta).abs();
                if d < ANGLE_EPS || TAU - d < ANGLE_EPS {
                    if s.alpha < 0.0 {
                        return Err(Error::Singular(phi));
                    }
                    acc.re = f64::NEG_INFINITY;
                } else {
                    acc.re += 2.0 * s.alpha * ln_chord(phi, s.theta);
                }
            }
        }
        Ok(acc)
    }

    /// f(e^{iφ}).
    pub fn eval(&self, phi: f64) -> Result<Complex64> {
        let l = self.eval_log(phi)?;
        if l.re == f64::NEG_INFINITY {
            return Ok(c64(0.0, 0.0));
        }
        Ok(l.exp())
    }
}

/// eval_symbol operation.
pub fn eval_symbol(sym: &FisherHartwigSymbol, theta: f64) -> Result<Complex64> {
    sym.eval(theta)
}

/// Fourier coefficients f_j for |j| ≤ jmax.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientWindow {
    jmax: usize,
    coeffs: Vec<Complex64>,
    /// Estimated max absolute coefficient error.
    pub accuracy: f64,
    /// Number of sampling points used for the accepted values.
    pub resolution: usize,
}

impl CoefficientWindow {
    pub fn from_vec(jmax: usize, coeffs: Vec<Complex64>, accuracy: f64) -> Self {
        assert_eq!(coeffs.len(), 2 * jmax + 1);
        CoefficientWindow { jmax, coeffs, accuracy, resolution: 0 }
    }

    /// Window built from a closure f(j).
    pub fn from_fn(jmax: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let coeffs = (-(jmax as i64)..=jmax as i64).map(f).collect();
        CoefficientWindow { jmax, coeffs, accuracy: 0.0, resolution: 0 }
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn get(&self, j: i64) -> Option<Complex64> {
        if j.unsigned_abs() as usize > self.jmax {
            None
        } else {
            Some(self.coeffs[(j + self.jmax as i64) as usize])
        }
    }

    /// f_j, or a window error.
    pub fn coeff(&self, j: i64) -> Result<Complex64> {
        self.get(j).ok_or(Error::Window { need: j.abs(), have: self.jmax as i64 })
    }

    pub fn require(&self, need: usize) -> Result<()> {
        if need > self.jmax {
            Err(Error::Window { need: need as i64, have: self.jmax as i64 })
        } else {
            Ok(())
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let j0 = -(self.jmax as i64);
        self.coeffs.iter().enumerate().map(move |(i, c)| (j0 + i as i64, *c))
    }
}

/// Maximum number of refinement rounds in [`fourier_coeffs`].
const MAX_REFINE: usize = 8;
/// Geometric grading depth toward each singularity; the innermost piece
/// has relative width 2^{−GRADING_LEVELS} and is integrated analytically.
const GRADING_LEVELS: usize = 46;

/// Fourier coefficients f_j, |j| ≤ jmax, by composite Gauss–Legendre
/// quadrature split at every singularity and graded geometrically toward
/// each one. Panels are refined until two successive passes agree to `tol`.
pub fn fourier_coeffs(sym: &FisherHartwigSymbol, jmax: usize, tol: f64) -> Result<CoefficientWindow> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let rule = gauss_legendre(16);
    let freq = (jmax + sym.v_degree() + 1) as f64;
    let mut panel_max = (3.0 / freq).min(0.25);
    let mut prev = coeffs_by_quadrature(sym, jmax, panel_max, &rule)?;
    for _ in 0..MAX_REFINE {
        panel_max *= 0.5;
        let cur = coeffs_by_quadrature(sym, jmax, panel_max, &rule)?;
        let delta = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if delta < tol {
            let resolution = (TAU / panel_max).ceil() as usize;
            return Ok(CoefficientWindow { jmax, coeffs: cur, accuracy: delta, resolution });
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "Fourier coefficients did not reach tol={tol:e} after {MAX_REFINE} refinements"
    )))
}

impl FisherHartwigSymbol {
    /// ln f at θ_k + u, using the offset u directly for the k-th factor so
    /// that points very close to the singularity keep full accuracy. With
    /// `drop_root` the factor |2 sin(u/2)|^{2α_k} is omitted.
    fn eval_log_near(&self, k: usize, u: f64, drop_root: bool) -> Complex64 {
        let sk = self.sing[k];
        let x = wrap_angle(sk.theta + u);
        let mut acc = self.v_at(Complex64::from_polar(1.0, x));
        for (l, s) in self.sing.iter().enumerate() {
            if l == k {
                let jump = if u > 0.0 { -PI } else { PI };
                acc += I * s.beta * (u + jump);
                if !drop_root && s.alpha != 0.0 {
                    acc.re += 2.0 * s.alpha * (2.0 * (0.5 * u).sin().abs()).ln();
                }
            } else {
                let jump = if x < s.theta { PI } else { -PI };
                acc += I * s.beta * (x - s.theta + jump);
                if s.alpha != 0.0 {
                    acc.re += 2.0 * s.alpha * ln_chord(x, s.theta);
                }
            }
        }
        acc
    }
}

/// Weighted samples (x, w·f(x)) of a quadrature for (1/2π)∫ f.
fn quadrature_samples(
    sym: &FisherHartwigSymbol,
    panel_max: f64,
    rule: &(Vec<f64>, Vec<f64>),
) -> Result<Vec<(f64, Complex64)>> {
    let mut out = Vec::new();
    let uniform = |a: f64, b: f64, out: &mut Vec<(f64, f64)>| {
        let m = ((b - a) / panel_max).ceil().max(1.0) as usize;
        for i in 0..m {
            let lo = a + (b - a) * i as f64 / m as f64;
            let hi = a + (b - a) * (i + 1) as f64 / m as f64;
            out.extend(mapped(rule, lo, hi));
        }
    };
    let idx: Vec<usize> = (0..sym.sing.len()).filter(|&k| !sym.sing[k].is_trivial()).collect();
    if idx.is_empty() {
        let mut nodes = vec![];
        uniform(0.0, TAU, &mut nodes);
        for (x, w) in nodes {
            out.push((x, sym.eval(x)? * (w / TAU)));
        }
        return Ok(out);
    }
    for (pos, &k) in idx.iter().enumerate() {
        let next = idx[(pos + 1) % idx.len()];
        let th0 = sym.sing[k].theta;
        let mut th1 = sym.sing[next].theta;
        if th1 <= th0 {
            th1 += TAU;
        }
        let half = 0.5 * (th1 - th0);
        // Right of θ_k (u > 0) and left of θ_next (u < 0).
        for (kk, sign) in [(k, 1.0), (next, -1.0)] {
            let alpha = sym.sing[kk].alpha;
            let anchor = if sign > 0.0 { th0 } else { th1 };
            let panels = graded_panels(half, 0.5, GRADING_LEVELS);
            let (inner_lo, inner_hi) = *panels.last().unwrap();
            debug_assert_eq!(inner_lo, 0.0);
            for &(a, b) in &panels[..panels.len() - 1] {
                let mut nodes = vec![];
                uniform(a, b, &mut nodes);
                for (u, w) in nodes {
                    let v = sym.eval_log_near(kk, sign * u, false).exp();
                    out.push((anchor + sign * u, v * (w / TAU)));
                }
            }
            // ∫_0^δ |2 sin(u/2)|^{2α} g(u) du ≈ g(0±) δ^{1+2α}/(1+2α).
            let delta = inner_hi;
            let g = sym.eval_log_near(kk, sign * 0.5 * delta, true).exp();
            out.push((anchor, g * (delta.powf(1.0 + 2.0 * alpha) / (1.0 + 2.0 * alpha) / TAU)));
        }
    }
    Ok(out)
}

fn coeffs_by_quadrature(
    sym: &FisherHartwigSymbol,
    jmax: usize,
    panel_max: f64,
    rule: &(Vec<f64>, Vec<f64>),
) -> Result<Vec<Complex64>> {
    let samples = quadrature_samples(sym, panel_max, rule)?;
    let mut out = vec![c64(0.0, 0.0); 2 * jmax + 1];
    for (x, v) in samples {
        let step = Complex64::from_polar(1.0, -x);
        let mut e = v * Complex64::from_polar(1.0, jmax as f64 * x);
        for c in out.iter_mut() {
            *c += e;
            e *= step;
        }
    }
    Ok(out)
}

/// Coefficient j of the single factor |z − e^{iθ}|^{2α} with jump β at θ
/// (in Fisher–Hartwig normal form), from the Gamma-ratio closed form.
pub fn fh_factor_coeff(alpha: f64, beta: Complex64, theta: f64, j: i64) -> Result<Complex64> {
    let num = log_gamma(c64(1.0 + 2.0 * alpha, 0.0))?;
    let a = c64(1.0 + alpha, 0.0) + beta - j as f64;
    let b = c64(1.0 + alpha, 0.0) - beta + j as f64;
    let is_pole = |z: Complex64| z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round();
    if is_pole(a) || is_pole(b) {
        return Ok(c64(0.0, 0.0));
    }
    let l = num - log_gamma(a)? - log_gamma(b)?;
    let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * l.exp() * Complex64::from_polar(1.0, -(j as f64) * theta))
}

/// Independent coefficient oracle: exact per-factor coefficients (each
/// truncated at |j| ≤ `inner`) composed by truncated convolution, times
/// the coefficients of e^{V} when V is present.
pub fn fourier_coeffs_by_convolution(
    sym: &FisherHartwigSymbol,
    jmax: usize,
    inner: usize,
) -> Result<CoefficientWindow> {
    let width = inner as i64;
    let mut acc: Vec<Complex64> = vec![c64(0.0, 0.0); 2 * inner + 1];
    acc[inner] = c64(1.0, 0.0);
    let conv = |acc: &Vec<Complex64>, f: &Vec<Complex64>| -> Vec<Complex64> {
        let mut out = vec![c64(0.0, 0.0); 2 * inner + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let ji = i as i64 - width;
            for (k, b) in f.iter().enumerate() {
                let j = ji + k as i64 - width;
                if j.abs() <= width {
                    out[(j + width) as usize] += a * b;
                }
            }
        }
        out
    };
    for s in sym.singularities().iter().filter(|s| !s.is_trivial()) {
        let f: Vec<Complex64> = (-width..=width)
            .map(|j| fh_factor_coeff(s.alpha, s.beta, s.theta, j))
            .collect::<Result<_>>()?;
        acc = conv(&acc, &f);
    }
    if sym.v_degree() > 0 || sym.v(0) != 0.0 {
        let smooth = FisherHartwigSymbol::new(
            &(-(sym.v_degree() as i64)..=sym.v_degree() as i64).map(|k| (k, sym.v(k))).collect::<Vec<_>>(),
            vec![],
        )?;
        let w = fourier_coeffs(&smooth, inner, 1e-14)?;
        let f: Vec<Complex64> = (-width..=width).map(|j| w.get(j).unwrap()).collect();
        acc = conv(&acc, &f);
    }
    let off = inner as i64;
    Ok(CoefficientWindow::from_fn(jmax, |j| {
        if j.abs() <= off {
            acc[(j + off) as usize]
        } else {
            c64(0.0, 0.0)
        }
    }))
}

/// Parameters of the merging symbol f_{p,t}.
#[derive(Clone, Debug, PartialEq)]
pub struct MergingParams {
    pub p: f64,
    pub t: f64,
    /// α_0, α_1, α_2, α_3
    pub alpha: [f64; 4],
    pub beta1: Complex64,
    pub beta2: Complex64,
    /// V_0, V_1, ..., V_K with V_{−k} = V_k.
    pub v: Vec<f64>,
}

impl MergingParams {
    pub fn new(p: f64, t: f64, alpha: [f64; 4], beta1: Complex64, beta2: Complex64) -> Self {
        MergingParams { p, t, alpha, beta1, beta2, v: vec![] }
    }

    pub fn validate(&self) -> Result<()> {
        let dom = |m: String| Err(Error::Domain(m));
        if !(self.t > 0.0) || !(self.p - self.t > 0.0) || !(self.p + self.t < PI) {
            return dom(format!("need 0 < p−t and p+t < π with t > 0 (p={}, t={})", self.p, self.t));
        }
        if self.alpha.iter().any(|a| !(*a > -0.5)) {
            return dom("all α_j must exceed −1/2".into());
        }
        if self.beta1.re != 0.0 || self.beta2.re != 0.0 {
            return dom("β_1, β_2 must be purely imaginary".into());
        }
        Ok(())
    }

    /// (θ_j, α_j, β_j) for j = 0..5 in the labelling z_0 = 1, z_1 = e^{i(p−t)},
    /// z_2 = e^{i(p+t)}, z_3 = −1, z_4 = conj z_2, z_5 = conj z_1.
    pub fn points(&self) -> [(f64, f64, Complex64); 6] {
        let (p, t) = (self.p, self.t);
        let [a0, a1, a2, a3] = self.alpha;
        let z = c64(0.0, 0.0);
        [
            (0.0, a0, z),
            (p - t, a1, self.beta1),
            (p + t, a2, self.beta2),
            (PI, a3, z),
            (TAU - p - t, a2, -self.beta2),
            (TAU - p + t, a1, -self.beta1),
        ]
    }
}

/// The six-singularity symbol f_{p,t}.
pub fn make_merging_symbol(params: &MergingParams) -> Result<FisherHartwigSymbol> {
    params.validate()?;
    let sing = params.points().iter().map(|&(th, a, b)| Singularity::new(th, a, b)).collect();
    FisherHartwigSymbol::symmetric(&params.v, sing)
}

/// A σ-symbol together with σ̂(1) and σ̂(−1).
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSymbol {
    pub kind: u8,
    pub symbol: FisherHartwigSymbol,
    pub hat_plus: Complex64,
    pub hat_minus: Complex64,
}

/// Parameters shared by the σ-symbol family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaParams {
    pub kind: u8,
    pub theta: f64,
    pub theta2: Option<f64>,
    pub alpha: f64,
    pub beta: Complex64,
    pub k: usize,
}

/// Re((α−β)e^{ijθ})
pub fn re_ab(alpha: f64, beta: Complex64, j: usize, theta: f64) -> f64 {
    ((c64(alpha, 0.0) - beta) * Complex64::from_polar(1.0, j as f64 * theta)).re
}

fn smooth_series(alpha: f64, beta: Complex64, k: usize, thetas: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; k + 1];
    for (j, vj) in v.iter_mut().enumerate().skip(1) {
        let c: f64 = thetas.iter().map(|&th| re_ab(alpha, beta, j, th)).sum();
        *vj = -2.0 / j as f64 * c;
    }
    v
}

fn hat_smooth(alpha: f64, beta: Complex64, k: usize, thetas: &[f64], sign: f64) -> Complex64 {
    let mut s = 0.0;
    for j in 1..=k {
        let c: f64 = thetas.iter().map(|&th| re_ab(alpha, beta, j, th)).sum();
        s += sign.powi(j as i32) / j as f64 * c;
    }
    c64((-2.0 * s).exp(), 0.0)
}

fn zero_power(base: f64, expo: f64) -> Result<f64> {
    if base > 0.0 {
        Ok(base.powf(expo))
    } else if expo > 0.0 {
        Ok(0.0)
    } else if expo == 0.0 {
        Ok(1.0)
    } else {
        Err(Error::Domain("σ̂ evaluated at its own singularity with α < 0".into()))
    }
}

/// σ̂_{5,ψ}(±1) closed forms.
fn hat_five(alpha: f64, beta: Complex64, psi: f64, sign: f64) -> Result<Complex64> {
    let psi = wrap_angle(psi);
    let phase = (I * beta * (PI - psi)).exp();
    if sign > 0.0 {
        let m = zero_power((1.0 - Complex64::from_polar(1.0, psi)).norm(), 2.0 * alpha)?;
        Ok(phase * m)
    } else {
        let beta1 = if psi < PI { beta } else { -beta };
        let m = zero_power((1.0 + Complex64::from_polar(1.0, psi)).norm(), 2.0 * alpha)?;
        Ok(phase * (-I * PI * beta1).exp() * m)
    }
}

fn singular_pair(alpha: f64, beta: Complex64, psi: f64) -> Vec<Singularity> {
    let psi = wrap_angle(psi);
    vec![Singularity::new(psi, alpha, beta), Singularity::new(TAU - psi, alpha, -beta)]
}

/// Build σ_{kind} in Fisher–Hartwig form with σ̂(±1).
pub fn make_sigma_symbol(
    kind: u8,
    theta: f64,
    theta2: Option<f64>,
    alpha: f64,
    beta: Complex64,
    k: usize,
) -> Result<SigmaSymbol> {
    let need2 = || theta2.ok_or_else(|| Error::Domain(format!("σ_{kind} needs a second angle")));
    let on_pm1 = |psi: f64| {
        let w = wrap_angle(psi);
        w < ANGLE_EPS || (w - PI).abs() < ANGLE_EPS
    };
    let check_pm1 = |psi: f64| -> Result<()> {
        if on_pm1(psi) && alpha < 0.0 {
            Err(Error::Domain(format!("σ_{kind} singularity on ±1 with α = {alpha} < 0")))
        } else {
            Ok(())
        }
    };
    let (v, sing, hp, hm) = match kind {
        1 => {
            let t2 = need2()?;
            let th = [theta, t2];
            (
                smooth_series(alpha, beta, k, &th),
                vec![],
                hat_smooth(alpha, beta, k, &th, 1.0),
                hat_smooth(alpha, beta, k, &th, -1.0),
            )
        }
        2 => {
            let t2 = need2()?;
            check_pm1(t2)?;
            (
                smooth_series(alpha, beta, k, &[theta]),
                singular_pair(alpha, beta, t2),
                hat_smooth(alpha, beta, k, &[theta], 1.0) * hat_five(alpha, beta, t2, 1.0)?,
                hat_smooth(alpha, beta, k, &[theta], -1.0) * hat_five(alpha, beta, t2, -1.0)?,
            )
        }
        3 => {
            let t2 = need2()?;
            check_pm1(theta)?;
            check_pm1(t2)?;
            let mut s = singular_pair(alpha, beta, theta);
            s.extend(singular_pair(alpha, beta, t2));
            (
                vec![],
                s,
                hat_five(alpha, beta, theta, 1.0)? * hat_five(alpha, beta, t2, 1.0)?,
                hat_five(alpha, beta, theta, -1.0)? * hat_five(alpha, beta, t2, -1.0)?,
            )
        }
        4 => (
            smooth_series(alpha, beta, k, &[theta]),
            vec![],
            hat_smooth(alpha, beta, k, &[theta], 1.0),
            hat_smooth(alpha, beta, k, &[theta], -1.0),
        ),
        5 => {
            check_pm1(theta)?;
            (
                vec![],
                singular_pair(alpha, beta, theta),
                hat_five(alpha, beta, theta, 1.0)?,
                hat_five(alpha, beta, theta, -1.0)?,
            )
        }
        _ => return Err(Error::Domain(format!("σ-symbol kind must be 1..5, got {kind}"))),
    };
    let symbol = FisherHartwigSymbol::merged(&v, sing)?;
    Ok(SigmaSymbol { kind, symbol, hat_plus: hp, hat_minus: hm })
}

/// Direct product-form evaluation of σ̂_{kind}(e^{iφ}).
pub fn sigma_hat_eval(p: &SigmaParams, phi: f64) -> Result<Complex64> {
    let smooth = |thetas: &[f64]| -> Complex64 {
        let mut s = c64(0.0, 0.0);
        for j in 1..=p.k {
            let c: f64 = thetas.iter().map(|&th| re_ab(p.alpha, p.beta, j, th)).sum();
            s += -2.0 / j as f64 * c * Complex64::from_polar(1.0, j as f64 * phi);
        }
        s.exp()
    };
    let root = |th: f64| -> Result<Complex64> {
        let m = zero_power((Complex64::from_polar(1.0, phi) - Complex64::from_polar(1.0, th)).norm(), 2.0 * p.alpha)?;
        Ok(m * (2.0 * I * p.beta * im_ln_one_minus_exp(phi - th)).exp())
    };
    let t2 = || p.theta2.ok_or_else(|| Error::Domain("second angle required".into()));
    match p.kind {
        1 => Ok(smooth(&[p.theta, t2()?])),
        2 => Ok(smooth(&[p.theta]) * root(t2()?)?),
        3 => Ok(root(p.theta)? * root(t2()?)?),
        4 => Ok(smooth(&[p.theta])),
        5 => root(p.theta),
        k => Err(Error::Domain(format!("σ-symbol kind must be 1..5, got {k}"))),
    }
}

/// Symbol description as read from a config file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    #[serde(default)]
    pub v_coeffs: Vec<(i64, f64)>,
    #[serde(default)]
    pub singularities: Vec<SingularitySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularitySpec {
    pub theta: f64,
    pub alpha: f64,
    #[serde(default)]
    pub beta_im: f64,
}

impl SymbolSpec {
    pub fn build(&self) -> Result<FisherHartwigSymbol> {
        FisherHartwigSymbol::new(
            &self.v_coeffs,
            self.singularities
                .iter()
                .map(|s| Singularity::new(s.theta, s.alpha, c64(0.0, s.beta_im)))
                .collect(),
        )
    }
}
