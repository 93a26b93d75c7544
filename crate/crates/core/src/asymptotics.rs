//! Closed-form large-n expansions of Toeplitz and Toeplitz+Hankel
//! determinants with Fisher–Hartwig singularities, and the two-point ratio
//! formulas they imply for characteristic polynomials of O(n) and Sp(2n).
//!
//! Every expansion is assembled in log space as a list of named terms. The
//! uncontrolled remainder appears as an explicit zero term `o1`.

use crate::lindet::THKind;
use crate::painleve::{PainleveParams, PainleveSolution};
use crate::specfun::{log_barnes_g, principal_im};
use crate::symbols::{ln_chord, FisherHartwigSymbol, MergingParams, ANGLE_EPS};
use crate::{c64, Complex64, Error, Result, I};
use std::f64::consts::{LN_2, PI, TAU};

/// A predicted log-determinant split into named additive terms.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticBreakdown {
    pub total: Complex64,
    pub terms: Vec<(&'static str, Complex64)>,
}

impl AsymptoticBreakdown {
    fn from_terms(mut terms: Vec<(&'static str, Complex64)>) -> Self {
        terms.push(("o1", c64(0.0, 0.0)));
        let total = terms.iter().map(|t| t.1).sum();
        AsymptoticBreakdown { total, terms }
    }

    pub fn term(&self, name: &str) -> Option<Complex64> {
        self.terms.iter().find(|t| t.0 == name).map(|t| t.1)
    }

    /// The prediction itself, e^{total}.
    pub fn value(&self) -> Complex64 {
        self.total.exp()
    }
}

/// |exact − predicted| between two logs, with the imaginary part taken
/// modulo 2π.
pub fn log_residual(exact_log: Complex64, predicted_log: Complex64) -> f64 {
    principal_im(exact_log - predicted_log).norm()
}

fn re(x: f64) -> Complex64 {
    c64(x, 0.0)
}

fn g_ratio(a: f64, b: Complex64) -> Result<Complex64> {
    Ok(log_barnes_g(re(1.0 + a) + b)? + log_barnes_g(re(1.0 + a) - b)? - log_barnes_g(re(1.0 + 2.0 * a))?)
}

/// (Σ_{k≥1} V_k z^k, Σ_{k≥1} V_{−k} z^{−k}) at z = e^{iθ}.
fn v_halves(sym: &FisherHartwigSymbol, theta: f64) -> (Complex64, Complex64) {
    let (p, m, _) = sym.wiener_hopf_eval(Complex64::from_polar(1.0, theta));
    (p, m)
}

fn sum_k_vk_vmk(sym: &FisherHartwigSymbol) -> f64 {
    (1..=sym.v_degree() as i64).map(|k| k as f64 * sym.v(k) * sym.v(-k)).sum()
}

/// Expansion of ln D_n for a general Fisher–Hartwig symbol.
pub fn ehrhardt_log_det(sym: &FisherHartwigSymbol, n: usize) -> Result<AsymptoticBreakdown> {
    let s = sym.singularities();
    for a in s {
        for b in s {
            if (a.beta.re - b.beta.re).abs() >= 1.0 {
                return Err(Error::Hypothesis("Re β spread must be below 1".into()));
            }
        }
        for b in [a.beta, -a.beta] {
            let z = re(a.alpha) + b;
            if z.im == 0.0 && z.re <= -1.0 && z.re.fract() == 0.0 {
                return Err(Error::Hypothesis(format!("α ± β = {} is a negative integer", z.re)));
            }
        }
    }
    let nf = n as f64;
    let mut ln_n = c64(0.0, 0.0);
    let mut b_pm = c64(0.0, 0.0);
    let mut barnes = c64(0.0, 0.0);
    for a in s {
        ln_n += (re(a.alpha * a.alpha) - a.beta * a.beta) * nf.ln();
        let (vp, vm) = v_halves(sym, a.theta);
        b_pm -= (re(a.alpha) - a.beta) * vp + (re(a.alpha) + a.beta) * vm;
        barnes += g_ratio(a.alpha, a.beta)?;
    }
    let mut pairs = c64(0.0, 0.0);
    for (j, a) in s.iter().enumerate() {
        for b in &s[j + 1..] {
            pairs += 2.0 * (a.beta * b.beta - a.alpha * b.alpha) * ln_chord(a.theta, b.theta)
                + (a.alpha * b.beta - b.alpha * a.beta) * I * (b.theta - a.theta - PI);
        }
    }
    Ok(AsymptoticBreakdown::from_terms(vec![
        ("nV0", re(nf * sym.v(0))),
        ("sum_kVkV-k", re(sum_k_vk_vmk(sym))),
        ("ln_n", ln_n),
        ("b_pm", b_pm),
        ("pairs", pairs),
        ("barnes", barnes),
    ]))
}

/// A symbol in the reflection-symmetric form: α_0 at 1, α_{r+1} at −1 and
/// pairs (θ_j, α_j, β_j), (2π − θ_j, α_j, −β_j) with 0 < θ_j < π.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenForm {
    pub alpha0: f64,
    pub alpha_last: f64,
    pub points: Vec<(f64, f64, Complex64)>,
}

pub fn even_form(sym: &FisherHartwigSymbol) -> Result<EvenForm> {
    if !sym.is_v_symmetric() {
        return Err(Error::Hypothesis("V must satisfy V_k = V_{−k}".into()));
    }
    let mut out = EvenForm { alpha0: 0.0, alpha_last: 0.0, points: vec![] };
    let s = sym.singularities();
    for a in s {
        if a.beta.re != 0.0 {
            return Err(Error::Hypothesis("β_j must be purely imaginary".into()));
        }
        if a.theta < ANGLE_EPS || (a.theta - PI).abs() < ANGLE_EPS {
            if a.beta != c64(0.0, 0.0) {
                return Err(Error::Hypothesis("β must vanish at ±1".into()));
            }
            if a.theta < ANGLE_EPS {
                out.alpha0 = a.alpha;
            } else {
                out.alpha_last = a.alpha;
            }
        } else if a.theta < PI {
            let mirror = s.iter().find(|b| (b.theta - (TAU - a.theta)).abs() < 1e-12);
            match mirror {
                Some(b) if b.alpha == a.alpha && b.beta == -a.beta => out.points.push((a.theta, a.alpha, a.beta)),
                _ => {
                    return Err(Error::Hypothesis(format!(
                        "singularity at θ={} lacks a mirror with equal α and opposite β",
                        a.theta
                    )))
                }
            }
        } else if !s.iter().any(|b| (b.theta - (TAU - a.theta)).abs() < 1e-12) {
            return Err(Error::Hypothesis(format!("singularity at θ={} lacks a mirror", a.theta)));
        }
    }
    Ok(out)
}

/// Terms shared by the DIK and uniform T+H displays for the listed
/// upper-half-circle points.
struct ThCommon {
    n: usize,
    s1: f64,
    t1: f64,
    q: i64,
    a0: f64,
    a_last: f64,
}

impl ThCommon {
    fn new(n: usize, kind: THKind, a0: f64, a_last: f64) -> Self {
        ThCommon { n, s1: kind.s_prime(), t1: kind.t_prime(), q: kind.q(n), a0, a_last }
    }

    fn a_sum(&self) -> f64 {
        self.a0 + self.a_last + self.s1 + self.t1
    }

    fn terms(&self, sym: &FisherHartwigSymbol, pts: &[(f64, f64, Complex64)]) -> Result<Vec<(&'static str, Complex64)>> {
        let nf = self.n as f64;
        let a = self.a_sum();
        let v0 = sym.v(0);
        let v_pos = sym.v_at(re(1.0)).re;
        let v_neg = sym.v_at(re(-1.0)).re;
        let v_block = 0.5
            * (a * v0 - (self.a0 + self.s1) * v_pos - (self.a_last + self.t1) * v_neg
                + (1..=sym.v_degree() as i64).map(|k| k as f64 * sym.v(k).powi(2)).sum::<f64>());
        let mut b_pm = c64(0.0, 0.0);
        let mut sq = c64(0.0, 0.0);
        let mut alpha_sum = 0.0;
        for &(th, al, be) in pts {
            let (vp, vm) = v_halves(sym, th);
            b_pm += (be - al) * vp - (be + al) * vm;
            sq += re(al * al) - be * be;
            alpha_sum += al;
        }
        let pow2 = re((1.0 - self.s1 - self.t1) * nf + self.q as f64 - 0.5 * a * a + 0.5 * a) + sq;
        let pow_n = re(0.5 * (self.a0.powi(2) + self.a_last.powi(2)) + self.a0 * self.s1 + self.a_last * self.t1) + sq;
        let a_tilde = 0.5 * a + alpha_sum;
        let mut edges = c64(0.0, 0.0);
        for &(th, al, be) in pts {
            edges += 2.0 * a_tilde * be * I * th
                - (re(al * al) + be * be) * ln_chord(2.0 * th, 0.0)
                - 2.0 * al * (self.a0 + self.s1) * ln_chord(th, 0.0)
                - 2.0 * al * (self.a_last + self.t1) * ln_chord(th, PI);
        }
        let g_half = re(0.5 * (a + 1.0) * PI.ln()) + 2.0 * log_barnes_g(re(0.5))?
            - log_barnes_g(re(1.0 + self.a0 + self.s1))?
            - log_barnes_g(re(1.0 + self.a_last + self.t1))?;
        Ok(vec![
            ("nV0", re(nf * v0)),
            ("v_block", re(v_block)),
            ("b_pm", b_pm),
            ("pow2", pow2 * LN_2),
            ("pow_n", pow_n * nf.ln()),
            ("edges", edges),
            ("g_half", g_half),
        ])
    }
}

/// Expansion of ln D_n^{T+H,κ} for a symbol in the reflection-symmetric
/// form with fixed, separated singularities.
pub fn dik_th_log_det(sym: &FisherHartwigSymbol, n: usize, kind: THKind) -> Result<AsymptoticBreakdown> {
    let ef = even_form(sym)?;
    let common = ThCommon::new(n, kind, ef.alpha0, ef.alpha_last);
    let mut terms = common.terms(sym, &ef.points)?;
    let pts = &ef.points;
    let alpha_sum: f64 = pts.iter().map(|p| p.1).sum();
    let beta_sum: Complex64 = pts.iter().map(|p| p.2).sum();
    let mut cross = c64(0.0, 0.0);
    let mut pairs = c64(0.0, 0.0);
    for (j, &(tj, aj, bj)) in pts.iter().enumerate() {
        for &(tk, ak, bk) in &pts[j + 1..] {
            cross += aj * bk - ak * bj;
            pairs += -2.0 * (re(aj * ak) - bj * bk) * ln_chord(tj, tk) - 2.0 * (re(aj * ak) + bj * bk) * ln_chord(tj, -tk);
        }
    }
    let phase = -I * PI * ((ef.alpha0 + common.s1 + alpha_sum) * beta_sum + cross);
    let mut barnes = c64(0.0, 0.0);
    for &(_, a, b) in pts {
        barnes += g_ratio(a, b)?;
    }
    terms.extend([("phase", phase), ("pairs", pairs), ("barnes", barnes)]);
    Ok(AsymptoticBreakdown::from_terms(terms))
}

fn painleve_params(params: &MergingParams) -> Result<PainleveParams> {
    PainleveParams::new(params.alpha[1], params.alpha[2], params.beta1, params.beta2)
}

fn check_solution(params: &MergingParams, sol: &PainleveSolution, x: f64) -> Result<()> {
    let want = painleve_params(params)?;
    if sol.params != want {
        return Err(Error::Domain("Painlevé solution was computed for different parameters".into()));
    }
    if x > sol.x_max() * (1.0 + 1e-12) {
        return Err(Error::Painleve(format!("x = {x} lies beyond the solved range (0, {}]", sol.x_max())));
    }
    Ok(())
}

/// Expansion of ln D_n(f_{p,t}) uniform in the merging parameter t.
pub fn uniform_log_det(params: &MergingParams, n: usize, sol: &PainleveSolution) -> Result<AsymptoticBreakdown> {
    params.validate()?;
    let nf = n as f64;
    let t = params.t;
    let x = 2.0 * nf * t;
    check_solution(params, sol, x)?;
    let sym = FisherHartwigSymbol::symmetric(&params.v, vec![])?;
    let pts = params.points();
    let (a1, a2, b1, b2) = (params.alpha[1], params.alpha[2], params.beta1, params.beta2);
    let mut ln_n = c64(0.0, 0.0);
    let mut b_pm = c64(0.0, 0.0);
    for &(th, a, b) in &pts {
        ln_n += (re(a * a) - b * b) * nf.ln();
        let (vp, vm) = v_halves(&sym, th);
        b_pm -= (re(a) - b) * vp + (re(a) + b) * vm;
    }
    let mut pairs = c64(0.0, 0.0);
    for j in 0..6 {
        for k in j + 1..6 {
            if (j, k) == (1, 2) || (j, k) == (4, 5) {
                continue;
            }
            let ((tj, aj, bj), (tk, ak, bk)) = (pts[j], pts[k]);
            pairs += 2.0 * (bj * bk - aj * ak) * ln_chord(tj, tk) + (aj * bk - ak * bj) * I * (tk - tj - PI);
        }
    }
    let s = a1 + a2;
    let bs = b1 + b2;
    let (a0, a3) = (params.alpha[0], params.alpha[3]);
    let edge_g = |a: f64| -> Result<Complex64> { Ok(2.0 * log_barnes_g(re(1.0 + a))? - log_barnes_g(re(1.0 + 2.0 * a))?) };
    Ok(AsymptoticBreakdown::from_terms(vec![
        ("drift", 2.0 * I * nf * t * (b1 - b2)),
        ("nV0", re(nf * sym.v(0))),
        ("sum_kVk2", re(sum_k_vk_vmk(&sym))),
        ("ln_n", ln_n),
        ("b_pm", b_pm),
        ("pairs", pairs),
        ("merge_phase", 4.0 * I * t * (a1 * b2 - a2 * b1)),
        ("painleve", re(2.0 * sol.integral_at(x)?)),
        ("log_sin", 4.0 * (b1 * b2 - a1 * a2) * (t.sin() / (nf * t)).ln()),
        ("barnes_edges", edge_g(a0)? + edge_g(a3)?),
        ("barnes_merged", 2.0 * g_ratio(s, bs)?),
    ]))
}

/// Expansion of ln D_n^{T+H,κ}(f_{p,t}) uniform in the merging parameter t.
pub fn uniform_th_det(params: &MergingParams, n: usize, kind: THKind, sol: &PainleveSolution) -> Result<AsymptoticBreakdown> {
    params.validate()?;
    let nf = n as f64;
    let (p, t) = (params.p, params.t);
    let x = 4.0 * nf * t;
    check_solution(params, sol, x)?;
    let sym = FisherHartwigSymbol::symmetric(&params.v, vec![])?;
    let (a0, a1, a2, a3) = (params.alpha[0], params.alpha[1], params.alpha[2], params.alpha[3]);
    let (b1, b2) = (params.beta1, params.beta2);
    let pts = [(p - t, a1, b1), (p + t, a2, b2)];
    let common = ThCommon::new(n, kind, a0, a3);
    let mut terms = vec![("drift", 2.0 * I * nf * t * (b1 - b2))];
    terms.extend(common.terms(&sym, &pts)?);
    let m12 = re(a1 * a2) - b1 * b2;
    let p12 = re(a1 * a2) + b1 * b2;
    terms.extend([
        ("phase", -I * PI * (a0 + common.s1 + a1 + a2) * (b1 + b2)),
        ("sin_t", -2.0 * m12 * (t.sin() / (2.0 * nf * t)).abs().ln()),
        ("sin_p", -2.0 * p12 * (2.0 * p.sin()).abs().ln()),
        ("painleve", re(sol.integral_at(x)?)),
        ("barnes_merged", g_ratio(a1 + a2, b1 + b2)?),
    ]);
    Ok(AsymptoticBreakdown::from_terms(terms))
}

/// ln of the explicit envelope of D_n^{T+H,κ} that holds up to a bounded,
/// non-vanishing factor uniformly in the singularity positions.
pub fn claeys_log_envelope(sym: &FisherHartwigSymbol, n: usize, kind: THKind) -> Result<f64> {
    let ef = even_form(sym)?;
    if ef.alpha0 != 0.0 || ef.alpha_last != 0.0 {
        return Err(Error::Hypothesis("the envelope needs α_0 = α_{r+1} = 0".into()));
    }
    if ef.points.iter().any(|p| p.1 < 0.0) {
        return Err(Error::Hypothesis("the envelope needs α_j ≥ 0".into()));
    }
    let nf = n as f64;
    let h = 1.0 / nf;
    let pts = &ef.points;
    // β_j purely imaginary, so β_j² and β_jβ_k are real.
    let bb = |a: Complex64, b: Complex64| (a * b).re;
    let mut ln_f = 0.0;
    for (j, &(tj, aj, bj)) in pts.iter().enumerate() {
        for &(tk, ak, bk) in &pts[j + 1..] {
            ln_f += -2.0 * (aj * ak - bb(bj, bk)) * ((0.5 * (tj - tk)).abs().sin() + h).ln()
                - 2.0 * (aj * ak + bb(bj, bk)) * ((0.5 * (tj + tk)).abs().sin() + h).ln();
        }
    }
    let mut total = ln_f + nf * sym.v(0);
    for &(th, a, b) in pts {
        let b2 = bb(b, b);
        total += (a * a - b2) * nf.ln();
        let (plus, minus) = (a - a * a - b2, -a - a * a - b2);
        total += match kind.kappa {
            1 => plus * (th.sin() + h).ln(),
            2 => minus * (th.sin() + h).ln(),
            3 => minus * ((0.5 * th).sin() + h).ln() + plus * ((0.5 * th).cos() + h).ln(),
            _ => plus * ((0.5 * th).sin() + h).ln() + minus * ((0.5 * th).cos() + h).ln(),
        };
    }
    Ok(total)
}

/// The envelope itself.
pub fn claeys_envelope(sym: &FisherHartwigSymbol, n: usize, kind: THKind) -> Result<f64> {
    Ok(claeys_log_envelope(sym, n, kind)?.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupCase {
    Sp,
    OOdd,
    OEven,
}

/// Which of f^{(k)}(θ)f^{(k)}(θ'), f^{(k)}(θ)f(θ'), f(θ)f(θ') is averaged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumeratorKind {
    KK,
    KFull,
    FullFull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Separated,
    Merging,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioCase {
    pub group: GroupCase,
    pub numerator: NumeratorKind,
    pub regime: Regime,
}

/// Region J_1..J_8 of a pair (θ, θ') together with the upper-half-circle
/// points z_1, z_2 (by argument), the signs of β_1, β_2 relative to β and
/// the merging coordinates (p, t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    pub region: u8,
    pub arg_z1: f64,
    pub arg_z2: f64,
    pub sign1: f64,
    pub sign2: f64,
    pub p: f64,
    pub t: f64,
}

/// min(|θ − θ'|, |θ + θ' − 2π|)
pub fn pair_separation(theta: f64, theta2: f64) -> f64 {
    (theta - theta2).abs().min((theta + theta2 - TAU).abs())
}

pub fn decompose(theta: f64, theta2: f64) -> Result<Decomposition> {
    let upper = |x: f64| x > 0.0 && x < PI;
    let lower = |x: f64| x > PI && x < TAU;
    let (a, b) = (theta, theta2);
    let (region, z1, z2, s1, s2) = if upper(a) && upper(b) && a < b {
        (1, a, b, 1.0, 1.0)
    } else if upper(a) && upper(b) && b < a {
        (2, b, a, 1.0, 1.0)
    } else if upper(a) && lower(b) && a < TAU - b {
        (3, a, TAU - b, 1.0, -1.0)
    } else if lower(a) && upper(b) && b < TAU - a {
        (4, b, TAU - a, 1.0, -1.0)
    } else if lower(a) && lower(b) && TAU - a < TAU - b {
        (5, TAU - a, TAU - b, -1.0, -1.0)
    } else if lower(a) && lower(b) && TAU - b < TAU - a {
        (6, TAU - b, TAU - a, -1.0, -1.0)
    } else if lower(a) && upper(b) && TAU - a < b {
        (7, TAU - a, b, -1.0, 1.0)
    } else if upper(a) && lower(b) && TAU - b < a {
        (8, TAU - b, a, -1.0, 1.0)
    } else {
        return Err(Error::Domain(format!("(θ, θ') = ({a}, {b}) lies on a diagonal or at ±1")));
    };
    Ok(Decomposition { region, arg_z1: z1, arg_z2: z2, sign1: s1, sign2: s2, p: 0.5 * (z1 + z2), t: 0.5 * (z2 - z1) })
}

/// exp(Σ_{j≤k} (4/j) Re((α−β)e^{ijθ}) Re((α−β)e^{ijθ'})).
pub fn smooth_ratio(theta: f64, theta2: f64, alpha: f64, beta: Complex64, k: usize) -> f64 {
    let ab = re(alpha) - beta;
    let s: f64 = (1..=k)
        .map(|j| {
            let jf = j as f64;
            4.0 / jf * (ab * Complex64::from_polar(1.0, jf * theta)).re * (ab * Complex64::from_polar(1.0, jf * theta2)).re
        })
        .sum();
    s.exp()
}

/// |e^{iθ}−e^{iθ'}|^{−2(α²−β²)} |e^{iθ}−e^{−iθ'}|^{−2(α²+β²)} z_1^{2αβ_1} z_2^{2αβ_2} e^{−2πiαβ_2}.
pub fn separated_ratio(theta: f64, theta2: f64, alpha: f64, beta: Complex64) -> Result<Complex64> {
    let d = decompose(theta, theta2)?;
    let (b1, b2) = (d.sign1 * beta, d.sign2 * beta);
    let b2sq = beta * beta;
    let ln = -2.0 * (re(alpha * alpha) - b2sq) * ln_chord(theta, theta2)
        - 2.0 * (re(alpha * alpha) + b2sq) * ln_chord(theta, -theta2)
        + 2.0 * alpha * I * (b1 * d.arg_z1 + b2 * d.arg_z2)
        - 2.0 * PI * I * alpha * b2;
    Ok(ln.exp())
}

/// The merging-regime two-point ratio at (p, t) = ψ_j(θ, θ').
pub fn merging_ratio(theta: f64, theta2: f64, alpha: f64, beta: Complex64, n: usize, sol: &PainleveSolution) -> Result<Complex64> {
    let d = decompose(theta, theta2)?;
    let (b1, b2) = (d.sign1 * beta, d.sign2 * beta);
    let want = merging_painleve_params(&d, alpha, beta)?;
    if sol.params != want {
        return Err(Error::Domain("Painlevé solution was computed for different parameters".into()));
    }
    let (p, t, nf) = (d.p, d.t, n as f64);
    let x = 4.0 * nf * t;
    if x > sol.x_max() * (1.0 + 1e-12) {
        return Err(Error::Painleve(format!("x = {x} lies beyond the solved range (0, {}]", sol.x_max())));
    }
    let a2 = re(alpha * alpha);
    let ln = -2.0 * (a2 - b1 * b2) * (t.sin() / (2.0 * nf * t)).abs().ln()
        - 2.0 * (a2 + b1 * b2) * (2.0 * p.sin()).abs().ln()
        + sol.integral_at(x)?
        + 2.0 * I * alpha * (b1 * (p - t) + b2 * (p + t))
        - 2.0 * I * PI * alpha * b2
        + PI * I * alpha * (b2 - b1)
        + 2.0 * I * nf * t * (b1 - b2)
        + g_ratio(2.0 * alpha, b1 + b2)?
        - g_ratio(alpha, b1)?
        - g_ratio(alpha, b2)?;
    Ok(ln.exp())
}

/// σ-PV parameters (α, α, β_1, β_2) required for a merging pair.
pub fn merging_painleve_params(d: &Decomposition, alpha: f64, beta: Complex64) -> Result<PainleveParams> {
    PainleveParams::new(alpha, alpha, d.sign1 * beta, d.sign2 * beta)
}

/// Predicted E(numerator)/(E(first factor)E(second factor)).
#[allow(clippy::too_many_arguments)]
pub fn ratio_asymptotic(
    case: &RatioCase,
    theta: f64,
    theta2: f64,
    alpha: f64,
    beta: Complex64,
    n: usize,
    k: usize,
    sol: Option<&PainleveSolution>,
) -> Result<Complex64> {
    if beta.re != 0.0 {
        return Err(Error::Domain("β must be purely imaginary".into()));
    }
    match case.numerator {
        NumeratorKind::KK | NumeratorKind::KFull => {
            if k == 0 {
                return Err(Error::Domain("truncation level k must be positive".into()));
            }
            if case.numerator == NumeratorKind::KFull && case.regime == Regime::Merging {
                return Err(Error::Hypothesis("f^{(k)}(θ)f(θ') has no merging regime".into()));
            }
            Ok(re(smooth_ratio(theta, theta2, alpha, beta, k)))
        }
        NumeratorKind::FullFull => {
            let sep = pair_separation(theta, theta2);
            let threshold = (n as f64).ln() / n as f64;
            match case.regime {
                Regime::Separated if sep > threshold => separated_ratio(theta, theta2, alpha, beta),
                Regime::Merging => match sol {
                    Some(s) => merging_ratio(theta, theta2, alpha, beta, n, s),
                    None => Err(Error::Hypothesis("the merging regime needs a Painlevé solution".into())),
                },
                _ => Err(Error::Hypothesis(format!(
                    "separation {sep:.3e} does not exceed ln(n)/n = {threshold:.3e} required by the separated regime"
                ))),
            }
        }
    }
}
