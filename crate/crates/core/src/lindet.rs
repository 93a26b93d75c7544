//! Exact finite-n determinants: Toeplitz, the four Toeplitz+Hankel
//! variants, Baik–Rains group averages and orthogonal polynomials on the
//! unit circle.

use crate::symbols::{fourier_coeffs, CoefficientWindow, SigmaSymbol};
use crate::{c64, Complex64, Error, Result};
use nalgebra::DMatrix;
use std::f64::consts::{PI, TAU};

/// Relative error estimate above which a determinant carries a warning.
pub const CONDITION_WARN: f64 = 1e-6;

/// One of the four Toeplitz+Hankel structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct THKind {
    pub kappa: u8,
}

impl THKind {
    pub fn new(kappa: u8) -> Result<Self> {
        if (1..=4).contains(&kappa) {
            Ok(THKind { kappa })
        } else {
            Err(Error::Domain(format!("T+H kind must be 1..4, got {kappa}")))
        }
    }

    pub fn all() -> [THKind; 4] {
        [1, 2, 3, 4].map(|kappa| THKind { kappa })
    }

    pub fn q(&self, n: usize) -> i64 {
        let n = n as i64;
        match self.kappa {
            1 => -2 * n + 2,
            2 => 0,
            _ => -n,
        }
    }

    pub fn s_prime(&self) -> f64 {
        match self.kappa {
            1 | 4 => -0.5,
            _ => 0.5,
        }
    }

    pub fn t_prime(&self) -> f64 {
        match self.kappa {
            1 | 3 => -0.5,
            _ => 0.5,
        }
    }

    /// (sign, shift) so that the Hankel part is sign·f_{j+k+shift}.
    fn hankel(&self) -> (f64, i64) {
        match self.kappa {
            1 => (1.0, 0),
            2 => (-1.0, 2),
            3 => (-1.0, 1),
            _ => (1.0, 1),
        }
    }

    /// Largest Fourier index needed at size n.
    pub fn max_index(&self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            2 * (n - 1) + self.hankel().1 as usize
        }
    }
}

/// A determinant with its conditioning diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct DetResult {
    pub value: Complex64,
    /// Principal-branch log of the value; −∞ real part for a zero value.
    pub log_value: Complex64,
    /// ‖A‖₁‖A⁻¹‖₁ (infinite for a singular matrix).
    pub condition: f64,
    /// condition × n × machine epsilon, plus the coefficient error
    /// propagated through the matrix.
    pub rel_error: f64,
    pub warning: Option<String>,
}

impl DetResult {
    fn trivial() -> Self {
        DetResult {
            value: c64(1.0, 0.0),
            log_value: c64(0.0, 0.0),
            condition: 1.0,
            rel_error: 0.0,
            warning: None,
        }
    }
}

pub fn toeplitz_matrix(w: &CoefficientWindow, n: usize) -> Result<DMatrix<Complex64>> {
    if n > 0 {
        w.require(n - 1)?;
    }
    Ok(DMatrix::from_fn(n, n, |j, k| w.get(j as i64 - k as i64).unwrap()))
}

pub fn th_matrix(w: &CoefficientWindow, n: usize, kind: THKind) -> Result<DMatrix<Complex64>> {
    w.require(kind.max_index(n))?;
    let (sign, shift) = kind.hankel();
    Ok(DMatrix::from_fn(n, n, |j, k| {
        let (j, k) = (j as i64, k as i64);
        w.get(j - k).unwrap() + sign * w.get(j + k + shift).unwrap()
    }))
}

/// Determinant by partially pivoted LU with a 1-norm condition estimate.
pub fn det_with_diagnostics(a: DMatrix<Complex64>, coeff_accuracy: f64) -> DetResult {
    let n = a.nrows();
    if n == 0 {
        return DetResult::trivial();
    }
    let norm1 = one_norm(&a);
    let lu = a.lu();
    let u = lu.u();
    let mut log = c64(0.0, 0.0);
    let mut zero = false;
    for i in 0..n {
        let d = u[(i, i)];
        if d == c64(0.0, 0.0) {
            zero = true;
            break;
        }
        log += d.ln();
    }
    if lu.p().determinant::<f64>() < 0.0 {
        log += c64(0.0, PI);
    }
    if zero {
        return DetResult {
            value: c64(0.0, 0.0),
            log_value: c64(f64::NEG_INFINITY, 0.0),
            condition: f64::INFINITY,
            rel_error: f64::INFINITY,
            warning: Some("matrix is singular".into()),
        };
    }
    let log_value = crate::specfun::principal_im(log);
    let condition = lu.try_inverse().map(|inv| norm1 * one_norm(&inv)).unwrap_or(f64::INFINITY);
    let inv_norm = condition / norm1.max(f64::MIN_POSITIVE);
    let rel_error = condition * n as f64 * f64::EPSILON + n as f64 * coeff_accuracy * inv_norm;
    let warning = (rel_error > CONDITION_WARN)
        .then(|| format!("estimated relative error {rel_error:.2e} (condition {condition:.2e})"));
    DetResult { value: log_value.exp(), log_value, condition, rel_error, warning }
}

fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// D_n(f) = det(f_{j−k})_{j,k=0}^{n−1}; D_0 = 1.
pub fn toeplitz_det(w: &CoefficientWindow, n: usize) -> Result<DetResult> {
    Ok(det_with_diagnostics(toeplitz_matrix(w, n)?, w.accuracy))
}

/// D_n^{T+H,κ}(f); the empty determinant is 1.
pub fn th_det(w: &CoefficientWindow, n: usize, kind: THKind) -> Result<DetResult> {
    Ok(det_with_diagnostics(th_matrix(w, n, kind)?, w.accuracy))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    SoEven,
    OminusEven,
    SoOdd,
    OminusOdd,
    OFull,
    Sp,
}

/// A classical group by family and matrix dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub family: Family,
    pub dim: usize,
}

impl GroupSpec {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        let even = dim % 2 == 0;
        let ok = match family {
            Family::SoEven | Family::Sp => even,
            Family::OminusEven => even && dim >= 2,
            Family::SoOdd | Family::OminusOdd => !even,
            Family::OFull => dim >= 1,
        };
        if ok {
            Ok(GroupSpec { family, dim })
        } else {
            Err(Error::Domain(format!("dimension {dim} is invalid for {family:?}")))
        }
    }

    /// Largest Fourier index of ι needed.
    pub fn max_index(&self) -> usize {
        self.dim + 2
    }
}

/// The function h whose determinant is averaged, with ι(z) = h(z)h(1/z).
#[derive(Clone, Debug, PartialEq)]
pub enum HFunction {
    /// h(z) = Σ_k a_k z^k.
    Polynomial(Vec<Complex64>),
    /// h = σ̂ for a σ-symbol.
    Sigma(SigmaSymbol),
}

impl HFunction {
    pub fn one() -> Self {
        HFunction::Polynomial(vec![c64(1.0, 0.0)])
    }

    pub fn at_plus_one(&self) -> Complex64 {
        match self {
            HFunction::Polynomial(a) => a.iter().sum(),
            HFunction::Sigma(s) => s.hat_plus,
        }
    }

    pub fn at_minus_one(&self) -> Complex64 {
        match self {
            HFunction::Polynomial(a) => a.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -*c }).sum(),
            HFunction::Sigma(s) => s.hat_minus,
        }
    }

    /// Fourier coefficients of ι up to |j| ≤ jmax.
    pub fn iota_coeffs(&self, jmax: usize, tol: f64) -> Result<CoefficientWindow> {
        match self {
            HFunction::Polynomial(a) => Ok(CoefficientWindow::from_fn(jmax, |j| {
                let mut s = c64(0.0, 0.0);
                for l in 0..a.len() as i64 {
                    let m = l + j;
                    if m >= 0 && (m as usize) < a.len() {
                        s += a[m as usize] * a[l as usize];
                    }
                }
                s
            })),
            HFunction::Sigma(s) => fourier_coeffs(&s.symbol, jmax, tol),
        }
    }

    /// h(e^{iθ}) for polynomial h.
    pub fn eval_polynomial(a: &[Complex64], theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        a.iter().rev().fold(c64(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// E_{U∈G} det h(U) by the Baik–Rains identities.
pub fn group_average(h: &HFunction, group: GroupSpec, tol: f64) -> Result<Complex64> {
    let w = h.iota_coeffs(group.max_index(), tol)?;
    group_average_with(h, group, &w)
}

/// As [`group_average`] with precomputed ι coefficients.
pub fn group_average_with(h: &HFunction, group: GroupSpec, w: &CoefficientWindow) -> Result<Complex64> {
    let d = |n: usize, kappa: u8| -> Result<Complex64> { Ok(th_det(w, n, THKind { kappa })?.value) };
    let m = group.dim / 2;
    Ok(match group.family {
        Family::SoEven => 0.5 * d(m, 1)?,
        Family::OminusEven => h.at_plus_one() * h.at_minus_one() * d(m - 1, 2)?,
        Family::SoOdd => h.at_plus_one() * d(m, 3)?,
        Family::OminusOdd => h.at_minus_one() * d(m, 4)?,
        Family::Sp => d(m, 2)?,
        Family::OFull => {
            let (plus, minus) = if group.dim % 2 == 0 {
                (Family::SoEven, Family::OminusEven)
            } else {
                (Family::SoOdd, Family::OminusOdd)
            };
            let a = group_average_with(h, GroupSpec { family: plus, dim: group.dim }, w)?;
            let b = group_average_with(h, GroupSpec { family: minus, dim: group.dim }, w)?;
            0.5 * (a + b)
        }
    })
}

/// E e_m(U^k) for m = 0..=dim, read off det(I + εU^k) = Σ_m ε^m e_m(U^k)
/// averaged at dim + 1 roots of unity, which recovers the degree-dim
/// polynomial in ε exactly.
pub fn elementary_moments(group: GroupSpec, k: usize, tol: f64) -> Result<Vec<Complex64>> {
    if k == 0 {
        return Err(Error::Domain("power k must be at least 1".into()));
    }
    let m = group.dim + 1;
    let mut vals = Vec::with_capacity(m);
    for l in 0..m {
        let mut h = vec![c64(0.0, 0.0); k + 1];
        h[0] = c64(1.0, 0.0);
        h[k] += Complex64::from_polar(1.0, TAU * l as f64 / m as f64);
        vals.push(group_average(&HFunction::Polynomial(h), group, tol)?);
    }
    Ok((0..m)
        .map(|j| {
            vals.iter()
                .enumerate()
                .map(|(l, v)| v * Complex64::from_polar(1.0, -TAU * ((l * j) % m) as f64 / m as f64))
                .sum::<Complex64>()
                / m as f64
        })
        .collect())
}

/// Exact E Tr U^k and E (Tr U^k)² = 2E e_2(U^k) + E Tr U^{2k}.
pub fn trace_moments(group: GroupSpec, k: usize, tol: f64) -> Result<(f64, f64)> {
    let e = elementary_moments(group, k, tol)?;
    let e2k = elementary_moments(group, 2 * k, tol)?;
    let at = |v: &[Complex64], i: usize| v.get(i).map_or(0.0, |z| z.re);
    Ok((at(&e, 1), 2.0 * at(&e, 2) + at(&e2k, 1)))
}

/// Orthogonal polynomial data for the weight f.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoPolyData {
    pub n: usize,
    /// χ_n = sqrt(D_n / D_{n+1}).
    pub chi: f64,
    /// Coefficients of the monic Φ_n, constant term first.
    pub monic_coeffs: Vec<Complex64>,
    /// φ_n = χ_n Φ_n at 0, +1, −1.
    pub phi_at_zero: Complex64,
    pub phi_at_one: Complex64,
    pub phi_at_minus_one: Complex64,
}

impl OrthoPolyData {
    /// Φ_n(z).
    pub fn monic_eval(&self, z: Complex64) -> Complex64 {
        self.monic_coeffs.iter().rev().fold(c64(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// φ_n(z) = χ_n Φ_n(z).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.chi * self.monic_eval(z)
    }
}

/// Monic Φ_n from the orthogonality conditions Σ_{m<n} c_m f_{k−m} = −f_{k−n},
/// k = 0..n−1.
pub fn orthopoly(w: &CoefficientWindow, n: usize) -> Result<OrthoPolyData> {
    w.require(n)?;
    let mut monic = vec![c64(0.0, 0.0); n + 1];
    monic[n] = c64(1.0, 0.0);
    if n > 0 {
        let a = DMatrix::from_fn(n, n, |k, m| w.get(k as i64 - m as i64).unwrap());
        let b = nalgebra::DVector::from_fn(n, |k, _| -w.get(k as i64 - n as i64).unwrap());
        let sol = a
            .lu()
            .solve(&b)
            .ok_or_else(|| Error::Numeric(format!("degenerate moment matrix at n={n}")))?;
        monic[..n].copy_from_slice(sol.as_slice());
    }
    let dn = toeplitz_det(w, n)?;
    let dn1 = toeplitz_det(w, n + 1)?;
    let ratio = (dn.log_value - dn1.log_value).exp();
    if !(ratio.re > 0.0) || ratio.im.abs() > 1e-8 * ratio.re {
        return Err(Error::Numeric(format!("D_n/D_(n+1) = {ratio} is not positive")));
    }
    let chi = ratio.re.sqrt();
    let mut data = OrthoPolyData {
        n,
        chi,
        monic_coeffs: monic,
        phi_at_zero: c64(0.0, 0.0),
        phi_at_one: c64(0.0, 0.0),
        phi_at_minus_one: c64(0.0, 0.0),
    };
    data.phi_at_zero = data.eval(c64(0.0, 0.0));
    data.phi_at_one = data.eval(c64(1.0, 0.0));
    data.phi_at_minus_one = data.eval(c64(-1.0, 0.0));
    Ok(data)
}
