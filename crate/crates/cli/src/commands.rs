//! The five batch commands. Each returns its primary output (CSV or JSON)
//! and an optional summary; nothing is written until the run finishes.

use crate::config::*;
use fhcore::asymptotics::{
    claeys_log_envelope, decompose, dik_th_log_det, ehrhardt_log_det, log_residual, separated_ratio, uniform_log_det,
    uniform_th_det, AsymptoticBreakdown,
};
use fhcore::gmc::{cell_statistics, gmc_replicates, second_moment, uniform_cells, Shift};
use fhcore::lindet::{group_average, th_det, toeplitz_det, trace_moments, GroupSpec, HFunction, THKind};
use fhcore::painleve::{solve_sigma, PainleveParams, PainleveSolution, MAX_X};
use fhcore::rmt::{det_h_polynomial, field_weight, mc_average, mc_collect, mean_stderr, ratio_of_means, traces};
use fhcore::symbols::{
    fourier_coeffs, make_merging_symbol, make_sigma_symbol, sigma_hat_eval, FisherHartwigSymbol, SigmaParams,
};
use fhcore::{c64, Complex64};
use serde::Serialize;
use std::f64::consts::TAU;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] fhcore::Error),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(fhcore::Error::Painleve(_)) => 4,
            CliError::Core(_) | CliError::Output(_) => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub struct Output {
    pub primary: String,
    pub summary: Option<String>,
}

/// Flag overrides applied on top of the config file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

fn need<'a, T>(block: &'a Option<T>, name: &str) -> CliResult<&'a T> {
    block.as_ref().ok_or_else(|| CliError::Parse(format!("missing [{name}] block")))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

struct Table {
    w: csv::Writer<Vec<u8>>,
    hash: String,
}

impl Table {
    fn new(header: &[String], hash: &str) -> CliResult<Self> {
        let mut w = csv::Writer::from_writer(vec![]);
        let mut h: Vec<String> = header.to_vec();
        h.push("config_hash".into());
        w.write_record(&h)?;
        Ok(Table { w, hash: hash.into() })
    }

    fn row(&mut self, mut cells: Vec<String>) -> CliResult<()> {
        cells.push(self.hash.clone());
        self.w.write_record(&cells)?;
        Ok(())
    }

    fn finish(self) -> CliResult<String> {
        let bytes = self.w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn symbol_of(cfg: &RunConfig) -> CliResult<FisherHartwigSymbol> {
    match (&cfg.symbol, &cfg.merging) {
        (Some(s), None) => s.build().map_err(|e| CliError::Parse(format!("symbol: {e}"))),
        (None, Some(m)) => {
            let p = m.params(m.t);
            p.validate().map_err(|e| CliError::Parse(format!("merging: {e}")))?;
            Ok(make_merging_symbol(&p)?)
        }
        (Some(_), Some(_)) => Err(CliError::Parse("give either [symbol] or [merging], not both".into())),
        (None, None) => Err(CliError::Parse("missing [symbol] or [merging] block".into())),
    }
}

fn kinds(kappa: &[u8]) -> CliResult<Vec<THKind>> {
    if kappa.is_empty() {
        return Ok(THKind::all().to_vec());
    }
    kappa.iter().map(|k| THKind::new(*k).map_err(|e| CliError::Parse(e.to_string()))).collect()
}

pub fn cmd_det(cfg: &RunConfig, hash: &str) -> CliResult<Output> {
    let d = need(&cfg.det, "det")?;
    let sym = symbol_of(cfg)?;
    if !d.toeplitz && d.kappa.is_empty() {
        return Err(CliError::Parse("det needs toeplitz = true or a kappa list".into()));
    }
    let ks: Vec<THKind> = if d.kappa.is_empty() { vec![] } else { kinds(&d.kappa)? };
    let nmax = *d.n.last().unwrap();
    let jmax = ks.iter().map(|k| k.max_index(nmax)).max().unwrap_or(0).max(nmax);
    let w = fourier_coeffs(&sym, jmax, d.tol)?;
    let mut t = Table::new(&strings(&["n", "kappa", "value_re", "value_im", "cond_estimate"]), hash)?;
    for &n in &d.n {
        if d.toeplitz {
            let r = toeplitz_det(&w, n)?;
            t.row(vec![n.to_string(), "toeplitz".into(), num(r.value.re), num(r.value.im), num(r.condition)])?;
        }
        for k in &ks {
            let r = th_det(&w, n, *k)?;
            t.row(vec![n.to_string(), k.kappa.to_string(), num(r.value.re), num(r.value.im), num(r.condition)])?;
        }
    }
    Ok(Output { primary: t.finish()?, summary: None })
}

struct CompareRow {
    n: usize,
    t: Option<f64>,
    kappa: Option<u8>,
    exact: Complex64,
    predicted: Complex64,
    terms: Vec<(&'static str, Complex64)>,
}

fn painleve_for(m: &MergingSpec, t: f64, x: f64, tol: f64) -> CliResult<(PainleveSolution, fhcore::symbols::MergingParams)> {
    let p = m.params(t);
    p.validate().map_err(|e| CliError::Parse(format!("merging: {e}")))?;
    if x > MAX_X {
        return Err(fhcore::Error::Painleve(format!("x = {x} exceeds the tabulated range (0, {MAX_X}]")).into());
    }
    let pp = PainleveParams::new(p.alpha[1], p.alpha[2], p.beta1, p.beta2)?;
    Ok((solve_sigma(&pp, x.max(2.0), tol)?, p))
}

pub fn cmd_compare(cfg: &RunConfig, hash: &str) -> CliResult<Output> {
    let c = need(&cfg.compare, "compare")?;
    let nmax = *c.n.last().unwrap();
    let mut rows: Vec<CompareRow> = vec![];
    let row = |n, t, kappa, exact: Complex64, b: AsymptoticBreakdown| CompareRow {
        n,
        t,
        kappa,
        exact,
        predicted: b.total,
        terms: b.terms,
    };
    match c.formula {
        Formula::Ehrhardt => {
            let sym = symbol_of(cfg)?;
            let w = fourier_coeffs(&sym, nmax, c.tol)?;
            for &n in &c.n {
                rows.push(row(n, None, None, toeplitz_det(&w, n)?.log_value, ehrhardt_log_det(&sym, n)?));
            }
        }
        Formula::Dik | Formula::Claeys => {
            let sym = symbol_of(cfg)?;
            let ks = kinds(&c.kappa)?;
            let jmax = ks.iter().map(|k| k.max_index(nmax)).max().unwrap();
            let w = fourier_coeffs(&sym, jmax, c.tol)?;
            for k in &ks {
                for &n in &c.n {
                    let exact = th_det(&w, n, *k)?.log_value;
                    let b = if c.formula == Formula::Dik {
                        dik_th_log_det(&sym, n, *k)?
                    } else {
                        let env = claeys_log_envelope(&sym, n, *k)?;
                        AsymptoticBreakdown { total: c64(env, 0.0), terms: vec![] }
                    };
                    rows.push(row(n, None, Some(k.kappa), exact, b));
                }
            }
        }
        Formula::Uniform | Formula::UniformTh => {
            let m = need(&cfg.merging, "merging")?;
            let ts = if c.t.is_empty() { vec![m.t] } else { c.t.clone() };
            let th = c.formula == Formula::UniformTh;
            let scale = if th { 4.0 } else { 2.0 };
            let ks = if th { kinds(&c.kappa)? } else { vec![] };
            for &t in &ts {
                let (sol, p) = painleve_for(m, t, scale * nmax as f64 * t, c.painleve_tol)?;
                let sym = make_merging_symbol(&p)?;
                let jmax = ks.iter().map(|k| k.max_index(nmax)).max().unwrap_or(nmax).max(nmax);
                let w = fourier_coeffs(&sym, jmax, c.tol)?;
                for &n in &c.n {
                    if th {
                        for k in &ks {
                            let exact = th_det(&w, n, *k)?.log_value;
                            rows.push(row(n, Some(t), Some(k.kappa), exact, uniform_th_det(&p, n, *k, &sol)?));
                        }
                    } else {
                        rows.push(row(n, Some(t), None, toeplitz_det(&w, n)?.log_value, uniform_log_det(&p, n, &sol)?));
                    }
                }
            }
        }
    }
    let term_names: Vec<&str> = rows.first().map(|r| r.terms.iter().map(|(n, _)| *n).collect()).unwrap_or_default();
    let mut header = strings(&["n", "t", "kappa", "exact_re", "exact_im", "predicted_re", "predicted_im", "residual"]);
    for name in &term_names {
        header.push(format!("term_{name}_re"));
        header.push(format!("term_{name}_im"));
    }
    let mut table = Table::new(&header, hash)?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    for r in &rows {
        let mut cells = vec![
            r.n.to_string(),
            opt(r.t.map(num)),
            opt(r.kappa.map(|k| k.to_string())),
            num(r.exact.re),
            num(r.exact.im),
            num(r.predicted.re),
            num(r.predicted.im),
            num(log_residual(r.exact, r.predicted)),
        ];
        for (_, v) in &r.terms {
            cells.push(num(v.re));
            cells.push(num(v.im));
        }
        table.row(cells)?;
    }
    Ok(Output { primary: table.finish()?, summary: Some(trend_summary(&rows)) })
}

/// One verdict per (t, κ) series: strictly decreasing residuals in n or not.
fn trend_summary(rows: &[CompareRow]) -> String {
    let mut keys: Vec<(Option<u64>, Option<u8>)> = vec![];
    for r in rows {
        let k = (r.t.map(f64::to_bits), r.kappa);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    let mut out = String::new();
    for (t, kappa) in keys {
        let res: Vec<f64> = rows
            .iter()
            .filter(|r| r.t.map(f64::to_bits) == t && r.kappa == kappa)
            .map(|r| log_residual(r.exact, r.predicted))
            .collect();
        let decreasing = res.windows(2).all(|w| w[1] < w[0]);
        let label = match (t, kappa) {
            (Some(t), Some(k)) => format!("t={} kappa={k}", f64::from_bits(t)),
            (Some(t), None) => format!("t={}", f64::from_bits(t)),
            (None, Some(k)) => format!("kappa={k}"),
            (None, None) => "toeplitz".into(),
        };
        out.push_str(&format!(
            "residual trend {label}: {} (final {:e})\n",
            if decreasing { "decreasing" } else { "not decreasing" },
            res.last().copied().unwrap_or(0.0)
        ));
    }
    out
}

#[derive(Serialize)]
struct McReport {
    task: &'static str,
    mean_re: f64,
    mean_im: f64,
    stderr: f64,
    samples: usize,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_re: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_im: Option<f64>,
    config_hash: String,
}

fn group_of(m: &McConfig) -> CliResult<GroupSpec> {
    let family = m.family.ok_or_else(|| CliError::Parse("mc task needs family".into()))?;
    let dim = m.dim.ok_or_else(|| CliError::Parse("mc task needs dim".into()))?;
    GroupSpec::new(family.into(), dim).map_err(|e| CliError::Parse(e.to_string()))
}

fn distance(mean: Complex64, reference: Complex64, stderr: f64) -> f64 {
    let d = (mean - reference).norm();
    if d == 0.0 {
        0.0
    } else {
        d / stderr
    }
}

pub fn cmd_mc(cfg: &RunConfig, hash: &str, ov: Overrides) -> CliResult<Output> {
    let m = need(&cfg.mc, "mc")?;
    let samples = ov.samples.unwrap_or(m.samples);
    let seed = ov.seed.unwrap_or(m.seed);
    if samples < 2 {
        return Err(CliError::Parse("samples must be at least 2".into()));
    }
    let beta = c64(0.0, m.beta_im);
    let (task, mean, stderr, reference, asymptotic) = match m.task {
        McTask::GroupAverage => {
            let group = group_of(m)?;
            let (h, est) = if let Some(s) = &m.sigma {
                let sb = c64(0.0, s.beta_im);
                let sym = make_sigma_symbol(s.kind, s.theta, s.theta2, s.alpha, sb, s.k)?;
                let sp = SigmaParams { kind: s.kind, theta: s.theta, theta2: s.theta2, alpha: s.alpha, beta: sb, k: s.k };
                let vals = mc_collect(group, samples, seed, |u| -> fhcore::Result<Complex64> {
                    u.angles.iter().map(|a| sigma_hat_eval(&sp, *a)).product()
                })?
                .into_iter()
                .collect::<fhcore::Result<Vec<_>>>()?;
                (HFunction::Sigma(sym), mean_stderr(&vals))
            } else {
                let coeffs: Vec<Complex64> =
                    if m.h.is_empty() { vec![c64(1.0, 0.0)] } else { m.h.iter().map(|[a, b]| c64(*a, *b)).collect() };
                let e = mc_average(group, samples, seed, |u| det_h_polynomial(u, &coeffs))?;
                (HFunction::Polynomial(coeffs), (e.mean, e.stderr))
            };
            ("group_average", est.0, est.1, Some(group_average(&h, group, m.tol)?), None)
        }
        McTask::TraceMoments => {
            let group = group_of(m)?;
            let k = m.power;
            if k == 0 || !(1..=2).contains(&m.moment) {
                return Err(CliError::Parse("trace_moments needs power >= 1 and moment 1 or 2".into()));
            }
            let e = mc_average(group, samples, seed, |u| c64(traces(u, k)[k - 1].powi(m.moment as i32), 0.0))?;
            let (first, second) = trace_moments(group, k, m.tol)?;
            let reference = if m.moment == 1 { first } else { second };
            ("trace_moments", e.mean, e.stderr, Some(c64(reference, 0.0)), None)
        }
        McTask::TwoPointRatio => {
            let group = group_of(m)?;
            let (t1, t2) = match (m.theta, m.theta2) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(CliError::Parse("two_point_ratio needs theta and theta2".into())),
            };
            let vals = mc_collect(group, samples, seed, |u| {
                (field_weight(u, t1, m.alpha, beta).re, field_weight(u, t2, m.alpha, beta).re)
            })?;
            let a: Vec<f64> = vals.iter().map(|v| v.0).collect();
            let b: Vec<f64> = vals.iter().map(|v| v.1).collect();
            let ab: Vec<f64> = vals.iter().map(|v| v.0 * v.1).collect();
            let (r, se) = ratio_of_means(&ab, &a, &b);
            let h = |kind, th, th2| -> CliResult<Complex64> {
                let s = make_sigma_symbol(kind, th, th2, m.alpha, beta, 0)?;
                Ok(group_average(&HFunction::Sigma(s), group, m.tol)?)
            };
            let exact = h(3, t1, Some(t2))? / (h(5, t1, None)? * h(5, t2, None)?);
            let asym = decompose(t1, t2).ok().and_then(|_| separated_ratio(t1, t2, m.alpha, beta).ok());
            ("two_point_ratio", c64(r, 0.0), se, Some(exact), asym)
        }
        McTask::GmcMoments => {
            if !(1..=2).contains(&m.moment) {
                return Err(CliError::Parse("gmc_moments needs moment 1 or 2".into()));
            }
            let [a, b] = m.arc.unwrap_or([0.0, TAU]);
            let runs = gmc_replicates(m.k, m.alpha, beta, &[a, b], shift_of(m.shift), samples, seed)?;
            let vals: Vec<Complex64> = runs.iter().map(|r| c64(r.masses[0].powi(m.moment as i32), 0.0)).collect();
            let (mean, se) = mean_stderr(&vals);
            let reference = if m.moment == 1 { c64(b - a, 0.0) } else { second_moment(a, b, m.alpha, beta, m.k, 96) };
            ("gmc_moments", mean, se, Some(reference), None)
        }
    };
    let report = McReport {
        task,
        mean_re: mean.re,
        mean_im: mean.im,
        stderr,
        samples,
        seed,
        reference_re: reference.map(|r| r.re),
        reference_im: reference.map(|r| r.im),
        sigma_distance: reference.map(|r| distance(mean, r, stderr)),
        asymptotic_re: asymptotic.map(|z| z.re),
        asymptotic_im: asymptotic.map(|z| z.im),
        config_hash: hash.into(),
    };
    let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(Output { primary: s, summary: None })
}

fn shift_of(s: ShiftName) -> Shift {
    match s {
        ShiftName::Orthogonal => Shift::Orthogonal,
        ShiftName::Symplectic => Shift::Symplectic,
    }
}

pub fn cmd_painleve(cfg: &RunConfig, hash: &str) -> CliResult<Output> {
    let p = need(&cfg.painleve, "painleve")?;
    let params = PainleveParams::new(p.alpha1, p.alpha2, c64(0.0, p.beta1_im), c64(0.0, p.beta2_im))
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let sol = solve_sigma(&params, p.x_max, p.tol)?;
    let mut t = Table::new(&strings(&["x", "sigma", "sigma_s", "integral", "residual", "relation_defect"]), hash)?;
    let defect = |x: f64| -> CliResult<String> { Ok(num(sol.relation_defect(x)?.norm())) };
    if p.x.is_empty() {
        for i in 0..sol.grid.len() {
            let x = sol.grid[i];
            t.row(vec![num(x), num(sol.sigma[i]), num(sol.sigma_s[i]), num(sol.integral[i]), num(sol.residual[i]), defect(x)?])?;
        }
    } else {
        for &x in &p.x {
            t.row(vec![
                num(x),
                num(sol.sigma_at(x)?),
                num(sol.sigma_s_at(x)?),
                num(sol.integral_at(x)?),
                num(sol.residual_at(x)?),
                defect(x)?,
            ])?;
        }
    }
    let d = &sol.diagnostics;
    let summary = format!(
        "shooting constant {:e}; max residual {:e}; small-x error {:e}; slope error {:e}; path {}\n",
        d.shooting_constant, d.max_residual, d.small_x_error, d.slope_error, d.path
    );
    Ok(Output { primary: t.finish()?, summary: Some(summary) })
}

#[derive(Serialize)]
struct GmcSummary {
    k: usize,
    alpha: f64,
    beta_im: f64,
    replicates: usize,
    seed: u64,
    cell_lo: Vec<f64>,
    cell_hi: Vec<f64>,
    mean: Vec<f64>,
    variance: Vec<f64>,
    config_hash: String,
}

pub fn cmd_gmc(cfg: &RunConfig, hash: &str, ov: Overrides) -> CliResult<Output> {
    let g = need(&cfg.gmc, "gmc")?;
    let replicates = ov.samples.unwrap_or(g.replicates);
    let seed = ov.seed.unwrap_or(g.seed);
    if replicates < 2 {
        return Err(CliError::Parse("replicates must be at least 2".into()));
    }
    let cells = if g.boundaries.is_empty() { uniform_cells(g.cells.max(1)) } else { g.boundaries.clone() };
    let beta = c64(0.0, g.beta_im);
    let runs = gmc_replicates(g.k, g.alpha, beta, &cells, shift_of(g.shift), replicates, seed)?;
    let mut t = Table::new(&strings(&["replicate", "cell_index", "mass"]), hash)?;
    for (r, run) in runs.iter().enumerate() {
        for (c, m) in run.masses.iter().enumerate() {
            t.row(vec![r.to_string(), c.to_string(), num(*m)])?;
        }
    }
    let (mean, variance) = cell_statistics(&runs);
    let summary = GmcSummary {
        k: g.k,
        alpha: g.alpha,
        beta_im: g.beta_im,
        replicates,
        seed,
        cell_lo: cells[..cells.len() - 1].to_vec(),
        cell_hi: cells[1..].to_vec(),
        mean,
        variance,
        config_hash: hash.into(),
    };
    let mut s = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(Output { primary: t.finish()?, summary: Some(s) })
}
