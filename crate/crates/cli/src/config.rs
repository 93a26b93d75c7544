//! Run configuration files (TOML), one per run.

use fhcore::lindet::Family;
use fhcore::symbols::{MergingParams, SymbolSpec};
use fhcore::c64;
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub symbol: Option<SymbolSpec>,
    pub merging: Option<MergingSpec>,
    pub det: Option<DetConfig>,
    pub compare: Option<CompareConfig>,
    pub mc: Option<McConfig>,
    pub painleve: Option<PainleveConfig>,
    pub gmc: Option<GmcConfig>,
}

/// The six-singularity merging symbol; β values by imaginary part.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergingSpec {
    pub p: f64,
    pub t: f64,
    pub alpha: [f64; 4],
    #[serde(default)]
    pub beta1_im: f64,
    #[serde(default)]
    pub beta2_im: f64,
    /// V_0, V_1, ..., V_K with V_{−k} = V_k.
    #[serde(default)]
    pub v: Vec<f64>,
}

impl MergingSpec {
    pub fn params(&self, t: f64) -> MergingParams {
        let mut m = MergingParams::new(self.p, t, self.alpha, c64(0.0, self.beta1_im), c64(0.0, self.beta2_im));
        m.v = self.v.clone();
        m
    }
}

fn default_tol() -> f64 {
    1e-13
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetConfig {
    pub n: Vec<usize>,
    #[serde(default)]
    pub kappa: Vec<u8>,
    #[serde(default)]
    pub toeplitz: bool,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Ehrhardt,
    Dik,
    Uniform,
    UniformTh,
    Claeys,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub formula: Formula,
    pub n: Vec<usize>,
    #[serde(default)]
    pub kappa: Vec<u8>,
    /// Merging distances; defaults to the single t of the merging block.
    #[serde(default)]
    pub t: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_painleve_tol")]
    pub painleve_tol: f64,
}

fn default_painleve_tol() -> f64 {
    fhcore::painleve::DEFAULT_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    SoEven,
    OminusEven,
    SoOdd,
    OminusOdd,
    O,
    Sp,
}

impl From<FamilyName> for Family {
    fn from(f: FamilyName) -> Family {
        match f {
            FamilyName::SoEven => Family::SoEven,
            FamilyName::OminusEven => Family::OminusEven,
            FamilyName::SoOdd => Family::SoOdd,
            FamilyName::OminusOdd => Family::OminusOdd,
            FamilyName::O => Family::OFull,
            FamilyName::Sp => Family::Sp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McTask {
    GroupAverage,
    TraceMoments,
    TwoPointRatio,
    GmcMoments,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ShiftName {
    #[default]
    Orthogonal,
    Symplectic,
}

/// A σ-symbol h = σ̂_kind for group averages.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaSpec {
    pub kind: u8,
    pub theta: f64,
    pub theta2: Option<f64>,
    pub alpha: f64,
    #[serde(default)]
    pub beta_im: f64,
    #[serde(default)]
    pub k: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub task: McTask,
    pub family: Option<FamilyName>,
    pub dim: Option<usize>,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Polynomial h as [re, im] coefficient pairs, constant term first.
    #[serde(default)]
    pub h: Vec<[f64; 2]>,
    pub sigma: Option<SigmaSpec>,
    /// trace_moments: power k of Tr U^k and moment order (1 or 2).
    #[serde(default = "one")]
    pub power: usize,
    #[serde(default = "one")]
    pub moment: usize,
    /// two_point_ratio and gmc_moments parameters.
    pub theta: Option<f64>,
    pub theta2: Option<f64>,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta_im: f64,
    #[serde(default)]
    pub k: usize,
    #[serde(default)]
    pub shift: ShiftName,
    /// Arc [a, b] for gmc_moments; the full circle by default.
    pub arc: Option<[f64; 2]>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PainleveConfig {
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(default)]
    pub beta1_im: f64,
    #[serde(default)]
    pub beta2_im: f64,
    pub x_max: f64,
    #[serde(default = "default_painleve_tol")]
    pub tol: f64,
    /// Output abscissae; the solver grid when empty.
    #[serde(default)]
    pub x: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmcConfig {
    pub k: usize,
    pub alpha: f64,
    #[serde(default)]
    pub beta_im: f64,
    /// Number of equal cells on [0, 2π), unless `boundaries` is given.
    #[serde(default = "one")]
    pub cells: usize,
    #[serde(default)]
    pub boundaries: Vec<f64>,
    #[serde(default)]
    pub shift: ShiftName,
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Parse a config, rejecting non-positive tolerances and unsorted n-lists.
pub fn parse(text: &str) -> Result<RunConfig, String> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
    let tols = [
        cfg.det.as_ref().map(|d| d.tol),
        cfg.compare.as_ref().map(|c| c.tol),
        cfg.compare.as_ref().map(|c| c.painleve_tol),
        cfg.mc.as_ref().map(|m| m.tol),
        cfg.painleve.as_ref().map(|p| p.tol),
    ];
    if tols.iter().flatten().any(|t| !(*t > 0.0)) {
        return Err("tolerances must be positive".into());
    }
    let lists = [cfg.det.as_ref().map(|d| &d.n), cfg.compare.as_ref().map(|c| &c.n)];
    for n in lists.into_iter().flatten() {
        if n.is_empty() || n.windows(2).any(|w| w[1] <= w[0]) {
            return Err("n-list must be non-empty and strictly ascending".into());
        }
    }
    Ok(cfg)
}
