//! File formats: TOML problem files and JSON spectral data.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::direct::{Problem, SpectralData};
use crate::error::{Error, Result};
use crate::hn::RationalHN;
use crate::inverse::InverseConfig;
use crate::metrics::MetricConfig;
use crate::space::{MeanZeroFunction, DEFAULT_GRID};
use crate::study::StudyConfig;

/// `σ` either as a short expression or as values on the uniform grid.
///
/// The expression is `Σ cos[k−1]·cos(kx) + Σ sin[k−1]·sin(kx) + Σ poly[j]·x^j`;
/// the mean is removed afterwards.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cos: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sin: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub poly: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl SigmaSpec {
    fn is_expression(&self) -> bool {
        !(self.cos.is_empty() && self.sin.is_empty() && self.poly.is_empty())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let c: f64 = self.cos.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x).cos()).sum();
        let s: f64 = self.sin.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * x).sin()).sum();
        let p = self.poly.iter().rev().fold(0.0, |acc, a| acc * x + a);
        c + s + p
    }

    /// Sample on `grid` cells, or resample the stored values.
    pub fn build(&self, grid: Option<usize>) -> Result<MeanZeroFunction> {
        match (&self.values, self.is_expression()) {
            (Some(_), true) => Err(Error::Parse("sigma: give either values or an expression, not both".into())),
            (Some(v), false) => {
                if v.len() < 5 {
                    return Err(Error::Parse(format!("sigma: {} grid values are too few", v.len())));
                }
                let own = MeanZeroFunction::project(v.clone())?;
                match grid {
                    Some(g) if g != own.grid_size() => own.resample(g),
                    _ => Ok(own),
                }
            }
            (None, _) => MeanZeroFunction::from_fn(grid.unwrap_or(DEFAULT_GRID), |x| self.eval(x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    /// Cells of the uniform grid; defaults to the grid of `sigma.values`,
    /// or 2048.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

/// A problem `(σ, f, F)` plus optional settings for the commands that use it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub f: RationalHN,
    #[serde(rename = "F")]
    pub big_f: RationalHN,
    pub sigma: SigmaSpec,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<InverseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub study: Option<StudyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricConfig>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `grid` overrides `solver.grid_size`.
    pub fn problem(&self, grid: Option<usize>) -> Result<Problem> {
        let sigma = self.sigma.build(grid.or(self.solver.grid_size))?;
        Ok(Problem::new(sigma, self.f.clone(), self.big_f.clone()))
    }

    /// A file holding `p` with `σ` as grid values.
    pub fn from_problem(p: &Problem) -> Self {
        ProblemFile {
            f: p.f().clone(),
            big_f: p.F().clone(),
            sigma: SigmaSpec {
                values: Some(p.sigma().values().to_vec()),
                ..Default::default()
            },
            solver: SolverSection {
                grid_size: Some(p.grid_size()),
                n_max: None,
            },
            inverse: None,
            study: None,
            metrics: None,
        }
    }
}

/// Seventeen significant digits, as a JSON number.
fn num(x: f64) -> Result<Box<RawValue>> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("{x} cannot be written as JSON")));
    }
    RawValue::from_string(format!("{x:.16e}")).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize)]
struct PairOut {
    n: usize,
    lambda: Box<RawValue>,
    gamma: Box<RawValue>,
    kappa: Box<RawValue>,
    beta: Box<RawValue>,
}

#[derive(Serialize)]
struct SpectralOut {
    #[serde(rename = "M")]
    m: i32,
    #[serde(rename = "N")]
    n: i32,
    pairs: Vec<PairOut>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairIn {
    n: usize,
    lambda: f64,
    gamma: f64,
    #[serde(default)]
    #[allow(dead_code)]
    kappa: Option<f64>,
    #[serde(default)]
    #[allow(dead_code)]
    beta: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectralIn {
    #[serde(rename = "M")]
    m: i32,
    #[serde(rename = "N")]
    n: i32,
    pairs: Vec<PairIn>,
}

/// `{M, N, pairs: [{n, lambda, gamma, kappa, beta}]}`, validated first.
pub fn spectral_to_json(s: &SpectralData) -> Result<String> {
    s.validate()?;
    let (kappa, beta) = (s.kappa(), s.beta());
    let pairs = (0..s.len())
        .map(|i| {
            Ok(PairOut {
                n: i + 1,
                lambda: num(s.lambda[i])?,
                gamma: num(s.gamma[i])?,
                kappa: num(kappa[i])?,
                beta: num(beta[i])?,
            })
        })
        .collect::<Result<_>>()?;
    let out = SpectralOut { m: s.m, n: s.n, pairs };
    serde_json::to_string_pretty(&out).map_err(|e| Error::Parse(e.to_string()))
}

/// Inverse of [`spectral_to_json`]; pairs must be numbered `1, 2, …` in
/// order. `kappa` and `beta` are optional and recomputed.
pub fn spectral_from_json(text: &str) -> Result<SpectralData> {
    let raw: SpectralIn = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some((i, p)) = raw.pairs.iter().enumerate().find(|(i, p)| p.n != i + 1) {
        return Err(Error::Parse(format!("pair {} is numbered {}", i + 1, p.n)));
    }
    let (lambda, gamma) = raw.pairs.iter().map(|p| (p.lambda, p.gamma)).unzip();
    SpectralData::new(raw.m, raw.n, lambda, gamma)
}
