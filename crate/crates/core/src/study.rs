//! Finite-data approximation studies: truncate (and optionally perturb) the
//! spectral data of a known problem, invert, and measure the distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::direct::Problem;
use crate::error::{Error, Result};
use crate::inverse::{finite_data_inverse, noisy_finite_data_inverse, InverseConfig};
use crate::metrics::{d_alpha, pair_seed};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    pub ms: Vec<usize>,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Noise levels; `0` is the exact study.
    pub eps: Vec<f64>,
    /// Antithetic noise pairs `±u` drawn per `(m, ε)` cell.
    pub draws: usize,
    pub seed: u64,
    pub inverse: InverseConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            ms: vec![4, 8, 16, 32],
            alpha1: 0.1,
            alpha2: 0.4,
            eps: vec![0.0],
            draws: 2,
            seed: 0,
            inverse: InverseConfig {
                n_data: 32,
                ..InverseConfig::default()
            },
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.alpha1 && self.alpha1 < self.alpha2 && self.alpha2 < 0.5) {
            return Err(Error::DomainViolation(format!(
                "need 0 < alpha1 < alpha2 < 1/2, got {} and {}",
                self.alpha1, self.alpha2
            )));
        }
        if let Some(&m) = self.ms.iter().find(|&&m| m > self.inverse.n_data) {
            return Err(Error::IllPosed(format!(
                "m = {m} exceeds n_data = {}; the tail of the data would be ignored",
                self.inverse.n_data
            )));
        }
        if self.eps.iter().any(|e| !(*e >= 0.0)) {
            return Err(Error::DomainViolation("noise levels must be nonnegative".into()));
        }
        if self.draws == 0 {
            return Err(Error::DomainViolation("draws must be positive".into()));
        }
        self.inverse.validate()
    }
}

/// One inversion. `seed` and `sign` identify the noise draw; both are `None`
/// for exact data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub m: usize,
    pub eps: f64,
    pub seed: Option<u64>,
    pub sign: Option<i8>,
    /// `NaN` when the inversion failed.
    pub d_alpha1: f64,
    pub error: Option<String>,
}

/// Worst case over the draws of one `(m, ε)` cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellSummary {
    pub m: usize,
    pub eps: f64,
    pub d_max: f64,
    pub d_mean: f64,
    pub runs: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    pub cells: Vec<CellSummary>,
    /// Least-squares slope of `ln d` against `ln m` for the exact cells.
    pub slope: Option<f64>,
    /// `α₁ − α₂`.
    pub theoretical_slope: f64,
}

impl StudyReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,eps,seed,sign,d_alpha1,error\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{},{},{:.16e},{}\n",
                r.m,
                r.eps,
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                r.sign.map(|s| s.to_string()).unwrap_or_default(),
                r.d_alpha1,
                r.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
            ));
        }
        out
    }

    pub fn cell(&self, m: usize, eps: f64) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.m == m && c.eps == eps)
    }
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Copy)]
struct Job {
    m: usize,
    eps: f64,
    seed: Option<u64>,
    sign: Option<i8>,
}

/// Uniform noise on `[−1, 1]` for the first `m` eigenvalues, then the first
/// `m` norming constants.
fn unit_noise(seed: u64, m: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..2 * m).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Run the study on `p`: for every `m` and `ε`, invert the first `m` pairs
/// (perturbed by `±ε·u` for `ε > 0`) and record `d_{α₁}(P, P̃_m)`.
pub fn finite_study(p: &Problem, cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let (mi, ni) = p.indices();
    if (mi + ni).rem_euclid(2) != 0 {
        return Err(Error::OddParity(mi + ni));
    }
    let top = cfg.ms.iter().copied().max().unwrap_or(0);
    let data = if top > 0 { Some(p.spectral_data(top)?) } else { None };

    let mut jobs = Vec::new();
    for &m in &cfg.ms {
        for (k, &eps) in cfg.eps.iter().enumerate() {
            if eps == 0.0 {
                jobs.push(Job {
                    m,
                    eps,
                    seed: None,
                    sign: None,
                });
                continue;
            }
            for draw in 0..cfg.draws {
                let seed = pair_seed(cfg.seed, (m * 1000 + k) * 1000 + draw);
                for sign in [1, -1] {
                    jobs.push(Job {
                        m,
                        eps,
                        seed: Some(seed),
                        sign: Some(sign),
                    });
                }
            }
        }
    }

    let results = par::map(&jobs, |job| -> Result<f64> {
        let (mut lambda, mut gamma) = match &data {
            Some(s) => (s.lambda[..job.m].to_vec(), s.gamma[..job.m].to_vec()),
            None => (Vec::new(), Vec::new()),
        };
        let pm = match (job.seed, job.sign) {
            (Some(seed), Some(sign)) => {
                let u = unit_noise(seed, job.m);
                let scale = job.eps * f64::from(sign);
                for i in 0..job.m {
                    lambda[i] += scale * u[i];
                    gamma[i] += scale * u[job.m + i];
                }
                noisy_finite_data_inverse(&lambda, &gamma, mi, ni, &cfg.inverse)?
            }
            _ => finite_data_inverse(&lambda, &gamma, mi, ni, &cfg.inverse)?,
        };
        d_alpha(p, &pm, cfg.alpha1)
    });
    // Inversions far from the asymptotic regime may fail; they are recorded,
    // while bad input still aborts the study.
    let mut rows = Vec::with_capacity(jobs.len());
    for (job, r) in jobs.iter().zip(results) {
        let (d, error) = match r {
            Ok(d) => (d, None),
            Err(e) if e.is_convergence() || matches!(e, Error::DomainViolation(_) | Error::NotHerglotz(_)) => {
                (f64::NAN, Some(e.to_string()))
            }
            Err(e) => return Err(e),
        };
        rows.push(StudyRow {
            m: job.m,
            eps: job.eps,
            seed: job.seed,
            sign: job.sign,
            d_alpha1: d,
            error,
        });
    }

    let mut cells = Vec::new();
    for &m in &cfg.ms {
        for &eps in &cfg.eps {
            let all: Vec<f64> = rows.iter().filter(|r| r.m == m && r.eps == eps).map(|r| r.d_alpha1).collect();
            let ds: Vec<f64> = all.iter().copied().filter(|d| !d.is_nan()).collect();
            let (d_max, d_mean) = if ds.is_empty() {
                (f64::NAN, f64::NAN)
            } else {
                (ds.iter().copied().fold(f64::NEG_INFINITY, f64::max), ds.iter().sum::<f64>() / ds.len() as f64)
            };
            cells.push(CellSummary {
                m,
                eps,
                d_max,
                d_mean,
                runs: ds.len(),
                failures: all.len() - ds.len(),
            });
        }
    }
    let exact: Vec<(f64, f64)> = cells
        .iter()
        .filter(|c| c.eps == 0.0 && c.failures == 0)
        .map(|c| (c.m as f64, c.d_max))
        .collect();
    Ok(StudyReport {
        rows,
        cells,
        slope: log_log_slope(&exact),
        theoretical_slope: cfg.alpha1 - cfg.alpha2,
    })
}
