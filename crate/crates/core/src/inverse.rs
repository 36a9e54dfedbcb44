//! The inverse map: spectral data back to `(σ, f, F)`.
//!
//! Non-Dirichlet data are reduced to the Dirichlet class `(−1, −1)` by the
//! exact data-side transforms, the Dirichlet problem is fitted against the
//! forward solver, and the problem-side transforms are replayed in reverse.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::darboux::{data_t_minus, data_t_minus_plus, data_t_plus_minus, t_minus_plus, t_plus, t_plus_minus};
use crate::direct::{complete_finite_data, Problem, SpectralData};
use crate::error::{Error, Result};
use crate::hn::{CoeffVector, RationalHN};
use crate::par;
use crate::space::{simpson, MeanZeroFunction, DEFAULT_GRID};

/// Trial space for `σ` in the Dirichlet fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `cos(kx)`, `k = 1..=K`.
    Cosine,
    /// `T_k(2x/π − 1)` minus its mean, `k = 1..=K`.
    Chebyshev,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InverseConfig {
    /// Spectral pairs fitted by the Dirichlet solve.
    pub n_data: usize,
    pub base_k: usize,
    /// Target for the weighted sum of squared residuals.
    pub base_tol: f64,
    pub max_iter: usize,
    pub basis: Basis,
    pub grid_size: usize,
    /// Refit `σ`, `c(f)` and `c(F)` against the full input after the
    /// transforms are replayed.
    pub polish: bool,
}

impl Default for InverseConfig {
    fn default() -> Self {
        InverseConfig {
            n_data: 16,
            base_k: 10,
            base_tol: 1e-10,
            max_iter: 50,
            basis: Basis::Chebyshev,
            grid_size: DEFAULT_GRID,
            polish: true,
        }
    }
}

impl InverseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_data < self.base_k + 2 {
            return Err(Error::IllPosed(format!(
                "n_data = {} needs to be at least base_k + 2 = {}",
                self.n_data,
                self.base_k + 2
            )));
        }
        if !(self.base_tol > 0.0) || self.base_k == 0 || self.max_iter == 0 {
            return Err(Error::IllPosed("base_tol, base_k and max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of the Dirichlet fit.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseFit {
    pub coeffs: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// One reduction step, recorded on the way down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reduction {
    /// `(λ₁, γ₁)` removed; undone by `T₊(λ₁, γ₁, ·)`.
    Pop { lambda: f64, gamma: f64 },
    /// Index moved from `F` to `f`; undone by `T₋₊`.
    RaiseF,
    /// Index moved from `f` to `F`; undone by `T₊₋`.
    RaiseBigF,
}

#[derive(Debug, Clone)]
pub struct InverseReport {
    pub problem: Problem,
    pub base: BaseFit,
    /// The top-level refit, when enabled.
    pub polished: Option<BaseFit>,
    pub steps: Vec<Reduction>,
    /// `(M, N, λ₁)` at each level, top first; the last entry is the Dirichlet level.
    pub levels: Vec<(i32, i32, f64)>,
    /// Pairs compared in the final forward check.
    pub checked: usize,
    /// `max |Δλₙ| / (1 + |λₙ|)` between the input and the result's spectrum.
    pub max_lambda_error: f64,
    /// `max |Δγₙ| / γₙ`.
    pub max_gamma_error: f64,
}

impl InverseReport {
    pub fn pops(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Reduction::Pop { .. })).count()
    }

    pub fn swaps(&self) -> usize {
        self.steps.len() - self.pops()
    }
}

/// Number of pops and index swaps that reduce `(M, N)` to `(−1, −1)`.
pub fn reduction_depth(m: i32, n: i32) -> Result<(usize, usize)> {
    if (m + n).rem_euclid(2) != 0 {
        return Err(Error::OddParity(m + n));
    }
    Ok((((m + n) / 2 + 1) as usize, ((m - n).unsigned_abs() / 2) as usize))
}

fn basis_functions(basis: Basis, k: usize, grid: usize) -> Result<Vec<MeanZeroFunction>> {
    (1..=k)
        .map(|j| match basis {
            Basis::Cosine => MeanZeroFunction::from_fn(grid, |x| (j as f64 * x).cos()),
            Basis::Chebyshev => MeanZeroFunction::from_fn(grid, |x| {
                let t = (2.0 * x / std::f64::consts::PI - 1.0).clamp(-1.0, 1.0);
                (j as f64 * t.acos()).cos()
            }),
        })
        .collect()
}

fn combine(basis: &[MeanZeroFunction], c: &[f64]) -> Result<MeanZeroFunction> {
    let len = basis[0].values().len();
    let mut v = vec![0.0; len];
    for (b, ck) in basis.iter().zip(c) {
        for (acc, x) in v.iter_mut().zip(b.values()) {
            *acc += ck * x;
        }
    }
    MeanZeroFunction::project(v)
}

fn signed_sqrt(x: f64) -> f64 {
    x.abs().sqrt().copysign(x)
}

/// Weighted residuals of `p` against `target`, plus the eigenvalues found
/// for the next warm start.
fn residual(p: &Problem, target: &SpectralData, guesses: &[f64]) -> Result<(DVector<f64>, Vec<f64>)> {
    let n = target.len();
    let sd = if guesses.len() == n {
        p.spectral_data_near(guesses)?
    } else {
        p.spectral_data(n)?
    };
    let mut r = DVector::zeros(2 * n);
    for i in 0..n {
        let w = (i + 1) as f64;
        r[i] = w * (signed_sqrt(sd.lambda[i]) - signed_sqrt(target.lambda[i]));
        r[n + i] = w * (sd.gamma[i] / target.gamma[i] - 1.0);
    }
    Ok((r, sd.lambda))
}

struct Fit {
    x: Vec<f64>,
    cost: f64,
    iterations: usize,
}

/// Levenberg–Marquardt on the residual above with a central-difference
/// Jacobian. Returns once the cost drops under `tol` or no damped step makes
/// progress any more; running out of iterations is an error.
fn levenberg_marquardt(
    model: &(impl Fn(&[f64]) -> Result<Problem> + Sync),
    target: &SpectralData,
    x0: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<Fit> {
    const STEP: f64 = 1e-5;
    let eval = |x: &[f64], guesses: &[f64]| residual(&model(x)?, target, guesses);
    let mut x = x0;
    let (mut r, mut guesses) = eval(&x, &[])?;
    let mut cost = r.norm_squared();
    let mut damping = 1e-3;
    let mut iterations = 0;
    let mut slow = 0;
    while cost >= tol {
        if iterations == max_iter {
            return Err(Error::BaseCaseNoConvergence {
                iterations,
                residual: cost,
            });
        }
        iterations += 1;
        let cols: Vec<usize> = (0..x.len()).collect();
        let columns = par::map(&cols, |&j| -> Result<DVector<f64>> {
            let mut plus = x.clone();
            plus[j] += STEP;
            let mut minus = x.clone();
            minus[j] -= STEP;
            let (rp, _) = eval(&plus, &guesses)?;
            let (rm, _) = eval(&minus, &guesses)?;
            Ok((rp - rm) / (2.0 * STEP))
        });
        // A neighbourhood where the forward map breaks down counts as stationary.
        let Ok(columns) = columns.into_iter().collect::<Result<Vec<DVector<f64>>>>() else {
            break;
        };
        let j = DMatrix::from_columns(&columns);
        let jtj = j.transpose() * &j;
        let g = j.transpose() * &r;
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += damping * jtj[(i, i)].max(1e-12);
            }
            let Some(chol) = a.cholesky() else {
                damping *= 4.0;
                continue;
            };
            let delta = chol.solve(&(-&g));
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + d).collect();
            match eval(&trial, &guesses) {
                Ok((rt, gt)) if rt.norm_squared() < cost => {
                    let next = rt.norm_squared();
                    slow = if next > cost * (1.0 - 1e-6) { slow + 1 } else { 0 };
                    x = trial;
                    r = rt;
                    guesses = gt;
                    cost = next;
                    damping = (damping / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                _ => damping *= 4.0,
            }
        }
        if !improved || slow >= 3 {
            break;
        }
    }
    Ok(Fit { x, cost, iterations })
}

/// Fit of `σ = Σ c_k b_k` to Dirichlet data. A stalled fit is an error only
/// when `strict`.
fn base_fit(s: &SpectralData, cfg: &InverseConfig, strict: bool) -> Result<(Problem, BaseFit)> {
    let target = s.truncated(cfg.n_data);
    let basis = basis_functions(cfg.basis, cfg.base_k, cfg.grid_size)?;
    let model = |c: &[f64]| Ok(Problem::new(combine(&basis, c)?, RationalHN::Infinity, RationalHN::Infinity));
    let fit = levenberg_marquardt(&model, &target, vec![0.0; cfg.base_k], cfg.base_tol, cfg.max_iter)?;
    if strict && fit.cost >= cfg.base_tol {
        return Err(Error::BaseCaseNoConvergence {
            iterations: fit.iterations,
            residual: fit.cost,
        });
    }
    Ok((
        model(&fit.x)?,
        BaseFit {
            coeffs: fit.x,
            residual: fit.cost,
            iterations: fit.iterations,
        },
    ))
}

/// Damped Gauss–Newton fit of `σ = Σ c_k b_k` to Dirichlet data.
pub fn dirichlet_fit(s: &SpectralData, cfg: &InverseConfig) -> Result<(Problem, BaseFit)> {
    cfg.validate()?;
    if (s.m, s.n) != (-1, -1) {
        return Err(Error::DomainViolation(format!(
            "the Dirichlet fit needs (M, N) = (−1, −1), got ({}, {})",
            s.m, s.n
        )));
    }
    s.validate()?;
    if s.len() < cfg.base_k + 2 {
        return Err(Error::IllPosed(format!(
            "{} pairs cannot determine {} coefficients",
            s.len(),
            cfg.base_k
        )));
    }
    base_fit(s, cfg, true)
}

pub fn dirichlet_inverse(s: &SpectralData, cfg: &InverseConfig) -> Result<Problem> {
    Ok(dirichlet_fit(s, cfg)?.0)
}

/// Refit everything at the top level: `base_k` cosines for `σ` plus `c(f)`
/// and `c(F)`, started from `p`.
fn polish(p: &Problem, target: &SpectralData, cfg: &InverseConfig) -> Result<(Problem, BaseFit)> {
    let (m, n) = p.indices();
    let k = cfg.base_k;
    let basis = basis_functions(Basis::Cosine, k, cfg.grid_size)?;
    let sigma = p.sigma().resample(cfg.grid_size)?;
    let mut x: Vec<f64> = basis
        .iter()
        .map(|b| {
            let prod: Vec<f64> = sigma.values().iter().zip(b.values()).map(|(s, c)| s * c).collect();
            2.0 / std::f64::consts::PI * simpson(&prod)
        })
        .collect();
    let (fm, fn_) = ((m + 1) as usize, (n + 1) as usize);
    x.extend(p.f().coeff_vector().0);
    x.extend(p.F().coeff_vector().0);
    let model = |x: &[f64]| {
        let f = RationalHN::from_coeff_vector(m, &CoeffVector(x[k..k + fm].to_vec()))?;
        let big_f = RationalHN::from_coeff_vector(n, &CoeffVector(x[k + fm..k + fm + fn_].to_vec()))?;
        Ok(Problem::new(combine(&basis, &x[..k])?, f, big_f))
    };
    let fit = levenberg_marquardt(&model, target, x, cfg.base_tol, cfg.max_iter)?;
    Ok((
        model(&fit.x)?,
        BaseFit {
            coeffs: fit.x,
            residual: fit.cost,
            iterations: fit.iterations,
        },
    ))
}

/// Monotone, positive data whose upper half sits within `1/2` of the
/// asymptotic positions `√λₙ ≈ n − (M+N)/2 − 1`, so the declared `(M, N)`
/// is the right class.
fn check_characterization(s: &SpectralData) -> Result<()> {
    s.validate()?;
    let kappa = s.kappa();
    let half = kappa.len() / 2;
    if let Some((i, k)) = kappa.iter().enumerate().skip(half).find(|(_, k)| k.abs() >= 0.5) {
        return Err(Error::CharacterizationViolation(format!(
            "κ_{} = {k} does not fit indices ({}, {})",
            i + 1,
            s.m,
            s.n
        )));
    }
    Ok(())
}

pub fn inverse(s: &SpectralData, cfg: &InverseConfig) -> Result<Problem> {
    Ok(inverse_report(s, cfg)?.problem)
}

/// Full inversion with bookkeeping and a forward check of the result.
pub fn inverse_report(s: &SpectralData, cfg: &InverseConfig) -> Result<InverseReport> {
    cfg.validate()?;
    let (pops, swaps) = reduction_depth(s.m, s.n)?;
    check_characterization(s)?;
    let available = s.len().saturating_sub(pops);
    if available < cfg.base_k + 2 {
        return Err(Error::IllPosed(format!(
            "{} pairs leave {available} for the Dirichlet fit, fewer than base_k + 2 = {}",
            s.len(),
            cfg.base_k + 2
        )));
    }
    let used = available.min(cfg.n_data) + pops;
    let top = s.truncated(used);

    let mut cur = top.clone();
    let mut steps = Vec::new();
    let mut levels = vec![(cur.m, cur.n, cur.lambda[0])];
    while (cur.m, cur.n) != (-1, -1) {
        let (next, step) = if cur.m >= 0 && cur.n >= 0 {
            let step = Reduction::Pop {
                lambda: cur.lambda[0],
                gamma: cur.gamma[0],
            };
            (data_t_minus(&cur)?, step)
        } else if cur.m == -1 {
            (data_t_plus_minus(&cur)?, Reduction::RaiseF)
        } else {
            (data_t_minus_plus(&cur)?, Reduction::RaiseBigF)
        };
        next.validate()?;
        steps.push(step);
        cur = next;
        levels.push((cur.m, cur.n, cur.lambda[0]));
    }
    let report_steps = steps.clone();
    let popped = report_steps.iter().filter(|s| matches!(s, Reduction::Pop { .. })).count();
    assert_eq!((popped, steps.len() - popped), (pops, swaps), "reduction depth bookkeeping");

    let (mut p, base) = base_fit(&cur, cfg, false)?;
    for step in steps.iter().rev() {
        let next = match *step {
            Reduction::Pop { lambda, gamma } => t_plus(lambda, gamma, &p),
            Reduction::RaiseF => t_minus_plus(&p),
            Reduction::RaiseBigF => t_plus_minus(&p),
        };
        p = match next {
            Ok(q) => q,
            // a stalled fit far from the data is the likelier culprit
            Err(_) if base.residual >= cfg.base_tol => {
                return Err(Error::BaseCaseNoConvergence {
                    iterations: base.iterations,
                    residual: base.residual,
                })
            }
            Err(e) => return Err(e),
        };
    }
    if p.indices() != (s.m, s.n) {
        return Err(Error::IndexMismatch(p.indices().0, p.indices().1, s.m, s.n));
    }
    let polished = if cfg.polish {
        let (q, fit) = polish(&p, &top, cfg)?;
        p = q;
        Some(fit)
    } else {
        None
    };

    let checked = top.len();
    let fwd = p.spectral_data_near(&top.lambda)?;
    let max_lambda_error = fwd
        .lambda
        .iter()
        .zip(&top.lambda)
        .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
        .fold(0.0, f64::max);
    let max_gamma_error = fwd
        .gamma
        .iter()
        .zip(&top.gamma)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max);
    Ok(InverseReport {
        problem: p,
        base,
        polished,
        steps: report_steps,
        levels,
        checked,
        max_lambda_error,
        max_gamma_error,
    })
}

/// Complete the first `m` pairs with the unperturbed tail and invert.
///
/// The completion runs up to `cfg.n_data` plus the reduction depth, so every
/// supplied pair reaches the Dirichlet fit when `m ≤ cfg.n_data`.
pub fn finite_data_inverse(lambda: &[f64], gamma: &[f64], m: i32, n: i32, cfg: &InverseConfig) -> Result<Problem> {
    let (pops, _) = reduction_depth(m, n)?;
    let data = complete_finite_data(lambda, gamma, m, n, cfg.n_data + pops);
    inverse(&data, cfg)
}

/// Same as [`finite_data_inverse`]; the pairs carry measurement error.
pub fn noisy_finite_data_inverse(
    lambda: &[f64],
    gamma: &[f64],
    m: i32,
    n: i32,
    cfg: &InverseConfig,
) -> Result<Problem> {
    finite_data_inverse(lambda, gamma, m, n, cfg)
}
