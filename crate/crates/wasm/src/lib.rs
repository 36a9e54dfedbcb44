//! Browser bindings for the demo page. Every operation takes text and
//! returns a JSON string, so the plain functions are testable natively and
//! the `#[wasm_bindgen]` wrappers only turn errors into exceptions.

use serde::Serialize;
use slpencil::chain::Chain;
use slpencil::io::ProblemFile;
use slpencil::{Problem, RationalHN};
use wasm_bindgen::prelude::*;

/// Points per plotted curve.
const PLOT_POINTS: usize = 257;

#[derive(Serialize)]
struct Curve {
    x: Vec<f64>,
    y: Vec<f64>,
}

/// Every `k`-th grid node so that about `PLOT_POINTS` remain.
fn thin(values: &[f64]) -> Curve {
    let g = values.len().saturating_sub(1).max(1);
    let stride = (g / (PLOT_POINTS - 1)).max(1);
    let idx: Vec<usize> = (0..=g).step_by(stride).chain((g % stride != 0).then_some(g)).collect();
    let h = std::f64::consts::PI / g as f64;
    Curve {
        x: idx.iter().map(|&i| i as f64 * h).collect(),
        y: idx.iter().map(|&i| values[i]).collect(),
    }
}

#[derive(Serialize)]
struct Side {
    indices: (i32, i32),
    sigma: Curve,
    lambda: Vec<f64>,
    gamma: Vec<f64>,
}

fn side(p: &Problem, n_max: usize) -> Result<Side, String> {
    let s = p.spectral_data(n_max).map_err(|e| e.to_string())?;
    Ok(Side {
        indices: p.indices(),
        sigma: thin(p.sigma().values()),
        lambda: s.lambda,
        gamma: s.gamma,
    })
}

fn load(problem_toml: &str) -> Result<Problem, String> {
    let file = ProblemFile::parse(problem_toml).map_err(|e| e.to_string())?;
    file.problem(None).map_err(|e| e.to_string())
}

fn check_count(n_max: usize) -> Result<(), String> {
    if (1..=200).contains(&n_max) {
        Ok(())
    } else {
        Err(format!("n_max = {n_max} is outside 1..=200"))
    }
}

#[derive(Serialize)]
struct SpectrumOut {
    #[serde(flatten)]
    side: Side,
    /// `φ(x, λ_n)/√γ_n` for the first few eigenvalues.
    eigenfunctions: Vec<Curve>,
}

/// Eigenvalues, norming constants and the first `shown` normalized
/// eigenfunctions of the problem in `problem_toml`.
pub fn spectrum_json(problem_toml: &str, n_max: usize, shown: usize) -> Result<String, String> {
    check_count(n_max)?;
    let p = load(problem_toml)?;
    let side = side(&p, n_max)?;
    let eigenfunctions = side
        .lambda
        .iter()
        .zip(&side.gamma)
        .take(shown)
        .map(|(&lam, &gam)| {
            let t = p.phi(lam).map_err(|e| e.to_string())?;
            let scale = gam.sqrt().recip();
            Ok(thin(&t.y.iter().map(|y| y * scale).collect::<Vec<_>>()))
        })
        .collect::<Result<_, String>>()?;
    serde_json::to_string(&SpectrumOut { side, eigenfunctions }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct TransformOut {
    before: Side,
    after: Side,
    f: RationalHN,
    #[serde(rename = "F")]
    big_f: RationalHN,
}

/// Apply a transform chain such as `"T- T+(auto)"` and report both sides.
pub fn transform_json(problem_toml: &str, chain: &str, n_max: usize) -> Result<String, String> {
    check_count(n_max)?;
    let p = load(problem_toml)?;
    let chain: Chain = chain.parse().map_err(|e: slpencil::Error| e.to_string())?;
    let q = chain.apply(&p).map_err(|e| e.to_string())?;
    let out = TransformOut {
        before: side(&p, n_max)?,
        after: side(&q, n_max)?,
        f: q.f().clone(),
        big_f: q.F().clone(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ThetaOut {
    lambda: Vec<f64>,
    /// `null` where the value is not finite or too large to plot.
    f: Vec<Option<f64>>,
    f_hat: Vec<Option<f64>>,
    transformed: RationalHN,
    index_before: i32,
    index_after: i32,
}

/// Sample `f` (given as JSON, e.g. `{"h": 1}` or `"infinity"`) and its
/// Θ-transform `(μ − λ)/(f(λ) − τ) + ρ` on `[lo, hi]`.
pub fn theta_json(f_json: &str, mu: f64, tau: f64, rho: f64, lo: f64, hi: f64, samples: usize) -> Result<String, String> {
    if !(lo < hi) || !(2..=10_000).contains(&samples) {
        return Err(format!("need lo < hi and 2 ≤ samples ≤ 10000, got [{lo}, {hi}] and {samples}"));
    }
    let f: RationalHN = serde_json::from_str(f_json).map_err(|e| e.to_string())?;
    let g = f.theta_transform(mu, tau, rho, None).map_err(|e| e.to_string())?;
    let lambda: Vec<f64> = (0..samples).map(|i| lo + (hi - lo) * i as f64 / (samples - 1) as f64).collect();
    let clip = |r: slpencil::Result<f64>| r.ok().filter(|v| v.is_finite() && v.abs() < 1e6);
    let out = ThetaOut {
        f: lambda.iter().map(|&l| clip(f.evaluate(l))).collect(),
        f_hat: lambda.iter().map(|&l| clip(g.evaluate(l))).collect(),
        lambda,
        index_before: f.index(),
        index_after: g.index(),
        transformed: g,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn spectrum(problem_toml: &str, n_max: usize, shown: usize) -> Result<String, JsError> {
    spectrum_json(problem_toml, n_max, shown).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn transform(problem_toml: &str, chain: &str, n_max: usize) -> Result<String, JsError> {
    transform_json(problem_toml, chain, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn theta(f_json: &str, mu: f64, tau: f64, rho: f64, lo: f64, hi: f64, samples: usize) -> Result<String, JsError> {
    theta_json(f_json, mu, tau, rho, lo, hi, samples).map_err(|e| JsError::new(&e))
}
