//! Mean-zero grid functions on `[0, π]` and the weighted norms built on their
//! sine coefficients.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_COEFFS: usize = 256;

/// A function sampled at `x_i = iπ/G`, `i = 0..=G`, with zero mean.
#[derive(Debug, Clone)]
pub struct MeanZeroFunction {
    values: Vec<f64>,
    sine: OnceLock<Vec<f64>>,
}

/// Truncated `W₂^α` norm with its tail estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub value: f64,
    /// `Σ_{k≤K} k^{2α} û_k²`
    pub head: f64,
    /// Estimate of `Σ_{k>K} k^{2α} û_k²` from the endpoint-jump asymptotics of `û_k`.
    pub tail: f64,
    pub terms: usize,
}

impl PartialEq for MeanZeroFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl MeanZeroFunction {
    /// Subtract the quadrature mean of raw grid samples.
    pub fn project(mut values: Vec<f64>) -> Result<Self> {
        check_grid(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("grid function has non-finite samples".into()));
        }
        let mean = simpson(&values) / PI;
        values.iter_mut().for_each(|v| *v -= mean);
        Ok(MeanZeroFunction {
            values,
            sine: OnceLock::new(),
        })
    }

    pub fn zero(grid: usize) -> Self {
        MeanZeroFunction {
            values: vec![0.0; grid + 1],
            sine: OnceLock::new(),
        }
    }

    /// Sample `u` on a grid of `grid` cells and project to mean zero.
    pub fn from_fn(grid: usize, u: impl Fn(f64) -> f64) -> Result<Self> {
        let h = PI / grid as f64;
        Self::project((0..=grid).map(|i| u(i as f64 * h)).collect())
    }

    pub fn grid_size(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        PI / self.grid_size() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn integral(&self) -> f64 {
        simpson(&self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `(2/π)∫₀^π u²`
    pub fn l2_squared_scaled(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        2.0 / PI * simpson(&sq)
    }

    pub fn sub(&self, other: &MeanZeroFunction) -> Result<MeanZeroFunction> {
        if self.grid_size() != other.grid_size() {
            return Err(Error::GridMismatch(self.grid_size(), other.grid_size()));
        }
        Ok(MeanZeroFunction {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            sine: OnceLock::new(),
        })
    }

    pub fn scaled(&self, s: f64) -> MeanZeroFunction {
        MeanZeroFunction {
            values: self.values.iter().map(|v| v * s).collect(),
            sine: OnceLock::new(),
        }
    }

    /// Four-point Lagrange interpolation; one-sided windows at the ends.
    pub fn interp(&self, x: f64) -> f64 {
        cubic_interp(&self.values, self.step(), x)
    }

    /// Resample onto a grid of `grid` cells by cubic interpolation.
    pub fn resample(&self, grid: usize) -> Result<MeanZeroFunction> {
        if grid == self.grid_size() {
            return Ok(self.clone());
        }
        let h = PI / grid as f64;
        Self::project((0..=grid).map(|i| self.interp(i as f64 * h)).collect())
    }

    /// `û_k = (2/π)∫₀^π u(x) sin(kx) dx`, `k = 1..=count`, by composite Simpson.
    pub fn sine_coefficients(&self, count: usize) -> Result<Vec<f64>> {
        let g = self.grid_size();
        if count > g / 4 {
            return Err(Error::AliasRisk { count, grid: g });
        }
        if count <= DEFAULT_COEFFS.min(g / 4) {
            let all = self.sine.get_or_init(|| compute_sine(&self.values, DEFAULT_COEFFS.min(g / 4)));
            return Ok(all[..count].to_vec());
        }
        Ok(compute_sine(&self.values, count))
    }

    pub fn sobolev_norm(&self, alpha: f64) -> f64 {
        self.sobolev_norm_report(alpha).value
    }

    /// `(Σ k^{2α} û_k²)^{1/2}` over the cached coefficients plus a tail estimate.
    pub fn sobolev_norm_report(&self, alpha: f64) -> NormReport {
        let g = self.grid_size();
        let terms = DEFAULT_COEFFS.min(g / 4);
        let coeffs = self.sine.get_or_init(|| compute_sine(&self.values, terms));
        let head: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| ((i + 1) as f64).powf(2.0 * alpha) * c * c)
            .sum();
        // û_k ≈ 2(u(0) − (−1)^k u(π)) / (πk) for large k
        let (a, b) = (self.values[0], self.values[g]);
        let p = 2.0 * alpha - 1.0;
        let tail = 4.0 / (PI * PI) * (a * a + b * b) * (terms as f64 + 0.5).powf(p) / (-p);
        NormReport {
            value: (head + tail).sqrt(),
            head,
            tail,
            terms,
        }
    }
}

fn check_grid(len: usize) -> Result<()> {
    if len < 5 || (len - 1) % 2 != 0 {
        return Err(Error::Parse(format!("grid must have an even number ≥ 4 of cells, got {}", len.saturating_sub(1))));
    }
    Ok(())
}

fn compute_sine(values: &[f64], count: usize) -> Vec<f64> {
    let g = values.len() - 1;
    let h = PI / g as f64;
    let mut buf = vec![0.0; g + 1];
    (1..=count)
        .map(|k| {
            for (i, (b, v)) in buf.iter_mut().zip(values).enumerate() {
                *b = v * (k as f64 * i as f64 * h).sin();
            }
            2.0 / PI * simpson(&buf)
        })
        .collect()
}

/// Composite Simpson rule over `[0, π]` for an even number of cells.
pub fn simpson(values: &[f64]) -> f64 {
    let g = values.len() - 1;
    let h = PI / g as f64;
    let mut s = values[0] + values[g];
    for (i, v) in values.iter().enumerate().take(g).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

pub(crate) fn cubic_interp(values: &[f64], h: f64, x: f64) -> f64 {
    let g = values.len() - 1;
    let t = x / h;
    let cell = (t.floor().max(0.0) as usize).min(g - 1);
    let start = cell.saturating_sub(1).min(g - 3);
    let s = t - start as f64;
    let (y0, y1, y2, y3) = (values[start], values[start + 1], values[start + 2], values[start + 3]);
    let (l0, l1, l2, l3) = (
        -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
        s * (s - 2.0) * (s - 3.0) / 2.0,
        -s * (s - 1.0) * (s - 3.0) / 2.0,
        s * (s - 1.0) * (s - 2.0) / 6.0,
    );
    y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3
}

/// A finite sequence `v_1..v_n` with the `ℓ₂^α` weight; entries beyond `n` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSequence {
    pub entries: Vec<f64>,
    pub alpha: f64,
}

impl WeightedSequence {
    pub fn new(entries: Vec<f64>, alpha: f64) -> Self {
        WeightedSequence { entries, alpha }
    }

    pub fn norm(&self) -> f64 {
        l2_alpha_norm(&self.entries, self.alpha)
    }
}

/// `(Σ n^{2α} v_n²)^{1/2}` with `v` indexed from `n = 1`.
pub fn l2_alpha_norm(v: &[f64], alpha: f64) -> f64 {
    v.iter()
        .enumerate()
        .map(|(i, x)| ((i + 1) as f64).powf(2.0 * alpha) * x * x)
        .sum::<f64>()
        .sqrt()
}
