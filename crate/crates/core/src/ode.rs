//! Shooting for `y' = σy + y^{[1]}`, `(y^{[1]})' = −(σ² + λ)y − σy^{[1]}`.
//!
//! Each grid cell is advanced by the fourth-order Magnus propagator built on
//! the two Gauss points of the cell. The system matrix is traceless, so the
//! cell exponential is the exact `2×2` formula `cosh(s)·I + sinh(s)/s·Ω` and
//! the propagator keeps unit determinant. `σ` at the Gauss points comes from
//! cubic interpolation of the grid samples.

use crate::error::{Error, Result};
use crate::space::MeanZeroFunction;

/// Starting end of an integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

/// Grid values of a solution and its quasi-derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace {
    pub lambda: f64,
    pub y: Vec<f64>,
    pub y1: Vec<f64>,
    /// `∫₀^{x_i} y²`
    pub energy: Vec<f64>,
}

impl SolutionTrace {
    pub fn grid_size(&self) -> usize {
        self.y.len() - 1
    }

    pub fn total_energy(&self) -> f64 {
        *self.energy.last().unwrap()
    }

    /// `(y(π), y^{[1]}(π))`
    pub fn end_values(&self) -> [f64; 2] {
        let g = self.grid_size();
        [self.y[g], self.y1[g]]
    }
}

/// End values of a left-to-right shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shot {
    pub y: f64,
    pub y1: f64,
    pub energy: f64,
}

/// Per-cell Magnus coefficients for a fixed `σ`; cheap to reuse across `λ`.
///
/// For cell `i` the Magnus matrix is `[[p, q], [r0 + λ·r1, −p]]`.
#[derive(Debug, Clone)]
pub struct Stepper {
    h: f64,
    sigma: Vec<f64>,
    cells: Vec<[f64; 4]>,
}

impl Stepper {
    pub fn new(sigma: &MeanZeroFunction) -> Self {
        let g = sigma.grid_size();
        let h = sigma.step();
        let k = 3f64.sqrt() / 12.0;
        let (c1, c2) = (0.5 - 3f64.sqrt() / 6.0, 0.5 + 3f64.sqrt() / 6.0);
        let cells = (0..g)
            .map(|i| {
                let x = i as f64 * h;
                let a1 = sigma.interp(x + c1 * h);
                let a2 = sigma.interp(x + c2 * h);
                let kh2 = k * h * h;
                let d = a2 - a1;
                [
                    h / 2.0 * (a1 + a2) + kh2 * (a2 * a2 - a1 * a1),
                    h + 2.0 * kh2 * d,
                    -h / 2.0 * (a1 * a1 + a2 * a2) - 2.0 * kh2 * d * a1 * a2,
                    -h + 2.0 * kh2 * d,
                ]
            })
            .collect();
        Stepper {
            h,
            sigma: sigma.values().to_vec(),
            cells,
        }
    }

    pub fn grid_size(&self) -> usize {
        self.cells.len()
    }

    /// Propagator of cell `i`, row-major `[m00, m01, m10, m11]`.
    #[inline]
    fn propagator(&self, i: usize, lam: f64, backward: bool) -> [f64; 4] {
        let [p, q, r0, r1] = self.cells[i];
        let r = r0 + lam * r1;
        let d = p * p + q * r;
        let (c, s) = cosh_sinhc(d);
        let s = if backward { -s } else { s };
        [c + s * p, s * q, s * r, c - s * p]
    }

    /// `d/dx (y²) = 2y(σy + y^{[1]})` at node `i`.
    #[inline]
    fn energy_slope(&self, i: usize, y: f64, y1: f64) -> f64 {
        2.0 * y * (self.sigma[i] * y + y1)
    }

    /// Integrate from `x0` with `y(x0) = a`, `y^{[1]}(x0) = b`, keeping the trace.
    pub fn integrate(&self, lam: f64, x0: Endpoint, a: f64, b: f64) -> Result<SolutionTrace> {
        let g = self.grid_size();
        let mut y = vec![0.0; g + 1];
        let mut y1 = vec![0.0; g + 1];
        match x0 {
            Endpoint::Left => {
                y[0] = a;
                y1[0] = b;
                for i in 0..g {
                    let m = self.propagator(i, lam, false);
                    y[i + 1] = m[0] * y[i] + m[1] * y1[i];
                    y1[i + 1] = m[2] * y[i] + m[3] * y1[i];
                }
            }
            Endpoint::Right => {
                y[g] = a;
                y1[g] = b;
                for i in (0..g).rev() {
                    let m = self.propagator(i, lam, true);
                    y[i] = m[0] * y[i + 1] + m[1] * y1[i + 1];
                    y1[i] = m[2] * y[i + 1] + m[3] * y1[i + 1];
                }
            }
        }
        if !(y[0].is_finite() && y[g].is_finite() && y1[0].is_finite() && y1[g].is_finite()) {
            return Err(Error::NonFiniteState { lambda: lam });
        }
        // trapezoid with the Euler–Maclaurin endpoint correction, cumulatively
        let mut energy = vec![0.0; g + 1];
        let mut trap = 0.0;
        let g0 = self.energy_slope(0, y[0], y1[0]);
        let corr = self.h * self.h / 12.0;
        for i in 0..g {
            trap += 0.5 * self.h * (y[i] * y[i] + y[i + 1] * y[i + 1]);
            energy[i + 1] = trap - corr * (self.energy_slope(i + 1, y[i + 1], y1[i + 1]) - g0);
        }
        Ok(SolutionTrace {
            lambda: lam,
            y,
            y1,
            energy,
        })
    }

    /// Left-to-right shot keeping only the end values and `∫₀^π y²`.
    pub fn shoot(&self, lam: f64, a: f64, b: f64) -> Result<Shot> {
        let g = self.grid_size();
        let (mut y, mut y1) = (a, b);
        let mut trap = 0.5 * a * a;
        for i in 0..g {
            let m = self.propagator(i, lam, false);
            let yn = m[0] * y + m[1] * y1;
            y1 = m[2] * y + m[3] * y1;
            y = yn;
            trap += y * y;
        }
        trap -= 0.5 * y * y;
        if !(y.is_finite() && y1.is_finite()) {
            return Err(Error::NonFiniteState { lambda: lam });
        }
        let corr = self.h * self.h / 12.0 * (self.energy_slope(g, y, y1) - self.energy_slope(0, a, b));
        Ok(Shot {
            y,
            y1,
            energy: trap * self.h - corr,
        })
    }

    /// End values only, skipping the energy bookkeeping.
    pub fn shoot_end(&self, lam: f64, a: f64, b: f64) -> Result<(f64, f64)> {
        let (mut y, mut y1) = (a, b);
        for i in 0..self.grid_size() {
            let m = self.propagator(i, lam, false);
            let yn = m[0] * y + m[1] * y1;
            y1 = m[2] * y + m[3] * y1;
            y = yn;
        }
        if !(y.is_finite() && y1.is_finite()) {
            return Err(Error::NonFiniteState { lambda: lam });
        }
        Ok((y, y1))
    }
}

/// `(cosh √d, sinh √d / √d)`, continued analytically to `d ≤ 0`.
#[inline]
fn cosh_sinhc(d: f64) -> (f64, f64) {
    if d.abs() < 1e-6 {
        let d2 = d * d;
        (1.0 + d / 2.0 + d2 / 24.0 + d2 * d / 720.0, 1.0 + d / 6.0 + d2 / 120.0 + d2 * d / 5040.0)
    } else if d > 0.0 {
        let s = d.sqrt();
        (s.cosh(), s.sinh() / s)
    } else {
        let s = (-d).sqrt();
        let (sn, cs) = s.sin_cos();
        (cs, sn / s)
    }
}

/// One-off integration; builds a [`Stepper`] for `sigma`.
pub fn integrate(sigma: &MeanZeroFunction, lam: f64, x0: Endpoint, a: f64, b: f64) -> Result<SolutionTrace> {
    if a == 0.0 && b == 0.0 {
        return Err(Error::DomainViolation("zero initial data".into()));
    }
    Stepper::new(sigma).integrate(lam, x0, a, b)
}
