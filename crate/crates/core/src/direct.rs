//! The direct map: problem `(σ, f, F)` to spectral data `{λₙ, γₙ}`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hn::{PolyFraction, RationalHN};
use crate::ode::{Endpoint, SolutionTrace, Stepper};
use crate::par;
use crate::roots::brent;
use crate::space::MeanZeroFunction;

/// A boundary value problem `(σ, f, F)`.
#[derive(Debug, Clone)]
pub struct Problem {
    sigma: MeanZeroFunction,
    f: RationalHN,
    big_f: RationalHN,
    stepper: Arc<Stepper>,
    frac_f: PolyFraction,
    frac_big_f: PolyFraction,
}

impl PartialEq for Problem {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.f == other.f && self.big_f == other.big_f
    }
}

/// Spectral data with the asymptotic class `(M, N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub m: i32,
    pub n: i32,
    pub lambda: Vec<f64>,
    pub gamma: Vec<f64>,
}

fn signed_sqrt(x: f64) -> f64 {
    x.abs().sqrt().copysign(x)
}

impl SpectralData {
    pub fn new(m: i32, n: i32, lambda: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        if lambda.len() != gamma.len() {
            return Err(Error::CharacterizationViolation(format!(
                "{} eigenvalues but {} norming constants",
                lambda.len(),
                gamma.len()
            )));
        }
        if m < -1 || n < -1 {
            return Err(Error::CharacterizationViolation(format!("indices ({m}, {n}) below −1")));
        }
        let s = SpectralData { m, n, lambda, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// `(M + N)/2`, the shift in `√λₙ ≈ n − (M+N)/2 − 1`.
    pub fn half_sum(&self) -> f64 {
        f64::from(self.m + self.n) / 2.0
    }

    /// Monotone eigenvalues, positive finite norming constants.
    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.lambda.iter().chain(&self.gamma).position(|v| !v.is_finite()) {
            return Err(Error::CharacterizationViolation(format!("non-finite datum at position {i}")));
        }
        if let Some(i) = self.lambda.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::CharacterizationViolation(format!(
                "λ_{} = {} ≥ λ_{} = {}",
                i + 1,
                self.lambda[i],
                i + 2,
                self.lambda[i + 1]
            )));
        }
        if let Some(i) = self.gamma.iter().position(|&g| g <= 0.0) {
            return Err(Error::CharacterizationViolation(format!("γ_{} = {} ≤ 0", i + 1, self.gamma[i])));
        }
        Ok(())
    }

    /// `κₙ = √λₙ − (n − (M+N)/2 − 1)`, with `√` odd-extended to negative `λ`.
    pub fn kappa(&self) -> Vec<f64> {
        let c = self.half_sum();
        self.lambda
            .iter()
            .enumerate()
            .map(|(i, &l)| signed_sqrt(l) - ((i + 1) as f64 - c - 1.0))
            .collect()
    }

    /// `βₙ = 2γₙ / (π n^{2M}) − 1`.
    pub fn beta(&self) -> Vec<f64> {
        self.gamma
            .iter()
            .enumerate()
            .map(|(i, &g)| 2.0 * g / (std::f64::consts::PI * ((i + 1) as f64).powi(2 * self.m)) - 1.0)
            .collect()
    }

    pub fn truncated(&self, len: usize) -> SpectralData {
        let len = len.min(self.len());
        SpectralData {
            m: self.m,
            n: self.n,
            lambda: self.lambda[..len].to_vec(),
            gamma: self.gamma[..len].to_vec(),
        }
    }
}

/// `(κₙ)`, `(βₙ)`
pub fn remainders(s: &SpectralData) -> (Vec<f64>, Vec<f64>) {
    (s.kappa(), s.beta())
}

/// Extend the first `m` pairs by the unperturbed values
/// `λ = (n − (M+N)/2 − 1)²`, `γ = (π/2)n^{2M}` up to `n_max` pairs.
pub fn complete_finite_data(lambda: &[f64], gamma: &[f64], m: i32, n: i32, n_max: usize) -> SpectralData {
    let c = f64::from(m + n) / 2.0;
    let head = lambda.len().min(gamma.len());
    let total = n_max.max(head);
    let mut lam = lambda[..head].to_vec();
    let mut gam = gamma[..head].to_vec();
    for k in head + 1..=total {
        let s = k as f64 - c - 1.0;
        lam.push(s * s.abs());
        gam.push(std::f64::consts::FRAC_PI_2 * (k as f64).powi(2 * m));
    }
    SpectralData {
        m,
        n,
        lambda: lam,
        gamma: gam,
    }
}

fn residue_bound(f: &RationalHN) -> f64 {
    match f {
        RationalHN::Infinity => 0.0,
        RationalHN::Finite { h, poles, .. } => h.abs() + poles.iter().map(|p| p.delta).sum::<f64>(),
    }
}

const SCAN_DS: f64 = 0.05;
const SCAN_DL: f64 = 0.1;

impl Problem {
    pub fn new(sigma: MeanZeroFunction, f: RationalHN, big_f: RationalHN) -> Self {
        let stepper = Arc::new(Stepper::new(&sigma));
        let frac_f = f.to_fraction();
        let frac_big_f = big_f.to_fraction();
        Problem {
            sigma,
            f,
            big_f,
            stepper,
            frac_f,
            frac_big_f,
        }
    }

    pub fn sigma(&self) -> &MeanZeroFunction {
        &self.sigma
    }

    pub fn f(&self) -> &RationalHN {
        &self.f
    }

    #[allow(non_snake_case)]
    pub fn F(&self) -> &RationalHN {
        &self.big_f
    }

    pub fn indices(&self) -> (i32, i32) {
        (self.f.index(), self.big_f.index())
    }

    pub fn grid_size(&self) -> usize {
        self.sigma.grid_size()
    }

    pub fn resampled(&self, grid: usize) -> Result<Problem> {
        Ok(Problem::new(self.sigma.resample(grid)?, self.f.clone(), self.big_f.clone()))
    }

    fn left_data(&self, lam: f64) -> (f64, f64) {
        (self.frac_f.down.eval(lam), -self.frac_f.up.eval(lam))
    }

    pub fn phi(&self, lam: f64) -> Result<SolutionTrace> {
        let (a, b) = self.left_data(lam);
        self.stepper.integrate(lam, Endpoint::Left, a, b)
    }

    pub fn psi(&self, lam: f64) -> Result<SolutionTrace> {
        let a = self.frac_big_f.down.eval(lam);
        let b = self.frac_big_f.up.eval(lam);
        self.stepper.integrate(lam, Endpoint::Right, a, b)
    }

    /// Solution with `z(0) = 1`, `z^{[1]}(0) = −ρ`.
    pub fn z(&self, lam: f64, rho: f64) -> Result<SolutionTrace> {
        self.stepper.integrate(lam, Endpoint::Left, 1.0, -rho)
    }

    /// `χ(λ) = F↑(λ)φ(π,λ) − F↓(λ)φ^{[1]}(π,λ)`
    pub fn char_fn(&self, lam: f64) -> Result<f64> {
        let (a, b) = self.left_data(lam);
        let (y, y1) = self.stepper.shoot_end(lam, a, b)?;
        Ok(self.frac_big_f.up.eval(lam) * y - self.frac_big_f.down.eval(lam) * y1)
    }

    /// Lowest point of the eigenvalue scan.
    fn lambda_floor(&self) -> f64 {
        let b = 2.0 + self.sigma.sup_norm() + residue_bound(&self.f) + residue_bound(&self.big_f);
        let pole = self.f.first_pole().min(self.big_f.first_pole());
        (-b * b).min(pole - 2.0) - 10.0
    }

    /// The first `n_max` eigenvalues, increasing.
    pub fn eigenvalues(&self, n_max: usize) -> Result<Vec<f64>> {
        if n_max == 0 {
            return Err(Error::DomainViolation("n_max must be at least 1".into()));
        }
        // A small `h0` pushes the low eigenvalues away from their asymptotic
        // positions, so a miscount may mean the window was too short rather
        // than that a root hid between samples. Try both before giving up.
        let mut missed = None;
        for extra in [0, 2, 6, 14, 30] {
            for refine in [1.0, 4.0] {
                match self.scan(n_max + extra, refine) {
                    Ok(mut roots) => {
                        roots.truncate(n_max);
                        return Ok(roots);
                    }
                    Err(e @ Error::MissedEigenvalue { .. }) => missed = Some(e),
                    Err(e) => return Err(e),
                }
            }
        }
        Err(missed.expect("at least one scan ran"))
    }

    fn scan(&self, n_max: usize, refine: f64) -> Result<Vec<f64>> {
        let c = f64::from(self.f.index() + self.big_f.index()) / 2.0;
        // s_top sits halfway between two asymptotic eigenvalue positions
        let mut s_top = n_max as f64 - c + 2.5;
        let mut expected = n_max + 3;
        while s_top < 3.0 {
            s_top += 1.0;
            expected += 1;
        }
        let floor = self.lambda_floor() * refine;
        let (ds, dl) = (SCAN_DS / refine, SCAN_DL / refine);

        let mut samples = Vec::new();
        let t_top = (-floor).sqrt();
        let t_count = ((t_top - 10f64.sqrt()) / ds).ceil() as usize;
        for i in 0..t_count {
            let t = t_top - i as f64 * ds;
            samples.push(-t * t);
        }
        let l_count = (11.0 / dl).round() as usize;
        for i in 0..=l_count {
            samples.push(-10.0 + i as f64 * dl);
        }
        let s_count = ((s_top - 1.0) / ds).ceil() as usize;
        for i in 1..=s_count {
            let s = (1.0 + i as f64 * ds).min(s_top);
            samples.push(s * s);
        }

        let values = par::map(&samples, |&l| self.char_fn(l));
        let values: Vec<f64> = values.into_iter().collect::<Result<_>>()?;

        let mut brackets = Vec::new();
        let mut exact = Vec::new();
        for i in 0..samples.len() {
            if values[i] == 0.0 {
                exact.push(samples[i]);
            } else if i + 1 < samples.len() && values[i] * values[i + 1] < 0.0 {
                brackets.push(i);
            }
        }
        let mut intervals: Vec<(f64, f64, f64, f64)> = brackets
            .iter()
            .map(|&i| (samples[i], samples[i + 1], values[i], values[i + 1]))
            .collect();
        // A dip of |χ| between samples of one sign can hide two close roots.
        let dips: Vec<usize> = (1..samples.len().saturating_sub(1))
            .filter(|&i| {
                values[i - 1] * values[i] > 0.0
                    && values[i] * values[i + 1] > 0.0
                    && values[i].abs() < values[i - 1].abs()
                    && values[i].abs() < values[i + 1].abs()
            })
            .collect();
        for found in par::map(&dips, |&i| self.split_dip(samples[i - 1], samples[i + 1], values[i].signum())) {
            if let Some((x, v)) = found? {
                let (a, b) = samples
                    .windows(2)
                    .zip(values.windows(2))
                    .filter(|(w, _)| w[0] <= x && x <= w[1])
                    .map(|(w, f)| ((w[0], f[0]), (w[1], f[1])))
                    .next()
                    .expect("dip lies inside the scan");
                intervals.push((a.0, x, a.1, v));
                intervals.push((x, b.0, v, b.1));
            }
        }
        let refined = par::map(&intervals, |&(a, b, fa, fb)| {
            brent(|l| self.char_fn(l), a, b, fa, fb, |x| 4.0 * f64::EPSILON * (1.0 + x.abs()))
        });
        let mut roots: Vec<f64> = refined.into_iter().collect::<Result<_>>()?;
        roots.extend(exact);
        roots.sort_by(|a, b| a.total_cmp(b));
        if roots.len() != expected {
            return Err(Error::MissedEigenvalue {
                found: roots.len(),
                expected,
            });
        }
        Ok(roots)
    }

    /// Golden-section search for a point in `[a, b]` where `χ` has the sign
    /// opposite to `sign`; `None` when the dip does not cross zero.
    fn split_dip(&self, mut a: f64, mut b: f64, sign: f64) -> Result<Option<(f64, f64)>> {
        const R: f64 = 0.618_033_988_749_894_8;
        let g = |l: f64| self.char_fn(l).map(|v| v * sign);
        let mut x1 = b - R * (b - a);
        let mut x2 = a + R * (b - a);
        let (mut g1, mut g2) = (g(x1)?, g(x2)?);
        while b - a > 1e-14 * (1.0 + a.abs()) {
            if g1 < 0.0 {
                return Ok(Some((x1, g1 * sign)));
            }
            if g2 < 0.0 {
                return Ok(Some((x2, g2 * sign)));
            }
            if g1 < g2 {
                b = x2;
                x2 = x1;
                g2 = g1;
                x1 = b - R * (b - a);
                g1 = g(x1)?;
            } else {
                a = x1;
                x1 = x2;
                g1 = g2;
                x2 = a + R * (b - a);
                g2 = g(x2)?;
            }
        }
        Ok(None)
    }

    /// Re-locate eigenvalues close to `guesses` (from a nearby problem),
    /// falling back to a full scan when the sign pattern is not clean.
    pub fn eigenvalues_near(&self, guesses: &[f64]) -> Result<Vec<f64>> {
        let n = guesses.len();
        if n < 2 {
            return self.eigenvalues(n.max(1));
        }
        let mut fences = Vec::with_capacity(n + 1);
        fences.push(guesses[0] - 0.5 * (guesses[1] - guesses[0]));
        for w in guesses.windows(2) {
            fences.push(0.5 * (w[0] + w[1]));
        }
        fences.push(guesses[n - 1] + 0.5 * (guesses[n - 1] - guesses[n - 2]));
        let mut probes = vec![self.lambda_floor()];
        probes.extend(&fences);
        let vals: Vec<f64> = par::map(&probes, |&l| self.char_fn(l)).into_iter().collect::<Result<_>>()?;
        // nothing below the first fence, then one sign change per gap
        let clean = vals[0] * vals[1] > 0.0 && vals[1..].windows(2).all(|w| w[0] * w[1] < 0.0);
        if !clean {
            return self.eigenvalues(n);
        }
        let idx: Vec<usize> = (0..n).collect();
        par::map(&idx, |&i| {
            brent(
                |l| self.char_fn(l),
                fences[i],
                fences[i + 1],
                vals[i + 1],
                vals[i + 2],
                |x| 4.0 * f64::EPSILON * (1.0 + x.abs()),
            )
        })
        .into_iter()
        .collect()
    }

    /// `γ = ∫φ² + f′(λ)φ(0)² + F′(λ)φ(π)²` at an eigenvalue.
    pub fn norming_constant(&self, lam: f64) -> Result<f64> {
        let (a, b) = self.left_data(lam);
        let shot = self.stepper.shoot(lam, a, b)?;
        let (fu, fd) = (self.frac_big_f.up.eval(lam), self.frac_big_f.down.eval(lam));
        let chi = fu * shot.y - fd * shot.y1;
        let scale = (fu.abs() + fd.abs()) * (shot.y.abs() + shot.y1.abs());
        if chi.abs() > 1e-6 * scale {
            return Err(Error::NotAnEigenvalue {
                lambda: lam,
                residual: chi.abs(),
            });
        }
        // φ(0) = f↓, so f′φ(0)² is the fraction Wronskian; at π, (φ, φ^{[1]}) = c·(F↓, F↑)
        let left = self.frac_f.wronskian(lam);
        let c = (shot.y * fd + shot.y1 * fu) / (fd * fd + fu * fu);
        let right = c * c * self.frac_big_f.wronskian(lam);
        let gamma = shot.energy + left + right;
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::NonPositive(gamma));
        }
        Ok(gamma)
    }

    pub fn spectral_data(&self, n_max: usize) -> Result<SpectralData> {
        let lambda = self.eigenvalues(n_max)?;
        self.assemble(lambda)
    }

    /// Spectral data seeded from eigenvalue guesses of a nearby problem.
    pub fn spectral_data_near(&self, guesses: &[f64]) -> Result<SpectralData> {
        let lambda = self.eigenvalues_near(guesses)?;
        self.assemble(lambda)
    }

    fn assemble(&self, lambda: Vec<f64>) -> Result<SpectralData> {
        let gamma = par::map(&lambda, |&l| self.norming_constant(l))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        Ok(SpectralData {
            m: self.f.index(),
            n: self.big_f.index(),
            lambda,
            gamma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn zero_sigma() -> MeanZeroFunction {
        MeanZeroFunction::zero(2048)
    }

    fn dirichlet() -> Problem {
        Problem::new(zero_sigma(), RationalHN::Infinity, RationalHN::Infinity)
    }

    fn neumann() -> Problem {
        Problem::new(zero_sigma(), RationalHN::constant(0.0), RationalHN::constant(0.0))
    }

    #[test]
    fn phi_examples() {
        let h = PI / 2048.0;
        let p = dirichlet();
        let t = p.phi(2.0).unwrap();
        for i in (0..=2048).step_by(64) {
            let x = i as f64 * h;
            assert!((t.y[i] - (2f64.sqrt() * x).sin() / 2f64.sqrt()).abs() < 1e-12);
        }
        let t = neumann().phi(3.0).unwrap();
        for i in (0..=2048).step_by(64) {
            assert!((t.y[i] - (3f64.sqrt() * i as f64 * h).cos()).abs() < 1e-12);
        }
        let p = Problem::new(zero_sigma(), RationalHN::linear(1.0, 0.0).unwrap(), RationalHN::Infinity);
        let t = p.phi(1.0).unwrap();
        for i in (0..=2048).step_by(64) {
            let x = i as f64 * h;
            assert!((t.y[i] - (x.cos() - x.sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn psi_and_z_examples() {
        let h = PI / 2048.0;
        let t = dirichlet().psi(0.0).unwrap();
        for i in (0..=2048).step_by(64) {
            assert!((t.y[i] - (PI - i as f64 * h)).abs() < 1e-12);
        }
        let p = dirichlet();
        assert!(p.z(0.0, 0.0).unwrap().y.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let t = p.z(0.0, -1.0).unwrap();
        for i in (0..=2048).step_by(64) {
            assert!((t.y[i] - (1.0 + i as f64 * h)).abs() < 1e-12);
        }
    }

    #[test]
    fn char_fn_examples() {
        let p = dirichlet();
        assert!(p.char_fn(4.0).unwrap().abs() < 1e-12);
        let chi2 = p.char_fn(2.0).unwrap();
        let exact = -(2f64.sqrt() * PI).sin() / 2f64.sqrt();
        assert!((chi2 - exact).abs() < 1e-12);
        assert!((chi2 - 0.6816).abs() < 1e-4);
        assert!(neumann().char_fn(1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = dirichlet().eigenvalues(3).unwrap();
        for (a, b) in ev.iter().zip([1.0, 4.0, 9.0]) {
            assert!((a - b).abs() < 1e-10);
        }
        let ev = neumann().eigenvalues(3).unwrap();
        for (a, b) in ev.iter().zip([0.0, 1.0, 4.0]) {
            assert!((a - b).abs() < 1e-10, "{ev:?}");
        }
        // cot(πs) = s oracle
        let g = |s: f64| Ok((PI * s).cos() - s * (PI * s).sin());
        let s = brent(g, 0.1, 0.49, g(0.1).unwrap(), g(0.49).unwrap(), |_| 1e-16).unwrap();
        let p = Problem::new(zero_sigma(), RationalHN::linear(1.0, 0.0).unwrap(), RationalHN::Infinity);
        let l1 = p.eigenvalues(1).unwrap()[0];
        assert!((l1 - s * s).abs() < 1e-10, "{l1} vs {}", s * s);
        assert!((l1 - 0.147).abs() < 1e-3);
    }

    #[test]
    fn negative_robin_eigenvalue_found() {
        // f ≡ 3 pushes one eigenvalue below zero
        let p = Problem::new(zero_sigma(), RationalHN::constant(3.0), RationalHN::Infinity);
        let ev = p.eigenvalues(2).unwrap();
        // φ = cosh(tx) − 3 sinh(tx)/t vanishes at π: tanh(tπ) = t/3
        let g = |t: f64| Ok((t * PI).tanh() - t / 3.0);
        let t = brent(g, 1.0, 5.0, g(1.0).unwrap(), g(5.0).unwrap(), |_| 1e-16).unwrap();
        assert!((ev[0] + t * t).abs() < 1e-9, "{ev:?}");
        assert!(ev[1] > 0.0);
    }

    #[test]
    fn norming_constant_examples() {
        assert!((dirichlet().norming_constant(4.0).unwrap() - PI / 8.0).abs() < 1e-12);
        assert!((neumann().norming_constant(0.0).unwrap() - PI).abs() < 1e-12);
        assert!((neumann().norming_constant(1.0).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!(matches!(dirichlet().norming_constant(2.0), Err(Error::NotAnEigenvalue { .. })));
    }

    #[test]
    fn norming_constant_with_boundary_terms() {
        // f(λ) = λ: γ = ∫φ² + φ(0)², cross-checked against direct quadrature
        let p = Problem::new(zero_sigma(), RationalHN::linear(1.0, 0.0).unwrap(), RationalHN::linear(0.5, 1.0).unwrap());
        let sd = p.spectral_data(4).unwrap();
        for (&l, &g) in sd.lambda.iter().zip(&sd.gamma) {
            let t = p.phi(l).unwrap();
            let phi_pi = t.y[2048];
            let expected = t.total_energy() + 1.0 + 0.5 * phi_pi * phi_pi;
            assert!((g - expected).abs() < 1e-11 * expected);
        }
    }

    #[test]
    fn spectral_data_examples() {
        let sd = dirichlet().spectral_data(10).unwrap();
        assert!(sd.kappa().iter().all(|k| k.abs() < 1e-10));
        assert!(sd.beta().iter().all(|b| b.abs() < 1e-10));
        let sd = neumann().spectral_data(10).unwrap();
        assert!(sd.kappa().iter().all(|k| k.abs() < 1e-10));
        let b = sd.beta();
        assert!((b[0] - 1.0).abs() < 1e-10 && b[1..].iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn cosine_sigma_matches_fine_grid_oracle() {
        // values frozen from a G = 16384 run
        let sigma = MeanZeroFunction::from_fn(2048, f64::cos).unwrap();
        let p = Problem::new(sigma, RationalHN::Infinity, RationalHN::Infinity);
        let k = p.spectral_data(8).unwrap().kappa();
        let oracle = COSINE_KAPPA;
        for (a, b) in k.iter().zip(oracle) {
            assert!((a - b).abs() < 1e-10, "{k:?}");
        }
        assert!(k[7].abs() < k[0].abs());
    }

    const COSINE_KAPPA: [f64; 8] = [
        -0.6157604333883093,
        -0.1785218672894655,
        -0.11103598183164287,
        -0.08155058301025031,
        -0.06464845695808386,
        -0.05361535067053058,
        -0.045825162717545,
        -0.040023622463661646,
    ];

    #[test]
    fn eigenvalues_near_agrees_with_scan() {
        let sigma = MeanZeroFunction::from_fn(2048, |x| 0.3 * x.cos()).unwrap();
        let p = Problem::new(sigma, RationalHN::constant(0.2), RationalHN::linear(1.0, 0.5).unwrap());
        let full = p.eigenvalues(12).unwrap();
        let shifted: Vec<f64> = full.iter().map(|l| l + 0.05).collect();
        let near = p.eigenvalues_near(&shifted).unwrap();
        for (a, b) in full.iter().zip(&near) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn completion_examples() {
        let d = complete_finite_data(&[], &[], -1, -1, 5);
        assert_eq!(d.lambda, vec![1.0, 4.0, 9.0, 16.0, 25.0]);
        for (i, g) in d.gamma.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((g - PI / (2.0 * n * n)).abs() < 1e-15);
        }
        let d2 = complete_finite_data(&[1.1, 3.9], &[1.6, 0.4], -1, -1, 5);
        assert_eq!(d2.lambda[2..], d.lambda[2..]);
        assert_eq!(d2.gamma[2..], d.gamma[2..]);
    }
}
