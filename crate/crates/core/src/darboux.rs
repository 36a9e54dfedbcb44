//! Darboux-type transforms that add, remove or trade eigenvalues and boundary
//! index, on both the problem side and the spectral-data side.

use std::f64::consts::PI;

use crate::direct::{Problem, SpectralData};
use crate::error::{Error, Result};
use crate::hn::ThetaCase;
use crate::ode::SolutionTrace;
use crate::space::MeanZeroFunction;

/// Result of the general transform, with the mean of `σ̂` before re-projection.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub problem: Problem,
    pub mean_before_cleanup: f64,
}

/// `𝒯(P, Λ, v)`; the Θ branches are classified numerically.
pub fn darboux(p: &Problem, lambda: f64, v: &SolutionTrace) -> Result<Problem> {
    Ok(darboux_with(p, lambda, v, None)?.problem)
}

/// `𝒯(P, Λ, v)` with the Θ branches for `(f, F)` fixed by the caller.
pub fn darboux_with(
    p: &Problem,
    lambda: f64,
    v: &SolutionTrace,
    cases: Option<(ThetaCase, ThetaCase)>,
) -> Result<Transformed> {
    let g = v.grid_size();
    if g != p.grid_size() {
        return Err(Error::GridMismatch(g, p.grid_size()));
    }
    let (min, max) = v
        .y
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), y| (lo.min(y.abs()), hi.max(y.abs())));
    if !(min > 1e-10 * max) {
        return Err(Error::VanishingEigenfunction { min, max });
    }
    let ratio = v.y[g] / v.y[0];
    if !(ratio > 0.0) {
        return Err(Error::SignInconsistency(ratio));
    }
    let log_term = 2.0 / PI * ratio.ln();

    let raw: Vec<f64> = p
        .sigma()
        .values()
        .iter()
        .zip(v.y.iter().zip(&v.y1))
        .map(|(s, (y, w))| -s - 2.0 * w / y + log_term)
        .collect();
    let mean_before_cleanup = crate::space::simpson(&raw) / PI;
    let sigma = MeanZeroFunction::project(raw)?;

    let tau_f = -v.y1[0] / v.y[0];
    let tau_big_f = v.y1[g] / v.y[g];
    let (case_f, case_big_f) = match cases {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let f = p.f().theta_transform(lambda, tau_f, tau_f + log_term, case_f)?;
    let big_f = p.F().theta_transform(lambda, tau_big_f, tau_big_f - log_term, case_big_f)?;
    Ok(Transformed {
        problem: Problem::new(sigma, f, big_f),
        mean_before_cleanup,
    })
}

fn lambda1(p: &Problem) -> Result<f64> {
    Ok(p.eigenvalues(1)?[0])
}

/// Removes `λ₁`; both indices drop by one.
pub fn t_minus(p: &Problem) -> Result<Problem> {
    let (m, n) = p.indices();
    if m < 0 || n < 0 {
        return Err(Error::DomainViolation(format!("T₋ needs f, F ≠ ∞, got indices ({m}, {n})")));
    }
    let l1 = lambda1(p)?;
    Ok(darboux_with(p, l1, &p.phi(l1)?, Some((ThetaCase::Lower, ThetaCase::Lower)))?.problem)
}

/// Isospectral; moves one unit of index from `f` to `F`.
pub fn t_minus_plus(p: &Problem) -> Result<Problem> {
    if p.f().is_infinity() {
        return Err(Error::DomainViolation("T₋₊ needs f ≠ ∞".into()));
    }
    let mu = lambda1(p)? - 2.0;
    Ok(darboux_with(p, mu, &p.phi(mu)?, Some((ThetaCase::Lower, ThetaCase::Raise)))?.problem)
}

/// Isospectral; moves one unit of index from `F` to `f`.
pub fn t_plus_minus(p: &Problem) -> Result<Problem> {
    if p.F().is_infinity() {
        return Err(Error::DomainViolation("T₊₋ needs F ≠ ∞".into()));
    }
    let mu = lambda1(p)? - 2.0;
    Ok(darboux_with(p, mu, &p.psi(mu)?, Some((ThetaCase::Raise, ThetaCase::Lower)))?.problem)
}

/// Adds the eigenvalue `μ` with norming constant `ν`; both indices rise by one.
///
/// The seed solution `z(·, μ, ρ)` is taken at level `μ`, which is what makes
/// `μ` an eigenvalue of the result.
pub fn t_plus(mu: f64, nu: f64, p: &Problem) -> Result<Problem> {
    if !(nu > 0.0) {
        return Err(Error::DomainViolation(format!("T₊ needs ν > 0, got {nu}")));
    }
    let l1 = lambda1(p)?;
    if !(mu < l1) {
        return Err(Error::DomainViolation(format!("T₊ needs μ = {mu} < λ₁ = {l1}")));
    }
    let psi = p.psi(mu)?;
    let kappa = -psi.y1[0] / psi.y[0];
    let frac = p.f().to_fraction();
    let (up, down) = (frac.up.eval(mu), frac.down.eval(mu));
    let k = kappa * down - up;
    let num = nu * kappa + up * k;
    let den = nu + down * k;
    if den.abs() <= 1e-14 * (nu.abs() + (down * k).abs()) {
        return Err(Error::ZeroDenominator { mu, nu });
    }
    let rho = num / den;
    Ok(darboux_with(p, mu, &p.z(mu, rho)?, Some((ThetaCase::Raise, ThetaCase::Raise)))?.problem)
}

fn first(s: &SpectralData) -> Result<f64> {
    s.lambda
        .first()
        .copied()
        .ok_or_else(|| Error::DomainViolation("empty spectral data".into()))
}

/// `{λₙ, γₙ/(λₙ − λ₁)}_{n≥2}`
pub fn data_t_minus(s: &SpectralData) -> Result<SpectralData> {
    if s.m < 0 || s.n < 0 {
        return Err(Error::DomainViolation(format!("T₋ needs M, N ≥ 0, got ({}, {})", s.m, s.n)));
    }
    let l1 = first(s)?;
    Ok(SpectralData {
        m: s.m - 1,
        n: s.n - 1,
        lambda: s.lambda[1..].to_vec(),
        gamma: s.lambda[1..].iter().zip(&s.gamma[1..]).map(|(l, g)| g / (l - l1)).collect(),
    })
}

/// `{λₙ, γₙ/(λₙ − λ₁ + 2)}`
pub fn data_t_minus_plus(s: &SpectralData) -> Result<SpectralData> {
    if s.m < 0 {
        return Err(Error::DomainViolation("T₋₊ needs M ≥ 0".into()));
    }
    let l1 = first(s)?;
    Ok(SpectralData {
        m: s.m - 1,
        n: s.n + 1,
        lambda: s.lambda.clone(),
        gamma: s.lambda.iter().zip(&s.gamma).map(|(l, g)| g / (l - l1 + 2.0)).collect(),
    })
}

/// `{λₙ, γₙ(λₙ − λ₁ + 2)}`
pub fn data_t_plus_minus(s: &SpectralData) -> Result<SpectralData> {
    if s.n < 0 {
        return Err(Error::DomainViolation("T₊₋ needs N ≥ 0".into()));
    }
    let l1 = first(s)?;
    Ok(SpectralData {
        m: s.m + 1,
        n: s.n - 1,
        lambda: s.lambda.clone(),
        gamma: s.lambda.iter().zip(&s.gamma).map(|(l, g)| g * (l - l1 + 2.0)).collect(),
    })
}

/// `{(μ, ν)} ∪ {λₙ, γₙ(λₙ − μ)}`
pub fn data_t_plus(mu: f64, nu: f64, s: &SpectralData) -> Result<SpectralData> {
    let l1 = first(s)?;
    if !(mu < l1 && nu > 0.0) {
        return Err(Error::DomainViolation(format!("T₊ needs μ < λ₁ = {l1} and ν > 0, got ({mu}, {nu})")));
    }
    let mut lambda = vec![mu];
    lambda.extend(&s.lambda);
    let mut gamma = vec![nu];
    gamma.extend(s.lambda.iter().zip(&s.gamma).map(|(l, g)| g * (l - mu)));
    Ok(SpectralData {
        m: s.m + 1,
        n: s.n + 1,
        lambda,
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hn::RationalHN;

    const G: usize = 2048;

    fn problem(sigma: impl Fn(f64) -> f64, f: RationalHN, big_f: RationalHN) -> Problem {
        Problem::new(MeanZeroFunction::from_fn(G, sigma).unwrap(), f, big_f)
    }

    fn neumann() -> Problem {
        problem(|_| 0.0, RationalHN::constant(0.0), RationalHN::constant(0.0))
    }

    fn dirichlet() -> Problem {
        problem(|_| 0.0, RationalHN::Infinity, RationalHN::Infinity)
    }

    fn d0(a: &Problem, b: &Problem) -> f64 {
        a.sigma().sub(b.sigma()).unwrap().sobolev_norm(0.0)
            + a.f().coeff_vector().distance(&b.f().coeff_vector())
            + a.F().coeff_vector().distance(&b.F().coeff_vector())
    }

    #[test]
    fn neumann_to_dirichlet() {
        let p = neumann();
        let v = p.phi(0.0).unwrap();
        let out = darboux_with(&p, 0.0, &v, None).unwrap();
        assert!(out.problem.sigma().sup_norm() < 1e-13);
        assert!(out.problem.f().is_infinity() && out.problem.F().is_infinity());
        assert_eq!(t_minus(&p).unwrap().indices(), (-1, -1));
    }

    #[test]
    fn unit_solution_negates_sigma() {
        let p = problem(f64::cos, RationalHN::constant(0.0), RationalHN::constant(0.0));
        let v = SolutionTrace {
            lambda: 0.0,
            y: vec![1.0; G + 1],
            y1: vec![0.0; G + 1],
            energy: vec![0.0; G + 1],
        };
        let out = darboux_with(&p, 0.0, &v, None).unwrap();
        for (a, b) in out.problem.sigma().values().iter().zip(p.sigma().values()) {
            assert!((a + b).abs() < 1e-14);
        }
    }

    #[test]
    fn t_plus_dirichlet_to_neumann() {
        let q = t_plus(0.0, PI, &dirichlet()).unwrap();
        assert!(q.sigma().sup_norm() < 1e-12);
        for f in [q.f(), q.F()] {
            let RationalHN::Finite { h0, h, poles } = f else { panic!() };
            assert!(*h0 == 0.0 && h.abs() < 1e-12 && poles.is_empty());
        }
    }

    #[test]
    fn round_trips_and_indices() {
        let p = problem(
            |x| 0.4 * x.cos() - 0.2 * (2.0 * x).sin(),
            RationalHN::linear(0.5, 1.0).unwrap(),
            RationalHN::constant(-0.3),
        );
        let sd = p.spectral_data(2).unwrap();
        let tm = darboux_with(&p, sd.lambda[0], &p.phi(sd.lambda[0]).unwrap(), None).unwrap();
        assert!(tm.mean_before_cleanup.abs() < 1e-6);
        let down = t_minus(&p).unwrap();
        assert_eq!(down.indices(), (0, -1));
        let back = t_plus(sd.lambda[0], sd.gamma[0], &down).unwrap();
        assert_eq!(back.indices(), (1, 0));
        assert!(d0(&back, &p) < 1e-6, "{}", d0(&back, &p));

        let mp = t_minus_plus(&p).unwrap();
        assert_eq!(mp.indices(), (0, 1));
        let pm = t_plus_minus(&mp).unwrap();
        assert!(d0(&pm, &p) < 1e-6, "{}", d0(&pm, &p));
    }

    #[test]
    fn domains() {
        assert!(matches!(t_minus(&dirichlet()), Err(Error::DomainViolation(_))));
        assert!(matches!(t_minus_plus(&dirichlet()), Err(Error::DomainViolation(_))));
        assert!(matches!(t_plus_minus(&dirichlet()), Err(Error::DomainViolation(_))));
        assert!(matches!(t_plus(1.5, 1.0, &dirichlet()), Err(Error::DomainViolation(_))));
        assert!(matches!(t_plus(0.0, -1.0, &dirichlet()), Err(Error::DomainViolation(_))));
    }

    #[test]
    fn vanishing_solution_rejected() {
        let p = dirichlet();
        let v = p.phi(1.0).unwrap();
        assert!(matches!(darboux(&p, 1.0, &v), Err(Error::VanishingEigenfunction { .. })));
    }

    fn neumann_data(n: usize) -> SpectralData {
        let mut lambda = vec![0.0];
        let mut gamma = vec![PI];
        for k in 1..n {
            lambda.push((k * k) as f64);
            gamma.push(PI / 2.0);
        }
        SpectralData { m: 0, n: 0, lambda, gamma }
    }

    #[test]
    fn data_maps() {
        let d = data_t_minus(&neumann_data(6)).unwrap();
        assert_eq!((d.m, d.n), (-1, -1));
        for (i, (l, g)) in d.lambda.iter().zip(&d.gamma).enumerate() {
            let n = (i + 1) as f64;
            assert_eq!(*l, n * n);
            assert!((g - PI / (2.0 * n * n)).abs() < 1e-15);
        }
        let back = data_t_plus(0.0, PI, &d).unwrap();
        let nd = neumann_data(6);
        assert_eq!(back.lambda, nd.lambda);
        for (a, b) in back.gamma.iter().zip(&nd.gamma) {
            assert!((a - b).abs() < 1e-15);
        }
        let s = SpectralData {
            m: 1,
            n: 0,
            lambda: vec![0.5, 2.0, 7.0],
            gamma: vec![1.0, 2.0, 3.0],
        };
        let round = data_t_plus_minus(&data_t_minus_plus(&s).unwrap()).unwrap();
        assert_eq!((round.m, round.n), (1, 0));
        for (a, b) in round.gamma.iter().zip(&s.gamma) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(data_t_minus(&d).is_err());
    }
}
