//! Rational Herglotz-Nevanlinna boundary functions
//!
//! `f(λ) = h0·λ + h + Σ δ_j / (h_j − λ)` with `h0 ≥ 0`, `δ_j > 0` and strictly
//! increasing poles, plus the symbol `∞`. Three views are kept in sync: the
//! pole/residue parameters, the normalized polynomial fraction `f↑ / f↓`, and
//! the coefficient vector `c(f)` used by the problem-space metric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// One pole term `δ / (h − λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pole {
    pub h: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HnRepr", into = "HnRepr")]
pub enum RationalHN {
    /// The Dirichlet symbol, index −1.
    Infinity,
    Finite { h0: f64, h: f64, poles: Vec<Pole> },
}

/// Normalized fraction `f = up / down`, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFraction {
    pub up: Poly,
    pub down: Poly,
}

impl PolyFraction {
    /// `f↑'·f↓ − f↑·f↓'`, which equals `f'(λ)·f↓(λ)²` away from poles and
    /// vanishes identically for `∞`.
    pub fn wronskian(&self, lam: f64) -> f64 {
        self.up.derivative().eval(lam) * self.down.eval(lam) - self.up.eval(lam) * self.down.derivative().eval(lam)
    }
}

/// The vector `c(f) ∈ R^{M+1}`; empty for `∞`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoeffVector(pub Vec<f64>);

impl CoeffVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &CoeffVector) -> f64 {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Which branch of the Θ-transform applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaCase {
    /// `τ = f(μ)`: index drops by one.
    Lower,
    /// `τ > f(μ)`: index rises by one.
    Raise,
}

const POLE_TOL: f64 = 1e-12;

impl RationalHN {
    pub fn finite(h0: f64, h: f64, poles: Vec<Pole>) -> Result<Self> {
        if !(h0.is_finite() && h.is_finite()) || h0 < 0.0 {
            return Err(Error::Malformed(format!("h0 = {h0}, h = {h}")));
        }
        for p in &poles {
            if !(p.delta > 0.0 && p.delta.is_finite() && p.h.is_finite()) {
                return Err(Error::Malformed(format!("pole {p:?}")));
            }
        }
        if poles.windows(2).any(|w| w[0].h >= w[1].h) {
            return Err(Error::Malformed("poles must be strictly increasing".into()));
        }
        Ok(RationalHN::Finite { h0, h, poles })
    }

    pub fn constant(h: f64) -> Self {
        RationalHN::Finite { h0: 0.0, h, poles: Vec::new() }
    }

    pub fn linear(h0: f64, h: f64) -> Result<Self> {
        Self::finite(h0, h, Vec::new())
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalHN::Infinity)
    }

    pub fn poles(&self) -> &[Pole] {
        match self {
            RationalHN::Infinity => &[],
            RationalHN::Finite { poles, .. } => poles,
        }
    }

    pub fn index(&self) -> i32 {
        match self {
            RationalHN::Infinity => -1,
            RationalHN::Finite { h0, poles, .. } => 2 * poles.len() as i32 + i32::from(*h0 > 0.0),
        }
    }

    pub fn evaluate(&self, lam: f64) -> Result<f64> {
        let RationalHN::Finite { h0, h, poles } = self else {
            return Err(Error::InfinityEvaluation);
        };
        let mut v = h0 * lam + h;
        for p in poles {
            let gap = p.h - lam;
            if gap.abs() <= POLE_TOL * (1.0 + p.h.abs()) {
                return Err(Error::PoleEvaluation { lambda: lam, pole: p.h });
            }
            v += p.delta / gap;
        }
        Ok(v)
    }

    pub fn derivative_value(&self, lam: f64) -> Result<f64> {
        let RationalHN::Finite { h0, poles, .. } = self else {
            return Err(Error::InfinityEvaluation);
        };
        let mut v = *h0;
        for p in poles {
            let gap = p.h - lam;
            if gap.abs() <= POLE_TOL * (1.0 + p.h.abs()) {
                return Err(Error::PoleEvaluation { lambda: lam, pole: p.h });
            }
            v += p.delta / (gap * gap);
        }
        Ok(v)
    }

    /// Smallest pole when `index ≥ 2`, `+∞` otherwise.
    pub fn first_pole(&self) -> f64 {
        self.poles().first().map_or(f64::INFINITY, |p| p.h)
    }

    pub fn to_fraction(&self) -> PolyFraction {
        match self {
            RationalHN::Infinity => PolyFraction {
                up: Poly::constant(-1.0),
                down: Poly::zero(),
            },
            RationalHN::Finite { h0, h, poles } => {
                let scale = if *h0 > 0.0 { 1.0 / h0 } else { 1.0 };
                let roots: Vec<f64> = poles.iter().map(|p| p.h).collect();
                let down = Poly::from_factors(scale, &roots);
                let mut up = Poly::new(vec![*h, *h0]).mul(&down);
                for (j, p) in poles.iter().enumerate() {
                    let others: Vec<f64> = roots.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &r)| r).collect();
                    up = up.add(&Poly::from_factors(scale * p.delta, &others));
                }
                let up_len = if *h0 > 0.0 { poles.len() + 2 } else { poles.len() + 1 };
                PolyFraction {
                    up: up.resized(up_len),
                    down,
                }
            }
        }
    }

    pub fn coeff_vector(&self) -> CoeffVector {
        let index = self.index();
        if index < 0 {
            return CoeffVector::default();
        }
        let d = self.poles().len();
        let frac = self.to_fraction();
        let a_len = if index % 2 == 0 { d } else { d + 1 };
        let mut c: Vec<f64> = frac.down.resized(d + 1).coeffs[..a_len].to_vec();
        c.extend_from_slice(&frac.up.resized(d + 1).coeffs[..d + 1]);
        CoeffVector(c)
    }

    /// Rebuild `f` of index `m` from `c(f)`.
    pub fn from_coeff_vector(m: i32, c: &CoeffVector) -> Result<Self> {
        if m < -1 {
            return Err(Error::InvalidCoefficients(format!("index {m}")));
        }
        if c.0.len() != (m + 1) as usize {
            return Err(Error::InvalidCoefficients(format!(
                "index {m} needs {} coefficients, got {}",
                m + 1,
                c.0.len()
            )));
        }
        if m == -1 {
            return Ok(RationalHN::Infinity);
        }
        let d = (m / 2) as usize;
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        let (down, up) = if m % 2 == 0 {
            let mut a = c.0[..d].to_vec();
            a.push(sign);
            (Poly::new(a), Poly::new(c.0[d..].to_vec()))
        } else {
            let mut b = c.0[d + 1..].to_vec();
            b.push(sign);
            (Poly::new(c.0[..d + 1].to_vec()), Poly::new(b))
        };
        Self::from_fraction(m, &PolyFraction { up, down }).map_err(|e| match e {
            Error::NotHerglotz(s) => Error::InvalidCoefficients(s),
            other => other,
        })
    }

    /// Recover pole/residue form from an (unnormalized) fraction of known index.
    pub fn from_fraction(m: i32, frac: &PolyFraction) -> Result<Self> {
        let scale = frac.up.max_abs().max(frac.down.max_abs());
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::NotHerglotz("degenerate fraction".into()));
        }
        let tol = 1e-9 * scale;
        if m == -1 {
            if frac.down.max_abs() > tol {
                return Err(Error::NotHerglotz(format!(
                    "expected ∞ but f↓ has size {:e}",
                    frac.down.max_abs()
                )));
            }
            return Ok(RationalHN::Infinity);
        }
        let d = (m / 2) as usize;
        let odd = m % 2 == 1;
        let up_len = if odd { d + 2 } else { d + 1 };
        check_truncation(&frac.down, d + 1, tol, "f↓")?;
        check_truncation(&frac.up, up_len, tol, "f↑")?;
        let down = frac.down.resized(d + 1);
        let up = frac.up.resized(up_len);
        if down.coeffs[d].abs() <= tol {
            return Err(Error::NotHerglotz(format!("f↓ has degree below {d}")));
        }
        if odd && up.coeffs[d + 1].abs() <= tol {
            return Err(Error::NotHerglotz(format!("f↑ has degree below {}", d + 1)));
        }
        let roots = down
            .real_simple_roots()
            .ok_or_else(|| Error::NotHerglotz("f↓ has complex or multiple roots".into()))?;
        let (h0, h) = if odd {
            let (q, _) = up.div_rem(&down);
            let q = q.resized(2);
            (q.coeffs[1], q.coeffs[0])
        } else {
            (0.0, up.coeffs[d] / down.coeffs[d])
        };
        if odd && h0 <= 0.0 {
            return Err(Error::NotHerglotz(format!("h0 = {h0}")));
        }
        let dd = down.derivative();
        let mut poles = Vec::with_capacity(d);
        for &r in &roots {
            let delta = -up.eval(r) / dd.eval(r);
            if !(delta > 0.0) {
                return Err(Error::NotHerglotz(format!("residue {delta:e} at pole {r}")));
            }
            poles.push(Pole { h: r, delta });
        }
        Self::finite(h0, h, poles)
    }

    /// Membership in `R_{M,Q,δ}`.
    pub fn in_r_mqdelta(&self, m: i32, q: f64, delta: f64) -> bool {
        if m == -1 {
            return self.is_infinity();
        }
        let RationalHN::Finite { h0, h, poles } = self else {
            return false;
        };
        if self.index() != m || h.abs() > q {
            return false;
        }
        if poles.iter().any(|p| p.delta < delta || p.delta > q) {
            return false;
        }
        if let (Some(first), Some(last)) = (poles.first(), poles.last()) {
            if first.h < 1.0 || last.h > q {
                return false;
            }
        }
        if poles.windows(2).any(|w| w[0].h + delta > w[1].h) {
            return false;
        }
        if m % 2 == 1 {
            (delta..=q).contains(h0)
        } else {
            *h0 == 0.0
        }
    }

    /// `f̂(λ) = (μ − λ) / (f(λ) − τ) + ρ`.
    ///
    /// Pass `case` when the caller knows which branch holds; otherwise `τ` is
    /// compared to `f(μ)` with tolerance `1e-10·(1+|τ|)`.
    pub fn theta_transform(&self, mu: f64, tau: f64, rho: f64, case: Option<ThetaCase>) -> Result<Self> {
        if !(mu < self.first_pole()) {
            return Err(Error::DomainViolation(format!(
                "Θ needs μ = {mu} below the first pole {}",
                self.first_pole()
            )));
        }
        let case = match (case, self) {
            (Some(c), _) => c,
            (None, RationalHN::Infinity) => ThetaCase::Raise,
            (None, _) => {
                let fmu = self.evaluate(mu)?;
                if (tau - fmu).abs() <= 1e-10 * (1.0 + tau.abs()) {
                    ThetaCase::Lower
                } else if tau > fmu {
                    ThetaCase::Raise
                } else {
                    return Err(Error::DomainViolation(format!("Θ needs τ = {tau} ≥ f(μ) = {fmu}")));
                }
            }
        };
        let PolyFraction { up, down } = self.to_fraction();
        // λ − μ + τρ
        let shift = Poly::new(vec![tau * rho - mu, 1.0]);
        match case {
            ThetaCase::Raise => {
                let new_up = up.scale(-rho).add(&shift.mul(&down));
                let new_down = up.scale(-1.0).add(&down.scale(tau));
                Self::from_fraction(self.index() + 1, &PolyFraction { up: new_up, down: new_down })
            }
            ThetaCase::Lower => {
                if self.is_infinity() {
                    return Err(Error::DomainViolation("Θ cannot lower the index of ∞".into()));
                }
                let num_down = up.sub(&down.scale(tau));
                let num_up = up.scale(rho).sub(&shift.mul(&down));
                let (q_down, r_down) = num_down.div_linear(mu);
                let (q_up, r_up) = num_up.div_linear(mu);
                // `f↑ ≡ 0` makes the exact remainder `−τ·f↓(μ)` with `τ` itself only
                // known to integration accuracy, so the scale keeps a floor of `f↓`.
                let scale_down = up.max_abs() + (1.0 + tau.abs()) * down.max_abs();
                let scale_up = rho.abs() * up.max_abs() + shift.max_abs() * down.max_abs();
                if r_down.abs() > 1e-8 * scale_down || r_up.abs() > 1e-8 * scale_up {
                    return Err(Error::DivisionRemainder {
                        mu,
                        remainder: r_down.abs().max(r_up.abs()),
                    });
                }
                Self::from_fraction(self.index() - 1, &PolyFraction { up: q_up, down: q_down })
            }
        }
    }
}

fn check_truncation(p: &Poly, keep: usize, tol: f64, name: &str) -> Result<()> {
    if let Some(extra) = p.coeffs.iter().skip(keep).find(|c| c.abs() > tol) {
        return Err(Error::NotHerglotz(format!("{name} has unexpected high-order coefficient {extra:e}")));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HnRepr {
    Symbol(String),
    Finite(FiniteRepr),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteRepr {
    #[serde(default)]
    h0: f64,
    #[serde(default)]
    h: f64,
    #[serde(default)]
    poles: Vec<Pole>,
}

impl TryFrom<HnRepr> for RationalHN {
    type Error = Error;

    fn try_from(r: HnRepr) -> Result<Self> {
        match r {
            HnRepr::Symbol(s) if s.eq_ignore_ascii_case("infinity") => Ok(RationalHN::Infinity),
            HnRepr::Symbol(s) => Err(Error::Parse(format!("unknown boundary symbol {s:?}"))),
            HnRepr::Finite(f) => RationalHN::finite(f.h0, f.h, f.poles),
        }
    }
}

impl From<RationalHN> for HnRepr {
    fn from(f: RationalHN) -> Self {
        match f {
            RationalHN::Infinity => HnRepr::Symbol("infinity".into()),
            RationalHN::Finite { h0, h, poles } => HnRepr::Finite(FiniteRepr { h0, h, poles }),
        }
    }
}

impl std::fmt::Display for RationalHN {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RationalHN::Infinity => write!(f, "∞"),
            RationalHN::Finite { h0, h, poles } => {
                write!(f, "{h0}·λ + {h}")?;
                for p in poles {
                    write!(f, " + {}/({} − λ)", p.delta, p.h)?;
                }
                Ok(())
            }
        }
    }
}
