//! Distances between problems and between spectral data, set membership,
//! and sampled Lipschitz ratios of the direct map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::direct::{Problem, SpectralData};
use crate::error::{Error, Result};
use crate::hn::{Pole, RationalHN};
use crate::par;
use crate::space::{l2_alpha_norm, MeanZeroFunction, DEFAULT_GRID};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MetricConfig {
    pub alpha: f64,
    /// Pairs compared by `ρ_α`.
    pub n_max: usize,
    pub q: f64,
    pub delta: f64,
    pub r: f64,
    pub eps: f64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig {
            alpha: 0.25,
            n_max: 64,
            q: 2.0,
            delta: 0.5,
            r: 2.0,
            eps: 0.5,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.alpha) {
            return Err(Error::DomainViolation(format!("alpha = {} is outside [0, 1/2)", self.alpha)));
        }
        if self.n_max < 8 {
            return Err(Error::DomainViolation(format!("n_max = {} is below 8", self.n_max)));
        }
        Ok(())
    }
}

/// `‖σ₁ − σ₂‖_α + ‖c(f₁) − c(f₂)‖ + ‖c(F₁) − c(F₂)‖`.
///
/// Potentials on different grids are compared on the finer one.
pub fn d_alpha(p1: &Problem, p2: &Problem, alpha: f64) -> Result<f64> {
    let (m1, n1) = p1.indices();
    let (m2, n2) = p2.indices();
    if (m1, n1) != (m2, n2) {
        return Err(Error::IndexMismatch(m1, n1, m2, n2));
    }
    let g = p1.grid_size().max(p2.grid_size());
    let s1 = p1.sigma().resample(g)?;
    let s2 = p2.sigma().resample(g)?;
    Ok(s1.sub(&s2)?.sobolev_norm(alpha)
        + p1.f().coeff_vector().distance(&p2.f().coeff_vector())
        + p1.F().coeff_vector().distance(&p2.F().coeff_vector()))
}

/// `ρ_α` together with how much of the sequences it saw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoReport {
    pub value: f64,
    pub kappa_part: f64,
    pub beta_part: f64,
    /// Pairs compared: `min(n_max, len₁, len₂)`.
    pub terms: usize,
    /// True when either input had pairs beyond `terms`.
    pub truncated: bool,
}

pub fn rho_alpha(s1: &SpectralData, s2: &SpectralData, alpha: f64, n_max: usize) -> Result<RhoReport> {
    if (s1.m, s1.n) != (s2.m, s2.n) {
        return Err(Error::IndexMismatch(s1.m, s1.n, s2.m, s2.n));
    }
    let terms = n_max.min(s1.len()).min(s2.len());
    let diff = |a: Vec<f64>, b: Vec<f64>| -> Vec<f64> { a[..terms].iter().zip(&b[..terms]).map(|(x, y)| x - y).collect() };
    let kappa_part = l2_alpha_norm(&diff(s1.kappa(), s2.kappa()), alpha);
    let beta_part = l2_alpha_norm(&diff(s1.beta(), s2.beta()), alpha);
    Ok(RhoReport {
        value: kappa_part + beta_part,
        kappa_part,
        beta_part,
        terms,
        truncated: s1.len() > terms || s2.len() > terms,
    })
}

/// Set membership with the conditions that failed.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Membership {
    pub member: bool,
    pub reasons: Vec<String>,
}

impl Membership {
    fn from_reasons(reasons: Vec<String>) -> Self {
        Membership {
            member: reasons.is_empty(),
            reasons,
        }
    }
}

/// `P ∈ P_{Q,δ}`: `‖σ‖_α ≤ Q`, `f ∈ R_{M,Q,δ}`, `F ∈ R_{N,Q,δ}`, `λ₁ ≥ 1`.
pub fn in_p(p: &Problem, alpha: f64, q: f64, delta: f64) -> Membership {
    let mut reasons = Vec::new();
    let (m, n) = p.indices();
    let norm = p.sigma().sobolev_norm(alpha);
    if norm > q {
        reasons.push(format!("‖σ‖_α = {norm:.6} exceeds Q = {q}"));
    }
    if !p.f().in_r_mqdelta(m, q, delta) {
        reasons.push(format!("f = {} is not in R_{{{m},Q,δ}}", p.f()));
    }
    if !p.F().in_r_mqdelta(n, q, delta) {
        reasons.push(format!("F = {} is not in R_{{{n},Q,δ}}", p.F()));
    }
    match p.eigenvalues(1) {
        Ok(l) if l[0] >= 1.0 => {}
        Ok(l) => reasons.push(format!("λ₁ = {:.6} is below 1", l[0])),
        Err(e) => reasons.push(format!("direct solve failed: {e}")),
    }
    Membership::from_reasons(reasons)
}

/// `S ∈ B_{R,ε}` over the stored pairs. The `ε` bounds allow `1e−12`
/// relative slack so that exact data such as Dirichlet's sit on the boundary.
pub fn in_b(s: &SpectralData, alpha: f64, r: f64, eps: f64) -> Membership {
    let mut reasons = Vec::new();
    let eps_lo = eps * (1.0 - 1e-12);
    if let Err(e) = s.validate() {
        reasons.push(e.to_string());
        return Membership::from_reasons(reasons);
    }
    if s.lambda[0] < 1.0 {
        reasons.push(format!("λ₁ = {:.6} is below 1", s.lambda[0]));
    }
    let roots: Vec<f64> = s.lambda.iter().map(|l| l.max(0.0).sqrt()).collect();
    if let Some(i) = roots.windows(2).position(|w| w[1] - w[0] < eps_lo) {
        reasons.push(format!("gap √λ_{} − √λ_{} is below ε = {eps}", i + 2, i + 1));
    }
    let kappa = l2_alpha_norm(&s.kappa(), alpha);
    if kappa > r {
        reasons.push(format!("‖κ‖_α = {kappa:.6} exceeds R = {r}"));
    }
    let beta = s.beta();
    if let Some(i) = beta.iter().position(|b| 1.0 + b < eps_lo) {
        reasons.push(format!("1 + β_{} = {:.6} is below ε = {eps}", i + 1, 1.0 + beta[i]));
    }
    let bn = l2_alpha_norm(&beta, alpha);
    if bn > r {
        reasons.push(format!("‖β‖_α = {bn:.6} exceeds R = {r}"));
    }
    Membership::from_reasons(reasons)
}

/// Random members of `P_{Q,δ}^{α,M,N}`.
///
/// `σ` is a cosine series with coefficients drawn from `sigma_ranges`,
/// scaled down to norm `0.8·Q` when it is larger. Boundary functions draw
/// `h` from `h_range` and keep a 10% margin inside `R_{M,Q,δ}` otherwise.
/// Every draw goes through [`in_p`]; failures are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampler {
    pub m: i32,
    pub n: i32,
    pub alpha: f64,
    pub q: f64,
    pub delta: f64,
    /// Range of the coefficient of `cos(kx)`, `k = 1, 2, …`.
    pub sigma_ranges: Vec<(f64, f64)>,
    pub h_range: (f64, f64),
    pub grid_size: usize,
    pub max_attempts: usize,
}

impl Sampler {
    pub fn new(m: i32, n: i32, alpha: f64, q: f64, delta: f64) -> Self {
        Sampler {
            m,
            n,
            alpha,
            q,
            delta,
            sigma_ranges: vec![(-1.0, 1.0), (-0.5, 0.5), (-0.25, 0.25)],
            h_range: (-0.9 * q, 0.9 * q),
            grid_size: DEFAULT_GRID,
            max_attempts: 2000,
        }
    }

    fn sigma(&self, rng: &mut impl Rng) -> Result<MeanZeroFunction> {
        let c: Vec<f64> = self.sigma_ranges.iter().map(|&(a, b)| draw(rng, a, b)).collect();
        let raw = MeanZeroFunction::from_fn(self.grid_size, |x| {
            c.iter().enumerate().map(|(k, ck)| ck * ((k + 1) as f64 * x).cos()).sum()
        })?;
        let norm = raw.sobolev_norm(self.alpha);
        let cap = 0.8 * self.q;
        Ok(if norm > cap { raw.scaled(cap / norm) } else { raw })
    }

    fn boundary(&self, index: i32, rng: &mut impl Rng) -> Result<RationalHN> {
        if index == -1 {
            return Ok(RationalHN::Infinity);
        }
        let (q, delta) = (self.q, self.delta);
        let d = (index / 2) as usize;
        let h = draw(rng, self.h_range.0, self.h_range.1);
        let h0 = if index % 2 == 1 {
            rng.random_range(1.1 * delta..=0.9 * q)
        } else {
            0.0
        };
        // d poles in [1, Q] with gaps ≥ 1.1δ: place d points with the spare room shared out.
        let lo = 1.05;
        let hi = 0.95 * q;
        let spare = hi - lo - 1.1 * delta * d.saturating_sub(1) as f64;
        if d > 0 && spare < 0.0 {
            return Err(Error::DomainViolation(format!("R_{{{index},Q,δ}} cannot hold {d} poles")));
        }
        let mut cuts: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..=spare.max(0.0))).collect();
        cuts.sort_by(f64::total_cmp);
        let poles = cuts
            .iter()
            .enumerate()
            .map(|(j, c)| Pole {
                h: lo + c + 1.1 * delta * j as f64,
                delta: rng.random_range(1.1 * delta..=0.9 * q),
            })
            .collect();
        RationalHN::finite(h0, h, poles)
    }

    /// One accepted draw; rejection uses [`in_p`].
    pub fn sample(&self, rng: &mut impl Rng) -> Result<Problem> {
        for _ in 0..self.max_attempts {
            let p = Problem::new(self.sigma(rng)?, self.boundary(self.m, rng)?, self.boundary(self.n, rng)?);
            if in_p(&p, self.alpha, self.q, self.delta).member {
                return Ok(p);
            }
        }
        Err(Error::DomainViolation(format!(
            "no member of P_{{Q,δ}} found in {} draws",
            self.max_attempts
        )))
    }
}

fn draw(rng: &mut impl Rng, a: f64, b: f64) -> f64 {
    if a < b {
        rng.random_range(a..=b)
    } else {
        a
    }
}

/// Which way the ratio is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `ρ_α / d_α`
    Direct,
    /// `d_α / ρ_α`
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioRow {
    pub pair_id: usize,
    pub d_alpha: f64,
    pub rho_alpha: f64,
    pub ratio: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioTable {
    pub direction: Direction,
    pub rows: Vec<RatioRow>,
    /// `(pair_id, seed)` of pairs dropped as degenerate.
    pub skipped: Vec<(usize, u64)>,
    pub max: f64,
    pub median: f64,
    pub n_max: usize,
}

impl RatioTable {
    /// The engineering guard: no ratio above ten times the median.
    pub fn uniform(&self) -> bool {
        self.max <= 10.0 * self.median
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("pair_id,d_alpha,rho_alpha,ratio,seed\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{}\n",
                r.pair_id, r.d_alpha, r.rho_alpha, r.ratio, r.seed
            ));
        }
        out
    }
}

/// Per-pair seed, independent of scheduling.
pub fn pair_seed(base: u64, pair_id: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(pair_id as u64)
}

fn evaluate_pair(
    p1: &Problem,
    p2: &Problem,
    alpha: f64,
    n_max: usize,
    pair_id: usize,
    seed: u64,
    direction: Direction,
) -> Result<RatioRow> {
    let d = d_alpha(p1, p2, alpha)?;
    if d < 1e-10 {
        return Err(Error::DegeneratePair(d));
    }
    let rho = rho_alpha(&p1.spectral_data(n_max)?, &p2.spectral_data(n_max)?, alpha, n_max)?.value;
    let ratio = match direction {
        Direction::Direct => rho / d,
        Direction::Inverse => d / rho,
    };
    Ok(RatioRow {
        pair_id,
        d_alpha: d,
        rho_alpha: rho,
        ratio,
        seed,
    })
}

/// Ratio table from explicit pairs; pairs closer than `1e−10` are skipped.
pub fn ratio_table(
    pairs: &[(Problem, Problem, u64)],
    alpha: f64,
    n_max: usize,
    direction: Direction,
) -> Result<RatioTable> {
    let ids: Vec<usize> = (0..pairs.len()).collect();
    let results = par::map(&ids, |&i| {
        let (p1, p2, seed) = &pairs[i];
        evaluate_pair(p1, p2, alpha, n_max, i, *seed, direction)
    });
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(row) => rows.push(row),
            Err(Error::DegeneratePair(_)) => skipped.push((i, pairs[i].2)),
            Err(e) => return Err(e),
        }
    }
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let median = match ratios.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => ratios[n / 2],
        n => 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]),
    };
    Ok(RatioTable {
        direction,
        max: ratios.last().copied().unwrap_or(f64::NAN),
        median,
        rows,
        skipped,
        n_max,
    })
}

/// Sample `pair_count` pairs from `sampler` and tabulate the ratio.
///
/// For [`Direction::Inverse`] both data sets must also lie in `B_{R,ε}`.
pub fn lipschitz_experiment(
    sampler: &Sampler,
    pair_count: usize,
    cfg: &MetricConfig,
    direction: Direction,
    base_seed: u64,
) -> Result<RatioTable> {
    cfg.validate()?;
    let ids: Vec<usize> = (0..pair_count).collect();
    let pairs = par::map(&ids, |&i| -> Result<(Problem, Problem, u64)> {
        let seed = pair_seed(base_seed, i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sampler.max_attempts {
            let p1 = sampler.sample(&mut rng)?;
            let p2 = sampler.sample(&mut rng)?;
            if direction == Direction::Direct
                || [&p1, &p2].iter().all(|p| {
                    p.spectral_data(cfg.n_max)
                        .map(|s| in_b(&s, cfg.alpha, cfg.r, cfg.eps).member)
                        .unwrap_or(false)
                })
            {
                return Ok((p1, p2, seed));
            }
        }
        Err(Error::DomainViolation("no pair with both data sets in B_{R,ε}".into()))
    });
    let pairs: Vec<_> = pairs.into_iter().collect::<Result<_>>()?;
    ratio_table(&pairs, cfg.alpha, cfg.n_max, direction)
}
