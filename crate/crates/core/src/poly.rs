//! Dense real polynomials with ascending coefficients.

use nalgebra::DMatrix;

/// Real polynomial, `coeffs[k]` multiplies `λ^k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Poly { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![0.0] }
    }

    /// `λ - root`
    pub fn linear_root(root: f64) -> Self {
        Poly { coeffs: vec![-root, 1.0] }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Index of the highest nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn leading(&self) -> f64 {
        self.degree().map_or(0.0, |d| self.coeffs[d])
    }

    /// Drop leading coefficients whose magnitude is at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Poly {
        let mut c = self.coeffs.clone();
        while c.len() > 1 && c.last().is_some_and(|v| v.abs() <= tol) {
            c.pop();
        }
        if c.is_empty() {
            c.push(0.0);
        }
        Poly { coeffs: c }
    }

    /// Keep exactly `len` coefficients, zero-padding or truncating.
    pub fn resized(&self, len: usize) -> Poly {
        let mut c = self.coeffs.clone();
        c.resize(len.max(1), 0.0);
        Poly { coeffs: c }
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeffs.get(k).copied().unwrap_or(0.0) + other.coeffs.get(k).copied().unwrap_or(0.0))
            .collect();
        Poly { coeffs }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly { coeffs }
    }

    /// Synthetic division by `(λ - root)`; returns quotient and remainder.
    pub fn div_linear(&self, root: f64) -> (Poly, f64) {
        let n = self.coeffs.len();
        if n == 1 {
            return (Poly::zero(), self.coeffs[0]);
        }
        let mut q = vec![0.0; n - 1];
        let mut carry = self.coeffs[n - 1];
        q[n - 2] = carry;
        for k in (1..n - 1).rev() {
            carry = self.coeffs[k] + root * carry;
            q[k - 1] = carry;
        }
        let rem = self.coeffs[0] + root * carry;
        (Poly { coeffs: q }, rem)
    }

    /// Long division by a polynomial with nonzero leading coefficient.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if nd < dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0.0; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd] / lead;
            q[k] = c;
            for j in 0..=dd {
                rem[k + j] -= c * divisor.coeffs[j];
            }
        }
        rem.truncate(dd.max(1));
        (Poly { coeffs: q }, Poly { coeffs: rem })
    }

    /// Real roots of a polynomial whose roots are all real and simple.
    ///
    /// Companion-matrix eigenvalues, polished by Newton. Returns `None` if any
    /// eigenvalue has an imaginary part above `1e-8·(1+|z|)` or two roots agree to
    /// within `1e-7·(1+|z|)`, which is where a double root splits in floating point.
    pub fn real_simple_roots(&self) -> Option<Vec<f64>> {
        let d = self.degree()?;
        if d == 0 {
            return Some(Vec::new());
        }
        let lead = self.coeffs[d];
        let mut comp = DMatrix::<f64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..d {
            comp[(i, d - 1)] = -self.coeffs[i] / lead;
        }
        let eig = comp.complex_eigenvalues();
        let dp = self.derivative();
        let mut roots = Vec::with_capacity(d);
        for z in eig.iter() {
            if z.im.abs() > 1e-8 * (1.0 + z.re.abs()) {
                return None;
            }
            let mut x = z.re;
            let mut px = self.eval(x).abs();
            for _ in 0..4 {
                let dv = dp.eval(x);
                if dv == 0.0 || px == 0.0 {
                    break;
                }
                // only accept steps that reduce |p|; Newton is wild near multiple roots
                let cand = x - self.eval(x) / dv;
                let pc = self.eval(cand).abs();
                if !(pc < px) {
                    break;
                }
                x = cand;
                px = pc;
            }
            roots.push(x);
        }
        roots.sort_by(|a, b| a.total_cmp(b));
        for w in roots.windows(2) {
            if (w[1] - w[0]).abs() <= 1e-7 * (1.0 + w[0].abs()) {
                return None;
            }
        }
        Some(roots)
    }

    /// Expand `scale · Π (r_j - λ)`.
    pub fn from_factors(scale: f64, roots: &[f64]) -> Poly {
        roots.iter().fold(Poly::constant(scale), |acc, &r| acc.mul(&Poly::new(vec![r, -1.0])))
    }
}
