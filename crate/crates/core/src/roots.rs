//! Bracketed scalar root finding.

use crate::error::Result;

/// Brent's method on a sign-changing bracket `[a, b]` with known end values.
///
/// Stops when the bracket is below `xtol(x)` or an exact zero is hit.
pub fn brent(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    xtol: impl Fn(f64) -> f64,
) -> Result<f64> {
    debug_assert!(fa * fb <= 0.0);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 0.5 * xtol(b);
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finds_cot_root() {
        // cot(πs) = s on (0, 1/2)
        let g = |s: f64| Ok((PI * s).cos() - s * (PI * s).sin());
        let s = brent(g, 0.1, 0.49, g(0.1).unwrap(), g(0.49).unwrap(), |x| 1e-15 * (1.0 + x.abs())).unwrap();
        assert!(g(s).unwrap().abs() < 1e-14);
        assert!((s * s - 0.147).abs() < 1e-3);
    }

    #[test]
    fn polynomial_and_endpoint_roots() {
        let g = |x: f64| Ok(x * x * x - 2.0);
        let r = brent(g, 0.0, 2.0, -2.0, 6.0, |_| 1e-15).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
        assert_eq!(brent(g, 0.0, 2.0, 0.0, 6.0, |_| 1e-15).unwrap(), 0.0);
    }
}
