//! Transform chains written as text, e.g. `"T- T+(auto) T-+ T+-"`.

use std::fmt;
use std::str::FromStr;

use crate::darboux::{data_t_minus, data_t_minus_plus, data_t_plus, data_t_plus_minus, t_minus, t_minus_plus, t_plus, t_plus_minus};
use crate::direct::{Problem, SpectralData};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Minus,
    /// `T₊(μ, ν)`
    Plus(f64, f64),
    /// `T₊` with the pair removed by the latest unmatched `T₋`.
    PlusAuto,
    MinusPlus,
    PlusMinus,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Minus => write!(f, "T-"),
            Step::Plus(mu, nu) => write!(f, "T+({mu},{nu})"),
            Step::PlusAuto => write!(f, "T+(auto)"),
            Step::MinusPlus => write!(f, "T-+"),
            Step::PlusMinus => write!(f, "T+-"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain(pub Vec<Step>);

impl FromStr for Chain {
    type Err = Error;

    /// Steps are separated by whitespace; spaces inside `T+( … )` are allowed.
    fn from_str(s: &str) -> Result<Self> {
        let mut steps = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let here = rest;
            let bad = || Error::Parse(format!("cannot read a transform at {here:?}"));
            if let Some(r) = rest.strip_prefix("T+(") {
                let close = r.find(')').ok_or_else(bad)?;
                let args = r[..close].trim();
                steps.push(if args == "auto" {
                    Step::PlusAuto
                } else {
                    let (mu, nu) = args.split_once(',').ok_or_else(bad)?;
                    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
                    Step::Plus(parse(mu)?, parse(nu)?)
                });
                rest = &r[close + 1..];
            } else if let Some(r) = rest.strip_prefix("T-+") {
                steps.push(Step::MinusPlus);
                rest = r;
            } else if let Some(r) = rest.strip_prefix("T+-") {
                steps.push(Step::PlusMinus);
                rest = r;
            } else if let Some(r) = rest.strip_prefix("T-") {
                steps.push(Step::Minus);
                rest = r;
            } else {
                return Err(bad());
            }
            if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
                return Err(bad());
            }
            rest = rest.trim_start();
        }
        if steps.is_empty() {
            return Err(Error::Parse("empty transform chain".into()));
        }
        Ok(Chain(steps))
    }
}

fn at_step(i: usize, step: Step, e: Error) -> Error {
    match e {
        Error::DomainViolation(msg) => Error::DomainViolation(format!("step {} ({step}): {msg}", i + 1)),
        other => other,
    }
}

fn auto_pair(stack: &mut Vec<(f64, f64)>, i: usize) -> Result<(f64, f64)> {
    stack.pop().ok_or_else(|| {
        Error::DomainViolation(format!("step {} (T+(auto)): no earlier T- to undo", i + 1))
    })
}

impl Chain {
    /// Problem side. `T+(auto)` needs `λ₁` and `γ₁` of the problem fed to the
    /// matching `T-`, so those steps cost one extra eigenpair solve.
    pub fn apply(&self, p: &Problem) -> Result<Problem> {
        let mut cur = p.clone();
        let mut stack = Vec::new();
        for (i, &step) in self.0.iter().enumerate() {
            let next = match step {
                Step::Minus => {
                    let removed = cur.spectral_data(1).map_err(|e| at_step(i, step, e))?;
                    stack.push((removed.lambda[0], removed.gamma[0]));
                    t_minus(&cur)
                }
                Step::Plus(mu, nu) => t_plus(mu, nu, &cur),
                Step::PlusAuto => {
                    let (mu, nu) = auto_pair(&mut stack, i)?;
                    t_plus(mu, nu, &cur)
                }
                Step::MinusPlus => t_minus_plus(&cur),
                Step::PlusMinus => t_plus_minus(&cur),
            };
            cur = next.map_err(|e| at_step(i, step, e))?;
        }
        Ok(cur)
    }

    /// Data side.
    pub fn apply_data(&self, s: &SpectralData) -> Result<SpectralData> {
        let mut cur = s.clone();
        let mut stack = Vec::new();
        for (i, &step) in self.0.iter().enumerate() {
            let next = match step {
                Step::Minus => {
                    if let (Some(&l), Some(&g)) = (cur.lambda.first(), cur.gamma.first()) {
                        stack.push((l, g));
                    }
                    data_t_minus(&cur)
                }
                Step::Plus(mu, nu) => data_t_plus(mu, nu, &cur),
                Step::PlusAuto => {
                    let (mu, nu) = auto_pair(&mut stack, i)?;
                    data_t_plus(mu, nu, &cur)
                }
                Step::MinusPlus => data_t_minus_plus(&cur),
                Step::PlusMinus => data_t_plus_minus(&cur),
            };
            cur = next.map_err(|e| at_step(i, step, e))?;
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let c: Chain = "T- T+(auto)  T-+ T+-  T+( -1.5 , 2 )".parse().unwrap();
        assert_eq!(
            c.0,
            vec![Step::Minus, Step::PlusAuto, Step::MinusPlus, Step::PlusMinus, Step::Plus(-1.5, 2.0)]
        );
        assert_eq!(c.0.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "), "T- T+(auto) T-+ T+- T+(-1.5,2)");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "T", "T-x", "T+(1)", "T+(a,b)", "T+(1,2", "T-T-"] {
            assert!(bad.parse::<Chain>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn auto_without_minus_names_the_step() {
        let s = SpectralData {
            m: 0,
            n: 0,
            lambda: vec![0.0, 1.0, 4.0],
            gamma: vec![1.0, 1.0, 1.0],
        };
        let err = "T-+ T+(auto)".parse::<Chain>().unwrap().apply_data(&s).unwrap_err();
        assert!(err.to_string().contains("step 2"), "{err}");
    }
}
