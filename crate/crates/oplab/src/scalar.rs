//! Closed-form scalar functions used for field coefficients, measure
//! densities and matrix functional calculus.
//!
//! Keeping the function set symbolic (rather than accepting closures) makes
//! every configuration serializable and lets case constructions simplify
//! compositions like `f(1/x)` exactly.

use serde::{Deserialize, Serialize};

use crate::error::{OplabError, Result};

/// A scalar function of one real variable.
///
/// `Poly` coefficients are ascending: `coeffs[k]` multiplies `x^k`.
/// `Ratio` is a quotient of two such polynomials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarExpr {
    Const { c: f64 },
    Identity,
    Poly { coeffs: Vec<f64> },
    Ratio { num: Vec<f64>, den: Vec<f64> },
    Exp { rate: f64 },
    Sin { freq: f64 },
    Cos { freq: f64 },
    Power { alpha: f64 },
    Sqrt,
    Recip,
    /// `inner` evaluated at `1/x`; fallback for compositions that do not
    /// simplify to another closed form.
    OfRecip { inner: Box<ScalarExpr> },
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn trim_poly(mut coeffs: Vec<f64>) -> Vec<f64> {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(0.0);
    }
    coeffs
}

impl ScalarExpr {
    pub fn constant(c: f64) -> Self {
        ScalarExpr::Const { c }
    }

    pub fn poly(coeffs: &[f64]) -> Self {
        ScalarExpr::Poly {
            coeffs: trim_poly(coeffs.to_vec()),
        }
    }

    pub fn power(alpha: f64) -> Self {
        ScalarExpr::Power { alpha }
    }

    /// Evaluate, reporting a domain error for arguments where the function
    /// is undefined (negative bases of fractional powers, poles, ...).
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            ScalarExpr::Const { c } => Ok(*c),
            ScalarExpr::Identity => Ok(x),
            ScalarExpr::Poly { coeffs } => Ok(horner(coeffs, x)),
            ScalarExpr::Ratio { num, den } => {
                let d = horner(den, x);
                if d == 0.0 {
                    return Err(domain_err(x, f64::NEG_INFINITY, f64::INFINITY));
                }
                Ok(horner(num, x) / d)
            }
            ScalarExpr::Exp { rate } => Ok((rate * x).exp()),
            ScalarExpr::Sin { freq } => Ok((freq * x).sin()),
            ScalarExpr::Cos { freq } => Ok((freq * x).cos()),
            ScalarExpr::Power { alpha } => {
                if x < 0.0 || (x == 0.0 && *alpha < 0.0) {
                    return Err(domain_err(x, 0.0, f64::INFINITY));
                }
                Ok(x.powf(*alpha))
            }
            ScalarExpr::Sqrt => {
                if x < 0.0 {
                    return Err(domain_err(x, 0.0, f64::INFINITY));
                }
                Ok(x.sqrt())
            }
            ScalarExpr::Recip => {
                if x == 0.0 {
                    return Err(domain_err(x, 0.0, f64::INFINITY));
                }
                Ok(1.0 / x)
            }
            ScalarExpr::OfRecip { inner } => {
                if x == 0.0 {
                    return Err(domain_err(x, 0.0, f64::INFINITY));
                }
                inner.eval(1.0 / x)
            }
        }
    }

    /// The function `x -> self(1/x)`, simplified to a closed form where
    /// possible so that algebraically equal cases evaluate identically.
    pub fn compose_recip(&self) -> ScalarExpr {
        match self {
            ScalarExpr::Const { c } => ScalarExpr::Const { c: *c },
            ScalarExpr::Identity => ScalarExpr::Recip,
            ScalarExpr::Recip => ScalarExpr::Identity,
            ScalarExpr::Sqrt => ScalarExpr::Power { alpha: -0.5 },
            ScalarExpr::Power { alpha } => ScalarExpr::Power { alpha: -alpha },
            ScalarExpr::Poly { coeffs } => {
                let coeffs = trim_poly(coeffs.clone());
                if coeffs.len() == 1 {
                    return ScalarExpr::Const { c: coeffs[0] };
                }
                // p(1/x) = (reversed coefficients)(x) / x^deg
                let deg = coeffs.len() - 1;
                let num: Vec<f64> = coeffs.iter().rev().copied().collect();
                let mut den = vec![0.0; deg + 1];
                den[deg] = 1.0;
                ScalarExpr::Ratio {
                    num: trim_poly(num),
                    den,
                }
            }
            ScalarExpr::Ratio { num, den } => {
                let m = num.len().max(den.len());
                let pad = |v: &[f64]| {
                    let mut p = v.to_vec();
                    p.resize(m, 0.0);
                    p.reverse();
                    trim_poly(p)
                };
                ScalarExpr::Ratio {
                    num: pad(num),
                    den: pad(den),
                }
            }
            ScalarExpr::OfRecip { inner } => (**inner).clone(),
            other => ScalarExpr::OfRecip {
                inner: Box::new(other.clone()),
            },
        }
    }

    /// Largest absolute value over `n` evenly spaced samples of `[lo, hi]`.
    pub fn max_abs_on(&self, lo: f64, hi: f64, n: usize) -> Result<f64> {
        let mut m: f64 = 0.0;
        for x in linear_grid(lo, hi, n) {
            m = m.max(self.eval(x)?.abs());
        }
        Ok(m)
    }

    /// True when the function is nonnegative (within `tol`) on the sampled
    /// interval.
    pub fn nonneg_on(&self, lo: f64, hi: f64, n: usize, tol: f64) -> Result<bool> {
        for x in linear_grid(lo, hi, n) {
            if self.eval(x)? < -tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn domain_err(x: f64, lo: f64, hi: f64) -> OplabError {
    OplabError::DomainViolation { x, lo, hi }
}

/// `n` evenly spaced points covering `[lo, hi]` (endpoints included for n >= 2).
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (lo + hi)];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * h).collect()
}

/// `n` log-spaced points covering `[lo, hi]`, `lo > 0`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo, "geometric grid needs 0 < lo <= hi");
    if n <= 1 {
        return vec![(lo * hi).sqrt()];
    }
    let step = (hi / lo).powf(1.0 / (n - 1) as f64);
    (0..n).map(|i| lo * step.powi(i as i32)).collect()
}
