//! Dense floating-point polynomials and the validated degree-2..5 input type.
//!
//! Coefficients are stored highest-degree first throughout, matching the
//! on-disk and in-paper convention `x^5 + A x^4 + ... + E`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense univariate polynomial over f64, highest-degree coefficient first.
///
/// Leading zeros are trimmed on construction, so `degree == coeffs.len() - 1`
/// holds for nonzero polynomials. The zero polynomial is stored as `[0.0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensePoly {
    coeffs: Vec<f64>,
}

impl DensePoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = DensePoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: vec![0.0] }
    }

    fn trim(&mut self) {
        let first_nonzero = self.coeffs.iter().position(|&c| c != 0.0);
        match first_nonzero {
            Some(k) => {
                self.coeffs.drain(..k);
            }
            None => self.coeffs = vec![0.0],
        }
        if self.coeffs.is_empty() {
            self.coeffs = vec![0.0];
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients, highest-degree first.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Power-rule derivative. The derivative of a constant is the zero polynomial.
    pub fn derivative(&self) -> DensePoly {
        let d = self.degree();
        if d == 0 {
            return DensePoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .take(d)
            .enumerate()
            .map(|(i, &c)| c * (d - i) as f64)
            .collect();
        DensePoly::new(coeffs)
    }

    /// Euclidean division: `self = q * den + r` with `deg r < deg den`.
    pub fn div_rem(&self, den: &DensePoly) -> Result<(DensePoly, DensePoly)> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.is_zero() || self.degree() < den.degree() {
            return Ok((DensePoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let dn = den.degree();
        let lead = den.coeffs[0];
        let qlen = rem.len() - dn;
        let mut quot = vec![0.0; qlen];
        for k in 0..qlen {
            let factor = rem[k] / lead;
            quot[k] = factor;
            // rem[k] becomes exactly zero by construction; skip it.
            for j in 1..=dn {
                rem[k + j] -= factor * den.coeffs[j];
            }
            rem[k] = 0.0;
        }
        Ok((DensePoly::new(quot), DensePoly::new(rem)))
    }

    /// Taylor shift: returns `q(y) = p(y + t)` via repeated synthetic division.
    pub fn shift(&self, t: f64) -> DensePoly {
        let n = self.coeffs.len();
        let mut work = self.coeffs.clone();
        let mut out = vec![0.0; n];
        // Repeated synthetic division by (y - t); remainders are the
        // coefficients of p(y + t) from the constant term up.
        for slot in (0..n).rev() {
            let mut carry = 0.0;
            for c in work.iter_mut() {
                *c += carry * t;
                carry = *c;
            }
            out[slot] = work.pop().unwrap_or(0.0);
            if work.is_empty() {
                break;
            }
        }
        DensePoly::new(out)
    }

    pub fn neg(&self) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: f64) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// A validated experiment polynomial of degree 2–5, highest-degree first.
///
/// Degrees 3–5 follow the monic convention (`coeffs[0] == 1.0` exactly) in all
/// generated datasets; degree 2 keeps a free leading coefficient. The type
/// itself only requires a nonzero leading coefficient, since derived
/// polynomials (e.g. derivatives used in feature code) are non-monic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let degree = coeffs.len().saturating_sub(1);
        if !(2..=5).contains(&degree) {
            return Err(Error::InvalidDegree(degree));
        }
        if coeffs[0] == 0.0 {
            return Err(Error::BadCoefficients("leading coefficient is zero".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadCoefficients("non-finite coefficient".into()));
        }
        Ok(Polynomial { coeffs })
    }

    /// Monic polynomial of the given degree from its trailing coefficients
    /// (`rest.len() == degree`).
    pub fn monic(degree: usize, rest: &[f64]) -> Result<Self> {
        if rest.len() != degree {
            return Err(Error::BadCoefficients(format!(
                "expected {degree} trailing coefficients, got {}",
                rest.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(1.0);
        coeffs.extend_from_slice(rest);
        Polynomial::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients, highest-degree first (length `degree + 1`).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs[0] == 1.0
    }

    /// Trailing coefficients after the leading one (A..E for a monic quintic).
    pub fn trailing(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    pub fn as_dense(&self) -> DensePoly {
        DensePoly::new(self.coeffs.clone())
    }

    /// Horner evaluation at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Power-rule derivative (degree − 1, generally non-monic).
    pub fn derivative(&self) -> DensePoly {
        self.as_dense().derivative()
    }
}
