//! Exact-rational polynomials: the authoritative real-root-count oracle.
//!
//! Arbitrary-precision rational coefficients make the Sturm cascade exact, so
//! root counts carry no floating error. Every finite f64 is a dyadic rational,
//! so float-generated datasets can be audited exactly via [`RationalPoly::from_f64s`].

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Evaluation point on the extended real line with exact finite coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum RatPoint {
    NegInf,
    Finite(BigRational),
    PosInf,
}

impl RatPoint {
    pub fn from_f64(x: f64) -> Option<RatPoint> {
        BigRational::from_float(x).map(RatPoint::Finite)
    }
}

/// Dense polynomial over Q, highest-degree coefficient first, leading
/// coefficient nonzero (zero polynomial stored as a single zero).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        let mut p = RationalPoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![BigRational::zero()] }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        RationalPoly::new(
            coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect(),
        )
    }

    /// Exact conversion: every finite f64 is a dyadic rational.
    pub fn from_f64s(coeffs: &[f64]) -> Result<Self> {
        let mut out = Vec::with_capacity(coeffs.len());
        for &c in coeffs {
            let r = BigRational::from_float(c)
                .ok_or_else(|| Error::BadCoefficients(format!("non-finite coefficient {c}")))?;
            out.push(r);
        }
        Ok(RationalPoly::new(out))
    }

    fn trim(&mut self) {
        let first_nonzero = self.coeffs.iter().position(|c| !c.is_zero());
        match first_nonzero {
            Some(k) => {
                self.coeffs.drain(..k);
            }
            None => self.coeffs = vec![BigRational::zero()],
        }
        if self.coeffs.is_empty() {
            self.coeffs = vec![BigRational::zero()];
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigRational {
        &self.coeffs[0]
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in &self.coeffs {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RationalPoly {
        let d = self.degree();
        if d == 0 {
            return RationalPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .take(d)
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from((d - i) as i64)))
            .collect();
        RationalPoly::new(coeffs)
    }

    /// Exact Euclidean division.
    pub fn div_rem(&self, den: &RationalPoly) -> Result<(RationalPoly, RationalPoly)> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.is_zero() || self.degree() < den.degree() {
            return Ok((RationalPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let dn = den.degree();
        let lead = den.leading().clone();
        let qlen = rem.len() - dn;
        let mut quot = vec![BigRational::zero(); qlen];
        for k in 0..qlen {
            let factor = &rem[k] / &lead;
            for j in 1..=dn {
                let delta = &factor * &den.coeffs[j];
                rem[k + j] = &rem[k + j] - delta;
            }
            rem[k] = BigRational::zero();
            quot[k] = factor;
        }
        Ok((RationalPoly::new(quot), RationalPoly::new(rem)))
    }

    /// Divide by the leading coefficient's absolute value. A positive scaling
    /// preserves every sign pattern, so Sturm counts are unaffected while
    /// coefficient growth stays bounded.
    fn normalized(&self) -> RationalPoly {
        if self.is_zero() {
            return self.clone();
        }
        let scale = self.leading().abs();
        RationalPoly::new(self.coeffs.iter().map(|c| c / &scale).collect())
    }

    /// Monic polynomial GCD by the Euclidean algorithm.
    pub fn gcd(a: &RationalPoly, b: &RationalPoly) -> RationalPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor in gcd loop");
            x = y;
            y = r.normalized();
        }
        if x.is_zero() {
            x
        } else {
            let lead = x.leading().clone();
            RationalPoly::new(x.coeffs.iter().map(|c| c / &lead).collect())
        }
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> Result<RationalPoly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == 0 {
            return Ok(self.clone());
        }
        let g = RationalPoly::gcd(self, &self.derivative());
        if g.degree() == 0 {
            return Ok(self.clone());
        }
        let (q, r) = self.div_rem(&g)?;
        debug_assert!(r.is_zero(), "gcd must divide exactly");
        Ok(q)
    }

    /// Exact Sturm chain (each term positively rescaled).
    pub fn sturm_chain(&self) -> Vec<RationalPoly> {
        let mut chain = vec![self.clone()];
        if self.degree() == 0 {
            return chain;
        }
        chain.push(self.derivative());
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() || chain[n - 1].degree() == 0 {
                break;
            }
            let (_, rem) = chain[n - 2]
                .div_rem(&chain[n - 1])
                .expect("nonzero divisor in sturm loop");
            if rem.is_zero() {
                break;
            }
            let neg: Vec<BigRational> = rem.coeffs.iter().map(|c| -c).collect();
            chain.push(RationalPoly::new(neg).normalized());
        }
        chain
    }

    fn sign_at(&self, at: &RatPoint) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let sig = |v: &BigRational| -> i8 {
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        };
        match at {
            RatPoint::Finite(x) => sig(&self.eval(x)),
            RatPoint::PosInf => sig(self.leading()),
            RatPoint::NegInf => {
                let s = sig(self.leading());
                if self.degree().is_multiple_of(2) {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

/// Strict sign alternations of the chain at `at`, zeros skipped.
pub fn rational_sign_changes_at(chain: &[RationalPoly], at: &RatPoint) -> usize {
    let mut changes = 0;
    let mut last: i8 = 0;
    for p in chain {
        let s = p.sign_at(at);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Exact count of distinct real roots of `p` in the interval `(lo, hi]`
/// (default: all of R), via the exact-rational Sturm chain.
///
/// The polynomial is reduced to its squarefree part first, so multiple roots
/// are counted once.
pub fn exact_real_root_count(
    p: &RationalPoly,
    interval: Option<(&RatPoint, &RatPoint)>,
) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = p.squarefree_part()?;
    if sf.degree() == 0 {
        return Ok(0);
    }
    let chain = sf.sturm_chain();
    let (lo, hi) = interval.unwrap_or((&RatPoint::NegInf, &RatPoint::PosInf));
    let v_lo = rational_sign_changes_at(&chain, lo) as isize;
    let v_hi = rational_sign_changes_at(&chain, hi) as isize;
    Ok((v_lo - v_hi).max(0) as usize)
}
