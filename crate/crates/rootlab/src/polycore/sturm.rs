//! Sturm chains over f64 and sign-variation counting.
//!
//! The floating chain is the feature-extraction workhorse; the exact-rational
//! chain in [`super::rational`] is the authoritative oracle.

use super::poly::DensePoly;

/// Relative cutoff for truncating noise terms in the floating chain.
pub const CHAIN_TRUNCATION_REL: f64 = 1e-12;

/// Where to read sign variations of a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPoint {
    NegInf,
    Finite(f64),
    PosInf,
}

/// Sturm chain of `p`: `[p, p', -rem(p, p'), -rem(p', p2), ...]`.
///
/// The cascade stops at a constant, a zero remainder, or a term whose
/// coefficients all fall below `CHAIN_TRUNCATION_REL * (1 + max input |coeff|)`;
/// that last rule drops division-cascade noise that would otherwise fabricate
/// spurious chain elements near degenerate inputs.
pub fn sturm_chain(p: &DensePoly) -> Vec<DensePoly> {
    let cutoff = CHAIN_TRUNCATION_REL * (1.0 + p.max_abs_coeff());
    let mut chain = vec![p.clone()];
    if p.degree() == 0 {
        return chain;
    }
    chain.push(p.derivative());
    loop {
        let n = chain.len();
        let prev = &chain[n - 2];
        let last = &chain[n - 1];
        if last.degree() == 0 || last.is_zero() {
            break;
        }
        let rem = match prev.div_rem(last) {
            Ok((_, rem)) => rem,
            Err(_) => break,
        };
        if rem.is_zero() || rem.max_abs_coeff() < cutoff {
            break;
        }
        chain.push(rem.neg());
    }
    chain
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Sign of a polynomial at an evaluation point; at ±∞ the sign of the leading
/// term decides.
fn sign_at(p: &DensePoly, at: EvalPoint) -> i8 {
    if p.is_zero() {
        return 0;
    }
    match at {
        EvalPoint::Finite(x) => sign_of(p.eval(x)),
        EvalPoint::PosInf => sign_of(p.leading()),
        EvalPoint::NegInf => {
            let s = sign_of(p.leading());
            if p.degree().is_multiple_of(2) {
                s
            } else {
                -s
            }
        }
    }
}

/// Count strict sign alternations of the chain at `at`; zeros are skipped
/// (standard Sturm convention).
pub fn sign_changes_at(chain: &[DensePoly], at: EvalPoint) -> usize {
    let mut changes = 0;
    let mut last: i8 = 0;
    for p in chain {
        let s = sign_at(p, at);
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dp(coeffs: &[f64]) -> DensePoly {
        DensePoly::new(coeffs.to_vec())
    }

    #[test]
    fn chain_of_cubic() {
        // x^3 - x -> [x^3 - x, 3x^2 - 1, (2/3)x, 1]
        let chain = sturm_chain(&dp(&[1.0, 0.0, -1.0, 0.0]));
        assert_eq!(chain.len(), 4);
        assert!((chain[2].coeffs()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(chain[2].coeffs()[1], 0.0);
        assert_eq!(chain[3].degree(), 0);
        assert!(chain[3].leading() > 0.0);
    }

    #[test]
    fn chain_of_pure_quadratics() {
        // x^2 + 1 -> [x^2+1, 2x, -1]
        let chain = sturm_chain(&dp(&[1.0, 0.0, 1.0]));
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[2].coeffs(), &[-1.0]);
        // x^2 - 1 -> [x^2-1, 2x, 1]
        let chain = sturm_chain(&dp(&[1.0, 0.0, -1.0]));
        assert_eq!(chain[2].coeffs(), &[1.0]);
    }

    #[test]
    fn sign_changes_cubic() {
        let chain = sturm_chain(&dp(&[1.0, 0.0, -1.0, 0.0]));
        assert_eq!(sign_changes_at(&chain, EvalPoint::NegInf), 3);
        assert_eq!(sign_changes_at(&chain, EvalPoint::PosInf), 0);
    }

    #[test]
    fn sign_changes_no_real_roots() {
        let chain = sturm_chain(&dp(&[1.0, 0.0, 1.0]));
        assert_eq!(sign_changes_at(&chain, EvalPoint::NegInf), 1);
        assert_eq!(sign_changes_at(&chain, EvalPoint::PosInf), 1);
    }

    #[test]
    fn roots_at_eval_points_are_skipped() {
        // x^3 - x has a root at 0; V(0) - V(+inf) must count roots in (0, +inf].
        let chain = sturm_chain(&dp(&[1.0, 0.0, -1.0, 0.0]));
        let v0 = sign_changes_at(&chain, EvalPoint::Finite(0.0));
        let vinf = sign_changes_at(&chain, EvalPoint::PosInf);
        assert_eq!(v0 - vinf, 1);
    }
}
