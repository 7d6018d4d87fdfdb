//! The six quintic feature families.
//!
//! All operations require a monic degree-5 input (the dataset convention).
//! Real-root decisions inside feature code use the looser 1e-8 imaginary
//! tolerance: features feed models, labels feed ground truth, and only the
//! latter needs the tight 1e-10 threshold.

use crate::error::{Error, Result};
use crate::features::guard;
use crate::polycore::{roots_numeric, sign_changes_at, sturm_chain, EvalPoint, Polynomial};

/// Imaginary tolerance for real-root decisions inside feature computation.
pub const FEATURE_IMAG_TOL: f64 = 1e-8;

/// Critical values with |p(c)| below this are treated as zero in Crit8.
pub const CRIT_VALUE_ZERO_TOL: f64 = 1e-9;

fn require_quintic(p: &Polynomial) -> Result<()> {
    if p.degree() != 5 {
        return Err(Error::InvalidDegree(p.degree()));
    }
    Ok(())
}

/// Sign-variation counts of the Sturm chain: `[V(-inf), V(+inf),
/// V(-inf)-V(+inf), V(-10), V(-1), V(0), V(1), V(10)]`.
pub fn sturm_features(p: &Polynomial) -> Result<[f64; 8]> {
    require_quintic(p)?;
    let chain = sturm_chain(&p.as_dense());
    let v = |at: EvalPoint| sign_changes_at(&chain, at) as f64;
    let v_neg = v(EvalPoint::NegInf);
    let v_pos = v(EvalPoint::PosInf);
    Ok([
        v_neg,
        v_pos,
        v_neg - v_pos,
        v(EvalPoint::Finite(-10.0)),
        v(EvalPoint::Finite(-1.0)),
        v(EvalPoint::Finite(0.0)),
        v(EvalPoint::Finite(1.0)),
        v(EvalPoint::Finite(10.0)),
    ])
}

fn coeff_sign_changes(coeffs: impl Iterator<Item = f64>) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for c in coeffs {
        let s = if c > 0.0 {
            1
        } else if c < 0.0 {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Descartes' rule features: sign changes of p(x) and p(-x) coefficient
/// sequences (zeros skipped), their sum, the implied minimum complex count,
/// and both parities.
pub fn descartes_features(p: &Polynomial) -> Result<[f64; 6]> {
    require_quintic(p)?;
    let pos = coeff_sign_changes(p.coeffs().iter().copied());
    // p(-x) flips the sign of odd-power coefficients; highest-first storage
    // puts odd powers at even indices for a quintic.
    let neg = coeff_sign_changes(
        p.coeffs().iter().enumerate().map(|(i, &c)| if i % 2 == 0 { -c } else { c }),
    );
    let total = pos + neg;
    Ok([
        pos as f64,
        neg as f64,
        total as f64,
        5.0 - total as f64,
        (pos % 2) as f64,
        (neg % 2) as f64,
    ])
}

/// Power sums s1..s5 from Newton's identities plus derived mean, variance,
/// and three scale-invariant ratios.
pub fn newton_features(p: &Polynomial) -> Result<[f64; 10]> {
    require_quintic(p)?;
    if !p.is_monic() {
        return Err(Error::BadCoefficients("newton features require a monic quintic".into()));
    }
    let t = p.trailing();
    let (a, b, c, d, e) = (t[0], t[1], t[2], t[3], t[4]);
    // Elementary symmetric polynomials of the roots.
    let (e1, e2, e3, e4, e5) = (-a, b, -c, d, -e);
    let s1 = e1;
    let s2 = e1 * s1 - 2.0 * e2;
    let s3 = e1 * s2 - e2 * s1 + 3.0 * e3;
    let s4 = e1 * s3 - e2 * s2 + e3 * s1 - 4.0 * e4;
    let s5 = e1 * s4 - e2 * s3 + e3 * s2 - e4 * s1 + 5.0 * e5;
    let mean = s1 / 5.0;
    let var = s2 / 5.0 - mean * mean;
    let r1 = s1 * s1 / guard(s2);
    let r2 = s3 * s3 / guard(s2).powi(3);
    let r3 = s4 / guard(s2).powi(2);
    Ok([s1, s2, s3, s4, s5, mean, var, r1, r2, r3])
}

/// Sorted real roots of a dense polynomial, via the numeric root finder with
/// the feature-level imaginary tolerance.
fn real_roots_sorted(coeffs: &[f64]) -> Result<Vec<f64>> {
    let p = Polynomial::new(coeffs.to_vec())?;
    let roots = roots_numeric(&p)?;
    let mut xs: Vec<f64> =
        roots.iter().filter(|r| r.im.abs() < FEATURE_IMAG_TOL).map(|r| r.re).collect();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// Critical-point family: counts and statistics of the real roots of p' and
/// p'', and Crit8 — the number of strict sign alternations in the sequence of
/// polynomial values at the ordered critical points (near-zero values
/// skipped). Position/value statistics over an empty critical set are 0.
pub fn critical_point_features(p: &Polynomial) -> Result<[f64; 10]> {
    require_quintic(p)?;
    let crit = real_roots_sorted(p.derivative().coeffs())?;
    let inflect = real_roots_sorted(p.derivative().derivative().coeffs())?;

    let n = crit.len();
    let (min_pos, max_pos, mean_pos, std_pos) = if n == 0 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let mean = crit.iter().sum::<f64>() / n as f64;
        let var = crit.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        (crit[0], crit[n - 1], mean, var.sqrt())
    };

    let values: Vec<f64> = crit.iter().map(|&x| p.eval(x)).collect();
    let (min_val, max_val, mean_val) = if values.is_empty() {
        (0.0, 0.0, 0.0)
    } else {
        (
            values.iter().copied().fold(f64::INFINITY, f64::min),
            values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            values.iter().sum::<f64>() / values.len() as f64,
        )
    };

    let crit8 = coeff_sign_changes(
        values.iter().map(|&v| if v.abs() < CRIT_VALUE_ZERO_TOL { 0.0 } else { v }),
    );

    Ok([
        n as f64,
        min_pos,
        max_pos,
        mean_pos,
        std_pos,
        min_val,
        max_val,
        mean_val,
        inflect.len() as f64,
        crit8 as f64,
    ])
}

/// Hybrid symbolic family: Tschirnhaus invariants I2..I5 (coefficients of the
/// depressed quintic under x -> x - A/5), four bilinear coefficient
/// combinations, three discriminant-like differences, and five ε-guarded
/// scale-invariant coefficient ratios.
pub fn hybrid_symbolic_features(p: &Polynomial) -> Result<[f64; 16]> {
    require_quintic(p)?;
    if !p.is_monic() {
        return Err(Error::BadCoefficients("hybrid features require a monic quintic".into()));
    }
    let t = p.trailing();
    let (a, b, c, d, e) = (t[0], t[1], t[2], t[3], t[4]);

    let depressed = p.as_dense().shift(-a / 5.0);
    let dc = depressed.coeffs();
    // dc = [1, ~0, I2, I3, I4, I5]
    let (i2, i3, i4, i5) = (dc[2], dc[3], dc[4], dc[5]);

    Ok([
        i2,
        i3,
        i4,
        i5,
        a * b * c - d * e,
        a * a * e - b * b * d + c.powi(3),
        a * d - b * e,
        a * e - c * d,
        b * b - a * c,
        c * c - b * d,
        d * d - c * e,
        a * a / guard(b),
        a.powi(3) / guard(c),
        a.powi(4) / guard(d),
        a.powi(5) / guard(e),
        b * b / guard(a * c),
    ])
}

/// Decomposition family: near-zero coefficient count, magnitude ratio,
/// coefficient variance, an x-factorization indicator, and four normalized
/// Sylvester-style bilinear measures.
pub fn decomposition_features(p: &Polynomial) -> Result<[f64; 8]> {
    require_quintic(p)?;
    if !p.is_monic() {
        return Err(Error::BadCoefficients(
            "decomposition features require a monic quintic".into(),
        ));
    }
    let t = p.trailing();
    let (a, b, c, d, e) = (t[0], t[1], t[2], t[3], t[4]);

    let near_zero = t.iter().filter(|x| x.abs() < 0.1).count() as f64;
    let max_mag = t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let min_nonzero = t.iter().map(|x| x.abs()).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    let mag_ratio =
        if min_nonzero.is_finite() { max_mag / guard(min_nonzero) } else { 0.0 };

    let mean = t.iter().sum::<f64>() / 5.0;
    let var = t.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 5.0;

    let x_factor = if e.abs() < 0.1 { 1.0 } else { 0.0 };

    let s = 1.0 + a * a + b * b + c * c + d * d + e * e;
    Ok([
        near_zero,
        mag_ratio,
        var,
        x_factor,
        (a * d - b * c).abs() / s,
        (b * e - c * d).abs() / s,
        (a * e - b * d).abs() / s,
        (c * e - d * d).abs() / s,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quintic(rest: &[f64; 5]) -> Polynomial {
        Polynomial::monic(5, rest).unwrap()
    }

    /// x^5 - 5x^3 + 4x: roots 0, ±1, ±2.
    fn five_real() -> Polynomial {
        quintic(&[0.0, -5.0, 0.0, 4.0, 0.0])
    }

    /// x^5 + x: strictly monotone, one real root.
    fn one_real() -> Polynomial {
        quintic(&[0.0, 0.0, 0.0, 1.0, 0.0])
    }

    #[test]
    fn sturm_counts_real_roots() {
        let f = sturm_features(&five_real()).unwrap();
        assert_eq!(f[2], 5.0);
        let f = sturm_features(&one_real()).unwrap();
        assert_eq!(f[2], 1.0);
        // x^5 + 1 has the unique real root -1.
        let f = sturm_features(&quintic(&[0.0, 0.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(f[2], 1.0);
    }

    #[test]
    fn descartes_examples() {
        assert_eq!(descartes_features(&five_real()).unwrap(), [2.0, 2.0, 4.0, 1.0, 0.0, 0.0]);
        assert_eq!(
            descartes_features(&quintic(&[0.0, 0.0, 0.0, 0.0, 1.0])).unwrap(),
            [0.0, 1.0, 1.0, 4.0, 0.0, 1.0]
        );
        let all_positive = descartes_features(&quintic(&[1.0, 1.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(all_positive[0], 0.0);
    }

    #[test]
    fn newton_examples() {
        // x^5: all power sums zero.
        let f = newton_features(&quintic(&[0.0; 5])).unwrap();
        assert_eq!(&f[0..7], &[0.0; 7]);
        // x^5 - x^4: roots {1,0,0,0,0} so s1 = s2 = s3 = 1.
        let f = newton_features(&quintic(&[-1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(&f[0..3], &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn newton_s1_is_minus_a() {
        use rand::Rng;
        let mut rng = crate::seeding::rng(5, &[]);
        for _ in 0..50 {
            let rest: [f64; 5] = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
            let f = newton_features(&quintic(&rest)).unwrap();
            assert_eq!(f[0], -rest[0]);
        }
    }

    #[test]
    fn critical_point_examples() {
        // x^5 + x: derivative 5x^4 + 1 has no real roots.
        let f = critical_point_features(&one_real()).unwrap();
        assert_eq!(f[0], 0.0);
        assert_eq!(f[9], 0.0);

        // x^5 - 5x^3 + 4x: 4 real critical points, Crit8 = 3, 3 inflections.
        let f = critical_point_features(&five_real()).unwrap();
        assert_eq!(f[0], 4.0);
        assert_eq!(f[8], 3.0);
        assert_eq!(f[9], 3.0);
        // Critical values approx (+3.63, -1.42, +1.42, -3.63); max and min.
        assert!((f[6] - 3.6315).abs() < 1e-3);
        assert!((f[5] + 3.6315).abs() < 1e-3);
    }

    #[test]
    fn hybrid_zero_polynomial_coefficients() {
        let f = hybrid_symbolic_features(&quintic(&[0.0; 5])).unwrap();
        assert!(f.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn hybrid_symmetry_cases() {
        let f = hybrid_symbolic_features(&quintic(&[1.0; 5])).unwrap();
        // B² - AC = C² - BD = D² - CE = 0 at A..E = 1.
        assert_eq!(f[8], 0.0);
        assert_eq!(f[9], 0.0);
        assert_eq!(f[10], 0.0);
    }

    #[test]
    fn hybrid_depressed_coefficients_match_shift_oracle() {
        // Cross-check I2..I5 against direct evaluation of p(y - A/5).
        let p = quintic(&[2.0, 0.0, 0.0, 0.0, 0.0]);
        let f = hybrid_symbolic_features(&p).unwrap();
        let q = |y: f64| {
            y.powi(5) + f[0] * y.powi(3) + f[1] * y * y + f[2] * y + f[3]
        };
        for y in [-1.0, -0.25, 0.5, 1.5] {
            let want = p.eval(y - 2.0 / 5.0);
            assert!((q(y) - want).abs() < 1e-9 * (1.0 + want.abs()));
        }
    }

    #[test]
    fn decomposition_examples() {
        let f = decomposition_features(&quintic(&[0.0; 5])).unwrap();
        assert_eq!(f[0], 5.0);
        assert_eq!(f[3], 1.0);
        assert_eq!(f[1], 0.0);

        let f = decomposition_features(&quintic(&[1.0; 5])).unwrap();
        assert_eq!(f[4], 0.0); // AD = BC
        assert_eq!(f[5], 0.0); // BE = CD

        let f = decomposition_features(&quintic(&[10.0, 0.01, 0.0, 0.0, 5.0])).unwrap();
        assert_eq!(f[0], 3.0);
        assert_eq!(f[3], 0.0);
    }

    #[test]
    fn scale_invariant_ratios() {
        use rand::Rng;
        let mut rng = crate::seeding::rng(6, &[]);
        for _ in 0..50 {
            let rest: [f64; 5] = std::array::from_fn(|_| rng.random_range(-5.0..5.0));
            let p = quintic(&rest);
            let nf = newton_features(&p).unwrap();
            let hf = hybrid_symbolic_features(&p).unwrap();
            // Skip cases near ε-guard activation.
            if nf[1].abs() < 1e-3
                || rest.iter().any(|x| x.abs() < 1e-3)
                || (rest[0] * rest[2]).abs() < 1e-3
            {
                continue;
            }
            for lambda in [0.5f64, 2.0, 10.0] {
                let scaled: [f64; 5] = std::array::from_fn(|i| rest[i] * lambda.powi(i as i32 + 1));
                let ps = quintic(&scaled);
                let nfs = newton_features(&ps).unwrap();
                let hfs = hybrid_symbolic_features(&ps).unwrap();
                for k in 7..10 {
                    assert!(
                        (nf[k] - nfs[k]).abs() <= 1e-6 * (1.0 + nf[k].abs()),
                        "newton ratio {k}: {} vs {}",
                        nf[k],
                        nfs[k]
                    );
                }
                for k in 11..16 {
                    assert!(
                        (hf[k] - hfs[k]).abs() <= 1e-6 * (1.0 + hf[k].abs()),
                        "hybrid ratio {k}: {} vs {}",
                        hf[k],
                        hfs[k]
                    );
                }
            }
        }
    }
}
