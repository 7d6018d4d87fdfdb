//! Numeric root finding by Aberth–Ehrlich simultaneous iteration.
//!
//! The contract is residual-based: every returned root r must satisfy
//! `|p(r)| / (1 + max|coeff| * max(1,|r|)^degree) <= 1e-8`. Roots of real
//! polynomials are returned in exact conjugate pairs (a cleanup step pairs and
//! symmetrizes them), with genuinely real roots snapped to a zero imaginary
//! part.

use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Iteration budget; generous for degree <= 5.
pub const MAX_SWEEPS: usize = 200;

/// Normalized-residual acceptance bound.
pub const RESIDUAL_TOL: f64 = 1e-8;

fn eval_complex(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Worst normalized residual of the candidate roots.
pub fn normalized_residual(coeffs: &[f64], roots: &[Complex64]) -> f64 {
    let degree = coeffs.len() - 1;
    let max_coeff = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    roots
        .iter()
        .map(|&r| {
            let num = eval_complex(coeffs, r).norm();
            let den = 1.0 + max_coeff * r.norm().max(1.0).powi(degree as i32);
            num / den
        })
        .fold(0.0, f64::max)
}

/// Aberth–Ehrlich sweep loop on a monic-normalized coefficient vector with a
/// nonzero constant term.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    let monic: Vec<f64> = coeffs.iter().map(|c| c / coeffs[0]).collect();

    // Cauchy bound on root magnitude; initial guesses on a circle with an
    // angular offset so no guess starts on the real axis.
    let radius = 1.0 + monic.iter().skip(1).fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (degree as f64) + 0.43;
            Complex64::from_polar(0.7 * radius, angle)
        })
        .collect();

    let mut next = z.clone();
    for _ in 0..MAX_SWEEPS {
        let mut max_step = 0.0f64;
        for i in 0..degree {
            let (p, dp) = eval_with_derivative(&monic, z[i]);
            if p.norm() == 0.0 {
                next[i] = z[i];
                continue;
            }
            let w = if dp.norm() == 0.0 {
                // Derivative vanished at the iterate; nudge off the saddle.
                Complex64::new(1e-8 * (1.0 + z[i].norm()), 1e-8)
            } else {
                p / dp
            };
            let mut repulse = Complex64::new(0.0, 0.0);
            for j in 0..degree {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        repulse += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - w * repulse;
            let step = if denom.norm() == 0.0 { w } else { w / denom };
            next[i] = z[i] - step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        std::mem::swap(&mut z, &mut next);
        if max_step < 5e-15 {
            break;
        }
    }
    z
}

/// Up to two guarded Newton polish steps per root (kept only when the residual
/// improves). IEEE sign symmetry makes the polish map exact conjugates to
/// exact conjugates, so pairing survives.
fn polish(coeffs: &[f64], roots: &mut [Complex64]) {
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = eval_with_derivative(coeffs, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let cand = *r - p / dp;
            if eval_complex(coeffs, cand).norm() < p.norm() {
                *r = cand;
            } else {
                break;
            }
        }
    }
}

/// Enforce exact conjugate symmetry on the root set of a real polynomial.
///
/// Each root either pairs with the distinct root closest to its conjugate
/// (the pair is replaced by an exactly conjugate pair around their mean) or,
/// when it is its own best partner, has its imaginary part snapped to zero.
fn symmetrize_conjugates(roots: &mut Vec<Complex64>) {
    let n = roots.len();
    let mut used = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if used[i] {
            continue;
        }
        used[i] = true;
        let zi = roots[i];
        if zi.im == 0.0 {
            out.push(zi);
            continue;
        }
        let self_dist = 2.0 * zi.im.abs();
        let mut best: Option<(usize, f64)> = None;
        for (j, &zj) in roots.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (zi.conj() - zj).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d < self_dist => {
                used[j] = true;
                let m = (zi + roots[j].conj()) * 0.5;
                out.push(m);
                out.push(m.conj());
            }
            _ => out.push(Complex64::new(zi.re, 0.0)),
        }
    }
    *roots = out;
}

/// All complex roots of `p`, meeting the normalized-residual contract.
///
/// Exact trailing zero coefficients are deflated first (those roots are
/// exactly 0); the remainder is solved by Aberth–Ehrlich iteration and
/// polished. Fails with the best residual if the contract cannot be met
/// within the sweep budget.
pub fn roots_numeric(p: &Polynomial) -> Result<Vec<Complex64>> {
    let full = p.coeffs();
    let n_zero_roots = full.iter().rev().take_while(|&&c| c == 0.0).count();
    let deflated = &full[..full.len() - n_zero_roots];

    let mut roots: Vec<Complex64> = Vec::with_capacity(p.degree());
    roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), n_zero_roots));

    if deflated.len() > 1 {
        let mut rs = aberth(deflated);
        polish(deflated, &mut rs);
        symmetrize_conjugates(&mut rs);
        roots.extend(rs);
    }

    // Sort for determinism and stable downstream pairing: by real part, then
    // imaginary part (total order; NaN never reaches here).
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let residual = normalized_residual(full, &roots);
    if residual <= RESIDUAL_TOL {
        Ok(roots)
    } else {
        Err(Error::RootsDidNotConverge { residual })
    }
}
