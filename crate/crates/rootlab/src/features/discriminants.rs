//! Closed-form discriminant features for degrees 2–4.

use serde::{Deserialize, Serialize};

use super::guard;
use crate::error::{Error, Result};
use crate::polycore::Polynomial;

/// Which cubic β to use.
///
/// The standard depressed-cubic constant is `β = 2(A/3)^3 - (A/3)B + C`; only
/// this form puts the real/complex boundary of `β²/α³` at the theoretical
/// threshold 4. The literal variant `2(A/3)^3 - (A/3)(B/3) + C` is kept
/// selectable for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CubicBetaForm {
    #[default]
    Standard,
    Literal,
}

/// Degree-specific discriminant features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DiscriminantFeatures {
    /// `b²/(ac)`; the real/complex boundary sits at 4.
    Quadratic { ratio: f64 },
    /// Reduced-form parameters and their ratio `β²/α³` (boundary at 4).
    Cubic { alpha: f64, beta: f64, ratio: f64 },
    /// Classical invariants I, J, the difference `4I³ - J²`, the depressed
    /// quartic coefficients, the seminvariant `D = 64r - 16p²`, and sign
    /// indicators. The signs of (delta_like, dep_p, seminv_d) pin down the
    /// real-root configuration exactly away from boundaries, and being signs
    /// they survive any coefficient scale.
    Quartic {
        inv_i: f64,
        inv_j: f64,
        delta_like: f64,
        dep_p: f64,
        dep_q: f64,
        dep_r: f64,
        seminv_d: f64,
        sign_i: f64,
        sign_delta: f64,
        sign_p: f64,
        sign_d: f64,
    },
}

impl DiscriminantFeatures {
    pub fn names(degree: usize) -> Result<&'static [&'static str]> {
        match degree {
            2 => Ok(&["disc_ratio"]),
            3 => Ok(&["alpha", "beta", "beta2_alpha3"]),
            4 => Ok(&[
                "inv_i",
                "inv_j",
                "delta_like",
                "dep_p",
                "dep_q",
                "dep_r",
                "seminv_d",
                "sign_i",
                "sign_delta",
                "sign_p",
                "sign_d",
            ]),
            d => Err(Error::InvalidDegree(d)),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            DiscriminantFeatures::Quadratic { ratio } => vec![ratio],
            DiscriminantFeatures::Cubic { alpha, beta, ratio } => vec![alpha, beta, ratio],
            DiscriminantFeatures::Quartic {
                inv_i,
                inv_j,
                delta_like,
                dep_p,
                dep_q,
                dep_r,
                seminv_d,
                sign_i,
                sign_delta,
                sign_p,
                sign_d,
            } => vec![
                inv_i, inv_j, delta_like, dep_p, dep_q, dep_r, seminv_d, sign_i, sign_delta,
                sign_p, sign_d,
            ],
        }
    }
}

fn sign_indicator(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Discriminant features with every denominator ε-guarded.
///
/// Degrees 3–4 are normalized to monic form first (a positive or negative
/// overall scale does not move the roots). Degree 5 has no closed form; use
/// the 63-entry bank instead.
pub fn discriminant_features(p: &Polynomial) -> Result<DiscriminantFeatures> {
    discriminant_features_with(p, CubicBetaForm::Standard)
}

/// [`discriminant_features`] with an explicit cubic β form.
pub fn discriminant_features_with(
    p: &Polynomial,
    beta_form: CubicBetaForm,
) -> Result<DiscriminantFeatures> {
    match p.degree() {
        2 => {
            let (a, b, c) = (p.coeffs()[0], p.coeffs()[1], p.coeffs()[2]);
            Ok(DiscriminantFeatures::Quadratic { ratio: b * b / guard(a * c) })
        }
        3 => {
            let lead = p.coeffs()[0];
            let a = p.coeffs()[1] / lead;
            let b = p.coeffs()[2] / lead;
            let c = p.coeffs()[3] / lead;
            let alpha = (a / 3.0) * (a / 3.0) - b / 3.0;
            let beta = match beta_form {
                CubicBetaForm::Standard => 2.0 * (a / 3.0).powi(3) - (a / 3.0) * b + c,
                CubicBetaForm::Literal => 2.0 * (a / 3.0).powi(3) - (a / 3.0) * (b / 3.0) + c,
            };
            let ratio = beta * beta / guard(alpha.powi(3));
            Ok(DiscriminantFeatures::Cubic { alpha, beta, ratio })
        }
        4 => {
            let lead = p.coeffs()[0];
            let a = p.coeffs()[1] / lead;
            let b = p.coeffs()[2] / lead;
            let c = p.coeffs()[3] / lead;
            let d = p.coeffs()[4] / lead;
            let inv_i = 12.0 * d - 3.0 * a * c + b * b;
            let inv_j = 72.0 * b * d + 9.0 * a * b * c
                - 27.0 * c * c
                - 27.0 * a * a * d
                - 2.0 * b.powi(3);
            let delta_like = 4.0 * inv_i.powi(3) - inv_j * inv_j;
            let dep_p = b - 3.0 * a * a / 8.0;
            let dep_q = c - a * b / 2.0 + a.powi(3) / 8.0;
            let dep_r = d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a.powi(4) / 256.0;
            let seminv_d = 64.0 * dep_r - 16.0 * dep_p * dep_p;
            Ok(DiscriminantFeatures::Quartic {
                inv_i,
                inv_j,
                delta_like,
                dep_p,
                dep_q,
                dep_r,
                seminv_d,
                sign_i: sign_indicator(inv_i),
                sign_delta: sign_indicator(delta_like),
                sign_p: sign_indicator(dep_p),
                sign_d: sign_indicator(seminv_d),
            })
        }
        d => Err(Error::InvalidDegree(d)),
    }
}
