//! Ground-truth labeling of root configurations.

use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::roots::roots_numeric;
use crate::error::Result;

/// Default imaginary-part threshold separating real from complex roots.
pub const LABEL_IMAG_TOL: f64 = 1e-10;

/// Real/complex root counts and the class label for one polynomial.
///
/// Labels enumerate real-root counts in descending order so that class 0 is
/// "all real": degree 5 maps 5/3/1 real to 0/1/2, degree 4 maps 4/2/0 to
/// 0/1/2, degree 3 maps 3/1 to 0/1, degree 2 maps 2/0 to 0/1. Uniformly,
/// `class_label = (degree - n_real) / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootProfile {
    pub n_real: usize,
    pub n_complex: usize,
    pub class_label: u8,
    /// Imaginary magnitude of the real-classified root nearest the threshold
    /// (the minimum-margin witness); 0 when every real-classified root is
    /// exactly real.
    pub min_imag_margin: f64,
    /// Set when the raw tolerance classification produced an odd complex
    /// count and the nearest-to-real complex root was reclassified.
    pub parity_repaired: bool,
}

/// Number of classes for a given degree under the labeling above.
pub fn n_classes(degree: usize) -> usize {
    degree / 2 + 1
}

/// Classify the real-root configuration of `p`.
///
/// A root is real iff `|Im| < imag_tol`. If the tolerance classification
/// leaves an odd number of complex roots (impossible for a real polynomial),
/// the complex root with the smallest `|Im|` is reclassified as real and the
/// repair is recorded on the profile rather than silently dropped.
pub fn classify_root_profile(p: &Polynomial, imag_tol: f64) -> Result<RootProfile> {
    let roots = roots_numeric(p)?;
    let degree = p.degree();

    let mut real_flags: Vec<bool> = roots.iter().map(|r| r.im.abs() < imag_tol).collect();
    let mut n_real = real_flags.iter().filter(|&&f| f).count();

    let mut parity_repaired = false;
    if (degree - n_real) % 2 == 1 {
        let candidate = roots
            .iter()
            .enumerate()
            .filter(|(i, _)| !real_flags[*i])
            .min_by(|(_, a), (_, b)| a.im.abs().total_cmp(&b.im.abs()))
            .map(|(i, _)| i);
        if let Some(i) = candidate {
            real_flags[i] = true;
            n_real += 1;
            parity_repaired = true;
        }
    }

    let min_imag_margin = roots
        .iter()
        .zip(&real_flags)
        .filter(|(_, &f)| f)
        .map(|(r, _)| r.im.abs())
        .fold(0.0, f64::max);

    Ok(RootProfile {
        n_real,
        n_complex: degree - n_real,
        class_label: ((degree - n_real) / 2) as u8,
        min_imag_margin,
        parity_repaired,
    })
}
