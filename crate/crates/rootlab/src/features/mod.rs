//! Mathematical feature banks.
//!
//! Degrees 2–4 get their closed-form discriminant features; degree 5 gets the
//! 63-entry bank (5 raw coefficients + six families). Every ratio passes
//! through the ε-guard [`guard`], so all feature values are finite.

pub mod discriminants;
pub mod quintic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::Polynomial;

pub use discriminants::{discriminant_features, CubicBetaForm, DiscriminantFeatures};
pub use quintic::{
    critical_point_features, decomposition_features, descartes_features,
    hybrid_symbolic_features, newton_features, sturm_features,
};

/// Denominator floor for every ratio feature.
pub const EPS_GUARD: f64 = 1e-9;

/// ε-guard: `sign(d) * max(|d|, EPS_GUARD)`, with zero treated as positive.
#[inline]
pub fn guard(d: f64) -> f64 {
    if d < 0.0 {
        -d.abs().max(EPS_GUARD)
    } else {
        d.abs().max(EPS_GUARD)
    }
}

/// The six quintic feature families, in their fixed concatenation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureFamily {
    Sturm,
    Descartes,
    Newton,
    CriticalPoints,
    HybridSymbolic,
    Decomposition,
}

impl FeatureFamily {
    pub const ALL: [FeatureFamily; 6] = [
        FeatureFamily::Sturm,
        FeatureFamily::Descartes,
        FeatureFamily::Newton,
        FeatureFamily::CriticalPoints,
        FeatureFamily::HybridSymbolic,
        FeatureFamily::Decomposition,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FeatureFamily::Sturm => "sturm",
            FeatureFamily::Descartes => "descartes",
            FeatureFamily::Newton => "newton",
            FeatureFamily::CriticalPoints => "critical_points",
            FeatureFamily::HybridSymbolic => "hybrid_symbolic",
            FeatureFamily::Decomposition => "decomposition",
        }
    }

    pub fn parse(name: &str) -> Result<FeatureFamily> {
        match name.trim() {
            "sturm" => Ok(FeatureFamily::Sturm),
            "descartes" => Ok(FeatureFamily::Descartes),
            "newton" => Ok(FeatureFamily::Newton),
            "critical_points" | "critical" => Ok(FeatureFamily::CriticalPoints),
            "hybrid_symbolic" | "hybrid" => Ok(FeatureFamily::HybridSymbolic),
            "decomposition" => Ok(FeatureFamily::Decomposition),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn feature_names(&self) -> &'static [&'static str] {
        match self {
            FeatureFamily::Sturm => &[
                "sturm_v_neg_inf",
                "sturm_v_pos_inf",
                "sturm_v_diff",
                "sturm_v_m10",
                "sturm_v_m1",
                "sturm_v_0",
                "sturm_v_1",
                "sturm_v_10",
            ],
            FeatureFamily::Descartes => &[
                "desc_pos",
                "desc_neg",
                "desc_total",
                "desc_min_complex",
                "desc_pos_parity",
                "desc_neg_parity",
            ],
            FeatureFamily::Newton => &[
                "newton_s1",
                "newton_s2",
                "newton_s3",
                "newton_s4",
                "newton_s5",
                "newton_mean",
                "newton_var",
                "newton_r1",
                "newton_r2",
                "newton_r3",
            ],
            FeatureFamily::CriticalPoints => &[
                "crit_count",
                "crit_min_pos",
                "crit_max_pos",
                "crit_mean_pos",
                "crit_std_pos",
                "crit_min_val",
                "crit_max_val",
                "crit_mean_val",
                "crit_inflections",
                "crit8",
            ],
            FeatureFamily::HybridSymbolic => &[
                "hyb_i2",
                "hyb_i3",
                "hyb_i4",
                "hyb_i5",
                "hyb_abc_de",
                "hyb_a2e_b2d_c3",
                "hyb_ad_be",
                "hyb_ae_cd",
                "hyb_b2_ac",
                "hyb_c2_bd",
                "hyb_d2_ce",
                "hyb_ratio_a2_b",
                "hyb_ratio_a3_c",
                "hyb_ratio_a4_d",
                "hyb_ratio_a5_e",
                "hyb_ratio_b2_ac",
            ],
            FeatureFamily::Decomposition => &[
                "dec_near_zero",
                "dec_mag_ratio",
                "dec_var",
                "dec_x_factor",
                "dec_m1",
                "dec_m2",
                "dec_m3",
                "dec_m4",
            ],
        }
    }

    fn compute(&self, p: &Polynomial) -> Result<Vec<f64>> {
        Ok(match self {
            FeatureFamily::Sturm => sturm_features(p)?.to_vec(),
            FeatureFamily::Descartes => descartes_features(p)?.to_vec(),
            FeatureFamily::Newton => newton_features(p)?.to_vec(),
            FeatureFamily::CriticalPoints => critical_point_features(p)?.to_vec(),
            FeatureFamily::HybridSymbolic => hybrid_symbolic_features(p)?.to_vec(),
            FeatureFamily::Decomposition => decomposition_features(p)?.to_vec(),
        })
    }
}

/// Raw-coefficient column names for the quintic bank.
pub const QUINTIC_RAW_NAMES: [&str; 5] = ["A", "B", "C", "D", "E"];

/// Named feature values for one polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
    pub degree: usize,
}

/// Concatenate the 5 raw coefficients with the selected families in canonical
/// order. An empty selection yields the 5-entry raw vector; all six families
/// yield the full 63-entry bank.
pub fn assemble_features(p: &Polynomial, families: &[FeatureFamily]) -> Result<FeatureVector> {
    if p.degree() != 5 {
        return Err(Error::InvalidDegree(p.degree()));
    }
    let mut names: Vec<String> = QUINTIC_RAW_NAMES.iter().map(|s| s.to_string()).collect();
    let mut values: Vec<f64> = p.trailing().to_vec();
    for fam in FeatureFamily::ALL {
        if families.contains(&fam) {
            names.extend(fam.feature_names().iter().map(|s| s.to_string()));
            values.extend(fam.compute(p)?);
        }
    }
    debug_assert_eq!(names.len(), values.len());
    debug_assert!(values.iter().all(|v| v.is_finite()), "non-finite feature");
    Ok(FeatureVector { names, values, degree: 5 })
}

/// Names only, without computing anything; mirrors [`assemble_features`].
pub fn assembled_names(families: &[FeatureFamily]) -> Vec<String> {
    let mut names: Vec<String> = QUINTIC_RAW_NAMES.iter().map(|s| s.to_string()).collect();
    for fam in FeatureFamily::ALL {
        if families.contains(&fam) {
            names.extend(fam.feature_names().iter().map(|s| s.to_string()));
        }
    }
    names
}
