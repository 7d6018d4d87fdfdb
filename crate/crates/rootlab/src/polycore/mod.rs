//! Polynomial arithmetic, root finding, exact root counting, and labeling.

pub mod poly;
pub mod profile;
pub mod rational;
pub mod roots;
pub mod sturm;

pub use poly::{DensePoly, Polynomial};
pub use profile::{classify_root_profile, n_classes, RootProfile, LABEL_IMAG_TOL};
pub use rational::{
    exact_real_root_count, rational_sign_changes_at, BigInt, BigRational, RatPoint, RationalPoly,
};
pub use roots::{normalized_residual, roots_numeric, MAX_SWEEPS, RESIDUAL_TOL};
pub use sturm::{sign_changes_at, sturm_chain, EvalPoint};
