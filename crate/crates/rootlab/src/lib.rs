//! Classification lab for real-root configurations of degree 2–5 polynomials.
//!
//! The crate covers the full experimental pipeline:
//!
//! - [`polycore`] — polynomial arithmetic, numeric root finding (Aberth–Ehrlich),
//!   exact real-root counting over the rationals (Sturm chains), and ground-truth
//!   labeling of root configurations.
//! - [`features`] — discriminant features for degrees 2–4 and the 63-entry quintic
//!   feature bank (Sturm, Descartes, Newton sums, critical points, hybrid symbolic,
//!   decomposition families).
//! - [`dataset`] — seeded dataset generation, stratified splitting, noise injection,
//!   and CSV persistence.
//! - [`learners`] — from-scratch decision tree, random forest, gradient boosting,
//!   logistic regression, and MLP classifiers plus metrics and cross-validation.
//! - [`distill`] — NN→tree knowledge distillation, fidelity, feature importance,
//!   and rule extraction.
//! - [`stress`] — out-of-distribution, data-efficiency, and noise-robustness sweeps
//!   comparing raw-coefficient networks with invariant-feature trees.
//!
//! Everything is deterministic under explicit 64-bit seeds; no global RNG state.

pub mod data;
pub mod dataset;
pub mod distill;
pub mod error;
pub mod features;
pub mod learners;
pub mod polycore;
pub mod seeding;
pub mod stress;

pub use error::{Error, Result};
