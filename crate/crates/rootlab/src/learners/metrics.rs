//! Classification metrics.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Unweighted mean of per-class recall, over the classes present in `y_true`.
pub fn balanced_accuracy(y_true: &[u8], y_pred: &[u8]) -> Result<f64> {
    if y_true.is_empty() {
        return Err(Error::BadData("balanced accuracy of an empty set".into()));
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::BadData(format!(
            "length mismatch: {} true vs {} predicted",
            y_true.len(),
            y_pred.len()
        )));
    }
    let mut totals: BTreeMap<u8, (usize, usize)> = BTreeMap::new();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        let entry = totals.entry(t).or_insert((0, 0));
        entry.0 += 1;
        if t == p {
            entry.1 += 1;
        }
    }
    let recall_sum: f64 = totals.values().map(|&(n, hit)| hit as f64 / n as f64).sum();
    Ok(recall_sum / totals.len() as f64)
}

/// Fraction of positions where the two label vectors agree (fidelity).
pub fn agreement(a: &[u8], b: &[u8]) -> Result<f64> {
    if a.is_empty() || a.len() != b.len() {
        return Err(Error::BadData("agreement needs two equal-length nonempty vectors".into()));
    }
    let hits = a.iter().zip(b).filter(|(x, y)| x == y).count();
    Ok(hits as f64 / a.len() as f64)
}
