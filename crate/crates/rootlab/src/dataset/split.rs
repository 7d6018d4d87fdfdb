//! Stratified splitting utilities.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seeding::{self, TAG_FOLD, TAG_SPLIT, TAG_SUBSAMPLE};

fn indices_by_class(labels: &[u8]) -> BTreeMap<u8, Vec<usize>> {
    let mut by_class: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        by_class.entry(l).or_default().push(i);
    }
    by_class
}

/// Stratified k-fold partition: k disjoint, covering (train, test) index
/// pairs whose per-fold class proportions are within one sample of the global
/// proportions. Fully determined by `seed`.
pub fn stratified_kfold(
    labels: &[u8],
    k: usize,
    seed: u64,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if k < 2 {
        return Err(Error::BadData(format!("k must be >= 2, got {k}")));
    }
    let by_class = indices_by_class(labels);
    for (&class, idx) in &by_class {
        if idx.len() < k {
            return Err(Error::BadData(format!(
                "class {class} has {} members, fewer than k = {k}",
                idx.len()
            )));
        }
    }

    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    // Deal each class round-robin; rotating the starting fold by the running
    // remainder keeps fold sizes balanced across classes.
    let mut offset = 0usize;
    for (&class, idx) in &by_class {
        let mut shuffled = idx.clone();
        let mut rng = seeding::rng(seed, &[TAG_FOLD, class as u64]);
        shuffled.shuffle(&mut rng);
        for (j, &i) in shuffled.iter().enumerate() {
            folds[(j + offset) % k].push(i);
        }
        offset = (offset + idx.len()) % k;
    }

    let n = labels.len();
    let mut out = Vec::with_capacity(k);
    for fold in folds {
        let mut test = fold;
        test.sort_unstable();
        let mut in_test = vec![false; n];
        for &i in &test {
            in_test[i] = true;
        }
        let train: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
        out.push((train, test));
    }
    Ok(out)
}

/// Stratified train/test split with the given test fraction. Returns sorted
/// (train, test) index vectors.
pub fn stratified_split(
    labels: &[u8],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(0.0 < test_fraction && test_fraction < 1.0) {
        return Err(Error::BadData(format!(
            "test fraction must be in (0,1), got {test_fraction}"
        )));
    }
    let by_class = indices_by_class(labels);
    let mut test = Vec::new();
    for (&class, idx) in &by_class {
        if idx.len() < 2 {
            // A singleton class stays in the training side.
            continue;
        }
        let mut shuffled = idx.clone();
        let mut rng = seeding::rng(seed, &[TAG_SPLIT, class as u64]);
        shuffled.shuffle(&mut rng);
        let n_test = ((idx.len() as f64) * test_fraction).round() as usize;
        let n_test = n_test.clamp(1, idx.len() - 1);
        test.extend_from_slice(&shuffled[..n_test]);
    }
    test.sort_unstable();
    let mut in_test = vec![false; labels.len()];
    for &i in &test {
        in_test[i] = true;
    }
    let train: Vec<usize> = (0..labels.len()).filter(|&i| !in_test[i]).collect();
    Ok((train, test))
}

/// Stratified subsample of exactly `n` rows (proportional allocation by the
/// largest-remainder method). When proportional allocation would leave a
/// class empty it is repaired to one row; the flag reports that the repair
/// fired.
pub fn stratified_subsample(labels: &[u8], n: usize, seed: u64) -> Result<(Vec<usize>, bool)> {
    if n == 0 || n > labels.len() {
        return Err(Error::BadData(format!(
            "subsample size {n} out of range 1..={}",
            labels.len()
        )));
    }
    let by_class = indices_by_class(labels);
    if n < by_class.len() {
        return Err(Error::BadData(format!(
            "subsample size {n} smaller than the class count {}",
            by_class.len()
        )));
    }
    let total = labels.len() as f64;

    // Largest-remainder allocation.
    let mut alloc: Vec<(u8, usize, f64)> = by_class
        .iter()
        .map(|(&c, idx)| {
            let exact = n as f64 * idx.len() as f64 / total;
            (c, exact.floor() as usize, exact - exact.floor())
        })
        .collect();
    let mut assigned: usize = alloc.iter().map(|(_, a, _)| a).sum();
    let mut order: Vec<usize> = (0..alloc.len()).collect();
    order.sort_by(|&i, &j| alloc[j].2.total_cmp(&alloc[i].2).then(alloc[i].0.cmp(&alloc[j].0)));
    let n_classes = alloc.len();
    let mut oi = 0;
    while assigned < n {
        alloc[order[oi % n_classes]].1 += 1;
        assigned += 1;
        oi += 1;
    }

    // Class-coverage repair: each class gets at least one row.
    let mut repaired = false;
    while let Some(zero_pos) = alloc.iter().position(|&(_, a, _)| a == 0) {
        let donor = alloc
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.1.cmp(&b.1))
            .map(|(i, _)| i)
            .expect("nonempty alloc");
        if alloc[donor].1 <= 1 {
            break;
        }
        alloc[donor].1 -= 1;
        alloc[zero_pos].1 += 1;
        repaired = true;
    }

    let mut out = Vec::with_capacity(n);
    for (class, take, _) in alloc {
        let idx = &by_class[&class];
        let take = take.min(idx.len());
        let mut shuffled = idx.clone();
        let mut rng = seeding::rng(seed, &[TAG_SUBSAMPLE, class as u64]);
        shuffled.shuffle(&mut rng);
        out.extend_from_slice(&shuffled[..take]);
    }
    out.sort_unstable();
    Ok((out, repaired))
}
