use std::collections::BTreeMap;

use crate::corpus::{Dataset, SenseLabel};
use crate::error::{Error, Result};

/// Always sense 1; needs no training data.
pub fn baseline_sense1(test: &Dataset) -> Vec<SenseLabel> {
    vec![SenseLabel::FIRST; test.len()]
}

/// The modal label of `labels`, smallest rank on ties.
pub fn most_frequent_label(labels: impl IntoIterator<Item = SenseLabel>) -> Result<SenseLabel> {
    let mut counts: BTreeMap<SenseLabel, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(l).or_insert(0) += 1;
    }
    // max_by_key keeps the last maximum; iterate in reverse so the smallest rank wins.
    counts
        .iter()
        .rev()
        .max_by_key(|(_, &c)| c)
        .map(|(&l, _)| l)
        .ok_or(Error::EmptyTraining)
}

pub fn baseline_most_frequent(train: &Dataset, test: &Dataset) -> Result<Vec<SenseLabel>> {
    let label = most_frequent_label(train.instances().iter().map(|i| i.label))?;
    Ok(vec![label; test.len()])
}

/// `(correct, total, correct / total)`; the ratio is `None` for an empty set.
pub fn accuracy(predictions: &[SenseLabel], test: &Dataset) -> (usize, usize, Option<f64>) {
    let correct = predictions.iter().zip(test.instances()).filter(|(p, i)| **p == i.label).count();
    let total = test.len();
    (correct, total, (total > 0).then(|| correct as f64 / total as f64))
}
