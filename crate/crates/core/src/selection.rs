//! Choosing `k` by m-fold cross validation on the training data.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::collocation::{extract, FeatureVector};
use crate::corpus::{assign_folds, Dataset, SenseLabel};
use crate::error::{Error, Result};
use crate::knn::ExemplarStore;
use crate::rng;
use crate::Example;

/// Candidate values of `k`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGrid(Vec<usize>);

impl KGrid {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Grid("empty".into()));
        }
        if values[0] == 0 {
            return Err(Error::Grid("k must be positive".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Grid("values must be strictly increasing".into()));
        }
        Ok(KGrid(values))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

impl Default for KGrid {
    /// `1, 5, 10, 15, ..., 95, 100`.
    fn default() -> Self {
        KGrid(std::iter::once(1).chain((5..=100).step_by(5)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KStats {
    pub errors: usize,
    pub total: usize,
    pub error_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvResult {
    pub per_k: BTreeMap<usize, KStats>,
    pub best_k: usize,
    /// Size of the distance model trained for each fold, in fold order.
    pub fold_training_sizes: Vec<usize>,
}

/// Predicted label for `query` at every `k` of `grid`, from one ranking.
///
/// `k` larger than the store is clamped to the store size. The tie-breaking
/// stream for each clamped `k` is [`rng::query_stream`]`(seed, word,
/// query_index, k)`, so the result equals independent
/// [`ExemplarStore::classify`] calls with those streams.
pub fn predict_grid(
    store: &ExemplarStore,
    query: &FeatureVector,
    grid: &KGrid,
    seed: u64,
    word: &str,
    query_index: usize,
) -> Vec<SenseLabel> {
    let ranked = store.ranked(query);
    grid.values()
        .iter()
        .map(|&k| {
            let k = k.min(store.len());
            let mut stream = rng::query_stream(seed, word, query_index, k);
            store.vote(&ranked[..k], &mut stream).chosen
        })
        .collect()
}

struct FoldOutcome {
    errors: Vec<usize>,
    held_out: usize,
    training_size: usize,
}

/// Estimate the error rate of every `k` in `grid` by `m`-fold cross
/// validation over `dataset`, and pick the smallest `k` with minimal error.
///
/// Errors are pooled over folds: total misclassifications divided by the
/// dataset size.
pub fn cross_validate_k(dataset: &Dataset, grid: &KGrid, m: usize, seed: u64, lowercase: bool) -> Result<CvResult> {
    if dataset.len() < m || m < 2 {
        return Err(Error::Folds { size: dataset.len(), folds: m });
    }
    let folds = assign_folds(dataset, m, seed)?;
    let examples: Vec<Example> = dataset.instances().iter().map(|i| (extract(i, lowercase), i.label)).collect();

    let outcomes: Vec<FoldOutcome> = (0..m)
        .into_par_iter()
        .map(|fold| {
            let train: Vec<Example> = examples
                .iter()
                .zip(&folds)
                .filter(|(_, &f)| f != fold)
                .map(|(e, _)| e.clone())
                .collect();
            let store = ExemplarStore::new(train)?;
            let mut errors = vec![0; grid.values().len()];
            let mut held_out = 0;
            for (index, (query, gold)) in examples.iter().enumerate().filter(|(i, _)| folds[*i] == fold) {
                held_out += 1;
                let predictions = predict_grid(&store, query, grid, seed, dataset.word(), index);
                for (e, p) in errors.iter_mut().zip(predictions) {
                    *e += usize::from(p != *gold);
                }
            }
            Ok(FoldOutcome { errors, held_out, training_size: store.model().training_size() })
        })
        .collect::<Result<_>>()?;

    let total: usize = outcomes.iter().map(|o| o.held_out).sum();
    let mut per_k = BTreeMap::new();
    for (slot, &k) in grid.values().iter().enumerate() {
        let errors: usize = outcomes.iter().map(|o| o.errors[slot]).sum();
        per_k.insert(k, KStats { errors, total, error_rate: errors as f64 / total as f64 });
    }
    // Pooled totals are identical across k, so comparing error counts is exact.
    let best_k = grid
        .values()
        .iter()
        .copied()
        .min_by_key(|k| per_k[k].errors)
        .expect("grid is non-empty");
    Ok(CvResult { per_k, best_k, fold_training_sizes: outcomes.iter().map(|o| o.training_size).collect() })
}
