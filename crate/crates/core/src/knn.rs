//! Exemplar-based classification: majority vote among the `k` training
//! examples nearest to the query under the value difference metric.
//!
//! Neighbors are ranked by the total order `(distance, training index)`, so
//! exactly `k` neighbors are used even when distances tie at the boundary.
//! Ties between majority classes are broken by a caller-supplied random
//! stream.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::Rng;

use crate::collocation::{FeatureVector, FEATURE_COUNT};
use crate::corpus::SenseLabel;
use crate::error::{Error, Result};
use crate::mvdm::{l1, DistanceModel};
use crate::Example;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

impl Neighbor {
    fn order(&self, other: &Self) -> Ordering {
        self.distance.total_cmp(&other.distance).then(self.index.cmp(&other.index))
    }
}

/// Outcome of one k-NN vote.
#[derive(Debug, Clone, PartialEq)]
pub struct Vote {
    pub neighbor_indices: Vec<usize>,
    pub class_tallies: BTreeMap<SenseLabel, usize>,
    pub chosen: SenseLabel,
}

/// Training examples in training order, plus the distance model trained on
/// exactly those examples.
#[derive(Debug, Clone)]
pub struct ExemplarStore {
    examples: Vec<Example>,
    model: DistanceModel,
    /// Per example, the vocabulary id of each feature value.
    encoded: Vec<[usize; FEATURE_COUNT]>,
}

impl ExemplarStore {
    pub fn new(examples: Vec<Example>) -> Result<Self> {
        let model = DistanceModel::train(&examples)?;
        let encoded = examples
            .iter()
            .map(|(fv, _)| std::array::from_fn(|f| model.value_id(f, fv.get(f)).expect("value seen in training")))
            .collect();
        Ok(ExemplarStore { examples, model, encoded })
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn model(&self) -> &DistanceModel {
        &self.model
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn label(&self, index: usize) -> SenseLabel {
        self.examples[index].1
    }

    /// Distance from `query` to every stored example, in training order.
    ///
    /// Equal to calling [`DistanceModel::example_distance`] per example, but
    /// each distinct training value is compared with the query only once.
    pub fn distances(&self, query: &FeatureVector) -> Vec<f64> {
        let tables: Vec<Vec<f64>> = (0..FEATURE_COUNT)
            .map(|f| {
                let q = self.model.distribution(f, query.get(f));
                let qid = self.model.value_id(f, query.get(f));
                (0..self.model.vocabulary(f).len())
                    .map(|v| if Some(v) == qid { 0.0 } else { l1(q, self.model.row(f, v)) })
                    .collect()
            })
            .collect();
        self.encoded
            .iter()
            .map(|ids| {
                let mut d = 0.0;
                for (table, &id) in tables.iter().zip(ids) {
                    d += table[id];
                }
                d
            })
            .collect()
    }

    /// Every stored example, sorted by `(distance, index)`.
    pub fn ranked(&self, query: &FeatureVector) -> Vec<Neighbor> {
        rank(self.distances(query))
    }

    pub fn nearest(&self, query: &FeatureVector, k: usize) -> Result<Vec<Neighbor>> {
        self.check_k(k)?;
        let mut all = self.ranked(query);
        all.truncate(k);
        Ok(all)
    }

    pub fn classify<R: Rng + ?Sized>(&self, query: &FeatureVector, k: usize, rng: &mut R) -> Result<Vote> {
        let neighbors = self.nearest(query, k)?;
        Ok(self.vote(&neighbors, rng))
    }

    /// Majority vote over `neighbors` (typically a prefix of [`ranked`](Self::ranked)).
    pub fn vote<R: Rng + ?Sized>(&self, neighbors: &[Neighbor], rng: &mut R) -> Vote {
        let mut class_tallies: BTreeMap<SenseLabel, usize> = BTreeMap::new();
        for n in neighbors {
            *class_tallies.entry(self.label(n.index)).or_insert(0) += 1;
        }
        let best = class_tallies.values().copied().max().unwrap_or(0);
        let tied: Vec<SenseLabel> = class_tallies.iter().filter(|(_, &c)| c == best).map(|(&l, _)| l).collect();
        let chosen = match tied.len() {
            1 => tied[0],
            n => tied[rng.gen_range(0..n)],
        };
        Vote { neighbor_indices: neighbors.iter().map(|n| n.index).collect(), class_tallies, chosen }
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.len() {
            return Err(Error::KOutOfRange { k, size: self.len() });
        }
        Ok(())
    }
}

/// Sort distances (indexed by training position) into neighbor order.
pub fn rank(distances: Vec<f64>) -> Vec<Neighbor> {
    let mut all: Vec<Neighbor> = distances
        .into_iter()
        .enumerate()
        .map(|(index, distance)| Neighbor { index, distance })
        .collect();
    all.sort_unstable_by(Neighbor::order);
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn label(r: u32) -> SenseLabel {
        SenseLabel::new(r).unwrap()
    }

    fn fv(tag: &str) -> FeatureVector {
        FeatureVector::new(std::array::from_fn(|f| format!("{tag}{f}")))
    }

    #[test]
    fn self_match_is_first() {
        // Unique values of one class share a distribution, so give #5 its own class.
        let examples: Vec<Example> =
            (0..8).map(|i| (fv(&format!("e{i}_")), label(if i == 5 { 4 } else { 1 + (i % 3) as u32 }))).collect();
        let store = ExemplarStore::new(examples.clone()).unwrap();
        let n = store.nearest(&examples[5].0, 1).unwrap();
        assert_eq!(n, vec![Neighbor { index: 5, distance: 0.0 }]);
        let all = store.nearest(&examples[5].0, 8).unwrap();
        let mut idx: Vec<usize> = all.iter().map(|n| n.index).collect();
        idx.sort_unstable();
        assert_eq!(idx, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn index_breaks_distance_ties() {
        let order: Vec<usize> = rank(vec![0.5, 0.2, 0.2, 0.9]).iter().map(|n| n.index).collect();
        assert_eq!(&order[..2], &[1, 2]);
        assert_eq!(order, vec![1, 2, 0, 3]);

        let rows = [("a", 1), ("b", 1), ("b", 1), ("c", 2)];
        let examples: Vec<Example> = rows
            .iter()
            .map(|(v, l)| (FeatureVector::from_strs(["x", "x", "x", v, "x", "x", "x"]), label(*l)))
            .collect();
        let store = ExemplarStore::new(examples).unwrap();
        let query = FeatureVector::from_strs(["x", "x", "x", "b", "x", "x", "x"]);
        let n = store.nearest(&query, 2).unwrap();
        // a and b are both pure class 1 -> distance 0 to the query for all three.
        assert_eq!(n.iter().map(|n| n.index).collect::<Vec<_>>(), vec![0, 1]);
        assert!(n.iter().all(|n| n.distance == 0.0));
    }

    #[test]
    fn k_out_of_range() {
        let store = ExemplarStore::new(vec![(fv("a"), label(1))]).unwrap();
        assert!(matches!(store.nearest(&fv("a"), 0), Err(Error::KOutOfRange { .. })));
        assert!(matches!(store.nearest(&fv("a"), 2), Err(Error::KOutOfRange { .. })));
        assert!(store.classify(&fv("a"), 2, &mut rng::stream(0)).is_err());
    }

    #[test]
    fn majority_of_three() {
        let examples = vec![(fv("a"), label(1)), (fv("a"), label(1)), (fv("a"), label(2)), (fv("z"), label(2))];
        let store = ExemplarStore::new(examples).unwrap();
        let vote = store.classify(&fv("a"), 3, &mut rng::stream(0)).unwrap();
        assert_eq!(vote.neighbor_indices, vec![0, 1, 2]);
        assert_eq!(vote.class_tallies, BTreeMap::from([(label(1), 2), (label(2), 1)]));
        assert_eq!(vote.chosen, label(1));
    }

    #[test]
    fn one_nn_takes_nearest_label() {
        let examples = vec![(fv("a"), label(3)), (fv("b"), label(1))];
        let store = ExemplarStore::new(examples).unwrap();
        assert_eq!(store.classify(&fv("b"), 1, &mut rng::stream(0)).unwrap().chosen, label(1));
        assert_eq!(store.classify(&fv("a"), 1, &mut rng::stream(0)).unwrap().chosen, label(3));
    }

    #[test]
    fn all_neighbors_gives_majority_class() {
        let examples = vec![(fv("a"), label(2)), (fv("b"), label(1)), (fv("c"), label(2))];
        let store = ExemplarStore::new(examples).unwrap();
        for q in ["a", "b", "c", "zz"] {
            assert_eq!(store.classify(&fv(q), 3, &mut rng::stream(1)).unwrap().chosen, label(2));
        }
    }

    #[test]
    fn tie_draws_are_balanced() {
        let examples = vec![(fv("a"), label(1)), (fv("b"), label(2))];
        let store = ExemplarStore::new(examples).unwrap();
        let mut stream = rng::stream(2024);
        let draws = 10_000;
        let ones = (0..draws)
            .filter(|_| store.classify(&fv("q"), 2, &mut stream).unwrap().chosen == label(1))
            .count();
        let freq = ones as f64 / draws as f64;
        assert!((freq - 0.5).abs() <= 0.02, "{freq}");
    }

    #[test]
    fn distances_match_model() {
        let examples: Vec<Example> = (0..12)
            .map(|i| {
                let v: [String; 7] = std::array::from_fn(|f| format!("v{}", (i * (f + 1)) % 4));
                (FeatureVector::new(v), label(1 + (i % 3) as u32))
            })
            .collect();
        let store = ExemplarStore::new(examples.clone()).unwrap();
        let query = FeatureVector::from_strs(["v1", "v2", "new", "v3", "v0", "v1", "other"]);
        let fast = store.distances(&query);
        for (i, (x, _)) in examples.iter().enumerate() {
            assert_eq!(fast[i].to_bits(), store.model().example_distance(&query, x).to_bits());
        }
    }
}
