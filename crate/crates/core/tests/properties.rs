use std::collections::BTreeSet;

use proptest::prelude::*;

use pebls_wsd::collocation::extract;
use pebls_wsd::corpus::{corpus_to_tsv, Dataset, Instance};
use pebls_wsd::harness::synth::{generate, GenConfig};
use pebls_wsd::rng::{query_stream, stream};
use pebls_wsd::selection::predict_grid;
use pebls_wsd::{
    assign_folds, cross_validate_k, parse_corpus_str, Example, ExemplarStore, FeatureVector, KGrid, SenseLabel,
};

fn token() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9_.,']{1,6}"
}

fn instance(word: &'static str) -> impl Strategy<Value = Instance> {
    (proptest::collection::vec(token(), 0..5), proptest::collection::vec(token(), 0..5), 1u32..8).prop_map(
        move |(l, r, rank)| {
            let l: Vec<&str> = l.iter().map(String::as_str).collect();
            let r: Vec<&str> = r.iter().map(String::as_str).collect();
            Instance::from_strs(word, &l, &r, rank).unwrap()
        },
    )
}

fn dataset_of(n: usize) -> Dataset {
    let inst = (0..n).map(|i| Instance::from_strs("w", &[&format!("t{i}")], &[], 1).unwrap()).collect();
    Dataset::new("w", inst).unwrap()
}

fn random_examples(seed: u64, size: usize, vocab: usize, classes: u32) -> Vec<Example> {
    use rand::Rng;
    let mut rng = stream(seed);
    (0..size)
        .map(|_| {
            let fv = FeatureVector::new(std::array::from_fn(|f| format!("f{f}_{}", rng.gen_range(0..vocab))));
            (fv, SenseLabel::new(rng.gen_range(1..=classes)).unwrap())
        })
        .collect()
}

proptest! {
    #[test]
    fn corpus_round_trip(a in proptest::collection::vec(instance("alpha"), 1..10),
                         b in proptest::collection::vec(instance("beta"), 0..10)) {
        let mut table = std::collections::BTreeMap::new();
        table.insert("alpha".to_string(), Dataset::new("alpha", a).unwrap());
        if !b.is_empty() {
            table.insert("beta".to_string(), Dataset::new("beta", b).unwrap());
        }
        let text = corpus_to_tsv(&table);
        prop_assert_eq!(parse_corpus_str(&text).unwrap(), table);
    }

    #[test]
    fn folds_partition(n in 2usize..200, m in 2usize..20, seed: u64) {
        prop_assume!(m <= n);
        let ds = dataset_of(n);
        let folds = assign_folds(&ds, m, seed).unwrap();
        prop_assert_eq!(folds.len(), n);
        let mut sizes = vec![0usize; m];
        for &f in &folds {
            prop_assert!(f < m);
            sizes[f] += 1;
        }
        let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
        prop_assert!(hi - lo <= 1);
        prop_assert!(*lo >= 1);
        prop_assert_eq!(&folds, &assign_folds(&ds, m, seed).unwrap());
    }

    #[test]
    fn neighbor_lists_are_prefixes(seed: u64, size in 1usize..40) {
        let examples = random_examples(seed, size, 4, 3);
        let store = ExemplarStore::new(examples).unwrap();
        let query = random_examples(seed ^ 1, 1, 5, 3).remove(0).0;
        let mut previous = store.nearest(&query, 1).unwrap();
        for k in 2..=size {
            let next = store.nearest(&query, k).unwrap();
            prop_assert_eq!(&next[..k - 1], &previous[..]);
            previous = next;
        }
    }

    #[test]
    fn one_nn_is_linear_scan(seed: u64, size in 1usize..50) {
        let examples = random_examples(seed, size, 4, 4);
        let store = ExemplarStore::new(examples.clone()).unwrap();
        let query = random_examples(seed.wrapping_add(7), 1, 5, 4).remove(0).0;
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, (x, _)) in examples.iter().enumerate() {
            let d = store.model().example_distance(&query, x);
            if d < best.0 {
                best = (d, i);
            }
        }
        let vote = store.classify(&query, 1, &mut stream(seed)).unwrap();
        prop_assert_eq!(vote.neighbor_indices, vec![best.1]);
        prop_assert_eq!(vote.chosen, examples[best.1].1);
    }

    #[test]
    fn example_distance_is_a_metric(seed: u64) {
        let examples = random_examples(seed, 30, 5, 3);
        let store = ExemplarStore::new(examples).unwrap();
        let model = store.model();
        let pts = random_examples(seed ^ 0xabc, 3, 6, 3);
        let (x, y, z) = (&pts[0].0, &pts[1].0, &pts[2].0);
        let xy = model.example_distance(x, y);
        prop_assert_eq!(xy, model.example_distance(y, x));
        prop_assert!((0.0..=14.0 + 1e-12).contains(&xy));
        prop_assert!(model.example_distance(x, z) <= xy + model.example_distance(y, z) + 1e-12);
        prop_assert_eq!(model.example_distance(x, x), 0.0);
    }

    #[test]
    fn votes_are_reproducible(seed: u64, k in 1usize..30) {
        let examples = random_examples(seed, 30, 3, 2);
        let store = ExemplarStore::new(examples).unwrap();
        let query = random_examples(!seed, 1, 3, 2).remove(0).0;
        let a = store.classify(&query, k, &mut query_stream(seed, "w", 0, k)).unwrap();
        let b = store.classify(&query, k, &mut query_stream(seed, "w", 0, k)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.class_tallies.values().sum::<usize>(), k);
        let top = *a.class_tallies.values().max().unwrap();
        prop_assert_eq!(a.class_tallies[&a.chosen], top);
    }
}

fn noisy_dataset(seed: u64, size: usize) -> Dataset {
    let cfg = GenConfig { words: 1, train_size: size, test_size: 0, informativeness: 0.5, noise: 0.2, seed, ..GenConfig::default() };
    generate(&cfg).unwrap().0.into_values().next().unwrap()
}

#[test]
fn cv_holdout_hygiene_and_totals() {
    for seed in 0..5 {
        let ds = noisy_dataset(seed, 57 + seed as usize);
        let m = 10;
        let cv = cross_validate_k(&ds, &KGrid::default(), m, seed, false).unwrap();
        let folds = assign_folds(&ds, m, seed).unwrap();
        for (fold, &trained) in cv.fold_training_sizes.iter().enumerate() {
            let held_out = folds.iter().filter(|&&f| f == fold).count();
            assert_eq!(trained, ds.len() - held_out);
        }
        let totals: BTreeSet<usize> = cv.per_k.values().map(|s| s.total).collect();
        assert_eq!(totals, BTreeSet::from([ds.len()]));
        assert!(KGrid::default().values().contains(&cv.best_k));
        let min = cv.per_k.values().map(|s| s.errors).min().unwrap();
        assert_eq!(cv.per_k[&cv.best_k].errors, min);
        assert!(cv.per_k.range(..cv.best_k).all(|(_, s)| s.errors > min));
        assert_eq!(cv, cross_validate_k(&ds, &KGrid::default(), m, seed, false).unwrap());
    }
}

#[test]
fn grid_prefix_reuse_matches_independent_votes() {
    let ds = noisy_dataset(3, 120);
    let examples: Vec<Example> = ds.instances().iter().map(|i| (extract(i, false), i.label)).collect();
    let (train, queries) = examples.split_at(90);
    let store = ExemplarStore::new(train.to_vec()).unwrap();
    let grid = KGrid::default();
    for (index, (query, _)) in queries.iter().enumerate() {
        let shared = predict_grid(&store, query, &grid, 11, ds.word(), index);
        for (&k, got) in grid.values().iter().zip(shared) {
            let k = k.min(store.len());
            let vote = store.classify(query, k, &mut query_stream(11, ds.word(), index, k)).unwrap();
            assert_eq!(vote.chosen, got, "query {index}, k {k}");
        }
    }
}

#[test]
fn full_store_vote_is_majority_for_every_query() {
    use rand::Rng;
    let mut rng = stream(100);
    let mut checked = 0;
    while checked < 100 {
        let size = rng.gen_range(5..60);
        let examples = random_examples(rng.gen(), size, 4, 3);
        let mut counts = std::collections::BTreeMap::new();
        for e in &examples {
            *counts.entry(e.1).or_insert(0) += 1;
        }
        let top = *counts.values().max().unwrap();
        let modal: Vec<_> = counts.iter().filter(|(_, &c)| c == top).map(|(l, _)| *l).collect();
        if modal.len() != 1 {
            continue;
        }
        let store = ExemplarStore::new(examples).unwrap();
        let query = random_examples(rng.gen(), 1, 6, 3).remove(0).0;
        assert_eq!(store.classify(&query, size, &mut stream(1)).unwrap().chosen, modal[0]);
        checked += 1;
    }
}
