use std::collections::BTreeMap;

use pebls_wsd::corpus::{Dataset, Instance};
use pebls_wsd::harness::synth::{generate, GenConfig};
use pebls_wsd::harness::{format_report, run_on_corpora, Algorithm, ExperimentConfig, KChoice, ReportFormat};

fn config(algorithm: Algorithm, k: KChoice) -> ExperimentConfig {
    ExperimentConfig { k, seed: 4, ..ExperimentConfig::new(Some("train".into()), "test".into(), algorithm) }
}

fn corpus(word: &str, instances: Vec<Instance>) -> BTreeMap<String, Dataset> {
    BTreeMap::from([(word.to_string(), Dataset::new(word, instances).unwrap())])
}

fn small_corpora() -> (BTreeMap<String, Dataset>, BTreeMap<String, Dataset>) {
    let cfg = GenConfig { words: 4, train_size: 80, test_size: 40, seed: 21, ..GenConfig::default() };
    generate(&cfg).unwrap()
}

#[test]
fn sense1_scores_rank_one_share() {
    let instances = (0..20)
        .map(|i| Instance::from_strs("bass", &["x"], &["y"], if i < 9 { 1 } else { 2 + i % 3 }).unwrap())
        .collect();
    let test = corpus("bass", instances);
    let cfg = ExperimentConfig::new(None, "test".into(), Algorithm::Sense1);
    let report = run_on_corpora(&BTreeMap::new(), &test, &cfg).unwrap();
    assert_eq!(report.per_word["bass"].correct, 9);
    assert_eq!(report.overall.micro_accuracy, Some(0.45));
}

#[test]
fn mfs_matches_hand_count() {
    let (train, test) = small_corpora();
    let mfs = run_on_corpora(&train, &test, &config(Algorithm::Mfs, KChoice::Fixed(1))).unwrap();
    for (word, ds) in &test {
        let mut counts = BTreeMap::new();
        for i in train[word].instances() {
            *counts.entry(i.label.rank()).or_insert(0usize) += 1;
        }
        let top = *counts.values().max().unwrap();
        let mode = *counts.iter().find(|(_, &c)| c == top).unwrap().0;
        let expected = ds.instances().iter().filter(|i| i.label.rank() == mode).count();
        assert_eq!(mfs.per_word[word].correct, expected, "{word}");
    }
    let total: usize = mfs.per_word.values().map(|w| w.test_count).sum();
    assert_eq!(mfs.overall.test_count, total);
}

#[test]
fn pebls_with_whole_training_set_is_mfs_when_mode_unique() {
    let (train, test) = small_corpora();
    let mfs = run_on_corpora(&train, &test, &config(Algorithm::Mfs, KChoice::Fixed(1))).unwrap();
    let all = run_on_corpora(&train, &test, &config(Algorithm::Pebls, KChoice::Fixed(10_000))).unwrap();
    for (word, result) in &all.per_word {
        let mut counts = BTreeMap::new();
        for i in train[word].instances() {
            *counts.entry(i.label).or_insert(0usize) += 1;
        }
        let top = *counts.values().max().unwrap();
        if counts.values().filter(|&&c| c == top).count() == 1 {
            assert_eq!(result.correct, mfs.per_word[word].correct, "{word}");
        }
        assert_eq!(result.chosen_k, Some(train[word].len()));
    }
}

#[test]
fn auto_k_learns_a_left_neighbor_rule() {
    let rule = [1, 2, 1, 3];
    let make = |n: usize, offset: usize| {
        (0..n)
            .map(|i| {
                let cue = (i + offset) % 4;
                let r = format!("r{}", (i / 4 + offset) % 2);
                Instance::from_strs("crane", &["the", &format!("cue{cue}")], &[&r], rule[cue]).unwrap()
            })
            .collect::<Vec<_>>()
    };
    let train = corpus("crane", make(40, 0));
    let test = corpus("crane", make(16, 1));
    let report = run_on_corpora(&train, &test, &config(Algorithm::Pebls, KChoice::Auto)).unwrap();
    assert_eq!(report.per_word["crane"].chosen_k, Some(1));
    assert_eq!(report.overall.micro_accuracy, Some(1.0));
}

#[test]
fn reports_are_stable_across_runs() {
    let (train, test) = small_corpora();
    for (algorithm, k) in [(Algorithm::Pebls, KChoice::Auto), (Algorithm::Pebls, KChoice::Fixed(7)), (Algorithm::Nb, KChoice::Fixed(1))] {
        let cfg = config(algorithm, k);
        for format in [ReportFormat::Tsv, ReportFormat::Json] {
            let a = format_report(&run_on_corpora(&train, &test, &cfg).unwrap(), format);
            let b = format_report(&run_on_corpora(&train, &test, &cfg).unwrap(), format);
            assert_eq!(a, b);
        }
    }
}

#[test]
fn lowercasing_merges_case_variants() {
    let train = corpus(
        "plant",
        vec![
            Instance::from_strs("plant", &["power"], &["x"], 1).unwrap(),
            Instance::from_strs("plant", &["house"], &["y"], 2).unwrap(),
        ],
    );
    let test = corpus("plant", vec![Instance::from_strs("plant", &["Power"], &["X"], 1).unwrap()]);
    let mut cfg = config(Algorithm::Nb, KChoice::Fixed(1));
    cfg.lowercase = true;
    assert_eq!(run_on_corpora(&train, &test, &cfg).unwrap().overall.correct, 1);
}
