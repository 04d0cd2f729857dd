use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use super::baseline::{accuracy, baseline_most_frequent, baseline_sense1};
use super::report::{Report, ReportFormat, WordResult};
use crate::bayes::NbModel;
use crate::collocation::extract;
use crate::corpus::{parse_corpus_file, Dataset, SenseLabel};
use crate::error::{Error, Result};
use crate::knn::ExemplarStore;
use crate::rng;
use crate::selection::{cross_validate_k, KGrid};
use crate::Example;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Pebls,
    Nb,
    Sense1,
    Mfs,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pebls" => Ok(Algorithm::Pebls),
            "nb" => Ok(Algorithm::Nb),
            "sense1" => Ok(Algorithm::Sense1),
            "mfs" => Ok(Algorithm::Mfs),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KChoice {
    Fixed(usize),
    /// Select k per word by cross validation on its training data.
    Auto,
}

impl FromStr for KChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(KChoice::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(KChoice::Fixed(k)),
            _ => Err(Error::Config(format!("k must be a positive integer or `auto`, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Not needed for `sense1`.
    pub train_path: Option<PathBuf>,
    pub test_path: PathBuf,
    pub algorithm: Algorithm,
    pub k: KChoice,
    pub folds: usize,
    pub seed: u64,
    pub lowercase: bool,
    pub report_format: ReportFormat,
}

impl ExperimentConfig {
    pub fn new(train_path: Option<PathBuf>, test_path: PathBuf, algorithm: Algorithm) -> Self {
        ExperimentConfig {
            train_path,
            test_path,
            algorithm,
            k: KChoice::Fixed(1),
            folds: 10,
            seed: 0,
            lowercase: false,
            report_format: ReportFormat::Tsv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == KChoice::Auto && self.algorithm != Algorithm::Pebls {
            return Err(Error::Config("k = auto is only meaningful for pebls".into()));
        }
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if self.train_path.is_none() && self.algorithm != Algorithm::Sense1 {
            return Err(Error::Config("a training corpus is required".into()));
        }
        Ok(())
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let test = parse_corpus_file(&config.test_path)?;
    let train = match &config.train_path {
        Some(path) => parse_corpus_file(path)?,
        None => BTreeMap::new(),
    };
    run_on_corpora(&train, &test, config)
}

/// Run an experiment on already-parsed corpora. Words are processed
/// independently and in parallel; the report is ordered by word.
pub fn run_on_corpora(
    train: &BTreeMap<String, Dataset>,
    test: &BTreeMap<String, Dataset>,
    config: &ExperimentConfig,
) -> Result<Report> {
    config.validate()?;
    let outcomes: Vec<(String, Result<WordResult>)> = test
        .par_iter()
        .map(|(word, test_set)| (word.clone(), run_word(train.get(word), test_set, config)))
        .collect();

    let mut per_word = BTreeMap::new();
    let mut failures = BTreeMap::new();
    for (word, outcome) in outcomes {
        match outcome {
            Ok(result) => {
                per_word.insert(word, result);
            }
            Err(e) => {
                failures.insert(word, e.to_string());
            }
        }
    }
    Ok(Report::from_words(per_word, failures))
}

fn examples_of(dataset: &Dataset, lowercase: bool) -> Vec<Example> {
    dataset.instances().iter().map(|i| (extract(i, lowercase), i.label)).collect()
}

fn run_word(train: Option<&Dataset>, test: &Dataset, config: &ExperimentConfig) -> Result<WordResult> {
    let mut chosen_k = None;
    let predictions: Vec<SenseLabel> = match config.algorithm {
        Algorithm::Sense1 => baseline_sense1(test),
        algorithm => {
            let train = train.filter(|t| !t.is_empty()).ok_or(Error::EmptyTraining)?;
            match algorithm {
                Algorithm::Mfs => baseline_most_frequent(train, test)?,
                Algorithm::Nb => {
                    let model = NbModel::train(&examples_of(train, config.lowercase))?;
                    test.instances().iter().map(|i| model.classify(&extract(i, config.lowercase)).label).collect()
                }
                Algorithm::Pebls => {
                    let k = match config.k {
                        KChoice::Fixed(k) => k,
                        KChoice::Auto => {
                            cross_validate_k(train, &KGrid::default(), config.folds, config.seed, config.lowercase)?.best_k
                        }
                    };
                    let store = ExemplarStore::new(examples_of(train, config.lowercase))?;
                    let k = k.min(store.len());
                    chosen_k = Some(k);
                    test.instances()
                        .iter()
                        .enumerate()
                        .map(|(index, inst)| {
                            let mut stream = rng::query_stream(config.seed, test.word(), index, k);
                            store.classify(&extract(inst, config.lowercase), k, &mut stream).map(|v| v.chosen)
                        })
                        .collect::<Result<_>>()?
                }
                Algorithm::Sense1 => unreachable!(),
            }
        }
    };
    let (correct, test_count, acc) = accuracy(&predictions, test);
    Ok(WordResult { test_count, correct, accuracy: acc, chosen_k })
}
