//! Supervised word sense disambiguation with exemplar-based learning.
//!
//! The crate is organised around the pipeline used to disambiguate one
//! ambiguous word at a time:
//!
//! * [`corpus`] reads sense-tagged occurrences from a tab-separated file and
//!   splits them into folds.
//! * [`collocation`] turns an occurrence into seven local-collocation values.
//! * [`mvdm`] learns class-conditional value probabilities and measures the
//!   modified value difference between symbolic values.
//! * [`knn`] classifies by majority vote among the `k` nearest exemplars.
//! * [`bayes`] is the Naive-Bayes comparator with zero-count replacement.
//! * [`selection`] picks `k` by m-fold cross validation on training data only.
//! * [`harness`] holds the baselines, the experiment driver, report
//!   formatting and the synthetic corpus generator used by the CLI.

pub mod bayes;
pub mod collocation;
pub mod corpus;
mod error;
pub mod harness;
pub mod knn;
pub mod mvdm;
pub mod rng;
pub mod selection;

pub use bayes::{NbModel, NbPrediction};
pub use collocation::{extract, FeatureVector, FEATURE_COUNT, SENTINEL};
pub use corpus::{assign_folds, parse_corpus_file, parse_corpus_str, Dataset, Instance, SenseLabel, Token};
pub use error::{Error, Result};
pub use knn::{ExemplarStore, Neighbor, Vote};
pub use mvdm::{DistanceModel, ValueClassCounts};
pub use selection::{cross_validate_k, CvResult, KGrid, KStats};

/// A training example: extracted features plus the gold sense.
pub type Example = (FeatureVector, SenseLabel);
