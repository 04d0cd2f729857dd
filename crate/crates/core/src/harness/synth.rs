//! Synthetic sense-tagged corpora with controllable difficulty.
//!
//! Each word gets `senses` senses with prior weights proportional to
//! `prior_skew^j`, where `j` is the sense's position in a per-word random
//! permutation (so the modal sense is not always rank 1). Every sense owns
//! a few signature tokens at each of the four collocation positions. An
//! occurrence fills each position with one of its sense's signature tokens
//! with probability `informativeness`, otherwise with a background token
//! shared by all senses. Finally, with probability `noise` the gold label is
//! replaced by a sense drawn uniformly at random.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{Dataset, Instance, SenseLabel, Token};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub words: usize,
    pub senses: u32,
    pub prior_skew: f64,
    pub informativeness: f64,
    pub noise: f64,
    pub train_size: usize,
    pub test_size: usize,
    pub background_vocab: usize,
    pub signature_tokens: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            words: 5,
            senses: 4,
            prior_skew: 0.5,
            informativeness: 0.85,
            noise: 0.1,
            train_size: 500,
            test_size: 200,
            background_vocab: 50,
            signature_tokens: 3,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in [0, 1], got {x}")))
            }
        };
        unit("informativeness", self.informativeness)?;
        unit("noise", self.noise)?;
        if !(self.prior_skew > 0.0 && self.prior_skew <= 1.0) {
            return Err(Error::Config(format!("prior skew must lie in (0, 1], got {}", self.prior_skew)));
        }
        if self.senses == 0 || self.words == 0 || self.background_vocab == 0 || self.signature_tokens == 0 {
            return Err(Error::Config("words, senses and vocabulary sizes must be positive".into()));
        }
        Ok(())
    }

    /// Sense priors for the `word_index`-th word, indexed by rank - 1.
    pub fn priors(&self, word_index: usize) -> Vec<f64> {
        let mut order: Vec<usize> = (0..self.senses as usize).collect();
        order.shuffle(&mut rng::stream(rng::derive_seed(self.seed, &[rng::hash_str("priors"), word_index as u64])));
        let mut weights = vec![0.0; order.len()];
        for (position, &sense) in order.iter().enumerate() {
            weights[sense] = self.prior_skew.powi(position as i32);
        }
        let total: f64 = weights.iter().sum();
        weights.iter().map(|w| w / total).collect()
    }
}

pub fn word_name(index: usize) -> String {
    format!("word{index:02}")
}

/// Generate `(train, test)` corpora. Identical configs give identical corpora.
pub fn generate(config: &GenConfig) -> Result<(BTreeMap<String, Dataset>, BTreeMap<String, Dataset>)> {
    config.validate()?;
    let mut train = BTreeMap::new();
    let mut test = BTreeMap::new();
    for w in 0..config.words {
        let word = word_name(w);
        let priors = config.priors(w);
        let sense_dist = WeightedIndex::new(&priors).map_err(|e| Error::Config(e.to_string()))?;
        let mut stream = rng::stream(rng::derive_seed(config.seed, &[rng::hash_str(&word)]));
        let mut draw = |n: usize| -> Result<Dataset> {
            let instances = (0..n)
                .map(|_| occurrence(config, &word, &sense_dist, &mut stream))
                .collect::<Result<Vec<_>>>()?;
            Dataset::new(word.clone(), instances)
        };
        let tr = draw(config.train_size)?;
        let te = draw(config.test_size)?;
        train.insert(word.clone(), tr);
        test.insert(word, te);
    }
    Ok((train, test))
}

const POSITIONS: [&str; 4] = ["l2", "l1", "r1", "r2"];

fn occurrence<R: Rng>(config: &GenConfig, word: &str, senses: &WeightedIndex<f64>, stream: &mut R) -> Result<Instance> {
    let sense = senses.sample(stream);
    let mut slot = |position: &str| -> String {
        if stream.gen_bool(config.informativeness) {
            format!("{word}_s{}_{position}_{}", sense + 1, stream.gen_range(0..config.signature_tokens))
        } else {
            format!("bg{}", stream.gen_range(0..config.background_vocab))
        }
    };
    let [l2, l1, r1, r2] = POSITIONS.map(&mut slot);
    // Occasionally truncate a side so the sentence boundary shows up.
    let left_len = [2usize, 2, 2, 2, 2, 2, 2, 2, 1, 0][stream.gen_range(0..10)];
    let right_len = [2usize, 2, 2, 2, 2, 2, 2, 2, 1, 0][stream.gen_range(0..10)];
    let left: Vec<String> = [l2, l1].into_iter().skip(2 - left_len).collect();
    let right: Vec<String> = [r1, r2].into_iter().take(right_len).collect();

    let gold = if stream.gen_bool(config.noise) { stream.gen_range(0..config.senses) } else { sense as u32 };
    let tokens = |xs: Vec<String>| xs.into_iter().map(Token::new).collect::<Result<Vec<_>>>();
    Instance::new(word, tokens(left)?, tokens(right)?, SenseLabel::new(gold + 1)?)
}
