//! Sense-tagged corpora.
//!
//! One occurrence per line, four tab-separated fields:
//!
//! ```text
//! word <TAB> senseRank <TAB> left context <TAB> right context
//! ```
//!
//! Context fields hold space-separated tokens and may be empty. The left
//! context is written in reading order, so its last token is the one
//! adjacent to the target. Blank lines and lines starting with `#` are
//! skipped.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU32;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::collocation::SENTINEL;
use crate::error::{Error, Result};
use crate::rng;

/// A single whitespace-free context token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() || text.chars().any(char::is_whitespace) || text == SENTINEL {
            return Err(Error::InvalidToken(text));
        }
        Ok(Token(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// 1-based sense number. Rank 1 is the dictionary-first sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct SenseLabel(NonZeroU32);

impl SenseLabel {
    pub const FIRST: SenseLabel = SenseLabel(NonZeroU32::MIN);

    pub fn new(rank: u32) -> Result<Self> {
        NonZeroU32::new(rank).map(SenseLabel).ok_or(Error::InvalidSense)
    }

    pub fn rank(self) -> u32 {
        self.0.get()
    }
}

impl TryFrom<u32> for SenseLabel {
    type Error = Error;

    fn try_from(rank: u32) -> Result<Self> {
        SenseLabel::new(rank)
    }
}

impl From<SenseLabel> for u32 {
    fn from(label: SenseLabel) -> u32 {
        label.rank()
    }
}

impl fmt::Display for SenseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rank())
    }
}

/// One sense-tagged occurrence of an ambiguous word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub word: String,
    /// Tokens before the target, nearest last.
    pub left: Vec<Token>,
    /// Tokens after the target, nearest first.
    pub right: Vec<Token>,
    pub label: SenseLabel,
}

impl Instance {
    pub fn new(word: impl Into<String>, left: Vec<Token>, right: Vec<Token>, label: SenseLabel) -> Result<Self> {
        let word = word.into();
        validate_word(&word)?;
        Ok(Instance { word, left, right, label })
    }

    /// Build an instance from plain strings, validating every token.
    pub fn from_strs(word: &str, left: &[&str], right: &[&str], rank: u32) -> Result<Self> {
        let tokens = |xs: &[&str]| xs.iter().map(|t| Token::new(*t)).collect::<Result<Vec<_>>>();
        Instance::new(word, tokens(left)?, tokens(right)?, SenseLabel::new(rank)?)
    }

    /// The instance as one corpus line, without the trailing newline.
    pub fn to_tsv_line(&self) -> String {
        let join = |ts: &[Token]| ts.iter().map(Token::as_str).collect::<Vec<_>>().join(" ");
        format!("{}\t{}\t{}\t{}", self.word, self.label, join(&self.left), join(&self.right))
    }
}

fn validate_word(word: &str) -> Result<()> {
    if word.is_empty() || word.chars().any(char::is_whitespace) {
        return Err(Error::InvalidToken(word.to_string()));
    }
    Ok(())
}

/// All occurrences of one target word, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    word: String,
    instances: Vec<Instance>,
    sense_count: u32,
}

impl Dataset {
    /// An empty dataset for `word`.
    pub fn empty(word: impl Into<String>) -> Result<Self> {
        let word = word.into();
        validate_word(&word)?;
        Ok(Dataset { word, instances: Vec::new(), sense_count: 1 })
    }

    pub fn new(word: impl Into<String>, instances: Vec<Instance>) -> Result<Self> {
        let mut ds = Dataset::empty(word)?;
        for inst in instances {
            ds.push(inst)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, instance: Instance) -> Result<()> {
        if instance.word != self.word {
            return Err(Error::MixedWords { expected: self.word.clone(), found: instance.word });
        }
        self.sense_count = self.sense_count.max(instance.label.rank());
        self.instances.push(instance);
        Ok(())
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Number of senses `n`: the largest rank observed.
    pub fn sense_count(&self) -> u32 {
        self.sense_count
    }

    /// A new dataset holding the instances at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let instances: Vec<Instance> = indices.iter().map(|&i| self.instances[i].clone()).collect();
        let sense_count = instances.iter().map(|i| i.label.rank()).max().unwrap_or(1);
        Dataset { word: self.word.clone(), instances, sense_count }
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for inst in &self.instances {
            out.push_str(&inst.to_tsv_line());
            out.push('\n');
        }
        out
    }
}

/// Serialize a whole corpus table, words in lexicographic order.
pub fn corpus_to_tsv(corpus: &BTreeMap<String, Dataset>) -> String {
    corpus.values().map(Dataset::to_tsv).collect()
}

pub fn parse_corpus_file(path: impl AsRef<Path>) -> Result<BTreeMap<String, Dataset>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_corpus_str(&text).map_err(|e| match e {
        Error::Parse { line, message, .. } => Error::Parse { path: Some(path.to_path_buf()), line, message },
        other => other,
    })
}

pub fn parse_corpus_str(text: &str) -> Result<BTreeMap<String, Dataset>> {
    let mut table: BTreeMap<String, Dataset> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let inst = parse_line(raw).map_err(|message| Error::Parse { path: None, line: lineno, message })?;
        match table.get_mut(&inst.word) {
            Some(ds) => ds.push(inst)?,
            None => {
                let word = inst.word.clone();
                table.insert(word.clone(), Dataset::new(word, vec![inst])?);
            }
        }
    }
    Ok(table)
}

fn parse_line(line: &str) -> std::result::Result<Instance, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return Err(format!("expected 4 tab-separated fields, found {}", fields.len()));
    }
    let word = fields[0];
    if word.is_empty() || word.contains(' ') {
        return Err(format!("invalid target word {word:?}"));
    }
    let rank: u32 = fields[1]
        .trim()
        .parse()
        .map_err(|_| format!("sense rank {:?} is not a positive integer", fields[1]))?;
    let label = SenseLabel::new(rank).map_err(|e| e.to_string())?;
    let tokens = |field: &str| {
        field
            .split_whitespace()
            .map(|t| Token::new(t).map_err(|e| e.to_string()))
            .collect::<std::result::Result<Vec<_>, _>>()
    };
    Ok(Instance { word: word.to_string(), left: tokens(fields[2])?, right: tokens(fields[3])?, label })
}

/// Assign each instance of `dataset` to one of `m` folds.
///
/// The instance indices are shuffled with a stream seeded by `seed`, then cut
/// into contiguous blocks; the first `len % m` blocks get one extra instance.
pub fn assign_folds(dataset: &Dataset, m: usize, seed: u64) -> Result<Vec<usize>> {
    let n = dataset.len();
    if m < 2 || n == 0 || m > n {
        return Err(Error::Folds { size: n, folds: m });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(rng::derive_seed(seed, &[rng::hash_str("folds"), m as u64])));

    let base = n / m;
    let extra = n % m;
    let mut folds = vec![0; n];
    let mut pos = 0;
    for fold in 0..m {
        let size = base + usize::from(fold < extra);
        for &idx in &order[pos..pos + size] {
            folds[idx] = fold;
        }
        pos += size;
    }
    Ok(folds)
}
