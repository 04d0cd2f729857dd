//! The modified value difference metric.
//!
//! Each symbolic value `v` of a feature is mapped to its class-conditional
//! distribution `P(C_i | v) = N_{v,i} / N_v`, estimated from raw training
//! counts. The distance between two values is the L1 distance between their
//! distributions, and the distance between two examples is the sum over the
//! seven features.
//!
//! A value never seen in training is mapped to the class prior, so every
//! value has a genuine probability vector and the metric axioms hold for
//! unseen values too.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::collocation::{FeatureVector, FEATURE_COUNT};
use crate::corpus::SenseLabel;
use crate::error::{Error, Result};
use crate::Example;

pub const DUMP_HEADER: &str = "mvdm-v1";

/// How often one feature value occurred with each class.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValueClassCounts {
    pub per_class: BTreeMap<SenseLabel, u64>,
    pub total: u64,
}

impl ValueClassCounts {
    fn add(&mut self, label: SenseLabel, count: u64) {
        *self.per_class.entry(label).or_insert(0) += count;
        self.total += count;
    }
}

#[derive(Debug, Clone, Default)]
struct FeatureTable {
    index: HashMap<String, usize>,
    values: Vec<String>,
    counts: Vec<ValueClassCounts>,
    /// Row-major `values.len() x classes.len()` conditional probabilities.
    probs: Vec<f64>,
}

impl FeatureTable {
    fn add(&mut self, value: &str, label: SenseLabel, count: u64) {
        let id = match self.index.get(value) {
            Some(&id) => id,
            None => {
                let id = self.values.len();
                self.index.insert(value.to_string(), id);
                self.values.push(value.to_string());
                self.counts.push(ValueClassCounts::default());
                id
            }
        };
        self.counts[id].add(label, count);
    }

    fn finish(&mut self, classes: &[SenseLabel]) {
        self.probs = Vec::with_capacity(self.values.len() * classes.len());
        for counts in &self.counts {
            let total = counts.total as f64;
            for class in classes {
                let n = counts.per_class.get(class).copied().unwrap_or(0);
                self.probs.push(n as f64 / total);
            }
        }
    }
}

/// Trained per-feature count tables backing the value difference metric.
#[derive(Debug, Clone)]
pub struct DistanceModel {
    classes: Vec<SenseLabel>,
    class_counts: Vec<u64>,
    prior: Vec<f64>,
    features: Vec<FeatureTable>,
    training_size: usize,
    sense_count: u32,
}

impl DistanceModel {
    pub fn train(examples: &[Example]) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let mut class_counts: BTreeMap<SenseLabel, u64> = BTreeMap::new();
        let mut features = vec![FeatureTable::default(); FEATURE_COUNT];
        for (fv, label) in examples {
            *class_counts.entry(*label).or_insert(0) += 1;
            for (table, value) in features.iter_mut().zip(fv.values()) {
                table.add(value, *label, 1);
            }
        }
        Ok(Self::assemble(class_counts, features, examples.len()))
    }

    fn assemble(class_counts: BTreeMap<SenseLabel, u64>, mut features: Vec<FeatureTable>, training_size: usize) -> Self {
        let classes: Vec<SenseLabel> = class_counts.keys().copied().collect();
        let class_counts: Vec<u64> = class_counts.values().copied().collect();
        let prior = class_counts.iter().map(|&c| c as f64 / training_size as f64).collect();
        for table in &mut features {
            table.finish(&classes);
        }
        let sense_count = classes.last().map_or(1, |c| c.rank());
        DistanceModel { classes, class_counts, prior, features, training_size, sense_count }
    }

    /// Classes observed in training, ascending by rank.
    pub fn classes(&self) -> &[SenseLabel] {
        &self.classes
    }

    pub fn class_prior(&self) -> BTreeMap<SenseLabel, f64> {
        self.classes.iter().copied().zip(self.prior.iter().copied()).collect()
    }

    pub fn class_count(&self, label: SenseLabel) -> u64 {
        self.classes.binary_search(&label).map_or(0, |i| self.class_counts[i])
    }

    pub fn training_size(&self) -> usize {
        self.training_size
    }

    pub fn sense_count(&self) -> u32 {
        self.sense_count
    }

    pub fn counts(&self, feature: usize, value: &str) -> Option<&ValueClassCounts> {
        let table = &self.features[feature];
        table.index.get(value).map(|&id| &table.counts[id])
    }

    /// Distinct values seen for `feature`, in first-seen order.
    pub fn vocabulary(&self, feature: usize) -> &[String] {
        &self.features[feature].values
    }

    pub fn value_id(&self, feature: usize, value: &str) -> Option<usize> {
        self.features[feature].index.get(value).copied()
    }

    /// `P(C_i | v)` for every training class, in [`classes`](Self::classes)
    /// order. Unseen values get the class prior.
    pub fn distribution(&self, feature: usize, value: &str) -> &[f64] {
        match self.value_id(feature, value) {
            Some(id) => self.row(feature, id),
            None => &self.prior,
        }
    }

    pub(crate) fn row(&self, feature: usize, id: usize) -> &[f64] {
        let n = self.classes.len();
        &self.features[feature].probs[id * n..(id + 1) * n]
    }

    /// Distance between two values of `feature`. Panics if `feature >= 7`.
    pub fn value_distance(&self, feature: usize, v1: &str, v2: &str) -> f64 {
        if v1 == v2 {
            return 0.0;
        }
        l1(self.distribution(feature, v1), self.distribution(feature, v2))
    }

    pub fn example_distance(&self, x: &FeatureVector, y: &FeatureVector) -> f64 {
        let mut d = 0.0;
        for f in 0..FEATURE_COUNT {
            d += self.value_distance(f, x.get(f), y.get(f));
        }
        d
    }

    /// Plain-text dump of the count tables.
    ///
    /// ```text
    /// mvdm-v1
    /// examples <N>
    /// class    <rank> <count>                      (one per training class)
    /// value    <feature> <rank> <count> <value>    (one per observed pair)
    /// ```
    ///
    /// Fields are tab-separated. Value lines appear per feature in first-seen
    /// order so a reloaded model reproduces identical distances.
    pub fn to_dump(&self) -> Result<String> {
        let mut out = format!("{DUMP_HEADER}\nexamples\t{}\n", self.training_size);
        for (class, count) in self.classes.iter().zip(&self.class_counts) {
            writeln!(out, "class\t{class}\t{count}").unwrap();
        }
        for (f, table) in self.features.iter().enumerate() {
            for (value, counts) in table.values.iter().zip(&table.counts) {
                if value.contains(['\t', '\n', '\r']) {
                    return Err(Error::Dump(format!("feature value {value:?} cannot be written")));
                }
                for (label, n) in &counts.per_class {
                    writeln!(out, "value\t{f}\t{label}\t{n}\t{value}").unwrap();
                }
            }
        }
        Ok(out)
    }

    pub fn from_dump(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(DUMP_HEADER) {
            return Err(Error::Dump(format!("missing {DUMP_HEADER} header")));
        }
        let mut training_size = None;
        let mut class_counts = BTreeMap::new();
        let mut features = vec![FeatureTable::default(); FEATURE_COUNT];
        for line in lines {
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["examples", n] => training_size = Some(parse_num::<usize>(n)?),
                ["class", label, n] => {
                    class_counts.insert(parse_label(label)?, parse_num::<u64>(n)?);
                }
                ["value", f, label, n, value] => {
                    let f = parse_num::<usize>(f)?;
                    let table = features.get_mut(f).ok_or(Error::FeatureIndex(f))?;
                    table.add(value, parse_label(label)?, parse_num(n)?);
                }
                [""] => {}
                _ => return Err(Error::Dump(format!("unrecognised line {line:?}"))),
            }
        }
        let training_size = training_size.ok_or_else(|| Error::Dump("missing examples line".into()))?;
        if training_size == 0 || class_counts.values().sum::<u64>() != training_size as u64 {
            return Err(Error::Dump("class counts do not sum to the example count".into()));
        }
        for (f, table) in features.iter().enumerate() {
            let sum: u64 = table.counts.iter().map(|c| c.total).sum();
            if sum != training_size as u64 {
                return Err(Error::Dump(format!("feature {f} counts sum to {sum}, expected {training_size}")));
            }
            if table.counts.iter().flat_map(|c| c.per_class.keys()).any(|l| !class_counts.contains_key(l)) {
                return Err(Error::Dump(format!("feature {f} references an unknown class")));
            }
        }
        Ok(Self::assemble(class_counts, features, training_size))
    }
}

pub(crate) fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Dump(format!("bad number {s:?}")))
}

pub(crate) fn parse_label(s: &str) -> Result<SenseLabel> {
    SenseLabel::new(parse_num(s)?)
}

/// L1 distance between two equal-length probability vectors.
pub(crate) fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum()
}
