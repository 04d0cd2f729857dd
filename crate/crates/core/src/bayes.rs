//! Naive-Bayes comparator.
//!
//! Scores are log numerators `log P(C_i) + sum_j log q(v_j | C_i)`; the
//! evidence term is constant across classes and never computed. A
//! `(value, class)` pair not observed in training uses `q = P(C_i) / N`
//! in place of the zero estimate.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::collocation::{FeatureVector, FEATURE_COUNT};
use crate::corpus::SenseLabel;
use crate::error::{Error, Result};
use crate::mvdm::{parse_label, parse_num};
use crate::Example;

pub const DUMP_HEADER: &str = "nb-v1";

const TIE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NbPrediction {
    pub label: SenseLabel,
    pub scores: BTreeMap<SenseLabel, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    class_counts: BTreeMap<SenseLabel, u64>,
    /// Per feature: value -> class -> joint count.
    joint: Vec<HashMap<String, BTreeMap<SenseLabel, u64>>>,
    training_size: usize,
}

impl NbModel {
    pub fn train(examples: &[Example]) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::EmptyTraining);
        }
        let mut class_counts = BTreeMap::new();
        let mut joint = vec![HashMap::<String, BTreeMap<SenseLabel, u64>>::new(); FEATURE_COUNT];
        for (fv, label) in examples {
            *class_counts.entry(*label).or_insert(0) += 1;
            for (table, value) in joint.iter_mut().zip(fv.values()) {
                *table.entry(value.clone()).or_default().entry(*label).or_insert(0) += 1;
            }
        }
        Ok(NbModel { class_counts, joint, training_size: examples.len() })
    }

    pub fn training_size(&self) -> usize {
        self.training_size
    }

    pub fn sense_count(&self) -> u32 {
        self.class_counts.keys().next_back().map_or(1, |l| l.rank())
    }

    pub fn classes(&self) -> impl Iterator<Item = SenseLabel> + '_ {
        self.class_counts.keys().copied()
    }

    pub fn prior(&self, label: SenseLabel) -> f64 {
        self.class_counts.get(&label).map_or(0.0, |&c| c as f64 / self.training_size as f64)
    }

    pub fn priors(&self) -> BTreeMap<SenseLabel, f64> {
        self.classes().map(|l| (l, self.prior(l))).collect()
    }

    /// `P(v | C)` for an observed pair, `None` if the pair never occurred.
    pub fn conditional(&self, feature: usize, value: &str, label: SenseLabel) -> Option<f64> {
        let n = *self.joint[feature].get(value)?.get(&label)?;
        Some(n as f64 / self.class_counts[&label] as f64)
    }

    /// Stand-in for an unobserved `P(v | C)`.
    pub fn replacement(&self, label: SenseLabel) -> f64 {
        self.prior(label) / self.training_size as f64
    }

    pub fn classify(&self, query: &FeatureVector) -> NbPrediction {
        let mut scores = BTreeMap::new();
        let mut best: Option<(SenseLabel, f64)> = None;
        for label in self.classes() {
            let mut score = self.prior(label).ln();
            for f in 0..FEATURE_COUNT {
                let q = self.conditional(f, query.get(f), label).unwrap_or_else(|| self.replacement(label));
                score += q.ln();
            }
            scores.insert(label, score);
            // Classes ascend by rank, so a strict comparison keeps the smallest rank on ties.
            // Sums of the same factors in a different order can differ in the last bits,
            // hence the relative slack.
            if best.is_none_or(|(_, s)| score - s > TIE_SLACK * s.abs().max(1.0)) {
                best = Some((label, score));
            }
        }
        NbPrediction { label: best.expect("trained model has a class").0, scores }
    }

    /// Plain-text dump:
    ///
    /// ```text
    /// nb-v1
    /// examples <N>
    /// class    <rank> <count>
    /// joint    <feature> <rank> <count> <value>
    /// ```
    ///
    /// Priors are `count / N` and conditionals `joint / class count`.
    pub fn to_dump(&self) -> Result<String> {
        let mut out = format!("{DUMP_HEADER}\nexamples\t{}\n", self.training_size);
        for (label, count) in &self.class_counts {
            writeln!(out, "class\t{label}\t{count}").unwrap();
        }
        for (f, table) in self.joint.iter().enumerate() {
            let mut values: Vec<&String> = table.keys().collect();
            values.sort();
            for value in values {
                if value.contains(['\t', '\n', '\r']) {
                    return Err(Error::Dump(format!("feature value {value:?} cannot be written")));
                }
                for (label, n) in &table[value] {
                    writeln!(out, "joint\t{f}\t{label}\t{n}\t{value}").unwrap();
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
        let mut joint = vec![HashMap::<String, BTreeMap<SenseLabel, u64>>::new(); FEATURE_COUNT];
        for line in lines {
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["examples", n] => training_size = Some(parse_num::<usize>(n)?),
                ["class", label, n] => {
                    class_counts.insert(parse_label(label)?, parse_num::<u64>(n)?);
                }
                ["joint", f, label, n, value] => {
                    let f = parse_num::<usize>(f)?;
                    let table = joint.get_mut(f).ok_or(Error::FeatureIndex(f))?;
                    *table.entry(value.to_string()).or_default().entry(parse_label(label)?).or_insert(0) += parse_num::<u64>(n)?;
                }
                [""] => {}
                _ => return Err(Error::Dump(format!("unrecognised line {line:?}"))),
            }
        }
        let training_size = training_size.ok_or_else(|| Error::Dump("missing examples line".into()))?;
        if training_size == 0 || class_counts.values().sum::<u64>() != training_size as u64 {
            return Err(Error::Dump("class counts do not sum to the example count".into()));
        }
        for (f, table) in joint.iter().enumerate() {
            let mut per_class: BTreeMap<SenseLabel, u64> = BTreeMap::new();
            for counts in table.values() {
                for (l, n) in counts {
                    *per_class.entry(*l).or_insert(0) += n;
                }
            }
            if per_class != class_counts {
                return Err(Error::Dump(format!("feature {f} joint counts disagree with class counts")));
            }
        }
        Ok(NbModel { class_counts, joint, training_size })
    }
}
