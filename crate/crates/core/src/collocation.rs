//! Local-collocation features.
//!
//! For the fragment `l2 l1 w r1 r2` around target `w` an instance is
//! described by seven symbolic values, in this order:
//! `l2_l1, l1_r1, r1_r2, l1, r1, l2, r2`.

use std::borrow::Cow;

use crate::corpus::{Instance, Token};

pub const FEATURE_COUNT: usize = 7;

/// Stands in for context positions past the sentence boundary.
pub const SENTINEL: &str = "<S>";

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = ["l2_l1", "l1_r1", "r1_r2", "l1", "r1", "l2", "r2"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FeatureVector([String; FEATURE_COUNT]);

impl FeatureVector {
    pub fn new(values: [String; FEATURE_COUNT]) -> Self {
        FeatureVector(values)
    }

    pub fn from_strs(values: [&str; FEATURE_COUNT]) -> Self {
        FeatureVector(values.map(str::to_string))
    }

    pub fn values(&self) -> &[String; FEATURE_COUNT] {
        &self.0
    }

    pub fn get(&self, feature: usize) -> &str {
        &self.0[feature]
    }
}

fn position<'a>(tokens: impl Iterator<Item = &'a Token>, nth: usize, lowercase: bool) -> Cow<'a, str> {
    match tokens.into_iter().nth(nth) {
        Some(t) if lowercase => Cow::Owned(t.as_str().to_lowercase()),
        Some(t) => Cow::Borrowed(t.as_str()),
        None => Cow::Borrowed(SENTINEL),
    }
}

pub fn extract(instance: &Instance, lowercase: bool) -> FeatureVector {
    let l1 = position(instance.left.iter().rev(), 0, lowercase);
    let l2 = position(instance.left.iter().rev(), 1, lowercase);
    let r1 = position(instance.right.iter(), 0, lowercase);
    let r2 = position(instance.right.iter(), 1, lowercase);
    let pair = |a: &str, b: &str| format!("{a}_{b}");
    FeatureVector([
        pair(&l2, &l1),
        pair(&l1, &r1),
        pair(&r1, &r2),
        l1.into_owned(),
        r1.into_owned(),
        l2.into_owned(),
        r2.into_owned(),
    ])
}
