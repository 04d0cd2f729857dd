use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Tsv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "tsv" => Ok(ReportFormat::Tsv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WordResult {
    pub test_count: usize,
    pub correct: usize,
    pub accuracy: Option<f64>,
    pub chosen_k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Overall {
    pub test_count: usize,
    pub correct: usize,
    pub micro_accuracy: Option<f64>,
}

/// Per-word and pooled accuracy. Words that failed are listed in `failures`
/// and left out of both `per_word` and `overall`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub per_word: BTreeMap<String, WordResult>,
    pub overall: Overall,
    pub failures: BTreeMap<String, String>,
}

impl Report {
    pub fn from_words(per_word: BTreeMap<String, WordResult>, failures: BTreeMap<String, String>) -> Self {
        let test_count = per_word.values().map(|w| w.test_count).sum();
        let correct = per_word.values().map(|w| w.correct).sum();
        let overall = Overall {
            test_count,
            correct,
            micro_accuracy: (test_count > 0).then(|| correct as f64 / test_count as f64),
        };
        Report { per_word, overall, failures }
    }

    pub fn has_failures(&self) -> bool {
        !self.failures.is_empty()
    }
}

fn fixed4(x: Option<f64>) -> String {
    x.map_or_else(|| "null".to_string(), |a| format!("{a:.4}"))
}

pub fn format_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Tsv => {
            let mut out = String::from("word\ttest\tcorrect\taccuracy\tchosenK\n");
            for (word, r) in &report.per_word {
                let k = r.chosen_k.map_or_else(|| "-".to_string(), |k| k.to_string());
                writeln!(out, "{word}\t{}\t{}\t{}\t{k}", r.test_count, r.correct, fixed4(r.accuracy)).unwrap();
            }
            let o = &report.overall;
            writeln!(out, "OVERALL\t{}\t{}\t{}\t-", o.test_count, o.correct, fixed4(o.micro_accuracy)).unwrap();
            for (word, message) in &report.failures {
                writeln!(out, "# error\t{word}\t{}", message.replace(['\t', '\n'], " ")).unwrap();
            }
            out
        }
    }
}
