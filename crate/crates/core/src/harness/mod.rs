//! Baselines, the experiment driver, reports and the synthetic corpus
//! generator.

mod baseline;
mod experiment;
mod report;
pub mod synth;

pub use baseline::{accuracy, baseline_most_frequent, baseline_sense1, most_frequent_label};
pub use experiment::{run_experiment, run_on_corpora, Algorithm, ExperimentConfig, KChoice};
pub use report::{format_report, Overall, Report, ReportFormat, WordResult};
