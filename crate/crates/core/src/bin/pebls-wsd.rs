use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pebls_wsd::collocation::{extract, FEATURE_NAMES};
use pebls_wsd::corpus::{corpus_to_tsv, parse_corpus_file, Dataset};
use pebls_wsd::harness::synth::{generate, GenConfig};
use pebls_wsd::harness::{format_report, run_experiment, Algorithm, ExperimentConfig, KChoice, ReportFormat};
use pebls_wsd::{cross_validate_k, DistanceModel, Error, KGrid, NbModel};

#[derive(Parser)]
#[command(name = "pebls-wsd", version, about = "Exemplar-based word sense disambiguation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train per word on --train, score on --test, print an accuracy report.
    Run(RunArgs),
    /// Cross-validate k for one word of a training corpus.
    CvSelect(CvArgs),
    /// Show the distance between two training instances of one word.
    Distance(DistanceArgs),
    /// Write a trained model for one word as a text dump.
    DumpModel(DumpArgs),
    /// Generate a synthetic train/test corpus pair.
    Gen(GenArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    lowercase: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long)]
    test: PathBuf,
    /// pebls, nb, sense1 or mfs
    #[arg(long, default_value = "pebls")]
    algo: String,
    /// Positive integer or `auto`.
    #[arg(long, default_value = "1")]
    k: String,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// tsv or json
    #[arg(long, default_value = "tsv")]
    format: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CvArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Comma-separated k values; defaults to 1,5,10,...,100.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    /// tsv or json
    #[arg(long, default_value = "tsv")]
    format: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    word: String,
    /// 0-based index of the first instance within the word's dataset.
    #[arg(long)]
    first: usize,
    #[arg(long)]
    second: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    word: String,
    /// pebls (mvdm-v1 tables) or nb (nb-v1 tables)
    #[arg(long, default_value = "pebls")]
    algo: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 5)]
    words: usize,
    #[arg(long, default_value_t = 4)]
    senses: u32,
    /// Ratio between successive sense priors, in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    skew: f64,
    /// Probability that a collocation position carries a sense signature token.
    #[arg(long, default_value_t = 0.85)]
    informativeness: f64,
    /// Probability that a gold label is replaced by a uniformly random sense.
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    #[arg(long, default_value_t = 500)]
    train_size: usize,
    #[arg(long, default_value_t = 200)]
    test_size: usize,
    #[arg(long, default_value_t = 50)]
    background_vocab: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix: writes <out>.train.tsv and <out>.test.tsv.
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Partial,
    Fatal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Fatal(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::CvSelect(args) => cv_select(args),
        Command::Distance(args) => distance(args),
        Command::DumpModel(args) => dump_model(args),
        Command::Gen(args) => gen(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Partial) => ExitCode::from(1),
        Err(Failure::Fatal(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn word_dataset(path: &Path, word: &str) -> Result<Dataset, Error> {
    let mut corpus = parse_corpus_file(path)?;
    corpus.remove(word).ok_or_else(|| Error::Config(format!("word {word:?} not found in {}", path.display())))
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let config = ExperimentConfig {
        train_path: args.train,
        test_path: args.test,
        algorithm: args.algo.parse::<Algorithm>()?,
        k: args.k.parse::<KChoice>()?,
        folds: args.folds,
        seed: args.common.seed,
        lowercase: args.common.lowercase,
        report_format: args.format.parse::<ReportFormat>()?,
    };
    let report = run_experiment(&config)?;
    emit(args.common.out.as_deref(), &format_report(&report, config.report_format))?;
    for (word, message) in &report.failures {
        eprintln!("warning: {word}: {message}");
    }
    if report.has_failures() {
        return Err(Failure::Partial);
    }
    Ok(())
}

fn cv_select(args: CvArgs) -> Result<(), Failure> {
    let format = args.format.parse::<ReportFormat>()?;
    let grid = match args.grid {
        Some(values) => KGrid::new(values)?,
        None => KGrid::default(),
    };
    let dataset = word_dataset(&args.train, &args.word)?;
    let result = cross_validate_k(&dataset, &grid, args.folds, args.common.seed, args.common.lowercase)?;
    let text = match format {
        ReportFormat::Json => serde_json::to_string_pretty(&result).expect("serializable") + "\n",
        ReportFormat::Tsv => {
            let mut s = String::from("k\terrors\ttotal\terrorRate\n");
            for (k, stats) in &result.per_k {
                s.push_str(&format!("{k}\t{}\t{}\t{:.4}\n", stats.errors, stats.total, stats.error_rate));
            }
            s.push_str(&format!("BEST\t{}\n", result.best_k));
            s
        }
    };
    emit(args.common.out.as_deref(), &text)?;
    Ok(())
}

fn distance(args: DistanceArgs) -> Result<(), Failure> {
    let dataset = word_dataset(&args.train, &args.word)?;
    let lowercase = args.common.lowercase;
    let examples: Vec<_> = dataset.instances().iter().map(|i| (extract(i, lowercase), i.label)).collect();
    let pick = |i: usize| {
        examples
            .get(i)
            .map(|e| e.0.clone())
            .ok_or_else(|| Error::Config(format!("instance {i} out of range (word has {})", examples.len())))
    };
    let (x, y) = (pick(args.first)?, pick(args.second)?);
    let model = DistanceModel::train(&examples)?;
    let mut text = String::from("feature\tfirst\tsecond\tdistance\n");
    for (f, name) in FEATURE_NAMES.iter().enumerate() {
        let d = model.value_distance(f, x.get(f), y.get(f));
        text.push_str(&format!("{name}\t{}\t{}\t{d:.6}\n", x.get(f), y.get(f)));
    }
    text.push_str(&format!("TOTAL\t-\t-\t{:.6}\n", model.example_distance(&x, &y)));
    emit(args.common.out.as_deref(), &text)?;
    Ok(())
}

fn dump_model(args: DumpArgs) -> Result<(), Failure> {
    let dataset = word_dataset(&args.train, &args.word)?;
    let lowercase = args.common.lowercase;
    let examples: Vec<_> = dataset.instances().iter().map(|i| (extract(i, lowercase), i.label)).collect();
    let text = match args.algo.parse::<Algorithm>()? {
        Algorithm::Pebls => DistanceModel::train(&examples)?.to_dump()?,
        Algorithm::Nb => NbModel::train(&examples)?.to_dump()?,
        _ => return Err(Error::Config("only pebls and nb models can be dumped".into()).into()),
    };
    emit(args.common.out.as_deref(), &text)?;
    Ok(())
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let config = GenConfig {
        words: args.words,
        senses: args.senses,
        prior_skew: args.skew,
        informativeness: args.informativeness,
        noise: args.noise,
        train_size: args.train_size,
        test_size: args.test_size,
        background_vocab: args.background_vocab,
        seed: args.seed,
        ..GenConfig::default()
    };
    let (train, test) = generate(&config)?;
    let write = |suffix: &str, corpus: &BTreeMap<String, Dataset>| {
        let mut path = args.out.clone().into_os_string();
        path.push(suffix);
        emit(Some(Path::new(&path)), &corpus_to_tsv(corpus))
    };
    write(".train.tsv", &train)?;
    write(".test.tsv", &test)?;
    Ok(())
}
