//! Command-line front end and the end-to-end experiment pipeline.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data, parse and I/O
//! errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::arpa::{read_arpa, write_arpa};
use crate::corpus::{build_vocabulary, read_corpus, read_lines, unique_word_count, write_corpus, SentenceTokens};
use crate::counts::{count_ngrams, write_counts};
use crate::error::{Error, Result};
use crate::eval::{corpus_wer, evaluate_perplexity, PerplexityReport};
use crate::postproc::{parse_marker, rejoin_corpus, RejoinConfig};
use crate::smoothing::{train, Estimate, SmoothingKind, SmoothingMethod};
use crate::stem_rules::{
    load_rules, split_corpus_supervised, SuffixRuleSet, DEFAULT_MARKER, DEFAULT_MIN_STEM_LENGTH,
    TELUGU_RULES_FILE,
};
use crate::stem_unsup::{
    build_segmentation_graph, prune_graph, read_edges, segment_corpus, write_edges, write_list,
    SegmentationGraph, StemThresholds,
};

/// Environment variable naming a directory that holds rule files.
pub const DATA_DIR_ENV: &str = "STEMLM_DATA_DIR";

pub const DEFAULT_ORDER: usize = 3;
pub const DEFAULT_METHOD: SmoothingKind = SmoothingKind::WittenBell;
pub const DEFAULT_THRESHOLD: usize = 3;
pub const DEFAULT_FRACTIONS: [f64; 11] = [0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0];

const WER_NOTE: &str = "WER needs a decoder and is not computed";

/// How the training and test text is preprocessed before modeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum StemmingMode {
    /// Whole words.
    None,
    /// Rule-based suffix splitting.
    Supervised,
    /// Graph-based stem/suffix splitting.
    Unsupervised,
    /// Whole-word training text concatenated with its unsupervised split.
    Combined,
}

impl StemmingMode {
    pub const ALL: [StemmingMode; 4] = [
        StemmingMode::None,
        StemmingMode::Supervised,
        StemmingMode::Unsupervised,
        StemmingMode::Combined,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StemmingMode::None => "none",
            StemmingMode::Supervised => "supervised",
            StemmingMode::Unsupervised => "unsupervised",
            StemmingMode::Combined => "combined",
        }
    }
}

fn default_method() -> String {
    DEFAULT_METHOD.name().to_owned()
}
fn default_order() -> usize {
    DEFAULT_ORDER
}
fn default_modes() -> Vec<StemmingMode> {
    StemmingMode::ALL.to_vec()
}
fn default_threshold() -> usize {
    DEFAULT_THRESHOLD
}
fn default_marker() -> char {
    DEFAULT_MARKER
}
fn default_min_stem() -> usize {
    DEFAULT_MIN_STEM_LENGTH
}
fn default_true() -> bool {
    true
}

/// Settings for `experiment` and `sweep`; also the JSON config file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub train: PathBuf,
    pub test: PathBuf,
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default)]
    pub cutoff: Option<u64>,
    #[serde(default)]
    pub discount: Option<f64>,
    #[serde(default = "default_order")]
    pub order: usize,
    #[serde(default = "default_modes")]
    pub modes: Vec<StemmingMode>,
    #[serde(default = "default_threshold")]
    pub t_stem: usize,
    #[serde(default = "default_threshold")]
    pub t_suffix: usize,
    /// Build the segmentation graph from training and test word types.
    #[serde(default = "default_true")]
    pub graph_includes_test: bool,
    /// Rule file; defaults to the directory in `STEMLM_DATA_DIR`, then to
    /// the bundled Telugu rules.
    #[serde(default)]
    pub rules: Option<PathBuf>,
    #[serde(default = "default_marker")]
    pub marker: char,
    #[serde(default = "default_min_stem")]
    pub min_stem_length: usize,
    /// Words appended to the training text, one sentence each.
    #[serde(default)]
    pub inject_words: Option<PathBuf>,
    /// Where per-mode corpora and models are written, if anywhere.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(train: impl Into<PathBuf>, test: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            train: train.into(),
            test: test.into(),
            method: default_method(),
            cutoff: None,
            discount: None,
            order: DEFAULT_ORDER,
            modes: default_modes(),
            t_stem: DEFAULT_THRESHOLD,
            t_suffix: DEFAULT_THRESHOLD,
            graph_includes_test: true,
            rules: None,
            marker: DEFAULT_MARKER,
            min_stem_length: DEFAULT_MIN_STEM_LENGTH,
            inject_words: None,
            output_dir: None,
        }
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::data(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        self.smoothing()?;
        self.thresholds()?;
        if self.order < 1 {
            return Err(Error::usage("order must be at least 1"));
        }
        if self.modes.is_empty() {
            return Err(Error::usage("at least one stemming mode is required"));
        }
        parse_marker(&self.marker.to_string())?;
        let mut paths = vec![&self.train, &self.test];
        paths.extend(self.rules.iter().chain(&self.inject_words));
        for path in paths {
            File::open(path).map_err(|e| annotate(path, e))?;
        }
        Ok(())
    }

    pub fn smoothing(&self) -> Result<SmoothingMethod> {
        smoothing_method(&self.method, self.cutoff, self.discount)
    }

    pub fn thresholds(&self) -> Result<StemThresholds> {
        StemThresholds::new(self.t_stem, self.t_suffix)
    }

    pub fn rule_set(&self) -> Result<SuffixRuleSet> {
        resolve_rules(self.rules.as_deref(), self.marker, self.min_stem_length)
    }
}

fn smoothing_method(name: &str, cutoff: Option<u64>, discount: Option<f64>) -> Result<SmoothingMethod> {
    let mut method = SmoothingMethod::new(name.parse()?);
    if let Some(k) = cutoff {
        method = method.with_cutoff(k)?;
    }
    if let Some(d) = discount {
        method = method.with_discount(d)?;
    }
    Ok(method)
}

/// Explicit path, then `$STEMLM_DATA_DIR/telugu_suffixes.tsv`, then the
/// bundled defaults.
fn resolve_rules(path: Option<&Path>, marker: char, min_stem: usize) -> Result<SuffixRuleSet> {
    let rules = match path {
        Some(p) => load_rules(p)?,
        None => match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) => load_rules(Path::new(&dir).join(TELUGU_RULES_FILE))?,
            None => SuffixRuleSet::telugu_default(),
        },
    };
    rules.with_marker(marker)?.with_min_stem_length(min_stem)
}

fn annotate(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| annotate(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| annotate(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| annotate(path, e))
}

fn read_corpus_path(path: &Path) -> Result<Vec<SentenceTokens>> {
    read_corpus(open(path)?)
}

/// Reads whitespace-separated words and returns one sentence per word.
pub fn read_injected_words(path: &Path) -> Result<Vec<SentenceTokens>> {
    let words: BTreeSet<String> = read_corpus_path(path)?
        .into_iter()
        .flat_map(SentenceTokens::into_tokens)
        .collect();
    words
        .into_iter()
        .map(|w| SentenceTokens::new([w]))
        .collect()
}

/// One row of the `experiment` table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub mode: StemmingMode,
    pub train_token_count: usize,
    /// Distinct word types in the (possibly split) training text.
    pub vocabulary_size: usize,
    /// Distinct word types in the (possibly split) test text.
    pub test_unique_words: usize,
    pub report: PerplexityReport,
}

/// Stemmed training and test text for one mode.
#[derive(Debug, Clone)]
pub struct PreparedCorpora {
    pub train: Vec<SentenceTokens>,
    pub test: Vec<SentenceTokens>,
    /// Pruned graph, for the unsupervised and combined modes.
    pub graph: Option<SegmentationGraph>,
}

/// Applies the stemming `mode` to both corpora.
pub fn prepare_corpora(
    mode: StemmingMode,
    train: &[SentenceTokens],
    test: &[SentenceTokens],
    config: &ExperimentConfig,
) -> Result<PreparedCorpora> {
    Ok(match mode {
        StemmingMode::None => PreparedCorpora {
            train: train.to_vec(),
            test: test.to_vec(),
            graph: None,
        },
        StemmingMode::Supervised => {
            let rules = config.rule_set()?;
            PreparedCorpora {
                train: split_corpus_supervised(train, &rules).0,
                test: split_corpus_supervised(test, &rules).0,
                graph: None,
            }
        }
        StemmingMode::Unsupervised | StemmingMode::Combined => {
            let mut words: BTreeSet<&str> = train.iter().flatten().map(String::as_str).collect();
            if config.graph_includes_test {
                words.extend(test.iter().flatten().map(String::as_str));
            }
            let graph = prune_graph(&build_segmentation_graph(words), config.thresholds()?);
            let mut split_train = segment_corpus(train, &graph, config.marker).0;
            if mode == StemmingMode::Combined {
                let mut joined = train.to_vec();
                joined.append(&mut split_train);
                split_train = joined;
            }
            PreparedCorpora {
                train: split_train,
                test: segment_corpus(test, &graph, config.marker).0,
                graph: Some(graph),
            }
        }
    })
}

/// Trains on the prepared text and evaluates on the prepared test text.
fn train_and_evaluate(
    train_corpus: &[SentenceTokens],
    test: &[SentenceTokens],
    order: usize,
    method: &SmoothingMethod,
) -> Result<(Estimate, PerplexityReport)> {
    let estimate = train(train_corpus, order, method)?;
    let report = evaluate_perplexity(&estimate.model, test)?;
    Ok((estimate, report))
}

/// Runs every configured stemming mode on in-memory corpora.
pub fn experiment_rows(
    train: &[SentenceTokens],
    test: &[SentenceTokens],
    config: &ExperimentConfig,
) -> Result<Vec<ExperimentRow>> {
    let method = config.smoothing()?;
    let mut train = train.to_vec();
    if let Some(path) = &config.inject_words {
        train.extend(read_injected_words(path)?);
    }
    let mut rows = Vec::with_capacity(config.modes.len());
    for &mode in &config.modes {
        let prepared = prepare_corpora(mode, &train, test, config)?;
        let (estimate, report) = train_and_evaluate(&prepared.train, &prepared.test, config.order, &method)?;
        if let Some(dir) = &config.output_dir {
            write_artifacts(&dir.join(mode.name()), &prepared, &estimate)?;
        }
        rows.push(ExperimentRow {
            mode,
            train_token_count: prepared.train.iter().map(|s| s.len()).sum(),
            vocabulary_size: unique_word_count(&prepared.train),
            test_unique_words: unique_word_count(&prepared.test),
            report,
        });
    }
    Ok(rows)
}

fn write_artifacts(dir: &Path, prepared: &PreparedCorpora, estimate: &Estimate) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| annotate(dir, e))?;
    write_corpus(create(&dir.join("train.txt"))?, &prepared.train)?;
    write_corpus(create(&dir.join("test.txt"))?, &prepared.test)?;
    write_arpa(&estimate.model, create(&dir.join("model.arpa"))?)?;
    if let Some(graph) = &prepared.graph {
        write_list(create(&dir.join("stems.txt"))?, graph.prefixes())?;
        write_list(create(&dir.join("suffixes.txt"))?, graph.suffixes())?;
        write_edges(create(&dir.join("edges.tsv"))?, graph)?;
    }
    Ok(())
}

/// Reads the configured corpora and runs every mode.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let train = read_corpus_path(&config.train)?;
    let test = read_corpus_path(&config.test)?;
    experiment_rows(&train, &test, config)
}

fn hit_columns(order: usize) -> impl Iterator<Item = String> {
    (1..=order).rev().map(|k| format!("hit_{k}gram_percent"))
}

fn hit_values(report: &PerplexityReport, order: usize) -> impl Iterator<Item = String> + '_ {
    (1..=order).rev().map(move |k| {
        format!("{:.4}", report.hits_per_order.get(&k).map_or(0.0, |h| h.percent))
    })
}

pub fn write_experiment_csv<W: Write>(sink: W, rows: &[ExperimentRow], order: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header: Vec<String> = [
        "mode",
        "train_tokens",
        "vocabulary_size",
        "test_unique_words",
        "perplexity",
        "oov_count",
        "oov_rate",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(hit_columns(order));
    header.extend(["wer_percent", "word_accuracy_percent", "note"].map(String::from));
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let mut record = vec![
            row.mode.name().to_owned(),
            row.train_token_count.to_string(),
            row.vocabulary_size.to_string(),
            row.test_unique_words.to_string(),
            format!("{:.4}", row.report.perplexity),
            row.report.oov_count.to_string(),
            format!("{:.4}", row.report.oov_rate),
        ];
        record.extend(hit_values(&row.report, order));
        record.extend([String::new(), String::new(), WER_NOTE.to_owned()]);
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::data(format!("{other:?}")),
    }
}

/// One row of the inclusion sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub fraction: f64,
    pub included_sentences: usize,
    pub vocabulary_size: usize,
    pub report: PerplexityReport,
}

fn check_fractions(fractions: &[f64]) -> Result<()> {
    match fractions.iter().find(|f| !(0.0..=100.0).contains(*f)) {
        Some(f) => Err(Error::usage(format!("fraction {f} lies outside [0, 100]"))),
        None if fractions.is_empty() => Err(Error::usage("no fractions given")),
        None => Ok(()),
    }
}

/// For each percentage `f`, trains on `train` plus the first `f`% of the
/// test sentences and evaluates on the whole test set.
pub fn inclusion_sweep(
    train_corpus: &[SentenceTokens],
    test: &[SentenceTokens],
    order: usize,
    method: &SmoothingMethod,
    fractions: &[f64],
) -> Result<Vec<SweepRow>> {
    check_fractions(fractions)?;
    let mut rows = Vec::with_capacity(fractions.len());
    for &fraction in fractions {
        let included = (fraction / 100.0 * test.len() as f64).round() as usize;
        let mut corpus = train_corpus.to_vec();
        corpus.extend_from_slice(&test[..included.min(test.len())]);
        let (_, report) = train_and_evaluate(&corpus, test, order, method)?;
        rows.push(SweepRow {
            fraction,
            included_sentences: included,
            vocabulary_size: build_vocabulary(&corpus)?.1.unique_word_count as usize,
            report,
        });
    }
    Ok(rows)
}

/// File-based [`inclusion_sweep`] on whole words.
pub fn run_inclusion_sweep(config: &ExperimentConfig, fractions: &[f64]) -> Result<Vec<SweepRow>> {
    check_fractions(fractions)?;
    config.validate()?;
    let mut train_corpus = read_corpus_path(&config.train)?;
    if let Some(path) = &config.inject_words {
        train_corpus.extend(read_injected_words(path)?);
    }
    let test = read_corpus_path(&config.test)?;
    inclusion_sweep(&train_corpus, &test, config.order, &config.smoothing()?, fractions)
}

pub fn write_sweep_csv<W: Write>(sink: W, rows: &[SweepRow], order: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header: Vec<String> = [
        "fraction_percent",
        "included_sentences",
        "vocabulary_size",
        "perplexity",
        "oov_count",
        "oov_rate",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(hit_columns(order));
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let mut record = vec![
            row.fraction.to_string(),
            row.included_sentences.to_string(),
            row.vocabulary_size.to_string(),
            format!("{:.4}", row.report.perplexity),
            row.report.oov_count.to_string(),
            format!("{:.4}", row.report.oov_rate),
        ];
        record.extend(hit_values(&row.report, order));
        w.write_record(&record).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Parser, Debug)]
#[command(name = "stemlm", version, about = "N-gram language models with stem/suffix splitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct SmoothingArgs {
    /// good-turing, linear, absolute, witten-bell or kneser-ney
    #[arg(long)]
    method: Option<String>,
    /// Good-Turing count cutoff
    #[arg(long)]
    cutoff: Option<u64>,
    /// Fixed discount for absolute discounting and Kneser-Ney
    #[arg(long)]
    discount: Option<f64>,
    #[arg(long)]
    order: Option<usize>,
}

#[derive(clap::Args, Debug)]
struct PipelineArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long)]
    test: Option<PathBuf>,
    #[command(flatten)]
    smoothing: SmoothingArgs,
    /// Append each word of FILE to the training text as its own sentence
    #[arg(long, value_name = "FILE")]
    inject_words: Option<PathBuf>,
    /// Write the CSV here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print corpus statistics as JSON
    Vocab { input: Option<PathBuf> },
    /// Write n-gram counts
    Count {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Train a model and write it in ARPA format
    Train {
        #[command(flatten)]
        smoothing: SmoothingArgs,
        #[arg(long, value_name = "FILE")]
        inject_words: Option<PathBuf>,
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate an ARPA model on test text
    Ppl {
        #[arg(long)]
        model: PathBuf,
        input: Option<PathBuf>,
    },
    /// Split words with suffix rules
    StemRules {
        /// Rule file (SUFFIX[TAB]STEM_FINAL per line)
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MARKER.to_string())]
        marker: String,
        #[arg(long, default_value_t = DEFAULT_MIN_STEM_LENGTH)]
        min_stem: usize,
        /// Write the split report as JSON
        #[arg(long)]
        report: Option<PathBuf>,
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Learn stems and suffixes from one or more corpora
    StemLearn {
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        t_stem: usize,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        t_suffix: usize,
        #[arg(long)]
        stems: Option<PathBuf>,
        #[arg(long)]
        suffixes: Option<PathBuf>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Split words with a learned edge file
    StemApply {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MARKER.to_string())]
        marker: String,
        #[arg(long)]
        report: Option<PathBuf>,
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Glue marked suffix tokens back onto their words
    Rejoin {
        #[arg(long, default_value_t = DEFAULT_MARKER.to_string())]
        marker: String,
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Word error rate of line-parallel reference and hypothesis files
    Wer { reference: PathBuf, hypothesis: PathBuf },
    /// Run the stemming variants end to end and print a CSV
    Experiment {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Repeatable; defaults to all four modes
        #[arg(long = "mode", value_enum)]
        modes: Vec<StemmingMode>,
        #[arg(long)]
        t_stem: Option<usize>,
        #[arg(long)]
        t_suffix: Option<usize>,
        /// Build the segmentation graph from training words only
        #[arg(long)]
        graph_train_only: bool,
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        marker: Option<String>,
        #[arg(long)]
        min_stem: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Perplexity and OOV rate as test text is added to training
    Sweep {
        #[command(flatten)]
        pipeline: PipelineArgs,
        /// Comma-separated percentages
        #[arg(long, value_delimiter = ',')]
        fractions: Vec<f64>,
    },
}

/// Parses `args` (including the program name) and runs the command with
/// real standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_command(args, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run`], with explicit streams.
pub fn run_command<I, T>(
    args: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: Option<&Path>, stdin: &mut dyn BufRead) -> Result<Vec<SentenceTokens>> {
    match path {
        Some(p) if p != Path::new("-") => read_corpus_path(p),
        _ => read_corpus(stdin),
    }
}

fn with_output<F>(path: Option<&Path>, stdout: &mut dyn Write, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) if p != Path::new("-") => {
            let mut file = create(p)?;
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        _ => f(stdout),
    }
}

fn write_json<T: Serialize>(sink: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *sink, value).map_err(|e| Error::data(e.to_string()))?;
    writeln!(sink)?;
    Ok(())
}

fn pipeline_config(args: &PipelineArgs) -> Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_json_file(path)?,
        None => {
            let (Some(train), Some(test)) = (&args.train, &args.test) else {
                return Err(Error::usage("--train and --test are required without --config"));
            };
            ExperimentConfig::new(train, test)
        }
    };
    if let Some(p) = &args.train {
        config.train = p.clone();
    }
    if let Some(p) = &args.test {
        config.test = p.clone();
    }
    let s = &args.smoothing;
    if let Some(m) = &s.method {
        config.method = m.clone();
    }
    config.cutoff = s.cutoff.or(config.cutoff);
    config.discount = s.discount.or(config.discount);
    config.order = s.order.unwrap_or(config.order);
    if args.inject_words.is_some() {
        config.inject_words = args.inject_words.clone();
    }
    Ok(config)
}

fn dispatch(
    command: Command,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    match command {
        Command::Vocab { input } => {
            let corpus = read_input(input.as_deref(), stdin)?;
            let (_, stats) = build_vocabulary(&corpus)?;
            write_json(stdout, &stats)
        }
        Command::Count { order, input, output } => {
            let corpus = read_input(input.as_deref(), stdin)?;
            let (vocab, _) = build_vocabulary(&corpus)?;
            let table = count_ngrams(&corpus, order, &vocab)?;
            with_output(output.as_deref(), stdout, |w| write_counts(w, &table, &vocab))
        }
        Command::Train {
            smoothing,
            inject_words,
            input,
            output,
        } => {
            let method = smoothing_method(
                smoothing.method.as_deref().unwrap_or(DEFAULT_METHOD.name()),
                smoothing.cutoff,
                smoothing.discount,
            )?;
            let order = smoothing.order.unwrap_or(DEFAULT_ORDER);
            let mut corpus = read_input(input.as_deref(), stdin)?;
            if let Some(path) = &inject_words {
                corpus.extend(read_injected_words(path)?);
            }
            let estimate = train(&corpus, order, &method)?;
            for warning in &estimate.warnings {
                writeln!(stderr, "warning: order {}: {}", warning.order, warning.message)?;
            }
            with_output(output.as_deref(), stdout, |w| write_arpa(&estimate.model, w))
        }
        Command::Ppl { model, input } => {
            let model = read_arpa(open(&model)?)?;
            let test = read_input(input.as_deref(), stdin)?;
            write_json(stdout, &evaluate_perplexity(&model, &test)?)
        }
        Command::StemRules {
            rules,
            marker,
            min_stem,
            report,
            input,
            output,
        } => {
            let rules = resolve_rules(rules.as_deref(), parse_marker(&marker)?, min_stem)?;
            let corpus = read_input(input.as_deref(), stdin)?;
            let (split, summary) = split_corpus_supervised(&corpus, &rules);
            if let Some(path) = report {
                write_json(&mut create(&path)?, &summary)?;
            }
            with_output(output.as_deref(), stdout, |w| write_corpus(w, &split))
        }
        Command::StemLearn {
            t_stem,
            t_suffix,
            stems,
            suffixes,
            edges,
            inputs,
        } => {
            let thresholds = StemThresholds::new(t_stem, t_suffix)?;
            let mut words = BTreeSet::new();
            for path in &inputs {
                words.extend(read_corpus_path(path)?.into_iter().flat_map(SentenceTokens::into_tokens));
            }
            if words.is_empty() {
                return Err(Error::data("no words to learn from"));
            }
            let graph = build_segmentation_graph(&words);
            let pruned = prune_graph(&graph, thresholds);
            if let Some(p) = stems {
                write_list(create(&p)?, pruned.prefixes())?;
            }
            if let Some(p) = suffixes {
                write_list(create(&p)?, pruned.suffixes())?;
            }
            if let Some(p) = edges {
                write_edges(create(&p)?, &pruned)?;
            }
            let summary = serde_json::json!({
                "words": words.len(),
                "prefixes_before": graph.prefix_count(),
                "suffixes_before": graph.suffix_count(),
                "edges_before": graph.edge_count(),
                "stems": pruned.prefix_count(),
                "suffixes": pruned.suffix_count(),
                "edges": pruned.edge_count(),
            });
            write_json(stdout, &summary)
        }
        Command::StemApply {
            edges,
            marker,
            report,
            input,
            output,
        } => {
            let marker = parse_marker(&marker)?;
            let graph = read_edges(open(&edges)?)?;
            let corpus = read_input(input.as_deref(), stdin)?;
            let (split, summary) = segment_corpus(&corpus, &graph, marker);
            if let Some(path) = report {
                write_json(&mut create(&path)?, &summary)?;
            }
            with_output(output.as_deref(), stdout, |w| write_corpus(w, &split))
        }
        Command::Rejoin {
            marker,
            input,
            output,
        } => {
            let config = RejoinConfig::from_marker_str(&marker)?;
            let corpus = match input.as_deref() {
                Some(p) if p != Path::new("-") => read_lines(open(p)?)?,
                _ => read_lines(stdin)?,
            };
            let (joined, summary) = rejoin_corpus(&corpus, config);
            if summary.orphans > 0 {
                writeln!(stderr, "warning: {} marked tokens had no word to attach to", summary.orphans)?;
            }
            with_output(output.as_deref(), stdout, |w| write_corpus(w, &joined))
        }
        Command::Wer { reference, hypothesis } => {
            let r = read_lines(open(&reference)?)?;
            let h = read_lines(open(&hypothesis)?)?;
            write_json(stdout, &corpus_wer(&r, &h)?)
        }
        Command::Experiment {
            pipeline,
            modes,
            t_stem,
            t_suffix,
            graph_train_only,
            rules,
            marker,
            min_stem,
            output_dir,
        } => {
            let mut config = pipeline_config(&pipeline)?;
            if !modes.is_empty() {
                config.modes = modes;
            }
            config.t_stem = t_stem.unwrap_or(config.t_stem);
            config.t_suffix = t_suffix.unwrap_or(config.t_suffix);
            if graph_train_only {
                config.graph_includes_test = false;
            }
            if rules.is_some() {
                config.rules = rules;
            }
            if let Some(m) = marker {
                config.marker = parse_marker(&m)?;
            }
            config.min_stem_length = min_stem.unwrap_or(config.min_stem_length);
            if output_dir.is_some() {
                config.output_dir = output_dir;
            }
            let rows = run_experiment(&config)?;
            with_output(pipeline.output.as_deref(), stdout, |w| {
                write_experiment_csv(w, &rows, config.order)
            })
        }
        Command::Sweep { pipeline, fractions } => {
            let config = pipeline_config(&pipeline)?;
            let fractions = if fractions.is_empty() {
                DEFAULT_FRACTIONS.to_vec()
            } else {
                fractions
            };
            let rows = run_inclusion_sweep(&config, &fractions)?;
            with_output(pipeline.output.as_deref(), stdout, |w| {
                write_sweep_csv(w, &rows, config.order)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize_line;

    fn corpus(lines: &[&str]) -> Vec<SentenceTokens> {
        lines.iter().map(|l| tokenize_line(l)).collect()
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_command(
            std::iter::once("stemlm").chain(args.iter().copied()),
            &mut io::empty(),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["no-such-command"]).0, 1);
        assert_eq!(run_args(&["train", "--bogus"]).0, 1);
        let (code, _, err) = run_args(&["train", "--method", "no-such-method"]);
        assert_eq!(code, 1, "{err}");
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn missing_file_exits_two() {
        let (code, _, err) = run_args(&["vocab", "/nonexistent/corpus.txt"]);
        assert_eq!(code, 2);
        assert!(err.contains("/nonexistent/corpus.txt"));
    }

    #[test]
    fn fractions_are_checked() {
        assert!(matches!(check_fractions(&[0.0, 101.0]), Err(Error::Usage(_))));
        assert!(matches!(check_fractions(&[-1.0]), Err(Error::Usage(_))));
        assert!(check_fractions(&[0.0, 50.0, 100.0]).is_ok());
    }

    #[test]
    fn sweep_endpoints() {
        let train = corpus(&["a b c", "b c a", "c a b"]);
        let test = corpus(&["a d b", "e a c", "b b d"]);
        let method = SmoothingMethod::new(SmoothingKind::WittenBell);
        let rows = inclusion_sweep(&train, &test, 2, &method, &[0.0, 100.0]).unwrap();
        let plain = train_and_evaluate(&train, &test, 2, &method).unwrap().1;
        assert_eq!(rows[0].report, plain);
        assert_eq!(rows[0].report.oov_count, 3);
        assert_eq!(rows[1].report.oov_count, 0);
        assert_eq!(rows[1].included_sentences, 3);
    }

    #[test]
    fn combined_mode_concatenates() {
        let train = corpus(&["ab ac db dc", "xy"]);
        let config = ExperimentConfig {
            t_stem: 2,
            t_suffix: 2,
            ..ExperimentConfig::new("train", "test")
        };
        let unsup = prepare_corpora(StemmingMode::Unsupervised, &train, &train, &config).unwrap();
        assert_eq!(unsup.train[0].tokens(), ["a", "+b", "a", "+c", "d", "+b", "d", "+c"]);
        let combined = prepare_corpora(StemmingMode::Combined, &train, &train, &config).unwrap();
        assert_eq!(combined.train.len(), 4);
        assert_eq!(combined.train[..2], train[..]);
        assert_eq!(combined.test, unsup.test);
    }

    #[test]
    fn config_json_defaults() {
        let config: ExperimentConfig =
            serde_json::from_str(r#"{"train": "a.txt", "test": "b.txt", "modes": ["none", "combined"]}"#).unwrap();
        assert_eq!(config.order, 3);
        assert_eq!(config.modes, [StemmingMode::None, StemmingMode::Combined]);
        assert!(config.graph_includes_test);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"train": "a", "test": "b", "typo": 1}"#).is_err());
    }
}
