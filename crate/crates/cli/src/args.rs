use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use segspectral::{LaplacianForm, RecipeKind};

#[derive(Debug, Parser)]
#[command(name = "segspectral", version, about = "Unsupervised Chinese word segmentation by spectral graph partitioning")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count character n-grams in a corpus and write a model file.
    Train(TrainArgs),
    /// Segment text, one sentence per line, into space-delimited words.
    Segment(SegmentArgs),
    /// Score a predicted segmentation against a gold one.
    Eval(EvalArgs),
    /// Segment under several eigenvalue thresholds and tabulate the results.
    Sweep(SweepArgs),
    /// Generate a synthetic corpus with known word boundaries.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Training corpus, one sentence per line.
    pub corpus: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    pub model: PathBuf,
    /// Treat the corpus as space-delimited words and also write their counts
    /// to this file (for the train-words recipe).
    #[arg(long, value_name = "PATH")]
    pub write_word_stats: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Unnorm,
    Sym,
}

impl From<FormArg> for LaplacianForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Unnorm => LaplacianForm::Unnormalized,
            FormArg::Sym => LaplacianForm::SymmetricNormalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecipeArg {
    Ehr,
    Lexicon,
    TrainWords,
}

impl From<RecipeArg> for RecipeKind {
    fn from(r: RecipeArg) -> Self {
        match r {
            RecipeArg::Ehr => RecipeKind::Ehr,
            RecipeArg::Lexicon => RecipeKind::Lexicon,
            RecipeArg::TrainWords => RecipeKind::TrainWords,
        }
    }
}

/// Segmenter settings shared by `segment` and `sweep`. Flags override the
/// config file.
#[derive(Debug, Args)]
pub struct SegmenterArgs {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// JSON config file.
    #[arg(long, env = "SEGSPECTRAL_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub recipe: Option<RecipeArg>,
    #[arg(long)]
    pub form: Option<FormArg>,
    /// Lexicon file, `word<TAB>rank` per line.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Word counts, `word<TAB>count` per line.
    #[arg(long)]
    pub word_stats: Option<PathBuf>,
    /// Seed for k-means initialization and jitter.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip the digit and date merging step.
    #[arg(long)]
    pub no_postprocess: bool,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input text; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub seg: SegmenterArgs,
    /// Eigenvalue threshold that decides the number of words.
    #[arg(long)]
    pub eig_cut: Option<f64>,
    /// Print each sentence's eigenvalues and embedding to standard error.
    #[arg(long)]
    pub dump_eigen: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub gold: PathBuf,
    pub pred: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Input text; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub seg: SegmenterArgs,
    /// Comma-separated eigenvalue thresholds.
    #[arg(long = "eig-cut", value_delimiter = ',', required = true)]
    pub eig_cuts: Vec<f64>,
    /// Gold segmentation of the input; adds an F column.
    #[arg(long)]
    pub gold: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Where to write the unsegmented sentences.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Where to write the gold segmentation.
    #[arg(long)]
    pub gold: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub vocab_size: usize,
    #[arg(long, default_value_t = 2)]
    pub min_word_len: usize,
    #[arg(long, default_value_t = 4)]
    pub max_word_len: usize,
    /// Fewest words per sentence.
    #[arg(long, default_value_t = 3)]
    pub min_words: usize,
    #[arg(long, default_value_t = 8)]
    pub max_words: usize,
    #[arg(long, default_value_t = 500)]
    pub sentences: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the vocabulary, one word per line.
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}
