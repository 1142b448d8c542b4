//! End-to-end sentence segmentation.
//!
//! Each input line is one sentence. The pipeline builds a connection matrix
//! with the configured recipe, takes its Laplacian spectrum, picks the
//! cluster count from the eigenvalue threshold, clusters the embedded rows
//! and cuts the sentence wherever neighbouring characters disagree.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{build_w_ehr, build_w_lexicon, build_w_trainwords, ConnectionMatrix, EhrParams, GraphError, Lexicon, WordStats};
use crate::ngram::NGramModel;
use crate::spectral::{
    build_laplacian, choose_k, eigh_symmetric, kmeans_cluster, spectral_embed, ClusterLabels, EigenDecomposition,
    KMeansConfig, LaplacianForm, SpectralEmbedding, SpectralError,
};

pub const EHR_EIG_CUT: f64 = 0.15;
pub const LEXICON_EIG_CUT: f64 = 0.00035;
pub const TRAIN_WORDS_EIG_CUT: f64 = 0.001;

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("{labels} labels for a sentence of {chars} characters")]
    LengthMismatch { labels: usize, chars: usize },
    #[error("eig_cut must be positive, got {0}")]
    BadEigCut(f64),
}

/// Ordered words whose concatenation is the segmented text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segmentation {
    words: Vec<String>,
}

impl Segmentation {
    /// Empty words are dropped.
    pub fn new<S: Into<String>>(words: impl IntoIterator<Item = S>) -> Self {
        Segmentation {
            words: words.into_iter().map(Into::into).filter(|w: &String| !w.is_empty()).collect(),
        }
    }

    /// Parses a whitespace-delimited line.
    pub fn from_delimited(line: &str) -> Self {
        Segmentation::new(line.split_whitespace())
    }

    /// Words joined by a single ASCII space. Whitespace-only words are left
    /// out since they cannot survive a round trip through this format.
    pub fn to_delimited(&self) -> String {
        self.words
            .iter()
            .filter(|w| !w.chars().all(char::is_whitespace))
            .map(String::as_str)
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn text(&self) -> String {
        self.words.concat()
    }

    /// Character spans `(start, end)` of every word, end exclusive.
    pub fn spans(&self) -> Vec<(usize, usize)> {
        let mut pos = 0;
        self.words
            .iter()
            .map(|w| {
                let start = pos;
                pos += w.chars().count();
                (start, pos)
            })
            .collect()
    }
}

/// Splits `s` wherever consecutive labels differ, so a cluster that covers
/// separate runs yields one word per run.
pub fn labels_to_words(s: &str, labels: &ClusterLabels) -> Result<Segmentation, SegmentError> {
    let chars: Vec<char> = s.chars().collect();
    if chars.len() != labels.labels.len() {
        return Err(SegmentError::LengthMismatch {
            labels: labels.labels.len(),
            chars: chars.len(),
        });
    }
    let mut words = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if i > 0 && labels.labels[i] != labels.labels[i - 1] {
            words.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    if !current.is_empty() {
        words.push(current);
    }
    Ok(Segmentation { words })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Recipe {
    Ehr(EhrParams),
    Lexicon(Lexicon),
    TrainWords(WordStats),
}

impl Recipe {
    pub fn build(&self, s: &str, m: &NGramModel) -> Result<ConnectionMatrix, GraphError> {
        match self {
            Recipe::Ehr(p) => build_w_ehr(s, m, p),
            Recipe::Lexicon(l) => build_w_lexicon(s, m, l),
            Recipe::TrainWords(w) => build_w_trainwords(s, m, w),
        }
    }

    pub fn default_form(&self) -> LaplacianForm {
        match self {
            Recipe::Ehr(_) => LaplacianForm::Unnormalized,
            Recipe::Lexicon(_) | Recipe::TrainWords(_) => LaplacianForm::SymmetricNormalized,
        }
    }

    pub fn default_eig_cut(&self) -> f64 {
        match self {
            Recipe::Ehr(_) => EHR_EIG_CUT,
            Recipe::Lexicon(_) => LEXICON_EIG_CUT,
            Recipe::TrainWords(_) => TRAIN_WORDS_EIG_CUT,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmenterConfig {
    pub recipe: Recipe,
    pub form: LaplacianForm,
    pub eig_cut: f64,
    pub kmeans: KMeansConfig,
    pub postprocess: bool,
}

impl SegmenterConfig {
    /// Laplacian form and threshold default to the recipe's own.
    pub fn for_recipe(recipe: Recipe) -> Self {
        SegmenterConfig {
            form: recipe.default_form(),
            eig_cut: recipe.default_eig_cut(),
            recipe,
            kmeans: KMeansConfig::default(),
            postprocess: true,
        }
    }

    pub fn ehr() -> Self {
        Self::for_recipe(Recipe::Ehr(EhrParams::default()))
    }

    pub fn with_eig_cut(mut self, eig_cut: f64) -> Self {
        self.eig_cut = eig_cut;
        self
    }
}

/// How the number of clusters is decided.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterCount {
    /// Count eigenvalues at or below the threshold.
    EigCut(f64),
    Fixed(usize),
}

/// Everything computed while partitioning one sentence graph.
#[derive(Debug, Clone)]
pub struct SpectralPartition {
    pub eigen: EigenDecomposition,
    pub embedding: SpectralEmbedding,
    pub labels: ClusterLabels,
    pub k: usize,
}

/// Laplacian, eigendecomposition, embedding and k-means on one matrix.
pub fn spectral_partition(
    w: &ConnectionMatrix,
    form: LaplacianForm,
    count: ClusterCount,
    kmeans: &KMeansConfig,
) -> Result<SpectralPartition, SegmentError> {
    let l = build_laplacian(w, form)?;
    let eigen = eigh_symmetric(&l)?;
    let k = match count {
        ClusterCount::EigCut(cut) => {
            if !(cut > 0.0) {
                return Err(SegmentError::BadEigCut(cut));
            }
            choose_k(eigen.values(), cut)
        }
        ClusterCount::Fixed(k) => k,
    };
    let embedding = spectral_embed(&eigen, k, form)?;
    let labels = kmeans_cluster(&embedding, k, kmeans)?;
    Ok(SpectralPartition { eigen, embedding, labels, k })
}

/// Result of [`analyze_sentence`].
#[derive(Debug, Clone)]
pub struct SentenceAnalysis {
    pub segmentation: Segmentation,
    pub matrix: ConnectionMatrix,
    pub partition: SpectralPartition,
}

/// Segments `s` and keeps the intermediate matrix and spectrum.
pub fn analyze_sentence(s: &str, m: &NGramModel, cfg: &SegmenterConfig) -> Result<SentenceAnalysis, SegmentError> {
    let matrix = cfg.recipe.build(s, m)?;
    let partition = spectral_partition(&matrix, cfg.form, ClusterCount::EigCut(cfg.eig_cut), &cfg.kmeans)?;
    let mut segmentation = labels_to_words(s, &partition.labels)?;
    if cfg.postprocess {
        segmentation = postprocess_merge(&segmentation);
    }
    Ok(SentenceAnalysis {
        segmentation,
        matrix,
        partition,
    })
}

pub fn segment_sentence(s: &str, m: &NGramModel, cfg: &SegmenterConfig) -> Result<Segmentation, SegmentError> {
    analyze_sentence(s, m, cfg).map(|a| a.segmentation)
}

const UNIT_CHARS: &[char] = &['年', '月', '日', '时', '分', '秒', '%', '％'];

fn is_digit_word(w: &str) -> bool {
    !w.is_empty() && w.chars().all(|c| c.is_ascii_digit() || ('０'..='９').contains(&c))
}

fn is_unit_word(w: &str) -> bool {
    let mut cs = w.chars();
    matches!((cs.next(), cs.next()), (Some(c), None) if UNIT_CHARS.contains(&c))
}

/// Glues runs of digit words together and attaches a following single date
/// or percent unit.
pub fn postprocess_merge(seg: &Segmentation) -> Segmentation {
    let mut out: Vec<String> = Vec::with_capacity(seg.words.len());
    for w in &seg.words {
        match out.last_mut() {
            Some(prev) if is_digit_word(prev) && (is_digit_word(w) || is_unit_word(w)) => prev.push_str(w),
            _ => out.push(w.clone()),
        }
    }
    Segmentation { words: out }
}

/// Per-line failure from [`segment_document`]. Lines are 1-based.
#[derive(Debug, Error)]
#[error("line {line}: {source}")]
pub struct LineError {
    pub line: usize,
    #[source]
    pub source: SegmentError,
}

/// Segments every line independently, in parallel, preserving order.
/// Empty lines give empty segmentations.
pub fn segment_document<S: AsRef<str> + Sync>(
    lines: &[S],
    m: &NGramModel,
    cfg: &SegmenterConfig,
) -> Vec<Result<Segmentation, LineError>> {
    lines
        .par_iter()
        .enumerate()
        .map(|(i, l)| {
            let l = l.as_ref();
            if l.is_empty() {
                return Ok(Segmentation::default());
            }
            segment_sentence(l, m, cfg).map_err(|source| LineError { line: i + 1, source })
        })
        .collect()
}
