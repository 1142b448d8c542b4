//! Unsupervised Chinese word segmentation by spectral graph partitioning.
//!
//! A sentence is a graph over its characters. Edge weights come from
//! character n-gram statistics ([`ngram`]) shaped by one of three recipes
//! ([`graph`]). The Laplacian spectrum of that graph ([`spectral`]) tells how
//! many words to cut the sentence into and which characters belong together;
//! [`segment`] runs the whole pipeline and [`eval`] scores the output.
//!
//! ```
//! use segspectral::{NGramModel, SegmenterConfig, segment_sentence};
//!
//! let model = NGramModel::ingest_lines(&["天安门广场", "天安门", "广场"], "demo");
//! let seg = segment_sentence("天安门广场", &model, &SegmenterConfig::ehr()).unwrap();
//! assert_eq!(seg.text(), "天安门广场");
//! ```

pub mod config;
pub mod eval;
pub mod graph;
pub mod model_io;
pub mod ngram;
pub mod segment;
pub mod spectral;

pub use config::{Config, ConfigError, RecipeKind};
pub use eval::{generate_synthetic, score, score_corpus, EvalReport, SynthCorpus, SynthSpec};
pub use graph::{build_w_ehr, build_w_lexicon, build_w_trainwords, ConnectionMatrix, EhrParams, Lexicon, WordStats};
pub use model_io::{load_model, save_model, ModelIoError};
pub use ngram::{CharClass, NGramModel};
pub use segment::{
    analyze_sentence, labels_to_words, postprocess_merge, segment_document, segment_sentence, spectral_partition,
    ClusterCount, Recipe, SegmentError, SegmenterConfig, Segmentation,
};
pub use spectral::{LaplacianForm, SpectralError};
