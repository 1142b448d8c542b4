//! Flat JSON configuration.
//!
//! Every tunable constant of the three weight recipes, the clustering step
//! and the eigenvalue thresholds is a key here, defaulting to its reference
//! value. Unknown keys are rejected so a typo cannot silently fall back to a
//! default.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    EhrParams, GraphError, Lexicon, WordStats, DEFAULT_SINGLE_CHAR_SET, DEFAULT_WEAKEN_SET_1, DEFAULT_WEAKEN_SET_2,
};
use crate::segment::{Recipe, SegmenterConfig, EHR_EIG_CUT, LEXICON_EIG_CUT, TRAIN_WORDS_EIG_CUT};
use crate::spectral::{KMeansConfig, KMeansInit, LaplacianForm};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid value for {key}: {msg}")]
    Value { key: &'static str, msg: String },
    #[error("recipe {recipe} needs {key}")]
    MissingResource { recipe: &'static str, key: &'static str },
    #[error("cannot open {path}: {source}")]
    Resource {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeKind {
    Ehr,
    Lexicon,
    TrainWords,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub recipe: RecipeKind,
    /// Overrides the recipe's Laplacian form.
    pub form: Option<LaplacianForm>,
    /// Overrides the recipe's eigenvalue threshold.
    pub eig_cut: Option<f64>,
    pub eig_cut_ehr: f64,
    pub eig_cut_lexicon: f64,
    pub eig_cut_train_words: f64,

    pub weaken_set_1: String,
    pub weaken_set_2: String,
    pub factor_1: f64,
    pub factor_2: f64,

    pub lexicon: Option<PathBuf>,
    pub rank_threshold: u64,
    pub single_char_set: String,
    pub lexicon_boost: f64,
    pub rank_scale: f64,
    pub lexicon_damp_floor: f64,

    pub word_stats: Option<PathBuf>,
    pub train_words_boost: f64,
    pub damp_divisor: f64,
    pub train_words_damp_floor: f64,

    pub kmeans_init: KMeansInit,
    pub jitter_sd: f64,
    pub kmeans_max_iter: usize,
    pub seed: u64,
    pub postprocess: bool,
}

impl Default for Config {
    fn default() -> Self {
        let km = KMeansConfig::default();
        Config {
            recipe: RecipeKind::Ehr,
            form: None,
            eig_cut: None,
            eig_cut_ehr: EHR_EIG_CUT,
            eig_cut_lexicon: LEXICON_EIG_CUT,
            eig_cut_train_words: TRAIN_WORDS_EIG_CUT,
            weaken_set_1: DEFAULT_WEAKEN_SET_1.into(),
            weaken_set_2: DEFAULT_WEAKEN_SET_2.into(),
            factor_1: 4.0,
            factor_2: 80.0,
            lexicon: None,
            rank_threshold: 25000,
            single_char_set: DEFAULT_SINGLE_CHAR_SET.into(),
            lexicon_boost: 20.0,
            rank_scale: 1e6,
            lexicon_damp_floor: 20.0,
            word_stats: None,
            train_words_boost: 20.0,
            damp_divisor: 250.0,
            train_words_damp_floor: 1.0,
            kmeans_init: km.init,
            jitter_sd: km.jitter_sd,
            kmeans_max_iter: km.max_iter,
            seed: km.seed,
            postprocess: true,
        }
    }
}

fn positive(key: &'static str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Value { key, msg: format!("must be positive, got {v}") })
    }
}

fn at_least_one(key: &'static str, v: f64) -> Result<(), ConfigError> {
    if v >= 1.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Value { key, msg: format!("must be >= 1, got {v}") })
    }
}

impl Config {
    pub fn from_json(text: &str) -> Result<Config, ConfigError> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Config::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(c) = self.eig_cut {
            positive("eig_cut", c)?;
        }
        positive("eig_cut_ehr", self.eig_cut_ehr)?;
        positive("eig_cut_lexicon", self.eig_cut_lexicon)?;
        positive("eig_cut_train_words", self.eig_cut_train_words)?;
        at_least_one("factor_1", self.factor_1)?;
        at_least_one("factor_2", self.factor_2)?;
        positive("lexicon_boost", self.lexicon_boost)?;
        positive("rank_scale", self.rank_scale)?;
        positive("lexicon_damp_floor", self.lexicon_damp_floor)?;
        positive("train_words_boost", self.train_words_boost)?;
        positive("damp_divisor", self.damp_divisor)?;
        positive("train_words_damp_floor", self.train_words_damp_floor)?;
        if !(self.jitter_sd >= 0.0 && self.jitter_sd.is_finite()) {
            return Err(ConfigError::Value {
                key: "jitter_sd",
                msg: format!("must be nonnegative, got {}", self.jitter_sd),
            });
        }
        Ok(())
    }

    pub fn ehr_params(&self) -> EhrParams {
        EhrParams {
            weaken_set_1: self.weaken_set_1.chars().collect(),
            weaken_set_2: self.weaken_set_2.chars().collect(),
            factor_1: self.factor_1,
            factor_2: self.factor_2,
        }
    }

    pub fn kmeans(&self) -> KMeansConfig {
        KMeansConfig {
            init: self.kmeans_init,
            jitter_sd: self.jitter_sd,
            max_iter: self.kmeans_max_iter,
            seed: self.seed,
        }
    }

    fn open(path: &Path) -> Result<BufReader<File>, ConfigError> {
        File::open(path).map(BufReader::new).map_err(|source| ConfigError::Resource {
            path: path.to_owned(),
            source,
        })
    }

    /// Resolves the recipe, loading lexicon or word-count files as needed.
    pub fn build_recipe(&self) -> Result<Recipe, ConfigError> {
        Ok(match self.recipe {
            RecipeKind::Ehr => Recipe::Ehr(self.ehr_params()),
            RecipeKind::Lexicon => {
                let path = self.lexicon.as_deref().ok_or(ConfigError::MissingResource {
                    recipe: "lexicon",
                    key: "lexicon",
                })?;
                let mut lex = Lexicon::from_reader(Self::open(path)?, &path.display().to_string(), self.rank_threshold)?;
                lex.single_char_set = self.single_char_set.chars().collect();
                lex.boost = self.lexicon_boost;
                lex.rank_scale = self.rank_scale;
                lex.damp_floor = self.lexicon_damp_floor;
                Recipe::Lexicon(lex)
            }
            RecipeKind::TrainWords => {
                let path = self.word_stats.as_deref().ok_or(ConfigError::MissingResource {
                    recipe: "train_words",
                    key: "word_stats",
                })?;
                let mut ws = WordStats::from_reader(Self::open(path)?, &path.display().to_string())?;
                ws.boost = self.train_words_boost;
                ws.damp_divisor = self.damp_divisor;
                ws.damp_floor = self.train_words_damp_floor;
                Recipe::TrainWords(ws)
            }
        })
    }

    pub fn resolved_eig_cut(&self) -> f64 {
        self.eig_cut.unwrap_or(match self.recipe {
            RecipeKind::Ehr => self.eig_cut_ehr,
            RecipeKind::Lexicon => self.eig_cut_lexicon,
            RecipeKind::TrainWords => self.eig_cut_train_words,
        })
    }

    pub fn build_segmenter(&self) -> Result<SegmenterConfig, ConfigError> {
        self.validate()?;
        let recipe = self.build_recipe()?;
        Ok(SegmenterConfig {
            form: self.form.unwrap_or_else(|| recipe.default_form()),
            eig_cut: self.resolved_eig_cut(),
            recipe,
            kmeans: self.kmeans(),
            postprocess: self.postprocess,
        })
    }
}
