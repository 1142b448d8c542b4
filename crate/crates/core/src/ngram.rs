//! Character n-gram statistics.
//!
//! Counts unigrams, bigrams and trigrams of Chinese characters over a
//! line-structured corpus and exposes the maximum-likelihood transition
//! probabilities and standardized log-counts that drive edge weights.
//!
//! Only characters of class [`CharClass::Chinese`] are counted. Any n-gram
//! touching another character is dropped at ingestion time, so every query
//! involving such a character evaluates to zero.

use std::collections::HashMap;
use std::io::BufRead;

use rayon::prelude::*;
use thiserror::Error;

/// Coarse character classification used by every weight recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharClass {
    Chinese,
    Other,
}

impl CharClass {
    /// CJK Unified Ideographs (U+4E00..=U+9FFF) and Extension A
    /// (U+3400..=U+4DBF) are Chinese, everything else is `Other`.
    pub fn of(c: char) -> CharClass {
        match c as u32 {
            0x4E00..=0x9FFF | 0x3400..=0x4DBF => CharClass::Chinese,
            _ => CharClass::Other,
        }
    }
}

#[inline]
pub fn is_chinese(c: char) -> bool {
    CharClass::of(c) == CharClass::Chinese
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid UTF-8 at byte offset {offset}")]
    InvalidEncoding { offset: u64 },
    #[error("i/o error while reading corpus: {0}")]
    Io(#[from] std::io::Error),
}

/// Corpus provenance carried along with the counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelMeta {
    pub corpus_id: String,
    pub lines: u64,
}

/// Character uni/bi/trigram counts plus standardized-log-count scales.
///
/// Absent keys have count zero; stored counts are always at least one.
/// The model is immutable once built and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    pub(crate) uni: HashMap<char, u64>,
    pub(crate) bi: HashMap<[char; 2], u64>,
    pub(crate) tri: HashMap<[char; 3], u64>,
    pub(crate) total_uni: u64,
    pub(crate) log_sd_bi: f64,
    pub(crate) log_sd_tri: f64,
    pub(crate) meta: ModelMeta,
}

impl Default for NGramModel {
    fn default() -> Self {
        NGramModel {
            uni: HashMap::new(),
            bi: HashMap::new(),
            tri: HashMap::new(),
            total_uni: 0,
            log_sd_bi: 1.0,
            log_sd_tri: 1.0,
            meta: ModelMeta::default(),
        }
    }
}

/// Raw additive counts. Shards of a corpus can be tallied independently and
/// merged before finalizing into an [`NGramModel`].
#[derive(Debug, Clone, Default)]
pub struct NGramCounts {
    uni: HashMap<char, u64>,
    bi: HashMap<[char; 2], u64>,
    tri: HashMap<[char; 3], u64>,
    lines: u64,
}

impl NGramCounts {
    pub fn new() -> Self {
        Self::default()
    }

    /// Tally one line. No n-gram spans a line boundary.
    pub fn add_line(&mut self, line: &str) {
        self.lines += 1;
        let chars: Vec<char> = line.chars().collect();
        // Runs of Chinese characters are the only places n-grams can live.
        for run in chars.split(|c| !is_chinese(*c)) {
            for &c in run {
                *self.uni.entry(c).or_insert(0) += 1;
            }
            for w in run.windows(2) {
                *self.bi.entry([w[0], w[1]]).or_insert(0) += 1;
            }
            for w in run.windows(3) {
                *self.tri.entry([w[0], w[1], w[2]]).or_insert(0) += 1;
            }
        }
    }

    pub fn merge(mut self, other: NGramCounts) -> NGramCounts {
        for (k, v) in other.uni {
            *self.uni.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.bi {
            *self.bi.entry(k).or_insert(0) += v;
        }
        for (k, v) in other.tri {
            *self.tri.entry(k).or_insert(0) += v;
        }
        self.lines += other.lines;
        self
    }

    pub fn finish(self, corpus_id: impl Into<String>) -> NGramModel {
        NGramModel::from_parts(
            self.uni,
            self.bi,
            self.tri,
            ModelMeta {
                corpus_id: corpus_id.into(),
                lines: self.lines,
            },
        )
    }
}

/// Population standard deviation of `ln(count)` over distinct keys.
/// Falls back to 1 when fewer than two distinct counts exist.
pub(crate) fn log_count_sd<'a>(counts: impl Iterator<Item = &'a u64>) -> f64 {
    // sorted so the floating-point sums do not depend on hash order
    let mut sorted: Vec<u64> = counts.copied().collect();
    sorted.sort_unstable();
    let logs: Vec<f64> = sorted.into_iter().map(|c| (c as f64).ln()).collect();
    if logs.len() < 2 {
        return 1.0;
    }
    let n = logs.len() as f64;
    let mean = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd > 0.0 && sd.is_finite() {
        sd
    } else {
        1.0
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if num == 0 || den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl NGramModel {
    /// Builds a model from counts, recomputing totals and log-count scales.
    /// Zero counts are discarded.
    pub fn from_parts(
        mut uni: HashMap<char, u64>,
        mut bi: HashMap<[char; 2], u64>,
        mut tri: HashMap<[char; 3], u64>,
        meta: ModelMeta,
    ) -> NGramModel {
        uni.retain(|_, v| *v > 0);
        bi.retain(|_, v| *v > 0);
        tri.retain(|_, v| *v > 0);
        let total_uni = uni.values().sum();
        let log_sd_bi = log_count_sd(bi.values());
        let log_sd_tri = log_count_sd(tri.values());
        NGramModel {
            uni,
            bi,
            tri,
            total_uni,
            log_sd_bi,
            log_sd_tri,
            meta,
        }
    }

    /// Ingest an in-memory corpus. Lines are tallied in parallel shards and
    /// merged; the result does not depend on the sharding.
    pub fn ingest_lines<S: AsRef<str> + Sync>(lines: &[S], corpus_id: &str) -> NGramModel {
        lines
            .par_iter()
            .fold(NGramCounts::new, |mut acc, l| {
                acc.add_line(l.as_ref());
                acc
            })
            .reduce(NGramCounts::new, NGramCounts::merge)
            .finish(corpus_id)
    }

    /// Stream a UTF-8 corpus from a reader, one record per line.
    ///
    /// Both `\n` and `\r\n` terminators are accepted. Invalid UTF-8 fails
    /// with the absolute byte offset of the first bad byte.
    pub fn ingest_reader<R: BufRead>(mut reader: R, corpus_id: &str) -> Result<NGramModel, IngestError> {
        let mut counts = NGramCounts::new();
        let mut buf = Vec::new();
        let mut offset: u64 = 0;
        loop {
            buf.clear();
            let read = reader.read_until(b'\n', &mut buf)?;
            if read == 0 {
                break;
            }
            let line = std::str::from_utf8(&buf).map_err(|e| IngestError::InvalidEncoding {
                offset: offset + e.valid_up_to() as u64,
            })?;
            counts.add_line(line.trim_end_matches(['\n', '\r']));
            offset += read as u64;
        }
        Ok(counts.finish(corpus_id))
    }

    pub fn uni_count(&self, a: char) -> u64 {
        self.uni.get(&a).copied().unwrap_or(0)
    }

    pub fn bi_count(&self, a: char, b: char) -> u64 {
        self.bi.get(&[a, b]).copied().unwrap_or(0)
    }

    pub fn tri_count(&self, a: char, b: char, c: char) -> u64 {
        self.tri.get(&[a, b, c]).copied().unwrap_or(0)
    }

    pub fn total_uni(&self) -> u64 {
        self.total_uni
    }

    pub fn log_sd_bi(&self) -> f64 {
        self.log_sd_bi
    }

    pub fn log_sd_tri(&self) -> f64 {
        self.log_sd_tri
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn unigrams(&self) -> &HashMap<char, u64> {
        &self.uni
    }

    pub fn bigrams(&self) -> &HashMap<[char; 2], u64> {
        &self.bi
    }

    pub fn trigrams(&self) -> &HashMap<[char; 3], u64> {
        &self.tri
    }

    pub fn is_empty(&self) -> bool {
        self.uni.is_empty()
    }

    /// P(b | a) = count(ab) / count(a).
    pub fn p_next_uni(&self, a: char, b: char) -> f64 {
        if !(is_chinese(a) && is_chinese(b)) {
            return 0.0;
        }
        ratio(self.bi_count(a, b), self.uni_count(a))
    }

    /// P(c | a, b) = count(abc) / count(ab).
    pub fn p_next_bi(&self, a: char, b: char, c: char) -> f64 {
        if !(is_chinese(a) && is_chinese(b) && is_chinese(c)) {
            return 0.0;
        }
        ratio(self.tri_count(a, b, c), self.bi_count(a, b))
    }

    /// P(a | b, c) = count(abc) / count(bc).
    pub fn p_prev_bi(&self, a: char, b: char, c: char) -> f64 {
        if !(is_chinese(a) && is_chinese(b) && is_chinese(c)) {
            return 0.0;
        }
        ratio(self.tri_count(a, b, c), self.bi_count(b, c))
    }

    /// P(b, c | a) = count(abc) / count(a).
    pub fn p_next_two(&self, a: char, b: char, c: char) -> f64 {
        if !(is_chinese(a) && is_chinese(b) && is_chinese(c)) {
            return 0.0;
        }
        ratio(self.tri_count(a, b, c), self.uni_count(a))
    }

    /// ln(count(ab)) / sd, zero for absent bigrams.
    pub fn sd_count_bi(&self, a: char, b: char) -> f64 {
        match self.bi_count(a, b) {
            0 => 0.0,
            c => (c as f64).ln() / self.log_sd_bi,
        }
    }

    pub fn sd_count_tri(&self, a: char, b: char, c: char) -> f64 {
        match self.tri_count(a, b, c) {
            0 => 0.0,
            n => (n as f64).ln() / self.log_sd_tri,
        }
    }
}
