//! Word-level scoring and synthetic corpora with known segmentation.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{DEFAULT_SINGLE_CHAR_SET, DEFAULT_WEAKEN_SET_1, DEFAULT_WEAKEN_SET_2};
use crate::ngram::is_chinese;
use crate::segment::Segmentation;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("gold and prediction cover different text: {gold:?} vs {pred:?}")]
    TextMismatch { gold: String, pred: String },
    #[error("line {line}: gold and prediction cover different text")]
    LineTextMismatch { line: usize },
    #[error("gold has {gold} lines but prediction has {pred}")]
    LineCount { gold: usize, pred: usize },
    #[error("need {needed} distinct characters but only {available} are available")]
    InventoryExhausted { needed: usize, available: usize },
    #[error("invalid synthetic spec: {0}")]
    BadSpec(String),
}

/// Recall, precision and balanced F over exact word spans.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalReport {
    pub gold_words: usize,
    pub pred_words: usize,
    pub correct: usize,
    pub recall: f64,
    pub precision: f64,
    pub f_score: f64,
}

fn safe_div(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl EvalReport {
    pub fn from_counts(gold_words: usize, pred_words: usize, correct: usize) -> Self {
        let recall = safe_div(correct, gold_words);
        let precision = safe_div(correct, pred_words);
        let f_score = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        EvalReport {
            gold_words,
            pred_words,
            correct,
            recall,
            precision,
            f_score,
        }
    }

    /// Adds raw counts and recomputes the ratios.
    pub fn merge(&self, other: &EvalReport) -> EvalReport {
        EvalReport::from_counts(
            self.gold_words + other.gold_words,
            self.pred_words + other.pred_words,
            self.correct + other.correct,
        )
    }

    /// `R=<r> P=<p> F=<f> gold=<g> pred=<p> correct=<c>`
    pub fn summary_line(&self) -> String {
        format!(
            "R={:.4} P={:.4} F={:.4} gold={} pred={} correct={}",
            self.recall, self.precision, self.f_score, self.gold_words, self.pred_words, self.correct
        )
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gold words:      {}", self.gold_words)?;
        writeln!(f, "predicted words: {}", self.pred_words)?;
        writeln!(f, "correct words:   {}", self.correct)?;
        writeln!(f, "recall:          {:.4}", self.recall)?;
        writeln!(f, "precision:       {:.4}", self.precision)?;
        write!(f, "F-score:         {:.4}", self.f_score)
    }
}

/// A predicted word is correct when its character span equals a gold span.
pub fn score(gold: &Segmentation, pred: &Segmentation) -> Result<EvalReport, EvalError> {
    let (gt, pt) = (gold.text(), pred.text());
    if gt != pt {
        return Err(EvalError::TextMismatch { gold: gt, pred: pt });
    }
    let gold_spans: HashSet<(usize, usize)> = gold.spans().into_iter().collect();
    let correct = pred.spans().iter().filter(|s| gold_spans.contains(s)).count();
    Ok(EvalReport::from_counts(gold.len(), pred.len(), correct))
}

/// Micro-averaged score over aligned lines.
pub fn score_corpus(gold: &[Segmentation], pred: &[Segmentation]) -> Result<EvalReport, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::LineCount {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    gold.iter()
        .zip(pred)
        .enumerate()
        .try_fold(EvalReport::default(), |acc, (i, (g, p))| {
            let r = score(g, p).map_err(|_| EvalError::LineTextMismatch { line: i + 1 })?;
            Ok(acc.merge(&r))
        })
}

/// Parameters for [`generate_synthetic`]. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub vocab_size: usize,
    pub word_len: (usize, usize),
    /// Words per sentence.
    pub sentence_len: (usize, usize),
    pub sentences: usize,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            vocab_size: 20,
            word_len: (2, 4),
            sentence_len: (3, 8),
            sentences: 500,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub vocab: Vec<String>,
    pub lines: Vec<String>,
    pub gold: Vec<Segmentation>,
    /// A one-word vocabulary: every sentence repeats the same word, so word
    /// boundaries carry no statistical signal.
    pub degenerate: bool,
}

/// Chinese characters usable for synthetic words. Characters from the
/// default weaken and single-character sets are held out so the generated
/// words are not damped by any recipe's defaults.
fn inventory() -> Vec<char> {
    let reserved: HashSet<char> = DEFAULT_WEAKEN_SET_1
        .chars()
        .chain(DEFAULT_WEAKEN_SET_2.chars())
        .chain(DEFAULT_SINGLE_CHAR_SET.chars())
        .collect();
    (0x3400u32..=0x9FFF)
        .filter_map(char::from_u32)
        .filter(|c| is_chinese(*c) && !reserved.contains(c))
        .collect()
}

/// Random sentences over a vocabulary whose words share no characters.
/// Inside a word every transition is deterministic; across words the next
/// word is uniform over the vocabulary.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<SynthCorpus, EvalError> {
    let (wmin, wmax) = spec.word_len;
    let (smin, smax) = spec.sentence_len;
    if spec.vocab_size == 0 || wmin == 0 || wmin > wmax || smin == 0 || smin > smax {
        return Err(EvalError::BadSpec(format!("{spec:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let lengths: Vec<usize> = (0..spec.vocab_size).map(|_| rng.random_range(wmin..=wmax)).collect();
    let needed: usize = lengths.iter().sum();
    let mut chars = inventory();
    if needed > chars.len() {
        return Err(EvalError::InventoryExhausted {
            needed,
            available: chars.len(),
        });
    }
    chars.shuffle(&mut rng);
    let mut pool = chars.into_iter();
    let vocab: Vec<String> = lengths.iter().map(|&l| pool.by_ref().take(l).collect()).collect();

    let mut lines = Vec::with_capacity(spec.sentences);
    let mut gold = Vec::with_capacity(spec.sentences);
    for _ in 0..spec.sentences {
        let len = rng.random_range(smin..=smax);
        let words: Vec<&str> = (0..len).map(|_| vocab[rng.random_range(0..vocab.len())].as_str()).collect();
        lines.push(words.concat());
        gold.push(Segmentation::new(words));
    }
    Ok(SynthCorpus {
        degenerate: spec.vocab_size == 1,
        vocab,
        lines,
        gold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn seg(s: &str) -> Segmentation {
        Segmentation::new(s.split('|'))
    }

    #[test]
    fn partial_match() {
        let r = score(&seg("AB|C"), &seg("A|B|C")).unwrap();
        assert_eq!((r.gold_words, r.pred_words, r.correct), (2, 3, 1));
        assert_abs_diff_eq!(r.recall, 0.5);
        assert_abs_diff_eq!(r.precision, 1.0 / 3.0);
        assert_abs_diff_eq!(r.f_score, 0.4, epsilon = 1e-15);
    }

    #[test]
    fn perfect_and_hopeless() {
        let r = score(&seg("天安门|广场"), &seg("天安门|广场")).unwrap();
        assert_eq!((r.recall, r.precision, r.f_score), (1.0, 1.0, 1.0));
        let r = score(&seg("天安门|广场"), &seg("天安门广场")).unwrap();
        assert_eq!(r.correct, 0);
        assert_eq!(r.f_score, 0.0);
        assert!(matches!(score(&seg("AB"), &seg("A|C")), Err(EvalError::TextMismatch { .. })));
    }

    #[test]
    fn corpus_micro_average() {
        let gold = [seg("AB|C"), seg("DE|F")];
        let pred = [seg("A|B|C"), seg("DE|F")];
        let r = score_corpus(&gold, &pred).unwrap();
        assert_eq!((r.gold_words, r.pred_words, r.correct), (4, 5, 3));
        assert_abs_diff_eq!(r.recall, 0.75);
        assert_abs_diff_eq!(r.precision, 0.6);
        assert_abs_diff_eq!(r.f_score, 2.0 / 3.0, epsilon = 1e-15);

        let r = score_corpus(&gold, &gold).unwrap();
        assert_eq!(r.f_score, 1.0);
        let r = score_corpus(&[], &[]).unwrap();
        assert_eq!(r, EvalReport::from_counts(0, 0, 0));
        assert_eq!(r.f_score, 0.0);
        assert!(matches!(score_corpus(&gold, &pred[..1]), Err(EvalError::LineCount { gold: 2, pred: 1 })));
        assert_eq!(
            score_corpus(&[seg("AB")], &[seg("AC")]),
            Err(EvalError::LineTextMismatch { line: 1 })
        );
    }

    #[test]
    fn reported_scores_are_balanced_f() {
        // R = 0.86, P = 0.84 rounds to F = 0.85
        let f = 2.0 * 0.86 * 0.84 / (0.86 + 0.84);
        assert_eq!(format!("{f:.2}"), "0.85");
    }

    #[test]
    fn summary_format() {
        let r = EvalReport::from_counts(4, 5, 3);
        assert_eq!(r.summary_line(), "R=0.7500 P=0.6000 F=0.6667 gold=4 pred=5 correct=3");
    }

    #[test]
    fn synthetic_vocab_is_disjoint() {
        let c = generate_synthetic(&SynthSpec::default()).unwrap();
        assert_eq!(c.vocab.len(), 20);
        let mut seen = HashSet::new();
        for w in &c.vocab {
            let n = w.chars().count();
            assert!((2..=4).contains(&n));
            for ch in w.chars() {
                assert!(seen.insert(ch), "character {ch} reused");
            }
        }
        assert_eq!(c.lines.len(), 500);
        for (l, g) in c.lines.iter().zip(&c.gold) {
            assert_eq!(&g.text(), l);
            assert!((3..=8).contains(&g.len()));
        }
        assert!(!c.degenerate);
        assert_eq!(c, generate_synthetic(&SynthSpec::default()).unwrap());
    }

    #[test]
    fn synthetic_edge_cases() {
        let one = generate_synthetic(&SynthSpec { vocab_size: 1, ..SynthSpec::default() }).unwrap();
        assert!(one.degenerate);
        assert!(one.gold.iter().all(|g| g.words().iter().all(|w| w == &one.vocab[0])));

        let single = generate_synthetic(&SynthSpec { sentence_len: (1, 1), ..SynthSpec::default() }).unwrap();
        assert!(single.gold.iter().all(|g| g.len() == 1));

        let huge = SynthSpec { vocab_size: 10_000, word_len: (4, 4), ..SynthSpec::default() };
        assert!(matches!(generate_synthetic(&huge), Err(EvalError::InventoryExhausted { .. })));
    }

    proptest! {
        #[test]
        fn self_score_is_perfect(words in prop::collection::vec("[a-z天安门]{1,4}", 1..10)) {
            let s = Segmentation::new(words);
            let r = score(&s, &s).unwrap();
            prop_assert_eq!((r.recall, r.precision, r.f_score), (1.0, 1.0, 1.0));
        }

        #[test]
        fn micro_totals_are_sums(
            lines in prop::collection::vec(
                (prop::collection::vec(1usize..4, 1..6), prop::collection::vec(1usize..4, 1..6)),
                0..8,
            )
        ) {
            // build gold/pred pairs over the same text by cutting "x"*len at different lengths
            let mut gold = Vec::new();
            let mut pred = Vec::new();
            for (g, p) in lines {
                let total: usize = g.iter().sum();
                let mut pw = Vec::new();
                let mut left = total;
                for l in p {
                    if left == 0 { break; }
                    let l = l.min(left);
                    pw.push("x".repeat(l));
                    left -= l;
                }
                if left > 0 { pw.push("x".repeat(left)); }
                gold.push(Segmentation::new(g.iter().map(|&l| "x".repeat(l))));
                pred.push(Segmentation::new(pw));
            }
            let r = score_corpus(&gold, &pred).unwrap();
            let (mut g, mut p, mut c) = (0, 0, 0);
            for (a, b) in gold.iter().zip(&pred) {
                let s = score(a, b).unwrap();
                g += s.gold_words;
                p += s.pred_words;
                c += s.correct;
            }
            prop_assert_eq!((r.gold_words, r.pred_words, r.correct), (g, p, c));
            prop_assert!(r.correct <= r.gold_words.min(r.pred_words));
        }
    }
}
