//! Per-sentence connection-strength matrices.
//!
//! A sentence of `n` characters becomes a symmetric, nonnegative `n x n`
//! matrix of bandwidth two. Three recipes are provided: transition
//! probabilities with weaken sets ([`build_w_ehr`]), the same statistics
//! reshaped by a ranked lexicon ([`build_w_lexicon`]), and by word counts
//! from a segmented training corpus ([`build_w_trainwords`]).

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use thiserror::Error;

use crate::ngram::NGramModel;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("cannot build a connection matrix for an empty sentence")]
    EmptySentence,
    #[error("band lengths inconsistent with n = {n}")]
    BandShape { n: usize },
    #[error("entry {what}[{index}] = {value} is negative or not finite")]
    BadEntry {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("{path}:{line}: {msg}")]
    Resource { path: String, line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Symmetric nonnegative band matrix with at most two superdiagonals.
///
/// `off1[i]` is the weight between characters `i` and `i + 1`, `off2[i]`
/// between `i` and `i + 2`. The lower triangle is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrix {
    diag: Vec<f64>,
    off1: Vec<f64>,
    off2: Vec<f64>,
}

impl ConnectionMatrix {
    /// Validates band lengths and entries. Diagonal entries may be any
    /// nonnegative value here; builders always produce a unit diagonal.
    pub fn from_bands(diag: Vec<f64>, off1: Vec<f64>, off2: Vec<f64>) -> Result<Self, GraphError> {
        let n = diag.len();
        if n == 0 {
            return Err(GraphError::EmptySentence);
        }
        if off1.len() != n - 1 || off2.len() != n.saturating_sub(2) {
            return Err(GraphError::BandShape { n });
        }
        for (what, band) in [("diag", &diag), ("off1", &off1), ("off2", &off2)] {
            if let Some((index, &value)) = band.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
                return Err(GraphError::BadEntry { what, index, value });
            }
        }
        Ok(ConnectionMatrix { diag, off1, off2 })
    }

    /// Identity on `n` nodes: no coupling at all.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity of size 0");
        ConnectionMatrix {
            diag: vec![1.0; n],
            off1: vec![0.0; n - 1],
            off2: vec![0.0; n.saturating_sub(2)],
        }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off1(&self) -> &[f64] {
        &self.off1
    }

    pub fn off2(&self) -> &[f64] {
        &self.off2
    }

    /// Entry `(i, j)` of the full symmetric matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        match hi - lo {
            0 => self.diag[lo],
            1 => self.off1[lo],
            2 => self.off2[lo],
            _ => 0.0,
        }
    }

    /// Row sums `d_i = sum_j w_ij`, self-loop included.
    pub fn degrees(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(2);
                let hi = (i + 2).min(n - 1);
                (lo..=hi).map(|j| self.get(i, j)).sum()
            })
            .collect()
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> ConnectionMatrix {
        let s = |v: &Vec<f64>| v.iter().map(|x| x * c).collect();
        ConnectionMatrix {
            diag: s(&self.diag),
            off1: s(&self.off1),
            off2: s(&self.off2),
        }
    }
}

pub const DEFAULT_WEAKEN_SET_1: &str = "和是在对中与将要地以为有";
pub const DEFAULT_WEAKEN_SET_2: &str = "了的无及等行不";
pub const DEFAULT_SINGLE_CHAR_SET: &str = "的在地和向是上中下不有对并了与将还但就要以为也而又于";

/// Weaken sets and divisors for the dictionary-free recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct EhrParams {
    pub weaken_set_1: HashSet<char>,
    pub weaken_set_2: HashSet<char>,
    pub factor_1: f64,
    pub factor_2: f64,
}

impl Default for EhrParams {
    fn default() -> Self {
        EhrParams {
            weaken_set_1: DEFAULT_WEAKEN_SET_1.chars().collect(),
            weaken_set_2: DEFAULT_WEAKEN_SET_2.chars().collect(),
            factor_1: 4.0,
            factor_2: 80.0,
        }
    }
}

/// Collects every contiguous character pair occurring inside `words`.
fn inner_bigrams<'a>(words: impl Iterator<Item = &'a str>) -> HashSet<[char; 2]> {
    let mut set = HashSet::new();
    for w in words {
        let cs: Vec<char> = w.chars().collect();
        for p in cs.windows(2) {
            set.insert([p[0], p[1]]);
        }
    }
    set
}

fn parse_tab_file<R: BufRead>(reader: R, path: &str) -> Result<Vec<(String, u64)>, GraphError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| GraphError::Resource {
            path: path.to_owned(),
            line: idx + 1,
            msg: msg.to_owned(),
        };
        let (word, num) = line.split_once('\t').ok_or_else(|| err("expected word<TAB>number"))?;
        if word.is_empty() {
            return Err(err("empty word"));
        }
        let num: u64 = num.trim().parse().map_err(|_| err("number is not a positive integer"))?;
        if num == 0 {
            return Err(err("number must be at least 1"));
        }
        out.push((word.to_owned(), num));
    }
    Ok(out)
}

/// Ranked vocabulary for the dictionary-guided recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    entries: HashMap<String, u64>,
    rank_threshold: u64,
    pub single_char_set: HashSet<char>,
    pub boost: f64,
    /// Numerator of the log-rank damping term, `ln(rank_scale / rank)`.
    pub rank_scale: f64,
    /// Lower bound of the damping divisor.
    pub damp_floor: f64,
    boosted: HashSet<[char; 2]>,
}

impl Lexicon {
    pub fn new(entries: HashMap<String, u64>, rank_threshold: u64) -> Self {
        let boosted = inner_bigrams(
            entries
                .iter()
                .filter(|(_, &r)| r < rank_threshold)
                .map(|(w, _)| w.as_str()),
        );
        Lexicon {
            entries,
            rank_threshold,
            single_char_set: DEFAULT_SINGLE_CHAR_SET.chars().collect(),
            boost: 20.0,
            rank_scale: 1e6,
            damp_floor: 20.0,
            boosted,
        }
    }

    /// Reads `word<TAB>rank` lines.
    pub fn from_reader<R: BufRead>(reader: R, path: &str, rank_threshold: u64) -> Result<Self, GraphError> {
        let rows = parse_tab_file(reader, path)?;
        let mut entries = HashMap::with_capacity(rows.len());
        let mut seen = HashSet::new();
        for (i, (w, r)) in rows.into_iter().enumerate() {
            if !seen.insert(r) {
                return Err(GraphError::Resource {
                    path: path.to_owned(),
                    line: i + 1,
                    msg: format!("duplicate rank {r}"),
                });
            }
            entries.insert(w, r);
        }
        Ok(Lexicon::new(entries, rank_threshold))
    }

    pub fn rank(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    pub fn rank_threshold(&self) -> u64 {
        self.rank_threshold
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when `a b` occurs inside some word ranked below the threshold.
    pub fn boosts(&self, a: char, b: char) -> bool {
        self.boosted.contains(&[a, b])
    }

    /// `max(damp_floor, ln(rank_scale / rank(c)))`, or `damp_floor` when
    /// `c` is not a single-character lexicon entry.
    pub fn damp_divisor(&self, c: char) -> f64 {
        let mut buf = [0u8; 4];
        match self.rank(c.encode_utf8(&mut buf)) {
            Some(rank) => self.damp_floor.max((self.rank_scale / rank as f64).ln()),
            None => self.damp_floor,
        }
    }
}

/// Word frequencies from a pre-segmented training corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct WordStats {
    words: HashMap<String, u64>,
    pub boost: f64,
    pub damp_divisor: f64,
    pub damp_floor: f64,
    boosted: HashSet<[char; 2]>,
}

impl WordStats {
    pub fn new(words: HashMap<String, u64>) -> Self {
        let boosted = inner_bigrams(words.keys().map(String::as_str));
        WordStats {
            words,
            boost: 20.0,
            damp_divisor: 250.0,
            damp_floor: 1.0,
            boosted,
        }
    }

    /// Reads `word<TAB>count` lines.
    pub fn from_reader<R: BufRead>(reader: R, path: &str) -> Result<Self, GraphError> {
        let mut words = HashMap::new();
        for (w, c) in parse_tab_file(reader, path)? {
            *words.entry(w).or_insert(0) += c;
        }
        Ok(WordStats::new(words))
    }

    /// Counts words of a whitespace-delimited segmented corpus.
    pub fn from_segmented_lines<S: AsRef<str>>(lines: &[S]) -> Self {
        let mut words = HashMap::new();
        for l in lines {
            for w in l.as_ref().split_whitespace() {
                *words.entry(w.to_owned()).or_insert(0) += 1;
            }
        }
        WordStats::new(words)
    }

    pub fn count(&self, word: &str) -> u64 {
        self.words.get(word).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn boosts(&self, a: char, b: char) -> bool {
        self.boosted.contains(&[a, b])
    }

    /// `max(damp_floor, count(c) / damp_divisor)` if `c` occurs as a
    /// single-character word, otherwise `None`.
    pub fn single_char_divisor(&self, c: char) -> Option<f64> {
        let mut buf = [0u8; 4];
        match self.count(c.encode_utf8(&mut buf)) {
            0 => None,
            n => Some(self.damp_floor.max(n as f64 / self.damp_divisor)),
        }
    }
}

/// Max of the available transition probabilities times the standardized
/// bigram log-count, for every adjacent pair. Context terms that would read
/// outside the sentence are left out of the max.
fn adjacent_strength(s: &[char], m: &NGramModel) -> Vec<f64> {
    let n = s.len();
    (0..n.saturating_sub(1))
        .map(|i| {
            let (a, b) = (s[i], s[i + 1]);
            let mut p = m.p_next_uni(a, b);
            if i >= 1 {
                p = p.max(m.p_next_bi(s[i - 1], a, b));
            }
            if i + 2 < n {
                p = p.max(m.p_prev_bi(a, b, s[i + 2]));
            }
            p * m.sd_count_bi(a, b)
        })
        .collect()
}

fn chars_of(s: &str) -> Result<Vec<char>, GraphError> {
    let cs: Vec<char> = s.chars().collect();
    if cs.is_empty() {
        Err(GraphError::EmptySentence)
    } else {
        Ok(cs)
    }
}

/// Transition-probability weights with two weaken sets and second-neighbour
/// trigram edges.
pub fn build_w_ehr(s: &str, m: &NGramModel, p: &EhrParams) -> Result<ConnectionMatrix, GraphError> {
    let s = chars_of(s)?;
    let n = s.len();
    let mut off1 = adjacent_strength(&s, m);
    for (i, w) in off1.iter_mut().enumerate() {
        let (a, b) = (s[i], s[i + 1]);
        if p.weaken_set_1.contains(&a) || p.weaken_set_1.contains(&b) {
            *w /= p.factor_1;
        }
        if p.weaken_set_2.contains(&a) || p.weaken_set_2.contains(&b) {
            *w /= p.factor_2;
        }
    }
    let off2 = (0..n.saturating_sub(2))
        .map(|i| {
            let (a, b, c) = (s[i], s[i + 1], s[i + 2]);
            if [a, b, c].iter().any(|x| p.weaken_set_2.contains(x)) {
                0.0
            } else {
                m.p_next_two(a, b, c) * m.sd_count_tri(a, b, c)
            }
        })
        .collect();
    Ok(ConnectionMatrix {
        diag: vec![1.0; n],
        off1,
        off2,
    })
}

/// Adjacent-pair weights reshaped by a ranked lexicon; no second-neighbour
/// edges. A boosted pair is never damped.
pub fn build_w_lexicon(s: &str, m: &NGramModel, lex: &Lexicon) -> Result<ConnectionMatrix, GraphError> {
    let s = chars_of(s)?;
    let n = s.len();
    let mut off1 = adjacent_strength(&s, m);
    for (i, w) in off1.iter_mut().enumerate() {
        let (a, b) = (s[i], s[i + 1]);
        if lex.boosts(a, b) {
            *w *= lex.boost;
        } else {
            let divisor = [a, b]
                .iter()
                .filter(|c| lex.single_char_set.contains(c))
                .map(|&c| lex.damp_divisor(c))
                .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |x| x.max(d))));
            if let Some(d) = divisor {
                *w /= d;
            }
        }
    }
    Ok(ConnectionMatrix {
        diag: vec![1.0; n],
        off1,
        off2: vec![0.0; n.saturating_sub(2)],
    })
}

/// Adjacent-pair weights reshaped by training-corpus word counts; no
/// second-neighbour edges.
pub fn build_w_trainwords(s: &str, m: &NGramModel, ws: &WordStats) -> Result<ConnectionMatrix, GraphError> {
    let s = chars_of(s)?;
    let n = s.len();
    let mut off1 = adjacent_strength(&s, m);
    for (i, w) in off1.iter_mut().enumerate() {
        let (a, b) = (s[i], s[i + 1]);
        if ws.boosts(a, b) {
            *w *= ws.boost;
        } else {
            let divisor = [a, b]
                .iter()
                .filter_map(|&c| ws.single_char_divisor(c))
                .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |x| x.max(d))));
            if let Some(d) = divisor {
                *w /= d;
            }
        }
    }
    Ok(ConnectionMatrix {
        diag: vec![1.0; n],
        off1,
        off2: vec![0.0; n.saturating_sub(2)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn toy() -> NGramModel {
        NGramModel::ingest_lines(&["天安门", "天安门"], "toy")
    }

    #[test]
    fn ehr_toy_sentence() {
        let m = toy();
        let w = build_w_ehr("天安门", &m, &EhrParams::default()).unwrap();
        assert_eq!(w.diag(), &[1.0, 1.0, 1.0]);
        assert_eq!(w.off1(), &[m.sd_count_bi('天', '安'), m.sd_count_bi('安', '门')]);
        assert_eq!(w.off2(), &[m.sd_count_tri('天', '安', '门')]);
        assert_abs_diff_eq!(w.off1()[0], 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn ehr_weaken_set_2_divides_by_80() {
        let m = NGramModel::ingest_lines(&["的天", "的天", "天的天"], "x");
        let raw = m.p_next_uni('的', '天').max(m.p_prev_bi('的', '天', '的')) * m.sd_count_bi('的', '天');
        assert!(raw > 0.0);
        let w = build_w_ehr("的天", &m, &EhrParams::default()).unwrap();
        assert_abs_diff_eq!(w.off1()[0], m.p_next_uni('的', '天') * m.sd_count_bi('的', '天') / 80.0);
    }

    #[test]
    fn ehr_weakenings_stack() {
        let m = NGramModel::ingest_lines(&["和的", "和的", "和"], "x");
        let raw = m.p_next_uni('和', '的') * m.sd_count_bi('和', '的');
        assert!(raw > 0.0);
        let mut p = EhrParams::default();
        p.weaken_set_1 = ['和'].into();
        let w = build_w_ehr("和的", &m, &p).unwrap();
        assert_abs_diff_eq!(w.off1()[0], raw / 4.0 / 80.0, epsilon = 1e-15);
    }

    #[test]
    fn ehr_weaken_set_2_zeroes_trigram_edge() {
        let lines = ["天的门", "天的门"];
        let m = NGramModel::ingest_lines(&lines, "x");
        let w = build_w_ehr("天的门", &m, &EhrParams::default()).unwrap();
        assert_eq!(w.off2(), &[0.0]);
    }

    #[test]
    fn ehr_boundary_terms_dropped() {
        // 安门 only appears after 天, so P(门|天,安) = 1 but the sentence starts at 安:
        // the leading pair must use only P(门|安) and P(安|门,广).
        let m = NGramModel::ingest_lines(&["天安门", "安门广", "安门外", "安门外"], "x");
        let w = build_w_ehr("安门广", &m, &EhrParams::default()).unwrap();
        let expect0 = m.p_next_uni('安', '门').max(m.p_prev_bi('安', '门', '广')) * m.sd_count_bi('安', '门');
        assert_eq!(w.off1()[0], expect0);
        let expect1 = m.p_next_uni('门', '广').max(m.p_next_bi('安', '门', '广')) * m.sd_count_bi('门', '广');
        assert_eq!(w.off1()[1], expect1);
    }

    #[test]
    fn single_char_is_identity() {
        let m = toy();
        for w in [
            build_w_ehr("天", &m, &EhrParams::default()).unwrap(),
            build_w_lexicon("天", &m, &Lexicon::new(HashMap::new(), 25000)).unwrap(),
            build_w_trainwords("天", &m, &WordStats::new(HashMap::new())).unwrap(),
        ] {
            assert_eq!(w, ConnectionMatrix::identity(1));
        }
    }

    #[test]
    fn empty_sentence_rejected() {
        assert!(matches!(
            build_w_ehr("", &toy(), &EhrParams::default()),
            Err(GraphError::EmptySentence)
        ));
    }

    #[test]
    fn lexicon_boost_and_damping() {
        let m = NGramModel::ingest_lines(&["天安门", "天安门", "的天安", "门的", "门的"], "x");
        let base = build_w_ehr("天安门的", &m, &EhrParams { weaken_set_1: HashSet::new(), weaken_set_2: HashSet::new(), ..EhrParams::default() }).unwrap();
        let lex = Lexicon::new(
            [("安门".to_string(), 100), ("的".to_string(), 2), ("天安".to_string(), 30000)].into(),
            25000,
        );
        let w = build_w_lexicon("天安门的", &m, &lex).unwrap();
        // 天安 only lives in a word ranked above the threshold: unchanged
        assert_eq!(w.off1()[0], base.off1()[0]);
        assert_eq!(w.off1()[1], base.off1()[1] * 20.0);
        // ln(1e6 / 2) = 13.12 < 20
        assert_abs_diff_eq!((1e6f64 / 2.0).ln(), 13.122, epsilon = 1e-3);
        assert_eq!(lex.damp_divisor('的'), 20.0);
        assert!(base.off1()[2] > 0.0);
        assert_eq!(w.off1()[2], base.off1()[2] / 20.0);
        assert!(w.off2().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn lexicon_missing_single_char_rank_uses_floor() {
        let lex = Lexicon::new(HashMap::new(), 25000);
        assert_eq!(lex.damp_divisor('在'), 20.0);
        let mut lex = lex;
        lex.damp_floor = 1.0;
        assert_eq!(lex.damp_divisor('在'), 1.0);
        let lex2 = {
            let mut l = Lexicon::new([("在".to_string(), 1)].into(), 25000);
            l.damp_floor = 1.0;
            l
        };
        assert_abs_diff_eq!(lex2.damp_divisor('在'), 1e6f64.ln());
    }

    #[test]
    fn trainwords_divisors() {
        let ws = WordStats::new([("甲".to_string(), 1000), ("乙".to_string(), 100), ("天安门".to_string(), 3)].into());
        assert_eq!(ws.single_char_divisor('甲'), Some(4.0));
        assert_eq!(ws.single_char_divisor('乙'), Some(1.0));
        assert_eq!(ws.single_char_divisor('丙'), None);
        assert!(ws.boosts('天', '安'));
        assert!(ws.boosts('安', '门'));
        assert!(!ws.boosts('门', '天'));
    }

    #[test]
    fn trainwords_boost_and_damp() {
        let m = NGramModel::ingest_lines(&["天安甲", "天安甲", "安甲天", "甲天"], "x");
        let ws = WordStats::new([("天安".to_string(), 5), ("甲".to_string(), 1000)].into());
        let base = adjacent_strength(&"天安甲天".chars().collect::<Vec<_>>(), &m);
        let w = build_w_trainwords("天安甲天", &m, &ws).unwrap();
        assert_eq!(w.off1()[0], base[0] * 20.0);
        assert_eq!(w.off1()[1], base[1] / 4.0);
        assert_eq!(w.off1()[2], base[2] / 4.0);
        assert!(w.off2().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn resource_files_parse() {
        let lex = Lexicon::from_reader("的\t1\n天安门\t2\n".as_bytes(), "lex", 25000).unwrap();
        assert_eq!(lex.rank("天安门"), Some(2));
        assert!(Lexicon::from_reader("的\t1\n是\t1\n".as_bytes(), "lex", 25000).is_err());
        let err = WordStats::from_reader("的 3\n".as_bytes(), "ws").unwrap_err();
        assert!(err.to_string().contains("ws:1"));
        let ws = WordStats::from_segmented_lines(&["天安门 的  广场", "的"]);
        assert_eq!(ws.count("的"), 2);
        assert_eq!(ws.count("广场"), 1);
    }

    #[test]
    fn dense_and_degrees() {
        let w = ConnectionMatrix::from_bands(vec![1.0, 1.0, 1.0], vec![0.5, 0.25], vec![0.125]).unwrap();
        let d = w.to_dense();
        assert_eq!(d, vec![1.0, 0.5, 0.125, 0.5, 1.0, 0.25, 0.125, 0.25, 1.0]);
        assert_eq!(w.degrees(), vec![1.625, 1.75, 1.375]);
        assert!(ConnectionMatrix::from_bands(vec![1.0, 1.0], vec![-0.1], vec![]).is_err());
        assert!(ConnectionMatrix::from_bands(vec![1.0, 1.0], vec![], vec![]).is_err());
    }

    const ALPHABET: &[char] = &['天', '安', '门', '的', '和', '了', '场', '广', 'a', '，', '1'];

    fn text(max: usize) -> impl Strategy<Value = String> {
        prop::collection::vec(prop::sample::select(ALPHABET), 1..max).prop_map(|v| v.into_iter().collect())
    }

    fn check_invariants(w: &ConnectionMatrix, n: usize) -> Result<(), TestCaseError> {
        prop_assert_eq!(w.n(), n);
        prop_assert!(w.diag().iter().all(|&x| x == 1.0));
        prop_assert!(w.off1().iter().chain(w.off2()).all(|&x| x >= 0.0 && x.is_finite()));
        Ok(())
    }

    proptest! {
        #[test]
        fn builders_produce_valid_matrices(
            corpus in prop::collection::vec(text(10), 0..15),
            s in text(15),
        ) {
            let m = NGramModel::ingest_lines(&corpus, "p");
            let n = s.chars().count();
            let chars: Vec<char> = s.chars().collect();
            let ehr = build_w_ehr(&s, &m, &EhrParams::default()).unwrap();
            check_invariants(&ehr, n)?;
            let lex = Lexicon::new(corpus.iter().enumerate().map(|(i, w)| (w.clone(), i as u64 + 1)).collect(), 25000);
            let lw = build_w_lexicon(&s, &m, &lex).unwrap();
            check_invariants(&lw, n)?;
            prop_assert!(lw.off2().iter().all(|&x| x == 0.0));
            let ws = WordStats::from_segmented_lines(&corpus);
            let tw = build_w_trainwords(&s, &m, &ws).unwrap();
            check_invariants(&tw, n)?;
            prop_assert!(tw.off2().iter().all(|&x| x == 0.0));

            // Other-class neighbours are never linked.
            let raw = adjacent_strength(&chars, &m);
            for i in 0..n.saturating_sub(1) {
                if !crate::ngram::is_chinese(chars[i]) || !crate::ngram::is_chinese(chars[i + 1]) {
                    prop_assert_eq!(ehr.off1()[i], 0.0);
                    prop_assert_eq!(lw.off1()[i], 0.0);
                    prop_assert_eq!(tw.off1()[i], 0.0);
                }
                // weakening never increases, boosting never decreases
                prop_assert!(ehr.off1()[i] <= raw[i]);
                if lex.boosts(chars[i], chars[i + 1]) {
                    prop_assert!(lw.off1()[i] >= raw[i]);
                } else {
                    prop_assert!(lw.off1()[i] <= raw[i]);
                }
                if ws.boosts(chars[i], chars[i + 1]) {
                    prop_assert!(tw.off1()[i] >= raw[i]);
                } else {
                    prop_assert!(tw.off1()[i] <= raw[i]);
                }
            }
            // determinism
            prop_assert_eq!(ehr, build_w_ehr(&s, &m, &EhrParams::default()).unwrap());
        }
    }
}
