use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use segspectral::ngram::{NGramCounts, NGramModel};
use segspectral::{
    analyze_sentence, generate_synthetic, load_model, save_model, score_corpus, segment_document, Config,
    SegmenterConfig, Segmentation, SynthSpec,
};

use crate::args::{EvalArgs, SegmentArgs, SegmenterArgs, SweepArgs, SynthArgs, TrainArgs};

/// Bad invocation that clap cannot catch on its own. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn open(path: &Path, what: &str) -> Result<File> {
    File::open(path).with_context(|| format!("cannot open {what} {}", path.display()))
}

fn is_stdin(path: Option<&Path>) -> bool {
    path.is_none_or(|p| p.as_os_str() == "-")
}

/// Splits text into lines, accepting `\n` or `\r\n`. A final terminator
/// does not start an extra empty line.
pub fn split_lines(text: &str) -> Vec<String> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    if text.is_empty() {
        return Vec::new();
    }
    body.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l).to_owned()).collect()
}

/// Reads a whole UTF-8 input, from standard input when `path` is absent or `-`.
pub fn read_lines(path: Option<&Path>, what: &str) -> Result<Vec<String>> {
    let mut bytes = Vec::new();
    let name = match path {
        Some(p) if !is_stdin(path) => {
            open(p, what)?.read_to_end(&mut bytes).with_context(|| format!("cannot read {}", p.display()))?;
            p.display().to_string()
        }
        _ => {
            io::stdin().lock().read_to_end(&mut bytes).context("cannot read standard input")?;
            "standard input".to_owned()
        }
    };
    let text = String::from_utf8(bytes)
        .map_err(|e| anyhow::anyhow!("{name}: invalid UTF-8 at byte {}", e.utf8_error().valid_up_to()))?;
    Ok(split_lines(&text))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("cannot create {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => Box::new(create(p)?),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_lines<I, S>(path: &Path, lines: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = create(path)?;
    for l in lines {
        writeln!(out, "{}", l.as_ref())?;
    }
    out.flush().with_context(|| format!("cannot write {}", path.display()))
}

fn read_model(path: &Path) -> Result<NGramModel> {
    let f = open(path, "model")?;
    load_model(BufReader::new(f)).with_context(|| format!("cannot load model {}", path.display()))
}

fn check_eig_cut(c: f64) -> Result<()> {
    if c > 0.0 && c.is_finite() {
        Ok(())
    } else {
        Err(UsageError(format!("--eig-cut must be a positive number, got {c}")).into())
    }
}

/// Config file (or defaults) with command-line flags layered on top.
pub fn resolve_config(args: &SegmenterArgs, eig_cut: Option<f64>) -> Result<Config> {
    let mut cfg = match &args.config {
        Some(p) => Config::from_path(p)?,
        None => Config::default(),
    };
    if let Some(r) = args.recipe {
        cfg.recipe = r.into();
    }
    if let Some(f) = args.form {
        cfg.form = Some(f.into());
    }
    if let Some(p) = &args.lexicon {
        cfg.lexicon = Some(p.clone());
    }
    if let Some(p) = &args.word_stats {
        cfg.word_stats = Some(p.clone());
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.no_postprocess {
        cfg.postprocess = false;
    }
    if let Some(c) = eig_cut {
        check_eig_cut(c)?;
        cfg.eig_cut = Some(c);
    }
    Ok(cfg)
}

fn model_summary(m: &NGramModel) -> String {
    format!(
        "lines={} chars={} unigrams={} bigrams={} trigrams={}",
        m.meta().lines,
        m.total_uni(),
        m.unigrams().len(),
        m.bigrams().len(),
        m.trigrams().len()
    )
}

pub fn cmd_train(a: &TrainArgs) -> Result<u8> {
    let corpus_id = a
        .corpus
        .file_name()
        .map_or_else(|| a.corpus.display().to_string(), |n| n.to_string_lossy().into_owned());
    let model = match &a.write_word_stats {
        None => {
            let f = open(&a.corpus, "corpus")?;
            NGramModel::ingest_reader(BufReader::new(f), &corpus_id)
                .with_context(|| format!("cannot ingest {}", a.corpus.display()))?
        }
        Some(stats_path) => {
            let lines = read_lines(Some(&a.corpus), "corpus")?;
            let mut counts = NGramCounts::new();
            let mut words: HashMap<String, u64> = HashMap::new();
            for l in &lines {
                let seg = Segmentation::from_delimited(l);
                counts.add_line(&seg.text());
                for w in seg.words() {
                    *words.entry(w.clone()).or_insert(0) += 1;
                }
            }
            let mut sorted: Vec<_> = words.into_iter().collect();
            sorted.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
            write_lines(stats_path, sorted.iter().map(|(w, c)| format!("{w}\t{c}")))?;
            counts.finish(corpus_id)
        }
    };
    if model.is_empty() {
        eprintln!("segspectral: warning: {} has no Chinese text; writing an empty model", a.corpus.display());
    }
    let mut out = create(&a.model)?;
    save_model(&model, &mut out).with_context(|| format!("cannot write model {}", a.model.display()))?;
    out.flush()?;
    println!("{}", model_summary(&model));
    Ok(0)
}

fn dump_analysis(err: &mut impl Write, line_no: usize, line: &str, a: &segspectral::segment::SentenceAnalysis) -> io::Result<()> {
    let p = &a.partition;
    writeln!(err, "#line\t{line_no}\tk\t{}", p.k)?;
    for (j, v) in p.eigen.values().iter().enumerate() {
        writeln!(err, "eigval\t{j}\t{v}")?;
    }
    for (i, c) in line.chars().enumerate() {
        write!(err, "embed\t{i}\t{c}")?;
        for v in p.embedding.row(i) {
            write!(err, "\t{v}")?;
        }
        writeln!(err)?;
    }
    Ok(())
}

pub fn cmd_segment(a: &SegmentArgs) -> Result<u8> {
    let cfg = resolve_config(&a.seg, a.eig_cut)?;
    let model = read_model(&a.seg.model)?;
    let seg_cfg = cfg.build_segmenter()?;
    let lines = read_lines(a.input.as_deref(), "input")?;

    let results: Vec<Result<Segmentation, String>> = if a.dump_eigen {
        let mut err = io::stderr().lock();
        let mut out = Vec::with_capacity(lines.len());
        for (i, l) in lines.iter().enumerate() {
            if l.is_empty() {
                out.push(Ok(Segmentation::default()));
                continue;
            }
            match analyze_sentence(l, &model, &seg_cfg) {
                Ok(an) => {
                    dump_analysis(&mut err, i + 1, l, &an)?;
                    out.push(Ok(an.segmentation));
                }
                Err(e) => out.push(Err(format!("line {}: {e}", i + 1))),
            }
        }
        out
    } else {
        segment_document(&lines, &model, &seg_cfg)
            .into_iter()
            .map(|r| r.map_err(|e| e.to_string()))
            .collect()
    };

    let mut out = output(a.output.as_deref())?;
    let mut failed = 0;
    for (line, r) in lines.iter().zip(&results) {
        match r {
            Ok(seg) => writeln!(out, "{}", seg.to_delimited())?,
            Err(msg) => {
                failed += 1;
                eprintln!("segspectral: {msg}");
                // keep the output aligned with the input
                writeln!(out, "{line}")?;
            }
        }
    }
    out.flush()?;
    if failed > 0 {
        eprintln!("segspectral: {failed} of {} lines failed", lines.len());
        return Ok(1);
    }
    Ok(0)
}

fn read_segmentations(path: &Path, what: &str) -> Result<Vec<Segmentation>> {
    Ok(read_lines(Some(path), what)?.iter().map(|l| Segmentation::from_delimited(l)).collect())
}

pub fn cmd_eval(a: &EvalArgs) -> Result<u8> {
    let gold = read_segmentations(&a.gold, "gold file")?;
    let pred = read_segmentations(&a.pred, "prediction file")?;
    let report = score_corpus(&gold, &pred).context("cannot score")?;
    println!("{}", report.summary_line());
    Ok(0)
}

/// One row of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub eig_cut: f64,
    pub mean_k: f64,
    pub mean_words: f64,
    pub f: Option<f64>,
}

pub fn sweep_rows(
    lines: &[String],
    model: &NGramModel,
    base: &SegmenterConfig,
    cuts: &[f64],
    gold: Option<&[Segmentation]>,
) -> Result<Vec<SweepRow>> {
    let nonempty = lines.iter().filter(|l| !l.is_empty()).count().max(1) as f64;
    let mut rows = Vec::with_capacity(cuts.len());
    for &cut in cuts {
        let mut cfg = base.clone();
        cfg.eig_cut = cut;
        let per_line: Vec<(usize, Segmentation)> = lines
            .par_iter()
            .enumerate()
            .map(|(i, l)| {
                if l.is_empty() {
                    return Ok((0, Segmentation::default()));
                }
                analyze_sentence(l, model, &cfg)
                    .map(|a| (a.partition.k, a.segmentation))
                    .with_context(|| format!("eig_cut {cut}, line {}", i + 1))
            })
            .collect::<Result<_>>()?;
        let total_k: usize = per_line.iter().map(|(k, _)| k).sum();
        let total_words: usize = per_line.iter().map(|(_, s)| s.len()).sum();
        let f = match gold {
            Some(g) => {
                let pred: Vec<Segmentation> = per_line.into_iter().map(|(_, s)| s).collect();
                Some(score_corpus(g, &pred).context("cannot score against gold")?.f_score)
            }
            None => None,
        };
        rows.push(SweepRow {
            eig_cut: cut,
            mean_k: total_k as f64 / nonempty,
            mean_words: total_words as f64 / nonempty,
            f,
        });
    }
    Ok(rows)
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<u8> {
    if a.eig_cuts.is_empty() {
        return Err(UsageError("sweep needs at least one --eig-cut value".into()).into());
    }
    for &c in &a.eig_cuts {
        check_eig_cut(c)?;
    }
    let cfg = resolve_config(&a.seg, None)?;
    let model = read_model(&a.seg.model)?;
    let base = cfg.build_segmenter()?;
    let gold = a.gold.as_deref().map(|p| read_segmentations(p, "gold file")).transpose()?;
    let lines = read_lines(a.input.as_deref(), "input")?;
    let rows = sweep_rows(&lines, &model, &base, &a.eig_cuts, gold.as_deref())?;

    let mut out = BufWriter::new(io::stdout().lock());
    write!(out, "eig_cut\tmean_k\tmean_words")?;
    if gold.is_some() {
        write!(out, "\tF")?;
    }
    writeln!(out)?;
    for r in &rows {
        write!(out, "{}\t{:.4}\t{:.4}", r.eig_cut, r.mean_k, r.mean_words)?;
        if let Some(f) = r.f {
            write!(out, "\t{f:.4}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(0)
}

pub fn cmd_synth(a: &SynthArgs) -> Result<u8> {
    let spec = SynthSpec {
        vocab_size: a.vocab_size,
        word_len: (a.min_word_len, a.max_word_len),
        sentence_len: (a.min_words, a.max_words),
        sentences: a.sentences,
        seed: a.seed,
    };
    let corpus = generate_synthetic(&spec)?;
    write_lines(&a.corpus, &corpus.lines)?;
    write_lines(&a.gold, corpus.gold.iter().map(Segmentation::to_delimited))?;
    if let Some(p) = &a.vocab {
        write_lines(p, &corpus.vocab)?;
    }
    if corpus.degenerate {
        eprintln!("segspectral: warning: a one-word vocabulary leaves no boundary signal");
    }
    println!("sentences={} vocab={}", corpus.lines.len(), corpus.vocab.len());
    Ok(0)
}
