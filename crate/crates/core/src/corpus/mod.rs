//! Documents, corpus loading, gold normalization and fold assignment.

mod synthetic;
mod tokenize;

use std::collections::HashSet;
use std::fs;
use std::ops::Range;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use synthetic::{gen_synthetic, SyntheticCorpus, SyntheticSpec};
pub use tokenize::tokenize;

/// A tokenized document with its gold rating.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub tokens: Vec<String>,
    pub sentence_bounds: Vec<Range<usize>>,
    pub gold: f64,
}

impl Document {
    /// Builds a document, checking that it is non-empty and that the
    /// sentence ranges tile the token sequence.
    pub fn new(
        id: impl Into<String>,
        tokens: Vec<String>,
        sentence_bounds: Vec<Range<usize>>,
        gold: f64,
    ) -> Result<Self> {
        let id = id.into();
        if tokens.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut next = 0;
        for r in &sentence_bounds {
            if r.start != next || r.end <= r.start {
                return Err(Error::Config(format!(
                    "document {id}: sentence bounds do not partition the tokens"
                )));
            }
            next = r.end;
        }
        if next != tokens.len() {
            return Err(Error::Config(format!(
                "document {id}: sentence bounds do not cover all tokens"
            )));
        }
        Ok(Document {
            id,
            tokens,
            sentence_bounds,
            gold,
        })
    }

    /// Tokenizes `text` and wraps it as a document. `gold` is taken as is.
    pub fn from_text(id: impl Into<String>, text: &str, gold: f64) -> Result<Self> {
        let (tokens, bounds) = tokenize(text);
        Document::new(id, tokens, bounds, gold)
    }

    /// A single-sentence document from pre-split tokens.
    pub fn from_tokens<S: Into<String>>(
        id: impl Into<String>,
        tokens: impl IntoIterator<Item = S>,
        gold: f64,
    ) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let n = tokens.len();
        Document::new(id, tokens, vec![0..n], gold)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// An ordered collection of documents with unique ids.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub source_meta: String,
    /// Records dropped at load time because they contained no tokens.
    pub dropped_empty: usize,
}

impl Corpus {
    pub fn new(documents: Vec<Document>, source_meta: impl Into<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for d in &documents {
            if !seen.insert(d.id.as_str()) {
                return Err(Error::DuplicateId(d.id.clone()));
            }
        }
        Ok(Corpus {
            documents,
            source_meta: source_meta.into(),
            dropped_empty: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn golds(&self) -> Vec<f64> {
        self.documents.iter().map(|d| d.gold).collect()
    }

    /// Documents at the given positions.
    pub fn select(&self, idx: &[usize]) -> Vec<&Document> {
        idx.iter().map(|&i| &self.documents[i]).collect()
    }
}

/// Corpus file layout accepted by [`load_corpus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    /// `id<TAB>rating<TAB>text` per line, no header.
    Tsv,
    /// `*.txt` files next to a `ratings.tsv` index of `filename<TAB>rating`.
    #[serde(alias = "directory")]
    Dir,
}

impl std::str::FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tsv" => Ok(CorpusFormat::Tsv),
            "dir" | "directory" => Ok(CorpusFormat::Dir),
            other => Err(Error::Config(format!("unknown corpus format {other:?}"))),
        }
    }
}

/// Loads a rated corpus, tokenizes every record and maps the ratings onto
/// [-1, 1] over the whole corpus.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus> {
    let records = match format {
        CorpusFormat::Tsv => read_tsv_records(path)?,
        CorpusFormat::Dir => read_dir_records(path)?,
    };
    build_corpus(records, path.display().to_string())
}

struct RawRecord {
    id: String,
    rating: f64,
    text: String,
}

fn read_tsv_records(path: &Path) -> Result<Vec<RawRecord>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (n, line) in content.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.splitn(3, '\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: "expected 3 fields".into(),
            });
        }
        let rating = parse_rating(fields[1], line_no)?;
        records.push(RawRecord {
            id: fields[0].to_string(),
            rating,
            text: fields[2].to_string(),
        });
    }
    Ok(records)
}

fn read_dir_records(dir: &Path) -> Result<Vec<RawRecord>> {
    let index = dir.join("ratings.tsv");
    let content = fs::read_to_string(&index).map_err(|e| Error::io(&index, e))?;
    let mut records = Vec::new();
    for (n, line) in content.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: "expected 2 fields".into(),
            });
        }
        let rating = parse_rating(fields[1], line_no)?;
        let file = dir.join(fields[0]);
        let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        let id = fields[0]
            .strip_suffix(".txt")
            .unwrap_or(fields[0])
            .to_string();
        records.push(RawRecord { id, rating, text });
    }
    Ok(records)
}

fn parse_rating(field: &str, line: usize) -> Result<f64> {
    match field.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse {
            line,
            message: format!("non-numeric rating {field:?}"),
        }),
    }
}

fn build_corpus(records: Vec<RawRecord>, source: String) -> Result<Corpus> {
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut kept = Vec::with_capacity(records.len());
    let mut dropped = 0;
    for rec in records {
        let (tokens, bounds) = tokenize(&rec.text);
        if tokens.is_empty() {
            dropped += 1;
            continue;
        }
        kept.push((rec.id, tokens, bounds, rec.rating));
    }
    if dropped > 0 {
        log::warn!("{source}: dropped {dropped} records without tokens");
    }
    if kept.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let gold = normalize_gold(&kept.iter().map(|r| r.3).collect::<Vec<_>>())?;
    let documents = kept
        .into_iter()
        .zip(gold)
        .map(|((id, tokens, bounds, _), g)| Document::new(id, tokens, bounds, g))
        .collect::<Result<Vec<_>>>()?;
    let mut corpus = Corpus::new(documents, source)?;
    corpus.dropped_empty = dropped;
    Ok(corpus)
}

/// Maps `[min, max]` of the ratings affinely onto `[-1, 1]`.
pub fn normalize_gold(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let (lo, hi) = raw
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if !(hi > lo) {
        return Err(Error::DegenerateGold);
    }
    let span = hi - lo;
    Ok(raw.iter().map(|&x| 2.0 * (x - lo) / span - 1.0).collect())
}

/// Fold membership for k-fold cross validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldSplit {
    pub fold_count: usize,
    pub assignments: Vec<usize>,
}

impl FoldSplit {
    /// Indices of documents held out in `fold`.
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    /// Indices of documents used for training when `fold` is held out.
    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }
}

/// Shuffles the documents with a seeded permutation and deals them
/// round-robin into `k` folds.
pub fn make_folds(corpus: &Corpus, k: usize, seed: u64) -> Result<FoldSplit> {
    let n = corpus.len();
    if k < 2 || k > n {
        return Err(Error::FoldCount { k, docs: n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignments = vec![0; n];
    for (pos, &doc) in order.iter().enumerate() {
        assignments[doc] = pos % k;
    }
    Ok(FoldSplit {
        fold_count: k,
        assignments,
    })
}
