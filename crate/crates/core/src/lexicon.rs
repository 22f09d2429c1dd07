//! Polarity dictionaries and negation-cue lists.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use crate::corpus::tokenize;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

/// Disjoint sets of positive and negative terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    pub name: String,
    positive: HashSet<String>,
    negative: HashSet<String>,
    conflicts: usize,
}

impl Lexicon {
    /// Builds a lexicon from raw term lists.
    ///
    /// Every term goes through the corpus tokenizer; entries that do not
    /// come out as exactly one token are discarded. Terms listed under both
    /// polarities are dropped from both.
    pub fn from_terms<P, N>(
        name: impl Into<String>,
        positive: impl IntoIterator<Item = P>,
        negative: impl IntoIterator<Item = N>,
    ) -> Result<Self>
    where
        P: AsRef<str>,
        N: AsRef<str>,
    {
        let mut pos = normalize_terms(positive);
        let mut neg = normalize_terms(negative);
        let both: Vec<String> = pos.intersection(&neg).cloned().collect();
        for t in &both {
            pos.remove(t);
            neg.remove(t);
        }
        if pos.is_empty() && neg.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        Ok(Lexicon {
            name: name.into(),
            positive: pos,
            negative: neg,
            conflicts: both.len(),
        })
    }

    /// Number of terms dropped because they appeared in both lists.
    pub fn conflicts(&self) -> usize {
        self.conflicts
    }

    pub fn positive_len(&self) -> usize {
        self.positive.len()
    }

    pub fn negative_len(&self) -> usize {
        self.negative.len()
    }

    pub fn polarity(&self, token: &str) -> Polarity {
        if self.positive.contains(token) {
            Polarity::Positive
        } else if self.negative.contains(token) {
            Polarity::Negative
        } else {
            Polarity::Neutral
        }
    }

    pub fn is_polar(&self, token: &str) -> bool {
        self.polarity(token) != Polarity::Neutral
    }
}

fn normalize_terms<S: AsRef<str>>(terms: impl IntoIterator<Item = S>) -> HashSet<String> {
    terms
        .into_iter()
        .filter_map(|t| {
            let (mut tokens, _) = tokenize(t.as_ref());
            (tokens.len() == 1).then(|| tokens.pop().unwrap())
        })
        .collect()
}

fn read_terms(path: &Path) -> Result<Vec<String>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

/// Loads a lexicon from two plaintext files, one term per line.
pub fn load_lexicon(pos_path: &Path, neg_path: &Path) -> Result<Lexicon> {
    let name = pos_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "lexicon".into());
    let lex = Lexicon::from_terms(name, read_terms(pos_path)?, read_terms(neg_path)?)?;
    if lex.conflicts > 0 {
        log::info!(
            "lexicon: dropped {} terms listed as both polarities",
            lex.conflicts
        );
    }
    Ok(lex)
}

/// Ordered set of explicit negation cues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CueList {
    cues: Vec<String>,
}

impl CueList {
    pub fn new<S: AsRef<str>>(cues: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut out: Vec<String> = Vec::new();
        for c in cues {
            let c = c.as_ref().trim().to_lowercase();
            if c.is_empty() {
                return Err(Error::Config("empty negation cue".into()));
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        if out.is_empty() {
            return Err(Error::Config("empty cue list".into()));
        }
        Ok(CueList { cues: out })
    }

    /// Reads one cue per line, skipping blanks and `#` comments.
    pub fn load(path: &Path) -> Result<Self> {
        CueList::new(read_terms(path)?)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.cues.iter().any(|c| c == token)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.cues.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.cues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cues.is_empty()
    }
}

/// The eight explicit negation words commonly used in the literature.
pub fn default_cue_list() -> CueList {
    CueList::new([
        "not", "no", "never", "without", "barely", "less", "hardly", "rarely",
    ])
    .expect("builtin cue list is valid")
}
