//! Cue-list negation rules used as comparison points for the learned policy.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexicon::CueList;
use crate::scorer::NegationMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    /// No negation handling.
    None,
    /// The `k` words after each cue, clipped at the sentence end.
    FixedWindow { k: usize },
    /// Every non-cue word of a sentence that contains a cue.
    WholeSentence,
    /// Every word after a cue up to the sentence end, or the document end
    /// when `to_document_end` is set.
    AllSubsequent {
        #[serde(default)]
        to_document_end: bool,
    },
}

impl RuleKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            RuleKind::FixedWindow { k: 0 } => {
                Err(Error::Config("fixed window needs k >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// The eight rules reported by default: none, windows of 1 to 5 words,
    /// whole sentence and all subsequent words.
    pub fn standard_set() -> Vec<RuleKind> {
        let mut rules = vec![RuleKind::None];
        rules.extend((1..=5).map(|k| RuleKind::FixedWindow { k }));
        rules.push(RuleKind::WholeSentence);
        rules.push(RuleKind::AllSubsequent {
            to_document_end: false,
        });
        rules
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleKind::None => f.write_str("no negation"),
            RuleKind::FixedWindow { k } => write!(f, "fixed window of {k}"),
            RuleKind::WholeSentence => f.write_str("whole sentence"),
            RuleKind::AllSubsequent {
                to_document_end: false,
            } => f.write_str("all subsequent words"),
            RuleKind::AllSubsequent {
                to_document_end: true,
            } => f.write_str("all subsequent words (document)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleSpec {
    pub kind: RuleKind,
    pub cues: CueList,
}

impl RuleSpec {
    pub fn new(kind: RuleKind, cues: CueList) -> Result<Self> {
        kind.validate()?;
        Ok(RuleSpec { kind, cues })
    }
}

/// Applies a rule to a document. Overlapping scopes are merged; cue words
/// themselves are never negated.
pub fn apply_rule(rule: &RuleSpec, doc: &Document) -> NegationMask {
    let mut flags = vec![false; doc.len()];
    let is_cue: Vec<bool> = doc.tokens.iter().map(|t| rule.cues.contains(t)).collect();

    for sentence in &doc.sentence_bounds {
        let cue_positions = sentence.clone().filter(|&i| is_cue[i]);
        match rule.kind {
            RuleKind::None => {}
            RuleKind::FixedWindow { k } => {
                for i in cue_positions {
                    let end = (i + 1 + k).min(sentence.end);
                    flags[i + 1..end].iter_mut().for_each(|f| *f = true);
                }
            }
            RuleKind::WholeSentence => {
                if sentence.clone().any(|i| is_cue[i]) {
                    flags[sentence.clone()].iter_mut().for_each(|f| *f = true);
                }
            }
            RuleKind::AllSubsequent { to_document_end } => {
                if let Some(first) = cue_positions.into_iter().next() {
                    let end = if to_document_end {
                        doc.len()
                    } else {
                        sentence.end
                    };
                    flags[first + 1..end].iter_mut().for_each(|f| *f = true);
                }
            }
        }
    }
    for (f, &cue) in flags.iter_mut().zip(&is_cue) {
        if cue {
            *f = false;
        }
    }
    NegationMask::new(flags)
}
