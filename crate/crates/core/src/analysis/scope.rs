use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::scorer::NegationMask;

/// Where a run of negated words is forced to end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScopeBoundary {
    #[default]
    Sentence,
    Document,
}

/// Corpus-wide description of negation scopes.
///
/// A scope is a maximal run of negated words. With no scopes at all every
/// field is zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScopeStats {
    pub scope_count_total: usize,
    pub mean_scopes_per_doc: f64,
    pub min_len: usize,
    pub max_len: usize,
    pub mean_len: f64,
    pub share_len_1: f64,
    pub share_len_ge2: f64,
    pub share_negated_polarity_words: f64,
}

pub fn scope_stats(
    masks: &[NegationMask],
    docs: &[&Document],
    lexicon: &Lexicon,
    boundary: ScopeBoundary,
) -> Result<ScopeStats> {
    if masks.len() != docs.len() {
        return Err(Error::LengthMismatch(masks.len(), docs.len()));
    }
    let mut count = 0usize;
    let mut len_sum = 0usize;
    let mut singles = 0usize;
    let mut min_len = usize::MAX;
    let mut max_len = 0usize;
    let mut polar = 0usize;
    let mut polar_negated = 0usize;

    for (mask, doc) in masks.iter().zip(docs) {
        if mask.len() != doc.len() {
            return Err(Error::MaskLength {
                mask: mask.len(),
                doc: doc.len(),
            });
        }
        let whole = [0..doc.len()];
        let units = match boundary {
            ScopeBoundary::Sentence => doc.sentence_bounds.as_slice(),
            ScopeBoundary::Document => &whole[..],
        };
        for unit in units {
            let mut run = 0usize;
            for i in unit.clone().chain(std::iter::once(usize::MAX)) {
                if i != usize::MAX && mask.flags[i] {
                    run += 1;
                } else if run > 0 {
                    count += 1;
                    len_sum += run;
                    singles += usize::from(run == 1);
                    min_len = min_len.min(run);
                    max_len = max_len.max(run);
                    run = 0;
                }
            }
        }
        for (t, &f) in doc.tokens.iter().zip(&mask.flags) {
            if lexicon.is_polar(t) {
                polar += 1;
                polar_negated += usize::from(f);
            }
        }
    }

    let share_negated_polarity_words = if polar > 0 {
        polar_negated as f64 / polar as f64
    } else {
        0.0
    };
    if count == 0 {
        return Ok(ScopeStats {
            share_negated_polarity_words,
            ..Default::default()
        });
    }
    let n = count as f64;
    Ok(ScopeStats {
        scope_count_total: count,
        mean_scopes_per_doc: n / docs.len() as f64,
        min_len,
        max_len,
        mean_len: len_sum as f64 / n,
        share_len_1: singles as f64 / n,
        share_len_ge2: (count - singles) as f64 / n,
        share_negated_polarity_words,
    })
}
