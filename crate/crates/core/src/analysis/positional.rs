use serde::{Deserialize, Serialize};

use super::welch::{welch_t_test, TTestResult};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::scorer::NegationMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    DocumentHalves,
    SentenceHalves,
}

/// Share of negated words in the first and in the second half of every
/// document (or sentence). Units with fewer than two words are skipped; the
/// middle word of an odd-length unit counts towards the first half.
pub fn positional_negation_shares(
    masks: &[NegationMask],
    docs: &[&Document],
    granularity: Granularity,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if masks.len() != docs.len() {
        return Err(Error::LengthMismatch(masks.len(), docs.len()));
    }
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (mask, doc) in masks.iter().zip(docs) {
        if mask.len() != doc.len() {
            return Err(Error::MaskLength {
                mask: mask.len(),
                doc: doc.len(),
            });
        }
        let whole = [0..doc.len()];
        let units = match granularity {
            Granularity::DocumentHalves => &whole[..],
            Granularity::SentenceHalves => doc.sentence_bounds.as_slice(),
        };
        for unit in units {
            let flags = &mask.flags[unit.clone()];
            if flags.len() < 2 {
                continue;
            }
            let (a, b) = flags.split_at(flags.len().div_ceil(2));
            let share = |s: &[bool]| s.iter().filter(|&&f| f).count() as f64 / s.len() as f64;
            first.push(share(a));
            second.push(share(b));
        }
    }
    Ok((first, second))
}

/// First-half versus second-half comparison with both readings of the
/// difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionalTest {
    pub granularity: Granularity,
    pub units: usize,
    pub mean_first: f64,
    pub mean_second: f64,
    /// `mean_second - mean_first`.
    pub absolute_diff: f64,
    /// `mean_second / mean_first - 1`; `None` when the first mean is zero.
    pub relative_diff: Option<f64>,
    pub welch: TTestResult,
}

pub fn positional_test(
    masks: &[NegationMask],
    docs: &[&Document],
    granularity: Granularity,
) -> Result<PositionalTest> {
    let (first, second) = positional_negation_shares(masks, docs, granularity)?;
    let welch = welch_t_test(&first, &second)?;
    Ok(PositionalTest {
        granularity,
        units: first.len(),
        mean_first: welch.mean1,
        mean_second: welch.mean2,
        absolute_diff: welch.mean2 - welch.mean1,
        relative_diff: (welch.mean1 != 0.0).then(|| welch.mean2 / welch.mean1 - 1.0),
        welch,
    })
}
