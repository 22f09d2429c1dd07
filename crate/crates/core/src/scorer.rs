//! Lexicon tone under a negation mask, and the R² metric.

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, Polarity};

/// Per-token negation flags for one document.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NegationMask {
    pub flags: Vec<bool>,
}

impl NegationMask {
    pub fn new(flags: Vec<bool>) -> Self {
        NegationMask { flags }
    }

    /// All tokens left untouched.
    pub fn none(len: usize) -> Self {
        NegationMask {
            flags: vec![false; len],
        }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn negated_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    /// `0`/`1` per token, e.g. `"0110"`.
    pub fn to_bit_string(&self) -> String {
        self.flags
            .iter()
            .map(|&f| if f { '1' } else { '0' })
            .collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(NegationMask::new)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToneResult {
    pub score: f64,
    pub pos_count: usize,
    pub neg_count: usize,
}

/// Net polarity per token: negation swaps positive and negative terms and
/// leaves neutral ones at zero.
pub fn tone(doc: &Document, mask: &NegationMask, lexicon: &Lexicon) -> Result<ToneResult> {
    if mask.len() != doc.len() {
        return Err(Error::MaskLength {
            mask: mask.len(),
            doc: doc.len(),
        });
    }
    let (mut pos, mut neg) = (0usize, 0usize);
    for (token, &negated) in doc.tokens.iter().zip(&mask.flags) {
        match (lexicon.polarity(token), negated) {
            (Polarity::Positive, false) | (Polarity::Negative, true) => pos += 1,
            (Polarity::Negative, false) | (Polarity::Positive, true) => neg += 1,
            (Polarity::Neutral, _) => {}
        }
    }
    Ok(ToneResult {
        score: (pos as f64 - neg as f64) / doc.len() as f64,
        pos_count: pos,
        neg_count: neg,
    })
}

/// Squared Pearson correlation between predictions and gold values.
pub fn r_squared(predicted: &[f64], gold: &[f64]) -> Result<f64> {
    if predicted.len() != gold.len() {
        return Err(Error::LengthMismatch(predicted.len(), gold.len()));
    }
    let n = predicted.len();
    if n < 3 {
        return Err(Error::TooFewValues { need: 3, got: n });
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let (mx, my) = (mean(predicted), mean(gold));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in predicted.iter().zip(gold) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy * sxy / (sxx * syy)).clamp(0.0, 1.0))
}

/// A text-processing function whose output the agent tries to move
/// towards the gold standard. It must depend only on the document and the
/// mask (plus whatever fixed context the implementor carries).
pub trait PerfFn: Sync {
    fn perf(&self, doc: &Document, mask: &NegationMask) -> Result<f64>;
}

/// The lexicon tone as a [`PerfFn`].
#[derive(Debug, Clone, Copy)]
pub struct ToneScorer<'a> {
    pub lexicon: &'a Lexicon,
}

impl<'a> ToneScorer<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        ToneScorer { lexicon }
    }
}

impl PerfFn for ToneScorer<'_> {
    fn perf(&self, doc: &Document, mask: &NegationMask) -> Result<f64> {
        tone(doc, mask, self.lexicon).map(|t| t.score)
    }
}

impl<F> PerfFn for F
where
    F: Fn(&Document, &NegationMask) -> Result<f64> + Sync,
{
    fn perf(&self, doc: &Document, mask: &NegationMask) -> Result<f64> {
        self(doc, mask)
    }
}

/// R² of `perf` under the given masks against the documents' gold values.
pub fn masked_r_squared(
    docs: &[&Document],
    masks: &[NegationMask],
    perf: &dyn PerfFn,
) -> Result<f64> {
    if docs.len() != masks.len() {
        return Err(Error::LengthMismatch(docs.len(), masks.len()));
    }
    let predicted = docs
        .iter()
        .zip(masks)
        .map(|(d, m)| perf.perf(d, m))
        .collect::<Result<Vec<_>>>()?;
    let gold: Vec<f64> = docs.iter().map(|d| d.gold).collect();
    r_squared(&predicted, &gold)
}
