use std::io::Write;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{normalize_gold, Corpus, Document};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::scorer::{tone, NegationMask};

/// Recipe for a synthetic corpus with one planted negation rule: every
/// occurrence of `cue` inverts the polarity of the next `scope_len` tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
    pub filler: Vec<String>,
    pub cue: String,
    pub scope_len: usize,
    pub min_tokens: usize,
    pub max_tokens: usize,
    /// Probability that any given token is the cue.
    pub cue_rate: f64,
}

impl SyntheticSpec {
    /// A spec with generated term names `pos0..`, `neg0..`, `fill0..`.
    pub fn generated(
        n_pos: usize,
        n_neg: usize,
        n_filler: usize,
        cue: &str,
        scope_len: usize,
    ) -> Self {
        SyntheticSpec {
            positive: (0..n_pos).map(|i| format!("pos{i}")).collect(),
            negative: (0..n_neg).map(|i| format!("neg{i}")).collect(),
            filler: (0..n_filler).map(|i| format!("fill{i}")).collect(),
            cue: cue.to_string(),
            scope_len,
            min_tokens: 10,
            max_tokens: 30,
            cue_rate: 0.08,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.positive.is_empty() || self.negative.is_empty() || self.filler.is_empty() {
            return Err(Error::Synthetic("empty term set".into()));
        }
        if self.cue.is_empty() {
            return Err(Error::Synthetic("empty cue".into()));
        }
        if self.scope_len == 0 {
            return Err(Error::Synthetic("scope_len must be at least 1".into()));
        }
        if self.min_tokens == 0 || self.min_tokens > self.max_tokens {
            return Err(Error::Synthetic("invalid tokens-per-document range".into()));
        }
        if !(0.0..1.0).contains(&self.cue_rate) {
            return Err(Error::Synthetic("cue_rate must lie in [0, 1)".into()));
        }
        let all = self
            .positive
            .iter()
            .chain(&self.negative)
            .chain(&self.filler);
        if all.clone().any(|t| *t == self.cue) {
            return Err(Error::Synthetic("cue overlaps a term set".into()));
        }
        Ok(())
    }

    /// Lexicon over the spec's positive and negative terms.
    pub fn lexicon(&self) -> Result<Lexicon> {
        Lexicon::from_terms("synthetic", &self.positive, &self.negative)
    }

    /// Ground-truth inversion mask: the `scope_len` tokens after each cue
    /// occurrence, overlapping scopes merged.
    pub fn planted_mask(&self, tokens: &[String]) -> NegationMask {
        let mut flags = vec![false; tokens.len()];
        for (i, t) in tokens.iter().enumerate() {
            if *t == self.cue {
                let end = (i + 1 + self.scope_len).min(tokens.len());
                flags[i + 1..end].iter_mut().for_each(|f| *f = true);
            }
        }
        NegationMask::new(flags)
    }
}

/// Output of [`gen_synthetic`]: the corpus plus its ground truth.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    /// Documents with gold already normalized onto [-1, 1].
    pub corpus: Corpus,
    pub truth: Vec<NegationMask>,
    /// True tone of each document before normalization.
    pub raw_tone: Vec<f64>,
    pub lexicon: Lexicon,
}

impl SyntheticCorpus {
    /// Writes `id<TAB>raw tone<TAB>text` lines.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (doc, tone) in self.corpus.documents.iter().zip(&self.raw_tone) {
            writeln!(w, "{}\t{}\t{}", doc.id, tone, doc.tokens.join(" "))?;
        }
        Ok(())
    }

    /// Writes `id<TAB>flags` lines, flags as a `0`/`1` string per token.
    pub fn write_truth<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (doc, mask) in self.corpus.documents.iter().zip(&self.truth) {
            writeln!(w, "{}\t{}", doc.id, mask.to_bit_string())?;
        }
        Ok(())
    }
}

/// Generates `doc_count` random documents under `spec`.
///
/// Each token is the cue with probability `cue_rate`, otherwise a uniform
/// draw from the union of positive, negative and filler terms.
pub fn gen_synthetic(doc_count: usize, spec: &SyntheticSpec, seed: u64) -> Result<SyntheticCorpus> {
    spec.validate()?;
    if doc_count == 0 {
        return Err(Error::Synthetic("doc_count must be positive".into()));
    }
    let lexicon = spec.lexicon()?;
    let terms: Vec<&String> = spec
        .positive
        .iter()
        .chain(&spec.negative)
        .chain(&spec.filler)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = doc_count.to_string().len().max(5);

    let mut docs = Vec::with_capacity(doc_count);
    let mut truth = Vec::with_capacity(doc_count);
    let mut raw_tone = Vec::with_capacity(doc_count);
    for i in 0..doc_count {
        let len = rng.gen_range(spec.min_tokens..=spec.max_tokens);
        let tokens: Vec<String> = (0..len)
            .map(|_| {
                if rng.gen::<f64>() < spec.cue_rate {
                    spec.cue.clone()
                } else {
                    terms[rng.gen_range(0..terms.len())].clone()
                }
            })
            .collect();
        let doc = Document::from_tokens(format!("syn{i:0width$}"), tokens, 0.0)?;
        let mask = spec.planted_mask(&doc.tokens);
        raw_tone.push(tone(&doc, &mask, &lexicon)?.score);
        truth.push(mask);
        docs.push(doc);
    }
    for (doc, g) in docs.iter_mut().zip(normalize_gold(&raw_tone)?) {
        doc.gold = g;
    }
    Ok(SyntheticCorpus {
        corpus: Corpus::new(docs, format!("synthetic(seed={seed})"))?,
        truth,
        raw_tone,
        lexicon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SyntheticSpec {
        let mut s = SyntheticSpec::generated(3, 3, 4, "not", 1);
        s.positive[0] = "good".into();
        s
    }

    fn raw(spec: &SyntheticSpec, tokens: &[&str]) -> f64 {
        let doc = Document::from_tokens("x", tokens.iter().copied(), 0.0).unwrap();
        let mask = spec.planted_mask(&doc.tokens);
        tone(&doc, &mask, &spec.lexicon().unwrap()).unwrap().score
    }

    #[test]
    fn planted_inversion_tone() {
        let s = spec();
        assert_eq!(raw(&s, &["not", "good"]), -0.5);
        assert_eq!(raw(&s, &["good", "fill0"]), 0.5);
    }

    #[test]
    fn overlapping_scopes_merge() {
        let mut s = spec();
        s.scope_len = 2;
        let toks: Vec<String> = ["not", "not", "good", "good", "good"]
            .iter()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(s.planted_mask(&toks).to_bit_string(), "01110");
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let s = spec();
        let a = gen_synthetic(50, &s, 9).unwrap();
        let b = gen_synthetic(50, &s, 9).unwrap();
        assert_eq!(a.corpus.documents, b.corpus.documents);
        assert_eq!(a.raw_tone, b.raw_tone);
        let c = gen_synthetic(50, &s, 10).unwrap();
        assert_ne!(a.corpus.documents, c.corpus.documents);
    }

    #[test]
    fn empty_term_sets_rejected() {
        let mut s = spec();
        s.negative.clear();
        assert!(gen_synthetic(10, &s, 0).is_err());
        let mut s = spec();
        s.filler.push("not".into());
        assert!(gen_synthetic(10, &s, 0).is_err());
    }

    #[test]
    fn lengths_in_range() {
        let s = spec();
        let out = gen_synthetic(200, &s, 1).unwrap();
        assert!(out
            .corpus
            .documents
            .iter()
            .all(|d| (s.min_tokens..=s.max_tokens).contains(&d.len())));
    }
}
