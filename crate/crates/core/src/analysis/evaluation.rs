use rayon::prelude::*;
use serde::Serialize;

use crate::agent::{apply_policy, QTable};
use crate::baselines::{apply_rule, RuleKind, RuleSpec};
use crate::corpus::{Corpus, Document, FoldSplit};
use crate::error::{Error, Result};
use crate::scorer::{masked_r_squared, NegationMask, PerfFn};

/// Produces the negation mask an approach assigns to a document when
/// `fold` is held out.
#[derive(Debug, Clone, Copy)]
pub enum Masker<'a> {
    Plain,
    Rule(&'a RuleSpec),
    /// One trained table per fold.
    Policy(&'a [QTable]),
}

impl Masker<'_> {
    pub fn mask(&self, fold: usize, doc: &Document) -> NegationMask {
        match self {
            Masker::Plain => NegationMask::none(doc.len()),
            Masker::Rule(rule) => apply_rule(rule, doc),
            Masker::Policy(tables) => apply_policy(&tables[fold], doc),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Masker::Plain => RuleKind::None.to_string(),
            Masker::Rule(rule) => rule.kind.to_string(),
            Masker::Policy(_) => "learned policy".to_string(),
        }
    }
}

/// Fold-averaged R² of one approach, relative to no negation handling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachScore {
    pub approach: String,
    pub in_sample_r2: f64,
    pub out_sample_r2: f64,
    /// Percent change of in-sample R² over the no-negation row.
    pub in_sample_improvement_pct: f64,
    pub out_sample_improvement_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub folds: usize,
    pub rows: Vec<ApproachScore>,
}

impl EvaluationReport {
    pub fn row(&self, approach: &str) -> Option<&ApproachScore> {
        self.rows.iter().find(|r| r.approach == approach)
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush().map_err(|e| Error::io("<evaluation report>", e))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Aligned plain-text table for terminals.
    pub fn to_table(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.approach.len())
            .max()
            .unwrap_or(0)
            .max(8);
        let mut s = format!(
            "{:width$}  {:>10}  {:>10}  {:>10}  {:>10}\n",
            "approach", "R2 in", "R2 out", "in %", "out %"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:width$}  {:>10.4}  {:>10.4}  {:>+10.2}  {:>+10.2}\n",
                r.approach,
                r.in_sample_r2,
                r.out_sample_r2,
                r.in_sample_improvement_pct,
                r.out_sample_improvement_pct
            ));
        }
        s
    }
}

fn fold_scores(
    masker: &Masker<'_>,
    folds: &FoldSplit,
    corpus: &Corpus,
    perf: &dyn PerfFn,
) -> Result<(f64, f64)> {
    let per_fold = (0..folds.fold_count)
        .into_par_iter()
        .map(|f| {
            let score = |idx: Vec<usize>| {
                let docs = corpus.select(&idx);
                let masks: Vec<NegationMask> = docs.iter().map(|d| masker.mask(f, d)).collect();
                masked_r_squared(&docs, &masks, perf)
            };
            Ok((
                score(folds.train_indices(f))?,
                score(folds.test_indices(f))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let k = per_fold.len() as f64;
    let (a, b) = per_fold
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    Ok((a / k, b / k))
}

/// Cross-validated comparison of no negation handling, every rule and,
/// when given, the per-fold learned policies. The no-negation row comes
/// first; rules of kind `None` are folded into it.
pub fn evaluation_report(
    policies: Option<&[QTable]>,
    rules: &[RuleSpec],
    folds: &FoldSplit,
    corpus: &Corpus,
    perf: &dyn PerfFn,
) -> Result<EvaluationReport> {
    if folds.assignments.len() != corpus.len() {
        return Err(Error::LengthMismatch(folds.assignments.len(), corpus.len()));
    }
    if let Some(p) = policies {
        if p.len() != folds.fold_count {
            return Err(Error::LengthMismatch(p.len(), folds.fold_count));
        }
    }
    let mut maskers = vec![Masker::Plain];
    maskers.extend(
        rules
            .iter()
            .filter(|r| r.kind != RuleKind::None)
            .map(Masker::Rule),
    );
    if let Some(p) = policies {
        maskers.push(Masker::Policy(p));
    }

    let (base_in, base_out) = fold_scores(&Masker::Plain, folds, corpus, perf)?;
    let pct = |v: f64, base: f64| (v - base) / base * 100.0;
    let mut rows = Vec::with_capacity(maskers.len());
    for m in &maskers {
        let (r_in, r_out) = match m {
            Masker::Plain => (base_in, base_out),
            _ => fold_scores(m, folds, corpus, perf)?,
        };
        rows.push(ApproachScore {
            approach: m.label(),
            in_sample_r2: r_in,
            out_sample_r2: r_out,
            in_sample_improvement_pct: pct(r_in, base_in),
            out_sample_improvement_pct: pct(r_out, base_out),
        });
    }
    Ok(EvaluationReport {
        folds: folds.fold_count,
        rows,
    })
}
