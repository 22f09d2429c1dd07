use serde::Serialize;

use crate::agent::{Action, QTable, State};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::lexicon::CueList;
use crate::scorer::NegationMask;

/// What the learned table says about one cue word.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CueRow {
    pub cue: String,
    /// Greedy action in state `(cue, NotNegated)` is `Negated`.
    pub negating: bool,
    /// Best action value in that state.
    pub q_value: f64,
    /// Gap between the best and second-best action values.
    pub confidence: f64,
    /// Occurrences in the masked documents; `None` for non-negating cues.
    pub occurrences: Option<usize>,
    /// Mean number of consecutive negated words right after the cue,
    /// within its sentence.
    pub mean_scope_len: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CueReport {
    pub rows: Vec<CueRow>,
}

impl CueReport {
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            out.serialize(r)?;
        }
        out.flush().map_err(|e| Error::io("<cue report>", e))
    }
}

pub fn cue_report(
    q: &QTable,
    masks: &[NegationMask],
    docs: &[&Document],
    cues: &CueList,
) -> Result<CueReport> {
    if masks.len() != docs.len() {
        return Err(Error::LengthMismatch(masks.len(), docs.len()));
    }
    let rows = cues
        .iter()
        .map(|cue| {
            let v = q.get(&State::new(cue, Action::NotNegated));
            let negating = v.best() == Action::Negated;
            let (occurrences, mean_scope_len) = if negating {
                let (n, mean) = following_scopes(cue, masks, docs);
                (Some(n), mean)
            } else {
                (None, None)
            };
            CueRow {
                cue: cue.to_string(),
                negating,
                q_value: v.max(),
                confidence: v.confidence(),
                occurrences,
                mean_scope_len,
            }
        })
        .collect();
    Ok(CueReport { rows })
}

fn following_scopes(cue: &str, masks: &[NegationMask], docs: &[&Document]) -> (usize, Option<f64>) {
    let mut n = 0usize;
    let mut total = 0usize;
    for (mask, doc) in masks.iter().zip(docs) {
        for sentence in &doc.sentence_bounds {
            for i in sentence.clone().filter(|&i| doc.tokens[i] == cue) {
                n += 1;
                total += (i + 1..sentence.end)
                    .take_while(|&j| mask.flags.get(j).copied().unwrap_or(false))
                    .count();
            }
        }
    }
    (n, (n > 0).then(|| total as f64 / n as f64))
}
