//! Batch experiment runner behind the `negscope` binary.
//!
//! A [`RunConfig`] names the corpus, lexicon, cue list, training schedule and
//! output directory. Every command writes its outputs plus the effective
//! configuration (`config_effective.toml`) into the output directory, so a
//! run can be repeated from that file alone.
//!
//! Randomness comes from the single `seed` through named sub-seeds: `folds`
//! for the cross-validation split, `train/fold<k>` for each fold's agent and
//! `synthesis` for generated corpora.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{
    apply_policy, train_with_holdout, Checkpoint, QTable, TrainConfig, TrainOutcome,
};
use crate::analysis::{
    cue_report, evaluation_report, positional_test, scope_stats, CueReport, EvaluationReport,
    Granularity, PositionalTest, ScopeBoundary, ScopeStats,
};
use crate::baselines::{RuleKind, RuleSpec};
use crate::corpus::{
    gen_synthetic, load_corpus, make_folds, Corpus, CorpusFormat, FoldSplit, SyntheticSpec,
};
use crate::error::{Error, Result};
use crate::lexicon::{default_cue_list, load_lexicon, CueList, Lexicon};
use crate::scorer::{NegationMask, ToneScorer};
use crate::seed;

/// Output format of evaluation reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Generated corpus used when no corpus file is configured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub doc_count: usize,
    pub spec: SyntheticSpec,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            doc_count: 2000,
            spec: SyntheticSpec::generated(20, 20, 60, "not", 2),
        }
    }
}

/// Everything a run needs. Loaded from TOML; missing keys take defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub format: CorpusFormat,
    pub lexicon_pos: Option<PathBuf>,
    pub lexicon_neg: Option<PathBuf>,
    /// `"builtin"` or a path to a cue file.
    pub cues: String,
    pub folds: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub formats: Vec<ReportFormat>,
    pub rules: Vec<RuleKind>,
    /// Fold whose held-out documents `stats` describes.
    pub stats_fold: usize,
    pub scope_boundary: ScopeBoundary,
    pub train: TrainConfig,
    pub synthetic: Option<SynthConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            format: CorpusFormat::Tsv,
            lexicon_pos: None,
            lexicon_neg: None,
            cues: "builtin".into(),
            folds: 10,
            seed: 0,
            out: PathBuf::from("out"),
            formats: vec![ReportFormat::Csv, ReportFormat::Json],
            rules: RuleKind::standard_set(),
            stats_fold: 0,
            scope_boundary: ScopeBoundary::Sentence,
            train: TrainConfig::default(),
            synthetic: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        for r in &self.rules {
            r.validate()?;
        }
        if self.stats_fold >= self.folds {
            return Err(Error::Config(format!(
                "stats_fold {} is not below folds {}",
                self.stats_fold, self.folds
            )));
        }
        Ok(())
    }

    fn cue_list(&self) -> Result<CueList> {
        if self.cues == "builtin" {
            Ok(default_cue_list())
        } else {
            CueList::load(Path::new(&self.cues))
        }
    }

    fn write_effective(&self) -> Result<()> {
        write_file(
            &self.out.join("config_effective.toml"),
            self.to_toml()?.as_bytes(),
        )
    }
}

/// Corpus, lexicon and cues resolved from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Inputs {
    pub corpus: Corpus,
    pub lexicon: Lexicon,
    pub cues: CueList,
}

/// Loads the configured corpus and lexicon, or generates the synthetic
/// corpus when no corpus path is set.
pub fn load_inputs(cfg: &RunConfig) -> Result<Inputs> {
    let cues = cfg.cue_list()?;
    match (&cfg.corpus, &cfg.synthetic) {
        (Some(path), _) => {
            let corpus = load_corpus(path, cfg.format)?;
            let (pos, neg) = match (&cfg.lexicon_pos, &cfg.lexicon_neg) {
                (Some(p), Some(n)) => (p, n),
                _ => {
                    return Err(Error::Config(
                        "lexicon_pos and lexicon_neg are required".into(),
                    ))
                }
            };
            let lexicon = load_lexicon(pos, neg)?;
            Ok(Inputs {
                corpus,
                lexicon,
                cues,
            })
        }
        (None, Some(s)) => {
            let syn = gen_synthetic(s.doc_count, &s.spec, seed::derive(cfg.seed, "synthesis"))?;
            Ok(Inputs {
                corpus: syn.corpus,
                lexicon: syn.lexicon,
                cues,
            })
        }
        (None, None) => Err(Error::Config(
            "no corpus and no synthetic spec configured".into(),
        )),
    }
}

pub fn fold_split(cfg: &RunConfig, corpus: &Corpus) -> Result<FoldSplit> {
    make_folds(corpus, cfg.folds, seed::derive(cfg.seed, "folds"))
}

fn rule_specs(cfg: &RunConfig, cues: &CueList) -> Result<Vec<RuleSpec>> {
    cfg.rules
        .iter()
        .map(|&k| RuleSpec::new(k, cues.clone()))
        .collect()
}

/// Trains one agent per fold, in parallel. Fold `k` trains on every other
/// fold and uses its own documents as the checkpoint holdout.
pub fn train_folds(
    cfg: &RunConfig,
    inputs: &Inputs,
    folds: &FoldSplit,
) -> Result<Vec<TrainOutcome>> {
    let perf = ToneScorer::new(&inputs.lexicon);
    (0..folds.fold_count)
        .into_par_iter()
        .map(|k| {
            let train_docs = inputs.corpus.select(&folds.train_indices(k));
            let holdout = inputs.corpus.select(&folds.test_indices(k));
            let tc = TrainConfig {
                seed: seed::derive(cfg.seed, &format!("train/fold{k}")),
                ..cfg.train.clone()
            };
            log::info!("fold {k}: training on {} documents", train_docs.len());
            train_with_holdout(&train_docs, &holdout, &perf, &tc)
        })
        .collect()
}

/// Checkpoint-wise mean over folds.
pub fn average_history(outcomes: &[TrainOutcome]) -> Vec<Checkpoint> {
    let Some(first) = outcomes.first() else {
        return Vec::new();
    };
    let k = outcomes.len() as f64;
    (0..first.history.len())
        .map(|i| {
            let at = |o: &TrainOutcome| o.history[i];
            let in_sample_r2 = outcomes.iter().map(|o| at(o).in_sample_r2).sum::<f64>() / k;
            let out: Option<Vec<f64>> = outcomes.iter().map(|o| at(o).out_sample_r2).collect();
            Checkpoint {
                iteration: first.history[i].iteration,
                in_sample_r2,
                out_sample_r2: out.map(|v| v.iter().sum::<f64>() / k),
            }
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct ConvergenceRow {
    iteration: usize,
    in_sample_r2: f64,
    out_sample_r2: Option<f64>,
}

pub fn write_convergence<W: Write>(history: &[Checkpoint], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for c in history {
        out.serialize(ConvergenceRow {
            iteration: c.iteration,
            in_sample_r2: c.in_sample_r2,
            out_sample_r2: c.out_sample_r2,
        })?;
    }
    out.flush().map_err(|e| Error::io("<convergence>", e))
}

/// Result of [`cmd_train`].
#[derive(Debug, Clone)]
pub struct TrainRun {
    pub tables: Vec<QTable>,
    pub convergence: Vec<Checkpoint>,
    pub report: EvaluationReport,
}

/// Trains per-fold policies and writes `qtable_fold<k>.tsv`,
/// `convergence.csv` and `evaluation.{csv,json}`.
pub fn cmd_train(cfg: &RunConfig) -> Result<TrainRun> {
    cfg.validate()?;
    let inputs = load_inputs(cfg)?;
    let folds = fold_split(cfg, &inputs.corpus)?;
    let outcomes = train_folds(cfg, &inputs, &folds)?;
    let convergence = average_history(&outcomes);
    let tables: Vec<QTable> = outcomes.into_iter().map(|o| o.q).collect();

    let rules = rule_specs(cfg, &inputs.cues)?;
    let perf = ToneScorer::new(&inputs.lexicon);
    let report = evaluation_report(Some(&tables), &rules, &folds, &inputs.corpus, &perf)?;

    create_dir(&cfg.out)?;
    for (k, q) in tables.iter().enumerate() {
        q.save(&cfg.out.join(format!("qtable_fold{k}.tsv")))?;
    }
    let path = cfg.out.join("convergence.csv");
    write_convergence(&convergence, create(&path)?)?;
    write_report(cfg, &report, "evaluation")?;
    cfg.write_effective()?;
    Ok(TrainRun {
        tables,
        convergence,
        report,
    })
}

/// Scores every configured rule on the same folds as `train` and writes
/// `baselines.{csv,json}`.
pub fn cmd_baselines(cfg: &RunConfig) -> Result<EvaluationReport> {
    cfg.validate()?;
    let inputs = load_inputs(cfg)?;
    let folds = fold_split(cfg, &inputs.corpus)?;
    let rules = rule_specs(cfg, &inputs.cues)?;
    let perf = ToneScorer::new(&inputs.lexicon);
    let report = evaluation_report(None, &rules, &folds, &inputs.corpus, &perf)?;
    create_dir(&cfg.out)?;
    write_report(cfg, &report, "baselines")?;
    cfg.write_effective()?;
    Ok(report)
}

/// Result of [`cmd_stats`].
#[derive(Debug, Clone, Serialize)]
pub struct StatsRun {
    pub scope: ScopeStats,
    pub cues: CueReport,
    pub positional: Vec<PositionalTest>,
}

/// Applies a stored policy to the held-out documents of `stats_fold` and
/// writes `scope_stats.json`, `cue_report.csv` and `welch.json`.
pub fn cmd_stats(cfg: &RunConfig, qtable: &Path) -> Result<StatsRun> {
    cfg.validate()?;
    let q = QTable::load(qtable)?;
    let inputs = load_inputs(cfg)?;
    let folds = fold_split(cfg, &inputs.corpus)?;
    let docs = inputs.corpus.select(&folds.test_indices(cfg.stats_fold));
    let masks: Vec<NegationMask> = docs.iter().map(|d| apply_policy(&q, d)).collect();

    let scope = scope_stats(&masks, &docs, &inputs.lexicon, cfg.scope_boundary)?;
    let cues = cue_report(&q, &masks, &docs, &inputs.cues)?;
    let positional = [Granularity::DocumentHalves, Granularity::SentenceHalves]
        .into_iter()
        .map(|g| positional_test(&masks, &docs, g))
        .collect::<Result<Vec<_>>>()?;

    create_dir(&cfg.out)?;
    write_file(
        &cfg.out.join("scope_stats.json"),
        serde_json::to_string_pretty(&scope)?.as_bytes(),
    )?;
    cues.write_csv(create(&cfg.out.join("cue_report.csv"))?)?;
    write_file(
        &cfg.out.join("welch.json"),
        serde_json::to_string_pretty(&positional)?.as_bytes(),
    )?;
    cfg.write_effective()?;
    Ok(StatsRun {
        scope,
        cues,
        positional,
    })
}

/// Writes the configured synthetic corpus as `synthetic.tsv` (loadable with
/// format `tsv`) and its planted masks as `synthetic_truth.tsv`. Returns the
/// corpus path.
pub fn cmd_synth(cfg: &RunConfig) -> Result<PathBuf> {
    let s = cfg
        .synthetic
        .as_ref()
        .ok_or_else(|| Error::Config("no synthetic spec configured".into()))?;
    let syn = gen_synthetic(s.doc_count, &s.spec, seed::derive(cfg.seed, "synthesis"))?;
    create_dir(&cfg.out)?;
    let corpus = cfg.out.join("synthetic.tsv");
    let mut w = create(&corpus)?;
    syn.write_tsv(&mut w).map_err(|e| Error::io(&corpus, e))?;
    w.flush().map_err(|e| Error::io(&corpus, e))?;
    let truth = cfg.out.join("synthetic_truth.tsv");
    let mut w = create(&truth)?;
    syn.write_truth(&mut w).map_err(|e| Error::io(&truth, e))?;
    w.flush().map_err(|e| Error::io(&truth, e))?;
    cfg.write_effective()?;
    Ok(corpus)
}

fn write_report(cfg: &RunConfig, report: &EvaluationReport, stem: &str) -> Result<()> {
    for f in &cfg.formats {
        match f {
            ReportFormat::Csv => report.write_csv(create(&cfg.out.join(format!("{stem}.csv")))?)?,
            ReportFormat::Json => write_file(
                &cfg.out.join(format!("{stem}.json")),
                report.to_json()?.as_bytes(),
            )?,
        }
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
