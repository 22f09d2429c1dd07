use std::fs;
use std::path::Path;

use negscope::agent::{QTable, TrainConfig};
use negscope::experiment::{
    cmd_baselines, cmd_stats, cmd_synth, cmd_train, load_inputs, RunConfig, SynthConfig,
};
use negscope::scorer::tone;

fn config(out: &Path) -> RunConfig {
    RunConfig {
        folds: 4,
        seed: 5,
        out: out.to_path_buf(),
        synthetic: Some(SynthConfig {
            doc_count: 120,
            ..SynthConfig::default()
        }),
        train: TrainConfig {
            epsilon: 0.1,
            alpha: 0.1,
            phase1_iters: 300,
            phase2_iters: 100,
            checkpoint_every: 50,
            ..TrainConfig::default()
        },
        ..RunConfig::default()
    }
}

fn read(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

#[test]
fn train_writes_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = cmd_train(&config(dir.path())).unwrap();
    for k in 0..4 {
        assert!(dir.path().join(format!("qtable_fold{k}.tsv")).exists());
    }
    for f in [
        "convergence.csv",
        "evaluation.csv",
        "evaluation.json",
        "config_effective.toml",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let conv = String::from_utf8(read(&dir.path().join("convergence.csv"))).unwrap();
    assert_eq!(
        conv.lines().next(),
        Some("iteration,in_sample_r2,out_sample_r2")
    );
    assert_eq!(conv.lines().count(), 1 + run.convergence.len());
    assert_eq!(run.convergence.len(), 9);
    assert_eq!(run.report.rows.len(), 9);
    assert_eq!(run.report.rows.last().unwrap().approach, "learned policy");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    cmd_train(&config(a.path())).unwrap();
    let mut echoed = RunConfig::load(&a.path().join("config_effective.toml")).unwrap();
    echoed.out = b.path().to_path_buf();
    cmd_train(&echoed).unwrap();
    for k in 0..4 {
        let f = format!("qtable_fold{k}.tsv");
        assert_eq!(read(&a.path().join(&f)), read(&b.path().join(&f)), "{f}");
    }
    for f in ["convergence.csv", "evaluation.csv", "evaluation.json"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
}

#[test]
fn zero_iterations_give_baseline_policy() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path());
    cfg.train.phase1_iters = 0;
    cfg.train.phase2_iters = 0;
    let run = cmd_train(&cfg).unwrap();
    let base = run.report.row("no negation").unwrap();
    let policy = run.report.row("learned policy").unwrap();
    assert_eq!(base.in_sample_r2, policy.in_sample_r2);
    assert_eq!(base.out_sample_r2, policy.out_sample_r2);
    assert!(run.tables.iter().all(QTable::is_empty));
}

#[test]
fn baselines_match_train_benchmark() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let report = cmd_baselines(&config(a.path())).unwrap();
    assert_eq!(report.rows.len(), 8);
    assert!(a.path().join("baselines.csv").exists());
    let run = cmd_train(&config(b.path())).unwrap();
    assert_eq!(report.rows[0], run.report.rows[0]);
}

#[test]
fn stats_on_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let empty = dir.path().join("empty.tsv");
    fs::write(&empty, "").unwrap();
    let stats = cmd_stats(&cfg, &empty).unwrap();
    assert_eq!(stats.scope.scope_count_total, 0);
    assert_eq!(stats.scope.mean_len, 0.0);
    assert_eq!(stats.cues.rows.len(), 8);
    assert_eq!(stats.positional.len(), 2);
    for t in &stats.positional {
        assert_eq!((t.welch.t_stat, t.welch.p_two_sided), (0.0, 1.0));
    }
    for f in ["scope_stats.json", "cue_report.csv", "welch.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let again = cmd_stats(&cfg, &empty).unwrap();
    assert_eq!(
        serde_json::to_string(&again).unwrap(),
        serde_json::to_string(&stats).unwrap()
    );
}

#[test]
fn synth_output_round_trips() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut cfg = config(a.path());
    cfg.synthetic.as_mut().unwrap().doc_count = 100;
    let path = cmd_synth(&cfg).unwrap();
    cfg.out = b.path().to_path_buf();
    let again = cmd_synth(&cfg).unwrap();
    assert_eq!(read(&path), read(&again));

    let text = String::from_utf8(read(&path)).unwrap();
    assert_eq!(text.lines().count(), 100);
    let truth = String::from_utf8(read(&a.path().join("synthetic_truth.tsv"))).unwrap();
    let inputs = load_inputs(&cfg).unwrap();
    for ((line, mask_line), doc) in text
        .lines()
        .zip(truth.lines())
        .zip(&inputs.corpus.documents)
    {
        let fields: Vec<&str> = line.split('\t').collect();
        let bits = mask_line.split('\t').nth(1).unwrap();
        let mask = negscope::NegationMask::from_bit_string(bits).unwrap();
        let rescored = tone(doc, &mask, &inputs.lexicon).unwrap().score;
        assert_eq!(fields[1].parse::<f64>().unwrap(), rescored);
    }
}

#[test]
fn missing_corpus_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path());
    cfg.corpus = Some(dir.path().join("absent.tsv"));
    let err = cmd_train(&cfg).unwrap_err().to_string();
    assert!(err.contains("absent.tsv"), "{err}");
}
