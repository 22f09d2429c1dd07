// End-to-end run through the experiment API: write a synthetic corpus,
// load it back as a TSV corpus with lexicon files, train per-fold policies
// and print the evaluation table.

use std::fs;

use negscope::agent::TrainConfig;
use negscope::experiment::{cmd_stats, cmd_synth, cmd_train, RunConfig, SynthConfig};

pub fn run_example() -> negscope::Result<()> {
    let out = std::env::temp_dir().join(format!("negscope-cv-{}", std::process::id()));
    let synth = SynthConfig {
        doc_count: 300,
        ..SynthConfig::default()
    };
    let mut cfg = RunConfig {
        folds: 5,
        seed: 42,
        out: out.clone(),
        synthetic: Some(synth.clone()),
        train: TrainConfig {
            phase1_iters: 800,
            phase2_iters: 200,
            ..TrainConfig::default()
        },
        ..RunConfig::default()
    };
    let corpus = cmd_synth(&cfg)?;

    let write = |name: &str, terms: &[String]| -> negscope::Result<std::path::PathBuf> {
        let p = out.join(name);
        fs::write(&p, terms.join("\n")).map_err(|e| negscope::Error::Io {
            path: p.clone(),
            source: e,
        })?;
        Ok(p)
    };
    cfg.corpus = Some(corpus);
    cfg.lexicon_pos = Some(write("positive.txt", &synth.spec.positive)?);
    cfg.lexicon_neg = Some(write("negative.txt", &synth.spec.negative)?);
    cfg.synthetic = None;

    let run = cmd_train(&cfg)?;
    print!("{}", run.report.to_table());
    let stats = cmd_stats(&cfg, &out.join("qtable_fold0.tsv"))?;
    println!("scopes on fold 0: {}", stats.scope.scope_count_total);
    println!("outputs in {}", out.display());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
