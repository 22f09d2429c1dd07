// Train an agent on a synthetic corpus with one planted negation cue and
// inspect what it learned about the cue.
//
// Pass `full` as the first argument for the 2,000-document corpus and the
// default 5,000-episode schedule.

use negscope::agent::{apply_policy, train_with_holdout, Action, State, TrainConfig};
use negscope::corpus::{gen_synthetic, make_folds, SyntheticSpec};
use negscope::scorer::{masked_r_squared, NegationMask, ToneScorer};

pub fn run_example() -> negscope::Result<()> {
    let full = std::env::args().nth(1).as_deref() == Some("full");
    let spec = SyntheticSpec::generated(20, 20, 60, "not", 2);
    let (docs, cfg) = if full {
        (2000, TrainConfig::default())
    } else {
        let cfg = TrainConfig {
            phase1_iters: 400,
            phase2_iters: 100,
            ..TrainConfig::default()
        };
        (200, cfg)
    };
    let syn = gen_synthetic(docs, &spec, 7)?;
    let folds = make_folds(&syn.corpus, 10, 1)?;
    let train_docs = syn.corpus.select(&folds.train_indices(0));
    let test_docs = syn.corpus.select(&folds.test_indices(0));
    let perf = ToneScorer::new(&syn.lexicon);

    let out = train_with_holdout(&train_docs, &test_docs, &perf, &cfg)?;
    let cue = out.q.get(&State::new("not", Action::NotNegated));
    println!("states learned: {}", out.q.len());
    println!(
        "Q(not, not_negated): negated {:+.5}, not_negated {:+.5} -> {}",
        cue.negated,
        cue.not_negated,
        cue.best().label()
    );

    let plain: Vec<NegationMask> = test_docs
        .iter()
        .map(|d| NegationMask::none(d.len()))
        .collect();
    let learned: Vec<NegationMask> = test_docs.iter().map(|d| apply_policy(&out.q, d)).collect();
    println!(
        "held-out R2, no negation:  {:.4}",
        masked_r_squared(&test_docs, &plain, &perf)?
    );
    println!(
        "held-out R2, learned:      {:.4}",
        masked_r_squared(&test_docs, &learned, &perf)?
    );
    for c in out.history.iter().rev().take(3) {
        println!(
            "iteration {:>5}: in-sample R2 {:.4}",
            c.iteration, c.in_sample_r2
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
