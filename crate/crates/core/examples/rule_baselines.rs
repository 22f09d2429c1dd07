// Apply the cue-list rules to a sentence and compare them by
// cross-validated R² on a synthetic corpus whose true scope is 2 words.

use negscope::analysis::evaluation_report;
use negscope::baselines::{apply_rule, RuleKind, RuleSpec};
use negscope::corpus::{gen_synthetic, make_folds, Document, SyntheticSpec};
use negscope::lexicon::{default_cue_list, CueList};
use negscope::scorer::ToneScorer;

pub fn run_example() -> negscope::Result<()> {
    let doc = Document::from_text("d", "I did not like the plot. The cast is never dull", 0.0)?;
    for kind in RuleKind::standard_set() {
        let rule = RuleSpec::new(kind, default_cue_list())?;
        println!(
            "{:>24}  {}",
            kind.to_string(),
            apply_rule(&rule, &doc).to_bit_string()
        );
    }

    let spec = SyntheticSpec::generated(20, 20, 60, "not", 2);
    let syn = gen_synthetic(500, &spec, 3)?;
    let folds = make_folds(&syn.corpus, 5, 3)?;
    let cues = CueList::new(["not"])?;
    let rules = RuleKind::standard_set()
        .into_iter()
        .map(|k| RuleSpec::new(k, cues.clone()))
        .collect::<negscope::Result<Vec<_>>>()?;
    let report = evaluation_report(
        None,
        &rules,
        &folds,
        &syn.corpus,
        &ToneScorer::new(&syn.lexicon),
    )?;
    print!("{}", report.to_table());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
