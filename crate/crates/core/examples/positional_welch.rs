// Describe negation scopes and test whether negations are more frequent in
// the second half of documents and sentences.

use negscope::analysis::{positional_test, scope_stats, Granularity, ScopeBoundary};
use negscope::baselines::{apply_rule, RuleKind, RuleSpec};
use negscope::corpus::{gen_synthetic, SyntheticSpec};
use negscope::lexicon::CueList;
use negscope::scorer::NegationMask;

pub fn run_example() -> negscope::Result<()> {
    let spec = SyntheticSpec::generated(20, 20, 60, "not", 2);
    let syn = gen_synthetic(300, &spec, 11)?;
    let docs: Vec<_> = syn.corpus.documents.iter().collect();
    let rule = RuleSpec::new(RuleKind::FixedWindow { k: 3 }, CueList::new(["not"])?)?;
    let masks: Vec<NegationMask> = docs.iter().map(|d| apply_rule(&rule, d)).collect();

    let stats = scope_stats(&masks, &docs, &syn.lexicon, ScopeBoundary::Sentence)?;
    println!("{}", serde_json::to_string_pretty(&stats)?);

    for g in [Granularity::DocumentHalves, Granularity::SentenceHalves] {
        let t = positional_test(&masks, &docs, g)?;
        println!(
            "{g:?}: first {:.4}, second {:.4}, diff {:+.4}, t {:+.3}, df {:.1}, p {:.4}",
            t.mean_first,
            t.mean_second,
            t.absolute_diff,
            t.welch.t_stat,
            t.welch.df,
            t.welch.p_two_sided
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
