// Tokenize a review, then score its tone with and without a negation mask.

use negscope::corpus::{tokenize, Document};
use negscope::lexicon::Lexicon;
use negscope::scorer::{tone, NegationMask};

pub fn run_example() -> negscope::Result<()> {
    let text = "This product isn't good. But the battery is fantastic!";
    let (tokens, sentences) = tokenize(text);
    println!("tokens:    {tokens:?}");
    println!("sentences: {sentences:?}");

    let lexicon = Lexicon::from_terms("toy", ["good", "fantastic"], ["bad", "poor"])?;
    let doc = Document::from_text("review-1", text, -0.2)?;

    let plain = tone(&doc, &NegationMask::none(doc.len()), &lexicon)?;
    // Negate the word right after "isn't".
    let mut flags = vec![false; doc.len()];
    flags[3] = true;
    let negated = tone(&doc, &NegationMask::new(flags), &lexicon)?;

    println!(
        "tone without negation: {:+.3} ({} pos, {} neg)",
        plain.score, plain.pos_count, plain.neg_count
    );
    println!(
        "tone with 'good' negated: {:+.3} ({} pos, {} neg)",
        negated.score, negated.pos_count, negated.neg_count
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
