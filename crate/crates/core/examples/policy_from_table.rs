// Build a small state-action table by hand, apply its greedy policy and
// round-trip it through the TSV export.

use negscope::agent::{apply_policy, Action, QTable, QValues, State};
use negscope::corpus::Document;

pub fn run_example() -> negscope::Result<()> {
    let mut q = QTable::new();
    let rows = [
        ("this", Action::NotNegated, 3.0, 6.0),
        ("product", Action::NotNegated, 1.0, 3.0),
        ("isn't", Action::NotNegated, 5.0, 1.0),
        ("good", Action::Negated, 3.0, 1.0),
        ("but", Action::Negated, 2.0, 4.0),
        ("fantastic", Action::NotNegated, 2.0, 3.0),
    ];
    for (token, prev, negated, not_negated) in rows {
        q.set(
            State::new(token, prev),
            QValues {
                negated,
                not_negated,
            },
        );
    }

    let doc = Document::from_text("d", "This product isn't good but fantastic", 0.0)?;
    let mask = apply_policy(&q, &doc);
    for (t, f) in doc.tokens.iter().zip(&mask.flags) {
        println!("{t:>10}  {}", if *f { "negated" } else { "-" });
    }

    let mut tsv = Vec::new();
    q.write_tsv(&mut tsv)?;
    print!("{}", String::from_utf8_lossy(&tsv));
    let back = QTable::read_tsv(tsv.as_slice())?;
    assert_eq!(back, q);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
