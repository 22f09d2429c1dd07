//! Learning latent negation scopes from document-level ratings.
//!
//! A tabular Watkins Q(λ) agent walks each document word by word and
//! decides whether the current word is negated. Its only feedback is how
//! much closer the negation-adjusted lexicon tone gets to the document's
//! gold rating, compared to leaving negations untreated. The crate also
//! ships the surrounding evaluation machinery: tokenization and corpus
//! loading, rule-based negation baselines, cross-validated R² reports,
//! scope statistics and Welch t-tests on where negations occur.
//!
//! ```
//! use negscope::{corpus::Document, lexicon::Lexicon, scorer::{tone, NegationMask}};
//!
//! let lexicon = Lexicon::from_terms("toy", ["good"], ["bad"]).unwrap();
//! let doc = Document::from_text("d1", "this is a good product", 1.0).unwrap();
//! let plain = tone(&doc, &NegationMask::none(doc.len()), &lexicon).unwrap();
//! assert_eq!(plain.score, 0.2);
//! ```

pub mod agent;
pub mod analysis;
pub mod baselines;
pub mod corpus;
pub mod error;
pub mod experiment;
pub mod lexicon;
pub mod scorer;
pub mod seed;

pub use agent::{apply_policy, train, Action, QTable, State, TraceMode, TrainConfig};
pub use baselines::{apply_rule, RuleKind, RuleSpec};
pub use corpus::{Corpus, Document, FoldSplit};
pub use error::{Error, Result};
pub use lexicon::{CueList, Lexicon, Polarity};
pub use scorer::{r_squared, tone, NegationMask, PerfFn, ToneScorer};
