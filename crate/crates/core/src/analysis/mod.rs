//! Statistics over learned or rule-based negation masks.

mod cues;
mod evaluation;
mod positional;
mod scope;
mod welch;

pub use cues::{cue_report, CueReport, CueRow};
pub use evaluation::{evaluation_report, ApproachScore, EvaluationReport, Masker};
pub use positional::{positional_negation_shares, positional_test, Granularity, PositionalTest};
pub use scope::{scope_stats, ScopeBoundary, ScopeStats};
pub use welch::{student_t_two_sided_p, welch_t_test, TTestResult};
