//! Tabular Watkins Q(λ) agent that decides, word by word, whether a word is
//! negated.
//!
//! A state is the current word together with the action taken on the
//! previous word, so a negation opened by a cue can carry over to the
//! following words until some word closes it. Non-terminal steps pay `c`
//! for leaving a word alone and nothing for negating it. The last word of a
//! document pays the improvement in absolute error against the gold rating
//! that the episode's mask achieves over no negation at all.

mod learner;
mod qtable;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use learner::{
    apply_policy, q_update, run_episode, run_scripted_episode, select_action, step_reward, train,
    train_with_holdout, Checkpoint, EpisodeOutcome, EpisodeTrace, TrainOutcome,
};
pub use qtable::{QTable, QValues};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Negated,
    NotNegated,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Negated, Action::NotNegated];

    pub fn label(self) -> &'static str {
        match self {
            Action::Negated => "negated",
            Action::NotNegated => "not_negated",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "negated" => Some(Action::Negated),
            "not_negated" => Some(Action::NotNegated),
            _ => None,
        }
    }

    pub fn is_negated(self) -> bool {
        self == Action::Negated
    }
}

/// A word paired with the action emitted on the word before it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub token: String,
    pub prev: Action,
}

impl State {
    pub fn new(token: impl Into<String>, prev: Action) -> Self {
        State {
            token: token.into(),
            prev,
        }
    }

    /// State of the first word in a document.
    pub fn initial(token: impl Into<String>) -> Self {
        State::new(token, Action::NotNegated)
    }
}

/// How eligibility traces decay between steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TraceMode {
    /// Multiply by λ only. With γ = 0 this still lets the terminal reward
    /// reach the earlier words of an episode.
    #[default]
    #[serde(rename = "lambda")]
    Lambda,
    /// Textbook Watkins decay by γλ.
    #[serde(rename = "gamma-lambda")]
    GammaLambda,
}

impl std::str::FromStr for TraceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(TraceMode::Lambda),
            "gamma-lambda" => Ok(TraceMode::GammaLambda),
            other => Err(Error::Config(format!("unknown trace mode {other:?}"))),
        }
    }
}

/// Hyperparameters of the two-phase training schedule.
///
/// Defaults: 4000 exploratory iterations with
/// ε = 0.001 and α = 0.005, then 1000 fine-tuning iterations with
/// ε = 0.0001 and α = 0.001, γ = 0 throughout, c = 0.005 and λ = 0.8.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub c: f64,
    pub phase1_iters: usize,
    pub phase2_iters: usize,
    pub phase2_epsilon: f64,
    pub phase2_alpha: f64,
    pub trace_mode: TraceMode,
    /// Record the greedy policy's R² every this many iterations.
    pub checkpoint_every: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epsilon: 0.001,
            alpha: 0.005,
            gamma: 0.0,
            lambda: 0.8,
            c: 0.005,
            phase1_iters: 4000,
            phase2_iters: 1000,
            phase2_epsilon: 0.0001,
            phase2_alpha: 0.001,
            trace_mode: TraceMode::Lambda,
            checkpoint_every: 100,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} outside [0, 1]")))
            }
        };
        let rate = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} = {v} outside (0, 1]")))
            }
        };
        unit("epsilon", self.epsilon)?;
        unit("phase2_epsilon", self.phase2_epsilon)?;
        rate("alpha", self.alpha)?;
        rate("phase2_alpha", self.phase2_alpha)?;
        unit("gamma", self.gamma)?;
        unit("lambda", self.lambda)?;
        if !self.c.is_finite() {
            return Err(Error::Config("c must be finite".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::Config("checkpoint_every must be positive".into()));
        }
        Ok(())
    }

    pub fn total_iters(&self) -> usize {
        self.phase1_iters + self.phase2_iters
    }

    /// Rates in effect at a zero-based iteration index.
    pub fn params_at(&self, iteration: usize) -> PhaseParams {
        let (epsilon, alpha) = if iteration < self.phase1_iters {
            (self.epsilon, self.alpha)
        } else {
            (self.phase2_epsilon, self.phase2_alpha)
        };
        PhaseParams {
            epsilon,
            alpha,
            gamma: self.gamma,
            trace_decay: match self.trace_mode {
                TraceMode::Lambda => self.lambda,
                TraceMode::GammaLambda => self.gamma * self.lambda,
            },
            c: self.c,
        }
    }
}

/// Rates for a single step; derived from [`TrainConfig`] per phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub trace_decay: f64,
    pub c: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_switch() {
        let cfg = TrainConfig::default();
        assert_eq!(cfg.params_at(0).epsilon, 0.001);
        assert_eq!(cfg.params_at(3999).alpha, 0.005);
        assert_eq!(cfg.params_at(4000).epsilon, 0.0001);
        assert_eq!(cfg.params_at(4999).alpha, 0.001);
        assert_eq!(cfg.params_at(0).trace_decay, 0.8);
        let strict = TrainConfig {
            trace_mode: TraceMode::GammaLambda,
            ..cfg
        };
        assert_eq!(strict.params_at(0).trace_decay, 0.0);
    }

    #[test]
    fn validation() {
        assert!(TrainConfig::default().validate().is_ok());
        let bad = TrainConfig {
            alpha: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrainConfig {
            epsilon: 1.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn labels_round_trip() {
        for a in Action::ALL {
            assert_eq!(Action::from_label(a.label()), Some(a));
        }
        assert_eq!(
            "gamma-lambda".parse::<TraceMode>().unwrap(),
            TraceMode::GammaLambda
        );
    }
}
