use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Action, PhaseParams, QTable, State, TrainConfig};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::scorer::{masked_r_squared, NegationMask, PerfFn};
use crate::seed;

/// Traces that decay below this are dropped. Keeps long documents linear
/// in practice; the cut-off contributes less than α·|δ|·1e-12 per step.
const TRACE_FLOOR: f64 = 1e-12;

/// ε-greedy choice. Returns the action and whether it came from the random
/// branch.
pub fn select_action<R: Rng + ?Sized>(
    q: &QTable,
    s: &State,
    epsilon: f64,
    rng: &mut R,
) -> (Action, bool) {
    if epsilon > 0.0 && rng.gen::<f64>() < epsilon {
        let a = if rng.gen::<bool>() {
            Action::Negated
        } else {
            Action::NotNegated
        };
        (a, true)
    } else {
        (q.greedy(s), false)
    }
}

/// Per-step reward: nothing for negating, `c` for leaving a word alone,
/// and at the last word the reduction in absolute error against `y`.
pub fn step_reward(
    action: Action,
    is_terminal: bool,
    y: f64,
    perf0: f64,
    perf_pi: f64,
    c: f64,
) -> f64 {
    if is_terminal {
        (y - perf0).abs() - (y - perf_pi).abs()
    } else {
        match action {
            Action::Negated => 0.0,
            Action::NotNegated => c,
        }
    }
}

/// Eligibility bookkeeping for one episode.
#[derive(Debug, Clone, Default)]
pub struct EpisodeTrace {
    pub visited: Vec<(State, Action)>,
    pub eligibility: HashMap<(State, Action), f64>,
}

impl EpisodeTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        self.visited.clear();
        self.eligibility.clear();
    }
}

/// One Watkins Q(λ) step with replacing traces.
///
/// If `a` is not the greedy action in `s`, every earlier trace is cut
/// before the update, so no earlier decision shares in this or any later
/// TD error. `next` is `None` on the terminal step.
pub fn q_update(
    q: &mut QTable,
    trace: &mut EpisodeTrace,
    s: &State,
    a: Action,
    r: f64,
    next: Option<&State>,
    params: &PhaseParams,
) {
    if a != q.greedy(s) {
        trace.eligibility.clear();
    }
    let bootstrap = match next {
        Some(n) if params.gamma != 0.0 => params.gamma * q.get(n).max(),
        _ => 0.0,
    };
    let delta = r + bootstrap - q.value(s, a);

    trace.visited.push((s.clone(), a));
    trace.eligibility.insert((s.clone(), a), 1.0);
    for ((ts, ta), e) in &trace.eligibility {
        *q.entry(ts).get_mut(*ta) += params.alpha * delta * e;
    }
    let decay = params.trace_decay;
    trace.eligibility.retain(|_, e| {
        *e *= decay;
        *e >= TRACE_FLOOR
    });
}

/// Result of a single pass over one document.
#[derive(Debug, Clone)]
pub struct EpisodeOutcome {
    pub reward_total: f64,
    pub mask: NegationMask,
    pub visited: Vec<(State, Action)>,
}

/// Plays one ε-greedy episode over `doc`, updating `q` as it goes.
pub fn run_episode<R: Rng + ?Sized>(
    q: &mut QTable,
    doc: &Document,
    perf: &dyn PerfFn,
    params: &PhaseParams,
    rng: &mut R,
) -> Result<EpisodeOutcome> {
    episode(q, doc, perf, params, |q, s, _| {
        select_action(q, s, params.epsilon, rng).0
    })
}

/// Plays an episode with the given actions instead of ε-greedy choices.
/// Updates are applied exactly as in [`run_episode`].
pub fn run_scripted_episode(
    q: &mut QTable,
    doc: &Document,
    actions: &[Action],
    perf: &dyn PerfFn,
    params: &PhaseParams,
) -> Result<EpisodeOutcome> {
    if actions.len() != doc.len() {
        return Err(Error::LengthMismatch(actions.len(), doc.len()));
    }
    episode(q, doc, perf, params, |_, _, i| actions[i])
}

fn episode(
    q: &mut QTable,
    doc: &Document,
    perf: &dyn PerfFn,
    params: &PhaseParams,
    mut choose: impl FnMut(&QTable, &State, usize) -> Action,
) -> Result<EpisodeOutcome> {
    let n = doc.len();
    if n == 0 {
        return Err(Error::EmptyCorpus);
    }
    let perf0 = perf.perf(doc, &NegationMask::none(n))?;
    let mut mask = NegationMask::none(n);
    let mut trace = EpisodeTrace::new();
    let mut total = 0.0;
    let mut prev = Action::NotNegated;

    for i in 0..n {
        let s = State::new(doc.tokens[i].as_str(), prev);
        let a = choose(q, &s, i);
        mask.flags[i] = a.is_negated();
        let terminal = i + 1 == n;
        let r = if terminal {
            let perf_pi = perf.perf(doc, &mask)?;
            step_reward(a, true, doc.gold, perf0, perf_pi, params.c)
        } else {
            step_reward(a, false, doc.gold, perf0, perf0, params.c)
        };
        let next = (!terminal).then(|| State::new(doc.tokens[i + 1].as_str(), a));
        q_update(q, &mut trace, &s, a, r, next.as_ref(), params);
        total += r;
        prev = a;
    }
    Ok(EpisodeOutcome {
        reward_total: total,
        mask,
        visited: trace.visited,
    })
}

/// Greedy walk over a document; unseen states fall back to `NotNegated`.
pub fn apply_policy(q: &QTable, doc: &Document) -> NegationMask {
    let mut prev = Action::NotNegated;
    let flags = doc
        .tokens
        .iter()
        .map(|t| {
            let a = q.greedy(&State::new(t.as_str(), prev));
            prev = a;
            a.is_negated()
        })
        .collect();
    NegationMask::new(flags)
}

/// R² of `perf` under the greedy policy of `q`.
pub fn policy_r_squared(q: &QTable, docs: &[&Document], perf: &dyn PerfFn) -> Result<f64> {
    let masks: Vec<NegationMask> = docs.iter().map(|d| apply_policy(q, d)).collect();
    masked_r_squared(docs, &masks, perf)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Checkpoint {
    pub iteration: usize,
    /// NaN when the policy's predictions have zero variance.
    pub in_sample_r2: f64,
    pub out_sample_r2: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub q: QTable,
    pub history: Vec<Checkpoint>,
}

/// Trains a fresh table on `docs`; see [`train_with_holdout`].
pub fn train(docs: &[&Document], perf: &dyn PerfFn, cfg: &TrainConfig) -> Result<TrainOutcome> {
    train_with_holdout(docs, &[], perf, cfg)
}

/// Runs the two-phase schedule. One iteration is one episode; documents are
/// visited in a seeded shuffled order, cycling when exhausted. Every
/// `checkpoint_every` iterations (and at iteration 0) the greedy policy's
/// R² is recorded on `docs` and, if non-empty, on `holdout`.
pub fn train_with_holdout(
    docs: &[&Document],
    holdout: &[&Document],
    perf: &dyn PerfFn,
    cfg: &TrainConfig,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut order: Vec<usize> = (0..docs.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed::derive(
        cfg.seed, "order",
    )));
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, "actions"));

    let mut q = QTable::new();
    let mut history = Vec::new();
    let checkpoint = |q: &QTable, iteration: usize| Checkpoint {
        iteration,
        in_sample_r2: policy_r_squared(q, docs, perf).unwrap_or(f64::NAN),
        out_sample_r2: (!holdout.is_empty())
            .then(|| policy_r_squared(q, holdout, perf).unwrap_or(f64::NAN)),
    };
    history.push(checkpoint(&q, 0));

    let total = cfg.total_iters();
    for it in 0..total {
        let params = cfg.params_at(it);
        let doc = docs[order[it % order.len()]];
        run_episode(&mut q, doc, perf, &params, &mut rng)?;
        let done = it + 1;
        if done % cfg.checkpoint_every == 0 || done == total {
            history.push(checkpoint(&q, done));
        }
    }
    Ok(TrainOutcome { q, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::QValues;
    use crate::lexicon::Lexicon;
    use crate::scorer::ToneScorer;

    fn params(alpha: f64, decay: f64, c: f64) -> PhaseParams {
        PhaseParams {
            epsilon: 0.0,
            alpha,
            gamma: 0.0,
            trace_decay: decay,
            c,
        }
    }

    fn lex() -> Lexicon {
        Lexicon::from_terms("t", ["good", "fantastic"], ["bad"]).unwrap()
    }

    fn table1() -> QTable {
        let mut q = QTable::new();
        let rows = [
            ("this", Action::NotNegated, 3.0, 6.0),
            ("product", Action::NotNegated, 1.0, 3.0),
            ("isn't", Action::NotNegated, 5.0, 1.0),
            ("good", Action::Negated, 3.0, 1.0),
            ("but", Action::Negated, 2.0, 4.0),
            ("fantastic", Action::NotNegated, 2.0, 3.0),
        ];
        for (t, p, n, nn) in rows {
            q.set(
                State::new(t, p),
                QValues {
                    negated: n,
                    not_negated: nn,
                },
            );
        }
        q
    }

    #[test]
    fn greedy_follows_table() {
        let q = table1();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = State::new("isn't", Action::NotNegated);
        assert_eq!(
            select_action(&q, &s, 0.0, &mut rng),
            (Action::Negated, false)
        );
        let unseen = State::initial("zebra");
        assert_eq!(
            select_action(&q, &unseen, 0.0, &mut rng).0,
            Action::NotNegated
        );
    }

    #[test]
    fn uniform_exploration() {
        let q = table1();
        let s = State::new("isn't", Action::NotNegated);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 10_000;
        let negated = (0..n)
            .filter(|_| {
                let (a, explored) = select_action(&q, &s, 1.0, &mut rng);
                assert!(explored);
                a == Action::Negated
            })
            .count() as f64;
        let sigma = (n as f64 * 0.25).sqrt();
        assert!((negated - n as f64 / 2.0).abs() < 3.0 * sigma, "{negated}");
    }

    #[test]
    fn rewards() {
        assert_eq!(
            step_reward(Action::Negated, false, 1.0, 0.0, 0.0, 0.005),
            0.0
        );
        assert_eq!(
            step_reward(Action::NotNegated, false, 1.0, 0.0, 0.0, 0.005),
            0.005
        );
        let r = step_reward(Action::Negated, true, -1.0, 0.2, -0.2, 0.005);
        assert!((r - 0.4).abs() < 1e-15);
    }

    #[test]
    fn single_step_update() {
        let mut q = QTable::new();
        let mut trace = EpisodeTrace::new();
        let s = State::initial("w");
        q_update(
            &mut q,
            &mut trace,
            &s,
            Action::NotNegated,
            0.4,
            None,
            &params(0.5, 0.8, 0.0),
        );
        assert_eq!(q.value(&s, Action::NotNegated), 0.2);
    }

    #[test]
    fn table1_policy() {
        let q = table1();
        let doc = Document::from_text("d", "this product isn't good but fantastic", 1.0).unwrap();
        assert_eq!(apply_policy(&q, &doc).to_bit_string(), "001100");
    }

    #[test]
    fn empty_table_negates_nothing() {
        let doc = Document::from_text("d", "not bad at all", 1.0).unwrap();
        assert_eq!(apply_policy(&QTable::new(), &doc).negated_count(), 0);
        assert_eq!(apply_policy(&table1(), &doc).negated_count(), 0);
    }

    #[test]
    fn one_word_episode() {
        let l = lex();
        let mut q = QTable::new();
        let doc = Document::from_tokens("d", ["good"], 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = run_episode(
            &mut q,
            &doc,
            &ToneScorer::new(&l),
            &params(0.1, 0.8, 0.005),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.reward_total, 0.0);
        assert_eq!(out.mask.to_bit_string(), "0");
    }

    #[test]
    fn forced_negation_episode() {
        let l = lex();
        let mut q = QTable::new();
        let doc = Document::from_tokens("d", ["isn't", "good"], -1.0).unwrap();
        let out = run_scripted_episode(
            &mut q,
            &doc,
            &[Action::Negated, Action::Negated],
            &ToneScorer::new(&l),
            &params(0.1, 0.8, 0.005),
        )
        .unwrap();
        assert_eq!(out.reward_total, 1.0);
        assert_eq!(out.mask.to_bit_string(), "11");
    }

    #[test]
    fn all_default_episode_collects_c() {
        let l = lex();
        let mut q = QTable::new();
        let doc = Document::from_text("d", "a good film but a bad ending", 0.3).unwrap();
        let actions = vec![Action::NotNegated; doc.len()];
        let out = run_scripted_episode(
            &mut q,
            &doc,
            &actions,
            &ToneScorer::new(&l),
            &params(0.1, 0.8, 0.005),
        )
        .unwrap();
        assert!((out.reward_total - 0.005 * 6.0).abs() < 1e-15);
    }

    #[test]
    fn zero_iterations_give_empty_table() {
        let l = lex();
        let docs: Vec<Document> = ["good film", "bad film", "not good", "fantastic"]
            .iter()
            .enumerate()
            .map(|(i, t)| Document::from_text(format!("d{i}"), t, i as f64 / 3.0).unwrap())
            .collect();
        let refs: Vec<&Document> = docs.iter().collect();
        let cfg = TrainConfig {
            phase1_iters: 0,
            phase2_iters: 0,
            ..Default::default()
        };
        let out = train(&refs, &ToneScorer::new(&l), &cfg).unwrap();
        assert!(out.q.is_empty());
        assert_eq!(out.history.len(), 1);
        assert!(docs
            .iter()
            .all(|d| apply_policy(&out.q, d).negated_count() == 0));
    }

    #[test]
    fn empty_training_set_rejected() {
        let l = lex();
        assert!(train(&[], &ToneScorer::new(&l), &TrainConfig::default()).is_err());
    }

    /// Plain-vector trace recursion for an episode of distinct states.
    fn replay(rewards: &[f64], alpha: f64, decay: f64) -> Vec<f64> {
        let (mut q, mut e) = (vec![0.0; rewards.len()], vec![0.0; rewards.len()]);
        for t in 0..rewards.len() {
            let d = rewards[t] - q[t];
            e[t] = 1.0;
            (0..=t).for_each(|j| q[j] += alpha * d * e[j]);
            (0..=t).for_each(|j| e[j] *= decay);
        }
        q
    }

    fn run_steps(rewards: &[f64], actions: &[Action], p: &PhaseParams) -> (QTable, Vec<State>) {
        let mut q = QTable::new();
        let mut trace = EpisodeTrace::new();
        let states: Vec<State> = (0..rewards.len())
            .map(|i| State::initial(format!("w{i}")))
            .collect();
        for i in 0..rewards.len() {
            let next = states.get(i + 1);
            q_update(
                &mut q, &mut trace, &states[i], actions[i], rewards[i], next, p,
            );
        }
        (q, states)
    }

    #[test]
    fn two_step_trace() {
        let p = params(1.0, 0.5, 0.0);
        let a = [Action::NotNegated; 2];
        let (q, s) = run_steps(&[0.0, 1.0], &a, &p);
        let oracle = replay(&[0.0, 1.0], 1.0, 0.5);
        assert!((q.value(&s[0], a[0]) - 0.5).abs() < 1e-12);
        assert!((q.value(&s[1], a[1]) - 1.0).abs() < 1e-12);
        assert!((q.value(&s[0], a[0]) - oracle[0]).abs() < 1e-12);
        assert!((q.value(&s[1], a[1]) - oracle[1]).abs() < 1e-12);
    }

    #[test]
    fn exploratory_step_cuts_trace() {
        let p = params(1.0, 0.5, 0.0);
        let a = [Action::NotNegated, Action::Negated];
        let (q, s) = run_steps(&[0.0, 1.0], &a, &p);
        assert_eq!(q.value(&s[0], a[0]), 0.0);
        assert_eq!(q.value(&s[1], a[1]), 1.0);
    }

    #[test]
    fn gamma_bootstraps_from_next_state() {
        let mut q = QTable::new();
        let next = State::initial("n");
        q.set(
            next.clone(),
            QValues {
                negated: 2.0,
                not_negated: 1.0,
            },
        );
        let s = State::initial("s");
        let p = PhaseParams {
            gamma: 0.5,
            ..params(1.0, 0.0, 0.0)
        };
        q_update(
            &mut q,
            &mut EpisodeTrace::new(),
            &s,
            Action::NotNegated,
            0.1,
            Some(&next),
            &p,
        );
        assert!((q.value(&s, Action::NotNegated) - 1.1).abs() < 1e-15);
    }

    fn toy_docs() -> Vec<Document> {
        [
            "not good at all",
            "a good film",
            "bad and not fantastic",
            "never good",
            "fantastic",
        ]
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Document::from_text(format!("d{i}"), t, [-0.5, 1.0, -1.0, 0.0, 0.8][i]).unwrap()
        })
        .collect()
    }

    #[test]
    fn training_is_deterministic() {
        let l = lex();
        let docs = toy_docs();
        let refs: Vec<&Document> = docs.iter().collect();
        let cfg = TrainConfig {
            epsilon: 0.3,
            alpha: 0.2,
            phase1_iters: 200,
            phase2_iters: 50,
            checkpoint_every: 50,
            seed: 9,
            ..Default::default()
        };
        let a = train(&refs, &ToneScorer::new(&l), &cfg).unwrap();
        let b = train(&refs, &ToneScorer::new(&l), &cfg).unwrap();
        assert_eq!(a.q, b.q);
        assert_eq!(a.history.len(), 6);
        assert!(!a.q.contains(&State::initial("zebra")));
        assert!(a
            .q
            .sorted_rows()
            .iter()
            .all(|(s, _)| docs.iter().any(|d| d.tokens.contains(&s.token))));
    }

    proptest::proptest! {
        #[test]
        fn greedy_chain_matches_replay(
            rewards in proptest::collection::vec(-1.0f64..1.0, 1..12),
            alpha in 0.01f64..1.0,
            decay in 0.0f64..1.0,
        ) {
            let a = vec![Action::NotNegated; rewards.len()];
            let (q, s) = run_steps(&rewards, &a, &params(alpha, decay, 0.0));
            for (st, want) in s.iter().zip(replay(&rewards, alpha, decay)) {
                proptest::prop_assert!((q.value(st, Action::NotNegated) - want).abs() < 1e-12);
            }
        }

        #[test]
        fn terminal_reward_bounded_by_tone_shift(
            y in -1.0f64..1.0, p0 in -1.0f64..1.0, p1 in -1.0f64..1.0,
        ) {
            let r = step_reward(Action::Negated, true, y, p0, p1, 0.005);
            proptest::prop_assert!(r.abs() <= (p0 - p1).abs() + 1e-15);
        }
    }
}
