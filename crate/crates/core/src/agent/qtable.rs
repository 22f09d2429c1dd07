use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Action, State};
use crate::error::{Error, Result};

/// Expected reward of both actions in one state.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QValues {
    pub negated: f64,
    pub not_negated: f64,
}

impl QValues {
    pub fn get(&self, a: Action) -> f64 {
        match a {
            Action::Negated => self.negated,
            Action::NotNegated => self.not_negated,
        }
    }

    pub fn get_mut(&mut self, a: Action) -> &mut f64 {
        match a {
            Action::Negated => &mut self.negated,
            Action::NotNegated => &mut self.not_negated,
        }
    }

    /// Greedy action; ties go to `NotNegated`.
    pub fn best(&self) -> Action {
        if self.negated > self.not_negated {
            Action::Negated
        } else {
            Action::NotNegated
        }
    }

    pub fn max(&self) -> f64 {
        self.negated.max(self.not_negated)
    }

    /// Gap between the best and the second-best action value.
    pub fn confidence(&self) -> f64 {
        (self.negated - self.not_negated).abs()
    }
}

/// The learned state-action function. States never written read as zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QTable {
    values: HashMap<State, QValues>,
}

impl QTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, s: &State) -> QValues {
        self.values.get(s).copied().unwrap_or_default()
    }

    pub fn value(&self, s: &State, a: Action) -> f64 {
        self.get(s).get(a)
    }

    pub fn greedy(&self, s: &State) -> Action {
        self.get(s).best()
    }

    pub fn contains(&self, s: &State) -> bool {
        self.values.contains_key(s)
    }

    pub fn set(&mut self, s: State, v: QValues) {
        self.values.insert(s, v);
    }

    pub(crate) fn entry(&mut self, s: &State) -> &mut QValues {
        if !self.values.contains_key(s) {
            self.values.insert(s.clone(), QValues::default());
        }
        self.values.get_mut(s).expect("just inserted")
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Rows sorted by token, then previous action label.
    pub fn sorted_rows(&self) -> Vec<(&State, &QValues)> {
        let mut rows: Vec<_> = self.values.iter().collect();
        rows.sort_by(|a, b| {
            (a.0.token.as_str(), a.0.prev.label()).cmp(&(b.0.token.as_str(), b.0.prev.label()))
        });
        rows
    }

    /// `token<TAB>prev_action<TAB>q_negated<TAB>q_not_negated` per state.
    pub fn write_tsv<W: Write>(&self, mut w: W) -> Result<()> {
        for (s, v) in self.sorted_rows() {
            if s.token.contains(['\t', '\n', '\r']) {
                return Err(Error::Config(format!(
                    "token {:?} cannot be exported",
                    s.token
                )));
            }
            writeln!(
                w,
                "{}\t{}\t{:?}\t{:?}",
                s.token,
                s.prev.label(),
                v.negated,
                v.not_negated
            )
            .map_err(|e| Error::io("<qtable>", e))?;
        }
        Ok(())
    }

    pub fn read_tsv<R: BufRead>(r: R) -> Result<Self> {
        let mut q = QTable::new();
        for (n, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<qtable>", e))?;
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| Error::Parse {
                line: n + 1,
                message,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(bad("expected 4 fields".into()));
            }
            let prev = Action::from_label(fields[1])
                .ok_or_else(|| bad(format!("unknown action {:?}", fields[1])))?;
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| bad(format!("bad number {s:?}")))
            };
            let v = QValues {
                negated: num(fields[2])?,
                not_negated: num(fields[3])?,
            };
            q.set(State::new(fields[0], prev), v);
        }
        Ok(q)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(f);
        self.write_tsv(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        QTable::read_tsv(BufReader::new(f))
    }
}
