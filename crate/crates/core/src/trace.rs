//! Run outcomes, schedulers and traces shared by the choreography and the
//! network engines.

use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::syntax::{Expr, Label, ProcName, ProcState};

/// How a run picks the next step among the enabled ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheduler {
    /// Always the first enabled step in position order.
    Leftmost,
    /// Uniformly random choice from a seeded generator.
    Random(u64),
    /// Every choice, up to the given number of steps.
    Exhaustive(usize),
}

impl Scheduler {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Scheduler::Random(s) => Some(*s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Outcome {
    Terminated,
    FuelExhausted,
    Stuck,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Terminated => "Terminated",
            Outcome::FuelExhausted => "FuelExhausted",
            Outcome::Stuck => "Stuck",
        })
    }
}

/// What a single reduction step did, in terms both calculi share.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Com {
        sender: ProcName,
        expr: Expr,
        receiver: ProcName,
    },
    Sel {
        sender: ProcName,
        receiver: ProcName,
        label: Label,
    },
    /// `decider` received `expr` evaluated at `sender` and compared it with its
    /// own value.
    Cond {
        decider: ProcName,
        sender: ProcName,
        expr: Expr,
        then_taken: bool,
    },
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Com { sender, expr, receiver } => write!(f, "{sender}.{expr} -> {receiver}"),
            Action::Sel { sender, receiver, label } => write!(f, "{sender} -> {receiver}[{label}]"),
            Action::Cond { decider, sender, expr, then_taken } => {
                let branch = if *then_taken { "then" } else { "else" };
                if *expr == Expr::Cell {
                    write!(f, "if {decider} = {sender} ({branch})")
                } else {
                    write!(f, "if {decider} = {sender}.{expr} ({branch})")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot<C> {
    pub config: C,
    pub state: ProcState,
    /// The step that produced this snapshot; `None` for the initial one.
    pub action: Option<Action>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace<C> {
    pub steps: Vec<Snapshot<C>>,
    pub outcome: Outcome,
    pub seed: Option<u64>,
}

impl<C> Trace<C> {
    pub fn final_state(&self) -> &ProcState {
        &self.steps.last().expect("a trace is never empty").state
    }

    pub fn final_config(&self) -> &C {
        &self.steps.last().expect("a trace is never empty").config
    }

    /// Number of reduction steps taken.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn states(&self) -> Vec<ProcState> {
        self.steps.iter().map(|s| s.state.clone()).collect()
    }

    pub fn actions(&self) -> Vec<Action> {
        self.steps.iter().filter_map(|s| s.action.clone()).collect()
    }
}

impl<C: fmt::Display> Trace<C> {
    /// Line-delimited JSON: one record per snapshot, then a summary record.
    pub fn to_json_lines(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        for (i, s) in self.steps.iter().enumerate() {
            out.push(
                json!({
                    "kind": "step",
                    "index": i,
                    "action": s.action.as_ref().map(|a| a.to_string()),
                    "config": s.config.to_string(),
                    "state": state_json(&s.state),
                })
                .to_string(),
            );
        }
        out.push(
            json!({
                "kind": "outcome",
                "outcome": self.outcome,
                "steps": self.len(),
                "seed": self.seed,
                "state": state_json(self.final_state()),
            })
            .to_string(),
        );
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.steps.iter().enumerate() {
            match &s.action {
                None => out.push_str(&format!("[{i}] {}  {}\n", s.config, s.state)),
                Some(a) => out.push_str(&format!("[{i}] --{a}--> {}  {}\n", s.config, s.state)),
            }
        }
        out.push_str(&format!("outcome: {} after {} steps", self.outcome, self.len()));
        if let Some(seed) = self.seed {
            out.push_str(&format!(" (seed {seed})"));
        }
        out.push('\n');
        out.push_str(&format!("final state: {}\n", self.final_state()));
        out
    }
}

/// Values as decimal strings so arbitrarily large numbers survive JSON.
pub fn state_json(state: &ProcState) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> =
        state.iter().map(|(p, v)| (p.to_string(), serde_json::Value::String(v.to_string()))).collect();
    serde_json::Value::Object(map)
}
