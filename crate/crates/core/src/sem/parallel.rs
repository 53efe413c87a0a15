//! Checking that two choreographies run in parallel in their sequential
//! composition: every interleaving of their individual state sequences must
//! be realised by some run of `c1 ⨟ c2`.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use super::redex::{enabled_redexes, fire, is_terminated};
use super::run::run_one;
use crate::mc::{exit_points, freshen, proc_names, seq_compose, Choreography};
use crate::syntax::{ProcName, ProcSet, ProcState};
use crate::trace::{Outcome, Scheduler};

/// Upper bound on the number of interleavings a single check enumerates.
pub const MAX_INTERLEAVINGS: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreconditionViolation {
    #[error("the choreographies share processes: {}", names(.0))]
    SharedProcesses(Vec<ProcName>),
    #[error("the first choreography has {0} exit points, expected exactly one")]
    ExitPoints(usize),
    #[error("the {0} choreography does not terminate within the fuel bound ({1})")]
    NoTermination(&'static str, Outcome),
    #[error("{0} interleavings exceed the enumeration limit")]
    TooManyInterleavings(u128),
}

fn names(ps: &[ProcName]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

/// One interleaving: the order of steps (`true` for a step of the first
/// choreography) and the state sequence it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaving {
    pub schedule: Vec<bool>,
    pub states: Vec<ProcState>,
}

impl Interleaving {
    /// `1` for steps of the first choreography, `2` for the second.
    pub fn schedule_string(&self) -> String {
        self.schedule.iter().map(|&l| if l { '1' } else { '2' }).collect()
    }
}

#[derive(Debug, Clone)]
pub struct ParallelReport {
    pub left_states: Vec<ProcState>,
    pub right_states: Vec<ProcState>,
    pub realized: Vec<Interleaving>,
    pub unrealized: Vec<Interleaving>,
}

impl ParallelReport {
    pub fn passed(&self) -> bool {
        self.unrealized.is_empty()
    }

    pub fn total(&self) -> usize {
        self.realized.len() + self.unrealized.len()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

pub fn check_parallel_run(
    c1: &Choreography,
    c2: &Choreography,
    state: &ProcState,
    fuel: usize,
) -> Result<ParallelReport, PreconditionViolation> {
    let pn1 = proc_names(c1);
    let pn2 = proc_names(c2);
    let shared: Vec<ProcName> = pn1.intersection(&pn2).cloned().collect();
    if !shared.is_empty() {
        return Err(PreconditionViolation::SharedProcesses(shared));
    }
    let exits = exit_points(c1);
    if exits != 1 {
        return Err(PreconditionViolation::ExitPoints(exits));
    }
    let left = run_one(c1, state, fuel, Scheduler::Leftmost);
    if left.outcome != Outcome::Terminated {
        return Err(PreconditionViolation::NoTermination("first", left.outcome));
    }
    let right = run_one(c2, state, fuel, Scheduler::Leftmost);
    if right.outcome != Outcome::Terminated {
        return Err(PreconditionViolation::NoTermination("second", right.outcome));
    }
    let (n1, n2) = (left.len(), right.len());
    let count = binomial((n1 + n2) as u128, n1 as u128);
    if count > MAX_INTERLEAVINGS {
        return Err(PreconditionViolation::TooManyInterleavings(count));
    }

    let left_states = left.states();
    let right_states = right.states();
    let composed = Arc::new(freshen(&seq_compose(c1, c2).expect("exit points checked")));

    let mut report = ParallelReport {
        left_states: left_states.clone(),
        right_states: right_states.clone(),
        realized: Vec::new(),
        unrealized: Vec::new(),
    };
    for schedule in shuffles(n1, n2) {
        let states = interleave(state, &pn1, &left_states, &pn2, &right_states, &schedule);
        let mut failed = HashSet::new();
        let ok = realize(&composed, &states, 0, &mut failed);
        let il = Interleaving { schedule, states };
        if ok {
            report.realized.push(il);
        } else {
            report.unrealized.push(il);
        }
    }
    Ok(report)
}

fn shuffles(n1: usize, n2: usize) -> Vec<Vec<bool>> {
    fn go(n1: usize, n2: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if n1 == 0 && n2 == 0 {
            out.push(cur.clone());
            return;
        }
        if n1 > 0 {
            cur.push(true);
            go(n1 - 1, n2, cur, out);
            cur.pop();
        }
        if n2 > 0 {
            cur.push(false);
            go(n1, n2 - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n1, n2, &mut Vec::new(), &mut out);
    out
}

fn interleave(
    init: &ProcState,
    pn1: &ProcSet,
    left: &[ProcState],
    pn2: &ProcSet,
    right: &[ProcState],
    schedule: &[bool],
) -> Vec<ProcState> {
    let combine = |i: usize, j: usize| {
        let mut s = init.clone();
        for p in pn1 {
            s.set(p.clone(), left[i].get(p));
        }
        for p in pn2 {
            s.set(p.clone(), right[j].get(p));
        }
        s
    };
    let (mut i, mut j) = (0, 0);
    let mut out = vec![combine(0, 0)];
    for &l in schedule {
        if l {
            i += 1;
        } else {
            j += 1;
        }
        out.push(combine(i, j));
    }
    out
}

/// Is there a run of `c` from `states[k]` through exactly `states[k..]`
/// ending in a terminated choreography?
fn realize(
    c: &Arc<Choreography>,
    states: &[ProcState],
    k: usize,
    failed: &mut HashSet<(Arc<Choreography>, usize)>,
) -> bool {
    if k + 1 == states.len() {
        return is_terminated(c);
    }
    if failed.contains(&(c.clone(), k)) {
        return false;
    }
    for r in enabled_redexes(c) {
        let mut s = states[k].clone();
        let (next, _) = fire(c, &mut s, &r).expect("enabled redexes fire");
        if s == states[k + 1] && realize(&next, states, k + 1, failed) {
            return true;
        }
    }
    failed.insert((c.clone(), k));
    false
}
