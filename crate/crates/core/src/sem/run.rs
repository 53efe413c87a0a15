use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::redex::{enabled_redexes, fire, head_redex, is_terminated};
use crate::mc::{freshen, Choreography};
use crate::syntax::ProcState;
use crate::trace::{Action, Outcome, Scheduler, Snapshot, Trace};

pub type ChorTrace = Trace<Arc<Choreography>>;

/// Runs `c` from `state` for at most `fuel` steps.
///
/// Leftmost and random schedulers produce exactly one trace. The exhaustive
/// scheduler explores every interleaving up to `min(depth, fuel)` steps,
/// visiting each (choreography, state) configuration once, and returns one
/// witness trace per distinct final configuration.
pub fn run(c: &Choreography, state: &ProcState, fuel: usize, scheduler: Scheduler) -> Vec<ChorTrace> {
    let c = Arc::new(freshen(c));
    match scheduler {
        Scheduler::Leftmost => vec![run_single(c, state, fuel, None)],
        Scheduler::Random(seed) => vec![run_single(c, state, fuel, Some(seed))],
        Scheduler::Exhaustive(depth) => run_exhaustive(c, state, depth.min(fuel)),
    }
}

/// Convenience wrapper for the single-trace schedulers.
pub fn run_one(c: &Choreography, state: &ProcState, fuel: usize, scheduler: Scheduler) -> ChorTrace {
    run(c, state, fuel, scheduler).into_iter().next().expect("at least one trace")
}

fn run_single(c: Arc<Choreography>, state: &ProcState, fuel: usize, seed: Option<u64>) -> ChorTrace {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut cur = c;
    let mut state = state.clone();
    let mut steps = vec![Snapshot { config: cur.clone(), state: state.clone(), action: None }];
    let mut outcome = Outcome::FuelExhausted;
    for i in 0..=fuel {
        if is_terminated(&cur) {
            outcome = Outcome::Terminated;
            break;
        }
        if i == fuel {
            break;
        }
        let redex = match rng.as_mut() {
            None => head_redex(&cur),
            Some(rng) => {
                let mut all = enabled_redexes(&cur);
                if all.is_empty() {
                    None
                } else {
                    let k = rng.gen_range(0..all.len());
                    Some(all.swap_remove(k))
                }
            }
        };
        let Some(redex) = redex else {
            outcome = Outcome::Stuck;
            break;
        };
        let (next, action) = fire(&cur, &mut state, &redex).expect("enabled redexes fire");
        cur = next;
        steps.push(Snapshot { config: cur.clone(), state: state.clone(), action: Some(action) });
    }
    Trace { steps, outcome, seed }
}

type Config = (Arc<Choreography>, ProcState);

fn run_exhaustive(c: Arc<Choreography>, state: &ProcState, depth: usize) -> Vec<ChorTrace> {
    // Breadth-first over configurations; parents give back one witness path.
    let mut parent: HashMap<Config, Option<(Config, Action)>> = HashMap::new();
    let mut queue = VecDeque::new();
    let start: Config = (c, state.clone());
    parent.insert(start.clone(), None);
    queue.push_back((start, 0usize));
    let mut leaves: Vec<(Config, Outcome)> = Vec::new();

    while let Some((cfg, d)) = queue.pop_front() {
        if is_terminated(&cfg.0) {
            leaves.push((cfg, Outcome::Terminated));
            continue;
        }
        let redexes = enabled_redexes(&cfg.0);
        if redexes.is_empty() {
            leaves.push((cfg, Outcome::Stuck));
            continue;
        }
        if d == depth {
            leaves.push((cfg, Outcome::FuelExhausted));
            continue;
        }
        for r in redexes {
            let mut s = cfg.1.clone();
            let (next, action) = fire(&cfg.0, &mut s, &r).expect("enabled redexes fire");
            let key = (next, s);
            if !parent.contains_key(&key) {
                parent.insert(key.clone(), Some((cfg.clone(), action)));
                queue.push_back((key, d + 1));
            }
        }
    }

    leaves
        .into_iter()
        .map(|(leaf, outcome)| {
            let mut rev = Vec::new();
            let mut cur = leaf;
            loop {
                match parent.get(&cur).expect("visited").clone() {
                    None => {
                        rev.push(Snapshot { config: cur.0, state: cur.1, action: None });
                        break;
                    }
                    Some((prev, action)) => {
                        rev.push(Snapshot { config: cur.0, state: cur.1, action: Some(action) });
                        cur = prev;
                    }
                }
            }
            rev.reverse();
            Trace { steps: rev, outcome, seed: None }
        })
        .collect()
}

/// Final configuration of a leftmost run, without recording a trace.
#[derive(Debug, Clone)]
pub struct Execution {
    pub config: Arc<Choreography>,
    pub state: ProcState,
    pub outcome: Outcome,
    pub steps: usize,
}

pub fn execute(c: &Choreography, state: &ProcState, fuel: usize) -> Execution {
    let mut cur = Arc::new(freshen(c));
    let mut state = state.clone();
    let mut steps = 0;
    let outcome = loop {
        if is_terminated(&cur) {
            break Outcome::Terminated;
        }
        if steps == fuel {
            break Outcome::FuelExhausted;
        }
        let Some(redex) = head_redex(&cur) else {
            break Outcome::Stuck;
        };
        let (next, _) = fire(&cur, &mut state, &redex).expect("head redex fires");
        cur = next;
        steps += 1;
    };
    Execution { config: cur, state, outcome, steps }
}
