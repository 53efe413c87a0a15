use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ast::{bind_bdef, BClosure, Behaviour, Network, Process};
use crate::sem::InvalidRedex;
use crate::syntax::{Env, Expr, Label, ProcName, ProcVar};
use crate::trace::{Action, Outcome, Scheduler, Snapshot, Trace};

pub type NetTrace = Trace<Network>;

/// A synchronising pair of processes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NetRedex {
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
    /// `decider` runs a conditional, `sender` sends it `expr`.
    Cond {
        decider: ProcName,
        sender: ProcName,
        expr: Expr,
    },
}

impl fmt::Display for NetRedex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetRedex::Com { sender, expr, receiver } => write!(f, "{sender}.{expr} -> {receiver}"),
            NetRedex::Sel { sender, receiver, label } => write!(f, "{sender} -> {receiver}[{label}]"),
            NetRedex::Cond { decider, sender, expr } => write!(f, "if {decider} = {sender}.{expr}"),
        }
    }
}

/// First action of a behaviour, skipping definitions and unfolding calls.
pub fn head(b: &Arc<Behaviour>) -> Option<Arc<Behaviour>> {
    let mut env: Env<BClosure> = Env::new();
    let mut unfolded: Vec<*const Behaviour> = Vec::new();
    let mut cur = b.clone();
    loop {
        let next = match &*cur {
            Behaviour::End => return None,
            Behaviour::Def { name, body, cont } => {
                env = bind_bdef(&env, name, body);
                cont.clone()
            }
            Behaviour::Call { name } => {
                let closure = env.lookup(name)?.clone();
                let key = Arc::as_ptr(&closure.body);
                if unfolded.contains(&key) {
                    return None;
                }
                unfolded.push(key);
                env = closure.body_env();
                closure.body.clone()
            }
            _ => return Some(cur),
        };
        cur = next;
    }
}

/// Every enabled synchronisation, ordered by the name of the process that
/// initiates it (the sender or selector).
pub fn net_enabled(n: &Network) -> Vec<NetRedex> {
    let heads: BTreeMap<&ProcName, Arc<Behaviour>> =
        n.processes.iter().filter_map(|(p, proc_)| head(&proc_.behaviour).map(|h| (p, h))).collect();
    let mut out = Vec::new();
    for (&p, h) in &heads {
        match &**h {
            Behaviour::Send { to, expr, .. } => match heads.get(to).map(|b| &**b) {
                Some(Behaviour::Recv { from, .. }) if from == p => {
                    out.push(NetRedex::Com { sender: p.clone(), expr: *expr, receiver: to.clone() });
                }
                Some(Behaviour::Cond { sender, .. }) if sender == p => {
                    out.push(NetRedex::Cond { decider: to.clone(), sender: p.clone(), expr: *expr });
                }
                _ => {}
            },
            Behaviour::Select { to, label, .. } => {
                if let Some(Behaviour::Branch { from, branches }) = heads.get(to).map(|b| &**b) {
                    if from == p && branches.contains_key(label) {
                        out.push(NetRedex::Sel { sender: p.clone(), receiver: to.clone(), label: *label });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Fires `r`, checking that it is enabled.
pub fn net_step(n: &Network, r: &NetRedex) -> Result<Network, InvalidRedex> {
    if !net_enabled(n).contains(r) {
        return Err(InvalidRedex(r.to_string()));
    }
    Ok(net_fire(n, r).0)
}

/// How the head of a behaviour is consumed.
#[derive(Clone, Copy)]
enum Consume {
    Prefix,
    Label(Label),
    Choice(bool),
}

/// Fires an enabled redex. Returns the new network and the action.
pub fn net_fire(n: &Network, r: &NetRedex) -> (Network, Action) {
    let mut next = n.clone();
    let advance = |net: &mut Network, p: &ProcName, how: Consume| {
        let proc_ = net.processes.get_mut(p).expect("redex processes exist");
        proc_.behaviour = consume(&proc_.behaviour, how).expect("redex heads match");
    };
    let action = match r {
        NetRedex::Com { sender, expr, receiver } => {
            let v = expr.eval(&n.processes[sender].value);
            advance(&mut next, sender, Consume::Prefix);
            advance(&mut next, receiver, Consume::Prefix);
            next.processes.get_mut(receiver).expect("receiver exists").value = v;
            Action::Com { sender: sender.clone(), expr: *expr, receiver: receiver.clone() }
        }
        NetRedex::Sel { sender, receiver, label } => {
            advance(&mut next, sender, Consume::Prefix);
            advance(&mut next, receiver, Consume::Label(*label));
            Action::Sel { sender: sender.clone(), receiver: receiver.clone(), label: *label }
        }
        NetRedex::Cond { decider, sender, expr } => {
            let then_taken = n.processes[decider].value == expr.eval(&n.processes[sender].value);
            advance(&mut next, sender, Consume::Prefix);
            advance(&mut next, decider, Consume::Choice(then_taken));
            Action::Cond { decider: decider.clone(), sender: sender.clone(), expr: *expr, then_taken }
        }
    };
    (next, action)
}

fn consume(b: &Arc<Behaviour>, how: Consume) -> Option<Arc<Behaviour>> {
    consume_in(b, &Env::new(), how, &mut Vec::new(), &mut Vec::new())
}

fn consume_in(
    b: &Arc<Behaviour>,
    env: &Env<BClosure>,
    how: Consume,
    defs: &mut Vec<(ProcVar, Arc<Behaviour>)>,
    unfolded: &mut Vec<*const Behaviour>,
) -> Option<Arc<Behaviour>> {
    match (&**b, how) {
        (Behaviour::Send { cont, .. }, Consume::Prefix)
        | (Behaviour::Recv { cont, .. }, Consume::Prefix)
        | (Behaviour::Select { cont, .. }, Consume::Prefix) => Some(cont.clone()),
        (Behaviour::Branch { branches, .. }, Consume::Label(l)) => branches.get(&l).cloned(),
        (Behaviour::Cond { then_branch, else_branch, .. }, Consume::Choice(t)) => {
            Some(if t { then_branch.clone() } else { else_branch.clone() })
        }
        (Behaviour::Def { name, body, cont }, _) => {
            let redundant = defs.iter().any(|(n, b2)| n == name && (Arc::ptr_eq(b2, body) || **b2 == **body));
            let inner = bind_bdef(env, name, body);
            defs.push((name.clone(), body.clone()));
            let cont = consume_in(cont, &inner, how, defs, unfolded);
            defs.pop();
            let cont = cont?;
            if redundant || !cont.calls_free(name) {
                Some(cont)
            } else {
                Some(Arc::new(Behaviour::Def { name: name.clone(), body: body.clone(), cont }))
            }
        }
        (Behaviour::Call { name }, _) => {
            let closure = env.lookup(name)?.clone();
            let key = Arc::as_ptr(&closure.body);
            if unfolded.contains(&key) {
                return None;
            }
            unfolded.push(key);
            consume_in(&closure.body, &closure.body_env(), how, defs, unfolded)
        }
        _ => None,
    }
}

/// Runs a network. Schedulers behave as for choreographies.
pub fn net_run(n: &Network, fuel: usize, scheduler: Scheduler) -> Vec<NetTrace> {
    match scheduler {
        Scheduler::Leftmost => vec![net_run_single(n, fuel, None)],
        Scheduler::Random(seed) => vec![net_run_single(n, fuel, Some(seed))],
        Scheduler::Exhaustive(depth) => net_run_exhaustive(n, depth.min(fuel)),
    }
}

pub fn net_run_one(n: &Network, fuel: usize, scheduler: Scheduler) -> NetTrace {
    net_run(n, fuel, scheduler).into_iter().next().expect("at least one trace")
}

fn net_run_single(n: &Network, fuel: usize, seed: Option<u64>) -> NetTrace {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut cur = n.clone();
    let mut steps = vec![Snapshot { config: cur.clone(), state: cur.values(), action: None }];
    let mut outcome = Outcome::FuelExhausted;
    for i in 0..=fuel {
        if cur.is_terminated() {
            outcome = Outcome::Terminated;
            break;
        }
        if i == fuel {
            break;
        }
        let mut enabled = net_enabled(&cur);
        if enabled.is_empty() {
            outcome = Outcome::Stuck;
            break;
        }
        let k = match rng.as_mut() {
            None => 0,
            Some(rng) => rng.gen_range(0..enabled.len()),
        };
        let r = enabled.swap_remove(k);
        let (next, action) = net_fire(&cur, &r);
        cur = next;
        steps.push(Snapshot { config: cur.clone(), state: cur.values(), action: Some(action) });
    }
    Trace { steps, outcome, seed }
}

fn net_run_exhaustive(n: &Network, depth: usize) -> Vec<NetTrace> {
    let mut parent: HashMap<Network, Option<(Network, Action)>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(n.clone(), None);
    queue.push_back((n.clone(), 0usize));
    let mut leaves = Vec::new();
    while let Some((cur, d)) = queue.pop_front() {
        if cur.is_terminated() {
            leaves.push((cur, Outcome::Terminated));
            continue;
        }
        let enabled = net_enabled(&cur);
        if enabled.is_empty() {
            leaves.push((cur, Outcome::Stuck));
            continue;
        }
        if d == depth {
            leaves.push((cur, Outcome::FuelExhausted));
            continue;
        }
        for r in enabled {
            let (next, action) = net_fire(&cur, &r);
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((cur.clone(), action)));
                queue.push_back((next, d + 1));
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
                        rev.push(Snapshot { state: cur.values(), config: cur, action: None });
                        break;
                    }
                    Some((prev, action)) => {
                        rev.push(Snapshot { state: cur.values(), config: cur, action: Some(action) });
                        cur = prev;
                    }
                }
            }
            rev.reverse();
            Trace { steps: rev, outcome, seed: None }
        })
        .collect()
}

/// Final network of a leftmost run, without recording a trace.
#[derive(Debug, Clone)]
pub struct NetExecution {
    pub network: Network,
    pub outcome: Outcome,
    pub steps: usize,
}

pub fn net_execute(n: &Network, fuel: usize) -> NetExecution {
    let mut cur = n.clone();
    let mut steps = 0;
    let outcome = loop {
        if cur.is_terminated() {
            break Outcome::Terminated;
        }
        if steps == fuel {
            break Outcome::FuelExhausted;
        }
        let Some(r) = net_enabled(&cur).into_iter().next() else {
            break Outcome::Stuck;
        };
        cur = net_fire(&cur, &r).0;
        steps += 1;
    };
    NetExecution { network: cur, outcome, steps }
}

impl Process {
    pub fn head(&self) -> Option<Arc<Behaviour>> {
        head(&self.behaviour)
    }
}
