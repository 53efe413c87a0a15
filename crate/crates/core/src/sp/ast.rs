use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::syntax::{Env, Expr, Label, ProcName, ProcState, ProcVar, Value};

/// Local behaviour of a single process.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Behaviour {
    /// `send to.expr; cont`
    Send {
        to: ProcName,
        expr: Expr,
        cont: Arc<Behaviour>,
    },
    /// `recv from; cont`: stores the received value in the cell.
    Recv {
        from: ProcName,
        cont: Arc<Behaviour>,
    },
    /// `sel to[label]; cont`
    Select {
        to: ProcName,
        label: Label,
        cont: Arc<Behaviour>,
    },
    /// `branch from {L: .., R: ..}` with one or two entries.
    Branch {
        from: ProcName,
        branches: BTreeMap<Label, Arc<Behaviour>>,
    },
    /// `if c = sender then .. else ..`: receives a value from `sender` and
    /// compares it with the cell.
    Cond {
        sender: ProcName,
        then_branch: Arc<Behaviour>,
        else_branch: Arc<Behaviour>,
    },
    Def {
        name: ProcVar,
        body: Arc<Behaviour>,
        cont: Arc<Behaviour>,
    },
    Call {
        name: ProcVar,
    },
    End,
}

impl Behaviour {
    pub fn send(to: ProcName, expr: Expr, cont: Behaviour) -> Self {
        Behaviour::Send { to, expr, cont: Arc::new(cont) }
    }

    pub fn recv(from: ProcName, cont: Behaviour) -> Self {
        Behaviour::Recv { from, cont: Arc::new(cont) }
    }

    pub fn select(to: ProcName, label: Label, cont: Behaviour) -> Self {
        Behaviour::Select { to, label, cont: Arc::new(cont) }
    }

    pub fn branch(from: ProcName, branches: impl IntoIterator<Item = (Label, Behaviour)>) -> Self {
        Behaviour::Branch { from, branches: branches.into_iter().map(|(l, b)| (l, Arc::new(b))).collect() }
    }

    pub fn cond(sender: ProcName, then_branch: Behaviour, else_branch: Behaviour) -> Self {
        Behaviour::Cond { sender, then_branch: Arc::new(then_branch), else_branch: Arc::new(else_branch) }
    }

    pub fn def(name: ProcVar, body: Behaviour, cont: Behaviour) -> Self {
        Behaviour::Def { name, body: Arc::new(body), cont: Arc::new(cont) }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Behaviour::End)
    }

    /// True if `name` is called in `self` outside any definition rebinding it.
    pub fn calls_free(&self, name: &ProcVar) -> bool {
        match self {
            Behaviour::Send { cont, .. } | Behaviour::Recv { cont, .. } | Behaviour::Select { cont, .. } => {
                cont.calls_free(name)
            }
            Behaviour::Branch { branches, .. } => branches.values().any(|b| b.calls_free(name)),
            Behaviour::Cond { then_branch, else_branch, .. } => {
                then_branch.calls_free(name) || else_branch.calls_free(name)
            }
            Behaviour::Def { name: n, body, cont } => n != name && (body.calls_free(name) || cont.calls_free(name)),
            Behaviour::Call { name: n } => n == name,
            Behaviour::End => false,
        }
    }

    /// `B ⪯ 0`: collapses to `0` by erasing definitions and unfolding calls.
    pub fn is_terminated(&self) -> bool {
        let mut env: Env<BClosure> = Env::new();
        let mut unfolded: Vec<*const Behaviour> = Vec::new();
        let mut cur = Arc::new(self.clone());
        loop {
            let next = match &*cur {
                Behaviour::End => return true,
                Behaviour::Def { name, body, cont } => {
                    env = bind_bdef(&env, name, body);
                    cont.clone()
                }
                Behaviour::Call { name } => {
                    let Some(closure) = env.lookup(name).cloned() else {
                        return false;
                    };
                    let key = Arc::as_ptr(&closure.body);
                    if unfolded.contains(&key) {
                        return false;
                    }
                    unfolded.push(key);
                    env = closure.body_env();
                    closure.body.clone()
                }
                _ => return false,
            };
            cur = next;
        }
    }
}

impl fmt::Display for Behaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_behaviour(self))
    }
}

/// A behaviour-level procedure with its defining environment.
#[derive(Debug, Clone)]
pub struct BClosure {
    pub name: ProcVar,
    pub body: Arc<Behaviour>,
    pub outer: Env<BClosure>,
}

impl BClosure {
    pub fn body_env(&self) -> Env<BClosure> {
        self.outer.bind(self.name.clone(), self.clone())
    }
}

pub fn bind_bdef(env: &Env<BClosure>, name: &ProcVar, body: &Arc<Behaviour>) -> Env<BClosure> {
    env.bind(name.clone(), BClosure { name: name.clone(), body: body.clone(), outer: env.clone() })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Process {
    pub value: Value,
    pub behaviour: Arc<Behaviour>,
}

/// Parallel composition of named processes. The empty map is the inactive
/// network.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Network {
    pub processes: BTreeMap<ProcName, Process>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: ProcName, value: Value, behaviour: Behaviour) {
        self.processes.insert(name, Process { value, behaviour: Arc::new(behaviour) });
    }

    pub fn get(&self, name: &ProcName) -> Option<&Process> {
        self.processes.get(name)
    }

    pub fn len(&self) -> usize {
        self.processes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processes.is_empty()
    }

    /// Cell contents of every process.
    pub fn values(&self) -> ProcState {
        self.processes.iter().map(|(p, proc_)| (p.clone(), proc_.value.clone())).collect()
    }

    /// `N ⪯ 𝟎`: every process has finished.
    pub fn is_terminated(&self) -> bool {
        self.processes.values().all(|p| p.behaviour.is_terminated())
    }

    /// The network without its terminated processes.
    pub fn collect_garbage(&self) -> Network {
        Network {
            processes: self
                .processes
                .iter()
                .filter(|(_, p)| !p.behaviour.is_terminated())
                .map(|(n, p)| (n.clone(), p.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_network(self))
    }
}
