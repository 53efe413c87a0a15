//! Static operations on choreographies: process names, exit points,
//! sequential composition, call annotation, validation and renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use super::ast::Choreography;
use crate::syntax::{Env, ProcName, ProcSet, ProcVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("process `{0}` communicates with itself")]
    SelfCommunication(ProcName),
    #[error("call to unbound procedure `{0}`")]
    UnboundProcedure(ProcVar),
    #[error("procedure `{0}` can call itself without any interaction in between")]
    UnguardedRecursion(ProcVar),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lint {
    /// A definition reuses the name of an enclosing definition.
    Shadowing(ProcVar),
}

impl std::fmt::Display for Lint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lint::Shadowing(x) => write!(f, "warning: definition of `{x}` shadows an enclosing definition"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("left operand of sequential composition has {0} exit points, expected exactly one")]
    MultipleExitPoints(usize),
    #[error("left operand of sequential composition has no exit point")]
    NoExitPoint,
}

/// A procedure definition together with the environment it was defined in.
/// The body is closed under `outer` extended with the procedure itself.
#[derive(Debug, Clone)]
pub struct Closure {
    pub name: ProcVar,
    pub body: Arc<Choreography>,
    pub outer: Env<Closure>,
}

impl Closure {
    /// Environment in which the body is evaluated.
    pub fn body_env(&self) -> Env<Closure> {
        self.outer.bind(self.name.clone(), self.clone())
    }
}

/// Extends `env` with the definition at a `Def` node.
pub fn bind_def(env: &Env<Closure>, name: &ProcVar, body: &Arc<Choreography>) -> Env<Closure> {
    env.bind(
        name.clone(),
        Closure { name: name.clone(), body: body.clone(), outer: env.clone() },
    )
}

/// `pn(C)`. Annotated calls contribute their annotation.
pub fn proc_names(c: &Choreography) -> ProcSet {
    let mut out = ProcSet::new();
    collect_names(c, &mut out, true);
    out
}

fn collect_names(c: &Choreography, out: &mut ProcSet, use_annotations: bool) {
    match c {
        Choreography::Com { sender, receiver, cont, .. } | Choreography::Sel { sender, receiver, cont, .. } => {
            out.insert(sender.clone());
            out.insert(receiver.clone());
            collect_names(cont, out, use_annotations);
        }
        Choreography::Cond { decider, sender, then_branch, else_branch } => {
            out.insert(decider.clone());
            out.insert(sender.clone());
            collect_names(then_branch, out, use_annotations);
            collect_names(else_branch, out, use_annotations);
        }
        Choreography::Def { body, cont, .. } => {
            collect_names(body, out, use_annotations);
            collect_names(cont, out, use_annotations);
        }
        Choreography::Call { annotation, .. } => {
            if use_annotations {
                if let Some(a) = annotation {
                    out.extend(a.iter().cloned());
                }
            }
        }
        Choreography::End => {}
    }
}

/// Process names in order of first syntactic occurrence (annotations of
/// calls included, after the names written before them).
pub fn proc_names_ordered(c: &Choreography) -> Vec<ProcName> {
    fn go(c: &Choreography, seen: &mut BTreeSet<ProcName>, out: &mut Vec<ProcName>) {
        let push = |p: &ProcName, seen: &mut BTreeSet<ProcName>, out: &mut Vec<ProcName>| {
            if seen.insert(p.clone()) {
                out.push(p.clone());
            }
        };
        match c {
            Choreography::Com { sender, receiver, cont, .. } | Choreography::Sel { sender, receiver, cont, .. } => {
                push(sender, seen, out);
                push(receiver, seen, out);
                go(cont, seen, out);
            }
            Choreography::Cond { decider, sender, then_branch, else_branch } => {
                push(decider, seen, out);
                push(sender, seen, out);
                go(then_branch, seen, out);
                go(else_branch, seen, out);
            }
            Choreography::Def { body, cont, .. } => {
                go(body, seen, out);
                go(cont, seen, out);
            }
            Choreography::Call { annotation, .. } => {
                for p in annotation.iter().flat_map(|a| a.iter()) {
                    push(p, seen, out);
                }
            }
            Choreography::End => {}
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    go(c, &mut seen, &mut out);
    out
}

/// Number of `0` subterms, definition bodies included, calls excluded.
pub fn exit_points(c: &Choreography) -> usize {
    match c {
        Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => exit_points(cont),
        Choreography::Cond { then_branch, else_branch, .. } => exit_points(then_branch) + exit_points(else_branch),
        Choreography::Def { body, cont, .. } => exit_points(body) + exit_points(cont),
        Choreography::Call { .. } => 0,
        Choreography::End => 1,
    }
}

/// `c1 ⨟ c2`: replaces the unique exit point of `c1` by `c2`.
pub fn seq_compose(c1: &Choreography, c2: &Choreography) -> Result<Choreography, ComposeError> {
    match exit_points(c1) {
        0 => Err(ComposeError::NoExitPoint),
        1 => Ok(replace_end(c1, &Arc::new(c2.clone()))),
        n => Err(ComposeError::MultipleExitPoints(n)),
    }
}

/// Composes a sequence of single-exit choreographies, the last one arbitrary.
pub fn seq_compose_all(parts: &[Choreography]) -> Result<Choreography, ComposeError> {
    let mut acc = parts.last().cloned().unwrap_or(Choreography::End);
    for part in parts.iter().rev().skip(1) {
        acc = seq_compose(part, &acc)?;
    }
    Ok(acc)
}

fn replace_end(c: &Choreography, with: &Arc<Choreography>) -> Choreography {
    let sub = |x: &Arc<Choreography>| -> Arc<Choreography> {
        if exit_points(x) == 0 {
            x.clone()
        } else if x.is_end() {
            with.clone()
        } else {
            Arc::new(replace_end(x, with))
        }
    };
    match c {
        Choreography::Com { sender, expr, receiver, cont } => Choreography::Com {
            sender: sender.clone(),
            expr: *expr,
            receiver: receiver.clone(),
            cont: sub(cont),
        },
        Choreography::Sel { sender, receiver, label, cont } => Choreography::Sel {
            sender: sender.clone(),
            receiver: receiver.clone(),
            label: *label,
            cont: sub(cont),
        },
        Choreography::Cond { decider, sender, then_branch, else_branch } => Choreography::Cond {
            decider: decider.clone(),
            sender: sender.clone(),
            then_branch: sub(then_branch),
            else_branch: sub(else_branch),
        },
        Choreography::Def { name, body, cont, annotation } => Choreography::Def {
            name: name.clone(),
            body: sub(body),
            cont: sub(cont),
            annotation: annotation.clone(),
        },
        Choreography::Call { .. } => c.clone(),
        Choreography::End => (**with).clone(),
    }
}

/// Annotates every definition and call with the process names its procedure
/// may involve: the names in its body (nested definitions included) plus the
/// annotations of everything it calls, computed as a least fixpoint.
pub fn annotate_calls(c: &Choreography) -> Result<Choreography, ValidationError> {
    struct Info {
        names: ProcSet,
        callees: BTreeSet<usize>,
    }

    fn collect(
        c: &Choreography,
        scope: &mut Vec<(ProcVar, usize)>,
        bodies: &mut Vec<usize>,
        infos: &mut Vec<Info>,
    ) -> Result<(), ValidationError> {
        let add_names = |infos: &mut Vec<Info>, bodies: &[usize], ps: &[&ProcName]| {
            for &id in bodies {
                for p in ps {
                    infos[id].names.insert((*p).clone());
                }
            }
        };
        match c {
            Choreography::Com { sender, receiver, cont, .. } | Choreography::Sel { sender, receiver, cont, .. } => {
                add_names(infos, bodies, &[sender, receiver]);
                collect(cont, scope, bodies, infos)
            }
            Choreography::Cond { decider, sender, then_branch, else_branch } => {
                add_names(infos, bodies, &[decider, sender]);
                collect(then_branch, scope, bodies, infos)?;
                collect(else_branch, scope, bodies, infos)
            }
            Choreography::Def { name, body, cont, .. } => {
                let id = infos.len();
                infos.push(Info { names: ProcSet::new(), callees: BTreeSet::new() });
                scope.push((name.clone(), id));
                bodies.push(id);
                let r = collect(body, scope, bodies, infos);
                bodies.pop();
                let r = r.and_then(|_| collect(cont, scope, bodies, infos));
                scope.pop();
                r
            }
            Choreography::Call { name, .. } => {
                let id = resolve(scope, name)?;
                for &b in bodies.iter() {
                    infos[b].callees.insert(id);
                }
                Ok(())
            }
            Choreography::End => Ok(()),
        }
    }

    fn rebuild(
        c: &Choreography,
        scope: &mut Vec<(ProcVar, usize)>,
        next_id: &mut usize,
        anns: &[Arc<ProcSet>],
    ) -> Choreography {
        match c {
            Choreography::Com { sender, expr, receiver, cont } => Choreography::Com {
                sender: sender.clone(),
                expr: *expr,
                receiver: receiver.clone(),
                cont: Arc::new(rebuild(cont, scope, next_id, anns)),
            },
            Choreography::Sel { sender, receiver, label, cont } => Choreography::Sel {
                sender: sender.clone(),
                receiver: receiver.clone(),
                label: *label,
                cont: Arc::new(rebuild(cont, scope, next_id, anns)),
            },
            Choreography::Cond { decider, sender, then_branch, else_branch } => Choreography::Cond {
                decider: decider.clone(),
                sender: sender.clone(),
                then_branch: Arc::new(rebuild(then_branch, scope, next_id, anns)),
                else_branch: Arc::new(rebuild(else_branch, scope, next_id, anns)),
            },
            Choreography::Def { name, body, cont, .. } => {
                let id = *next_id;
                *next_id += 1;
                scope.push((name.clone(), id));
                let body = rebuild(body, scope, next_id, anns);
                let cont = rebuild(cont, scope, next_id, anns);
                scope.pop();
                Choreography::Def {
                    name: name.clone(),
                    body: Arc::new(body),
                    cont: Arc::new(cont),
                    annotation: Some(anns[id].clone()),
                }
            }
            Choreography::Call { name, .. } => {
                let id = resolve(scope, name).expect("calls were resolved while collecting");
                Choreography::Call { name: name.clone(), annotation: Some(anns[id].clone()) }
            }
            Choreography::End => Choreography::End,
        }
    }

    let mut infos = Vec::new();
    collect(c, &mut Vec::new(), &mut Vec::new(), &mut infos)?;

    let mut anns: Vec<ProcSet> = infos.iter().map(|i| i.names.clone()).collect();
    loop {
        let mut changed = false;
        for id in 0..infos.len() {
            for &k in &infos[id].callees {
                if k == id {
                    continue;
                }
                let extra: Vec<ProcName> = anns[k].difference(&anns[id]).cloned().collect();
                if !extra.is_empty() {
                    anns[id].extend(extra);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let anns: Vec<Arc<ProcSet>> = anns.into_iter().map(Arc::new).collect();
    Ok(rebuild(c, &mut Vec::new(), &mut 0, &anns))
}

fn resolve(scope: &[(ProcVar, usize)], name: &ProcVar) -> Result<usize, ValidationError> {
    scope
        .iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, id)| *id)
        .ok_or_else(|| ValidationError::UnboundProcedure(name.clone()))
}

/// Checks the well-formedness conditions the engine relies on. Returns
/// non-fatal lints on success.
pub fn validate(c: &Choreography) -> Result<Vec<Lint>, ValidationError> {
    let mut lints = Vec::new();
    check(c, &Env::new(), &mut Vec::new(), &mut lints)?;
    check_guarded(c, &Env::new())?;
    Ok(lints)
}

fn check(
    c: &Choreography,
    env: &Env<Closure>,
    scope: &mut Vec<ProcVar>,
    lints: &mut Vec<Lint>,
) -> Result<(), ValidationError> {
    match c {
        Choreography::Com { sender, receiver, cont, .. } | Choreography::Sel { sender, receiver, cont, .. } => {
            if sender == receiver {
                return Err(ValidationError::SelfCommunication(sender.clone()));
            }
            check(cont, env, scope, lints)
        }
        Choreography::Cond { decider, sender, then_branch, else_branch } => {
            if decider == sender {
                return Err(ValidationError::SelfCommunication(decider.clone()));
            }
            check(then_branch, env, scope, lints)?;
            check(else_branch, env, scope, lints)
        }
        Choreography::Def { name, body, cont, .. } => {
            if scope.contains(name) {
                lints.push(Lint::Shadowing(name.clone()));
            }
            let inner = bind_def(env, name, body);
            scope.push(name.clone());
            let r = check(body, &inner, scope, lints).and_then(|_| check(cont, &inner, scope, lints));
            scope.pop();
            r
        }
        Choreography::Call { name, .. } => {
            if scope.contains(name) {
                Ok(())
            } else {
                Err(ValidationError::UnboundProcedure(name.clone()))
            }
        }
        Choreography::End => Ok(()),
    }
}

/// Every point execution can reach must perform an interaction before it
/// re-enters a procedure it is already unfolding.
fn check_guarded(c: &Choreography, env: &Env<Closure>) -> Result<(), ValidationError> {
    check_head(c, env)?;
    walk_entries(c, env)
}

fn walk_entries(c: &Choreography, env: &Env<Closure>) -> Result<(), ValidationError> {
    match c {
        Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => {
            check_head(cont, env)?;
            walk_entries(cont, env)
        }
        Choreography::Cond { then_branch, else_branch, .. } => {
            check_head(then_branch, env)?;
            check_head(else_branch, env)?;
            walk_entries(then_branch, env)?;
            walk_entries(else_branch, env)
        }
        Choreography::Def { name, body, cont, .. } => {
            let inner = bind_def(env, name, body);
            walk_entries(body, &inner)?;
            walk_entries(cont, &inner)
        }
        Choreography::Call { .. } | Choreography::End => Ok(()),
    }
}

fn check_head(c: &Choreography, env: &Env<Closure>) -> Result<(), ValidationError> {
    let mut visited: Vec<*const Choreography> = Vec::new();
    let mut env = env.clone();
    let mut cur: Arc<Choreography> = Arc::new(c.clone());
    loop {
        let next = match &*cur {
            Choreography::Def { name, body, cont, .. } => {
                env = bind_def(&env, name, body);
                cont.clone()
            }
            Choreography::Call { name, .. } => {
                let closure = env
                    .lookup(name)
                    .ok_or_else(|| ValidationError::UnboundProcedure(name.clone()))?
                    .clone();
                let key = Arc::as_ptr(&closure.body);
                if visited.contains(&key) {
                    return Err(ValidationError::UnguardedRecursion(name.clone()));
                }
                visited.push(key);
                env = closure.body_env();
                closure.body.clone()
            }
            _ => return Ok(()),
        };
        cur = next;
    }
}

/// True if `c` contains a conditional.
pub fn has_conditional(c: &Choreography) -> bool {
    match c {
        Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => has_conditional(cont),
        Choreography::Cond { .. } => true,
        Choreography::Def { body, cont, .. } => has_conditional(body) || has_conditional(cont),
        Choreography::Call { .. } | Choreography::End => false,
    }
}

/// True if `name` is called in `c` outside any definition that rebinds it.
pub fn calls_free(c: &Choreography, name: &ProcVar) -> bool {
    match c {
        Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => calls_free(cont, name),
        Choreography::Cond { then_branch, else_branch, .. } => {
            calls_free(then_branch, name) || calls_free(else_branch, name)
        }
        Choreography::Def { name: n, body, cont, .. } => n != name && (calls_free(body, name) || calls_free(cont, name)),
        Choreography::Call { name: n, .. } => n == name,
        Choreography::End => false,
    }
}

/// Renames definitions that shadow an enclosing definition of the same name
/// (`X` becomes `X_1`, `X_2`, ...), so that textual substitution of bodies
/// can never capture a call.
pub fn freshen(c: &Choreography) -> Choreography {
    fn all_vars(c: &Choreography, out: &mut BTreeSet<ProcVar>) {
        match c {
            Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => all_vars(cont, out),
            Choreography::Cond { then_branch, else_branch, .. } => {
                all_vars(then_branch, out);
                all_vars(else_branch, out);
            }
            Choreography::Def { name, body, cont, .. } => {
                out.insert(name.clone());
                all_vars(body, out);
                all_vars(cont, out);
            }
            Choreography::Call { name, .. } => {
                out.insert(name.clone());
            }
            Choreography::End => {}
        }
    }

    fn go(
        c: &Arc<Choreography>,
        scope: &mut Vec<(ProcVar, ProcVar)>,
        used: &mut BTreeSet<ProcVar>,
        counters: &mut BTreeMap<ProcVar, usize>,
    ) -> Arc<Choreography> {
        match &**c {
            Choreography::Com { sender, expr, receiver, cont } => Arc::new(Choreography::Com {
                sender: sender.clone(),
                expr: *expr,
                receiver: receiver.clone(),
                cont: go(cont, scope, used, counters),
            }),
            Choreography::Sel { sender, receiver, label, cont } => Arc::new(Choreography::Sel {
                sender: sender.clone(),
                receiver: receiver.clone(),
                label: *label,
                cont: go(cont, scope, used, counters),
            }),
            Choreography::Cond { decider, sender, then_branch, else_branch } => Arc::new(Choreography::Cond {
                decider: decider.clone(),
                sender: sender.clone(),
                then_branch: go(then_branch, scope, used, counters),
                else_branch: go(else_branch, scope, used, counters),
            }),
            Choreography::Def { name, body, cont, annotation } => {
                let renamed = if scope.iter().any(|(orig, _)| orig == name) {
                    let counter = counters.entry(name.clone()).or_insert(0);
                    loop {
                        *counter += 1;
                        let candidate = ProcVar::new(&format!("{name}_{counter}")).expect("suffix keeps the name valid");
                        if used.insert(candidate.clone()) {
                            break candidate;
                        }
                    }
                } else {
                    name.clone()
                };
                scope.push((name.clone(), renamed.clone()));
                let body = go(body, scope, used, counters);
                let cont = go(cont, scope, used, counters);
                scope.pop();
                Arc::new(Choreography::Def { name: renamed, body, cont, annotation: annotation.clone() })
            }
            Choreography::Call { name, annotation } => {
                let renamed = scope
                    .iter()
                    .rev()
                    .find(|(orig, _)| orig == name)
                    .map(|(_, r)| r.clone())
                    .unwrap_or_else(|| name.clone());
                if &renamed == name {
                    c.clone()
                } else {
                    Arc::new(Choreography::Call { name: renamed, annotation: annotation.clone() })
                }
            }
            Choreography::End => c.clone(),
        }
    }

    let mut used = BTreeSet::new();
    all_vars(c, &mut used);
    let root = Arc::new(c.clone());
    (*go(&root, &mut Vec::new(), &mut used, &mut BTreeMap::new())).clone()
}
