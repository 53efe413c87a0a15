//! Enabled redexes of a choreography and how to fire them.
//!
//! Instead of searching the (infinite) rewriting closure of the swap and
//! unfolding rules, the enumerator walks the term from the root, keeping the
//! set of processes already involved in earlier prefixes. An interaction is
//! enabled when none of its processes is blocked; a conditional whose guard
//! is blocked can still be crossed when both branches offer the same
//! interaction. Definitions are transparent and each call is unfolded at most
//! once per walk.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::mc::{bind_def, calls_free, proc_names, Choreography, Closure, Path, PathStep};
use crate::syntax::{Env, Expr, Label, ProcName, ProcState, ProcVar};
use crate::trace::Action;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RedexKind {
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
    Cond {
        decider: ProcName,
        sender: ProcName,
    },
}

impl RedexKind {
    pub fn processes(&self) -> [&ProcName; 2] {
        match self {
            RedexKind::Com { sender, receiver, .. } | RedexKind::Sel { sender, receiver, .. } => [sender, receiver],
            RedexKind::Cond { decider, sender } => [decider, sender],
        }
    }

    fn matches(&self, c: &Choreography) -> bool {
        match (self, c) {
            (
                RedexKind::Com { sender, expr, receiver },
                Choreography::Com { sender: s, expr: e, receiver: r, .. },
            ) => sender == s && expr == e && receiver == r,
            (
                RedexKind::Sel { sender, receiver, label },
                Choreography::Sel { sender: s, receiver: r, label: l, .. },
            ) => sender == s && receiver == r && label == l,
            (RedexKind::Cond { decider, sender }, Choreography::Cond { decider: d, sender: s, .. }) => {
                decider == d && sender == s
            }
            _ => false,
        }
    }

    fn of(c: &Choreography) -> Option<RedexKind> {
        match c {
            Choreography::Com { sender, expr, receiver, .. } => Some(RedexKind::Com {
                sender: sender.clone(),
                expr: *expr,
                receiver: receiver.clone(),
            }),
            Choreography::Sel { sender, receiver, label, .. } => Some(RedexKind::Sel {
                sender: sender.clone(),
                receiver: receiver.clone(),
                label: *label,
            }),
            Choreography::Cond { decider, sender, .. } => {
                Some(RedexKind::Cond { decider: decider.clone(), sender: sender.clone() })
            }
            _ => None,
        }
    }
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedexKind::Com { sender, expr, receiver } => write!(f, "{sender}.{expr} -> {receiver}"),
            RedexKind::Sel { sender, receiver, label } => write!(f, "{sender} -> {receiver}[{label}]"),
            RedexKind::Cond { decider, sender } => write!(f, "if {decider} = {sender}"),
        }
    }
}

/// Where a redex sits, relative to the node the site is applied to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Site {
    Here,
    /// In the continuation of an independent interaction.
    Cont(Box<Site>),
    /// In the scope of a definition.
    Scope(Box<Site>),
    /// In the body of the called procedure.
    Unfold(Box<Site>),
    /// In both branches of an independent conditional.
    Branches(Box<Site>, Box<Site>),
}

impl Site {
    fn from_steps(steps: &[PathStep]) -> Site {
        let mut site = Site::Here;
        for step in steps.iter().rev() {
            site = match step {
                PathStep::Cont => Site::Cont(Box::new(site)),
                PathStep::Scope => Site::Scope(Box::new(site)),
                PathStep::Unfold => Site::Unfold(Box::new(site)),
                _ => unreachable!("head paths only use cont, scope and unfold"),
            };
        }
        site
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Redex {
    pub kind: RedexKind,
    pub site: Site,
}

impl Redex {
    /// Path to the redex, following the `then` side of crossed conditionals.
    pub fn position(&self) -> Path {
        let mut path = Vec::new();
        let mut site = &self.site;
        loop {
            site = match site {
                Site::Here => return Path(path),
                Site::Cont(s) => {
                    path.push(PathStep::Cont);
                    s
                }
                Site::Scope(s) => {
                    path.push(PathStep::Scope);
                    s
                }
                Site::Unfold(s) => {
                    path.push(PathStep::Unfold);
                    s
                }
                Site::Branches(s, _) => {
                    path.push(PathStep::Then);
                    s
                }
            };
        }
    }

    /// Positions of the interactions and conditionals the redex is swapped
    /// past.
    pub fn swapped_past(&self) -> Vec<Path> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut site = &self.site;
        loop {
            site = match site {
                Site::Here => return out,
                Site::Cont(s) => {
                    out.push(Path(path.clone()));
                    path.push(PathStep::Cont);
                    s
                }
                Site::Scope(s) => {
                    path.push(PathStep::Scope);
                    s
                }
                Site::Unfold(s) => {
                    path.push(PathStep::Unfold);
                    s
                }
                Site::Branches(s, _) => {
                    out.push(Path(path.clone()));
                    path.push(PathStep::Then);
                    s
                }
            };
        }
    }
}

impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind, self.position())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not an enabled redex of this choreography")]
pub struct InvalidRedex(pub String);

struct Walk {
    blocked: Vec<ProcName>,
    unfolding: Vec<*const Choreography>,
    universe: usize,
}

impl Walk {
    fn is_blocked(&self, p: &ProcName) -> bool {
        self.blocked.contains(p)
    }

    fn block(&mut self, p: &ProcName) {
        if !self.is_blocked(p) {
            self.blocked.push(p.clone());
        }
    }
}

/// Every redex that can fire next, in position order (preorder of the walk).
pub fn enabled_redexes(c: &Choreography) -> Vec<Redex> {
    let mut walk = Walk { blocked: Vec::new(), unfolding: Vec::new(), universe: proc_names(c).len() };
    let mut out = Vec::new();
    for (kind, site) in enumerate(c, &Env::new(), &mut walk) {
        let r = Redex { kind, site };
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

fn enumerate(c: &Choreography, env: &Env<Closure>, walk: &mut Walk) -> Vec<(RedexKind, Site)> {
    if walk.blocked.len() >= walk.universe && walk.universe > 0 {
        return Vec::new();
    }
    match c {
        Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => {
            let kind = RedexKind::of(c).expect("interaction");
            let mut out = Vec::new();
            let [a, b] = kind.processes();
            if !walk.is_blocked(a) && !walk.is_blocked(b) {
                out.push((kind.clone(), Site::Here));
            }
            let saved = walk.blocked.len();
            walk.block(a);
            walk.block(b);
            for (k, s) in enumerate(cont, env, walk) {
                out.push((k, Site::Cont(Box::new(s))));
            }
            walk.blocked.truncate(saved);
            out
        }
        Choreography::Cond { decider, sender, then_branch, else_branch } => {
            let mut out = Vec::new();
            if !walk.is_blocked(decider) && !walk.is_blocked(sender) {
                out.push((RedexKind::Cond { decider: decider.clone(), sender: sender.clone() }, Site::Here));
            }
            let saved = walk.blocked.len();
            walk.block(decider);
            walk.block(sender);
            let left = enumerate(then_branch, env, walk);
            if !left.is_empty() {
                let right = enumerate(else_branch, env, walk);
                for (k, sl) in left {
                    if let Some((_, sr)) = right.iter().find(|(kr, _)| *kr == k) {
                        out.push((k, Site::Branches(Box::new(sl), Box::new(sr.clone()))));
                    }
                }
            }
            walk.blocked.truncate(saved);
            out
        }
        Choreography::Def { name, body, cont, .. } => {
            let inner = bind_def(env, name, body);
            enumerate(cont, &inner, walk)
                .into_iter()
                .map(|(k, s)| (k, Site::Scope(Box::new(s))))
                .collect()
        }
        Choreography::Call { name, .. } => {
            let Some(closure) = env.lookup(name) else {
                return Vec::new();
            };
            let key = Arc::as_ptr(&closure.body);
            if walk.unfolding.contains(&key) {
                return Vec::new();
            }
            walk.unfolding.push(key);
            let out = enumerate(&closure.body, &closure.body_env(), walk)
                .into_iter()
                .map(|(k, s)| (k, Site::Unfold(Box::new(s))))
                .collect();
            walk.unfolding.pop();
            out
        }
        Choreography::End => Vec::new(),
    }
}

/// The leftmost redex: skip definitions, unfold calls, stop at the first
/// interaction or conditional.
pub fn head_redex(c: &Choreography) -> Option<Redex> {
    let mut steps = Vec::new();
    let mut env: Env<Closure> = Env::new();
    let mut unfolded: Vec<*const Choreography> = Vec::new();
    let mut cur = Arc::new(c.clone());
    loop {
        let next = match &*cur {
            Choreography::Com { .. } | Choreography::Sel { .. } | Choreography::Cond { .. } => {
                return Some(Redex { kind: RedexKind::of(&cur).expect("interaction"), site: Site::from_steps(&steps) });
            }
            Choreography::Def { name, body, cont, .. } => {
                env = bind_def(&env, name, body);
                steps.push(PathStep::Scope);
                cont.clone()
            }
            Choreography::Call { name, .. } => {
                let closure = env.lookup(name)?.clone();
                let key = Arc::as_ptr(&closure.body);
                if unfolded.contains(&key) {
                    return None;
                }
                unfolded.push(key);
                steps.push(PathStep::Unfold);
                env = closure.body_env();
                closure.body.clone()
            }
            Choreography::End => return None,
        };
        cur = next;
    }
}

/// `C ⪯ 0`: the term collapses to the exit point by erasing definitions and
/// unfolding calls.
pub fn is_terminated(c: &Choreography) -> bool {
    let mut env: Env<Closure> = Env::new();
    let mut unfolded: Vec<*const Choreography> = Vec::new();
    let mut cur = Arc::new(c.clone());
    loop {
        let next = match &*cur {
            Choreography::End => return true,
            Choreography::Def { name, body, cont, .. } => {
                env = bind_def(&env, name, body);
                cont.clone()
            }
            Choreography::Call { name, .. } => {
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

/// Fires `redex`, checking first that it is enabled.
pub fn step(c: &Choreography, state: &ProcState, redex: &Redex) -> Result<(Choreography, ProcState), InvalidRedex> {
    if !enabled_redexes(c).contains(redex) {
        return Err(InvalidRedex(redex.to_string()));
    }
    let mut state = state.clone();
    let (next, _) = fire(&Arc::new(c.clone()), &mut state, redex)?;
    Ok(((*next).clone(), state))
}

/// Fires `redex` without checking that it is enabled (the site must still
/// lead to a matching node). Returns the reduct and the action performed.
pub fn fire(
    c: &Arc<Choreography>,
    state: &mut ProcState,
    redex: &Redex,
) -> Result<(Arc<Choreography>, Action), InvalidRedex> {
    let mut action = None;
    let mut defs = Vec::new();
    let next = apply(c, &Env::new(), &redex.site, &redex.kind, state, &mut defs, &mut action)
        .ok_or_else(|| InvalidRedex(redex.to_string()))?;
    Ok((next, action.expect("a fired redex performs an action")))
}

fn apply(
    c: &Arc<Choreography>,
    env: &Env<Closure>,
    site: &Site,
    kind: &RedexKind,
    state: &mut ProcState,
    defs: &mut Vec<(ProcVar, Arc<Choreography>)>,
    action: &mut Option<Action>,
) -> Option<Arc<Choreography>> {
    match (site, &**c) {
        (Site::Here, node) => {
            if !kind.matches(node) {
                return None;
            }
            Some(match node {
                Choreography::Com { sender, expr, receiver, cont } => {
                    let v = expr.eval(&state.get(sender));
                    state.set(receiver.clone(), v);
                    *action = Some(Action::Com { sender: sender.clone(), expr: *expr, receiver: receiver.clone() });
                    cont.clone()
                }
                Choreography::Sel { sender, receiver, label, cont } => {
                    *action = Some(Action::Sel { sender: sender.clone(), receiver: receiver.clone(), label: *label });
                    cont.clone()
                }
                Choreography::Cond { decider, sender, then_branch, else_branch } => {
                    let then_taken = state.get(decider) == state.get(sender);
                    *action = Some(Action::Cond {
                        decider: decider.clone(),
                        sender: sender.clone(),
                        expr: Expr::Cell,
                        then_taken,
                    });
                    if then_taken {
                        then_branch.clone()
                    } else {
                        else_branch.clone()
                    }
                }
                _ => unreachable!("kind matched an interaction"),
            })
        }
        (Site::Cont(s), Choreography::Com { sender, expr, receiver, cont }) => {
            let cont = apply(cont, env, s, kind, state, defs, action)?;
            Some(Arc::new(Choreography::Com { sender: sender.clone(), expr: *expr, receiver: receiver.clone(), cont }))
        }
        (Site::Cont(s), Choreography::Sel { sender, receiver, label, cont }) => {
            let cont = apply(cont, env, s, kind, state, defs, action)?;
            Some(Arc::new(Choreography::Sel { sender: sender.clone(), receiver: receiver.clone(), label: *label, cont }))
        }
        (Site::Branches(sl, sr), Choreography::Cond { decider, sender, then_branch, else_branch }) => {
            let then_branch = apply(then_branch, env, sl, kind, state, defs, action)?;
            let mut scratch = state.clone();
            let mut scratch_action = None;
            let else_branch = apply(else_branch, env, sr, kind, &mut scratch, defs, &mut scratch_action)?;
            Some(Arc::new(Choreography::Cond {
                decider: decider.clone(),
                sender: sender.clone(),
                then_branch,
                else_branch,
            }))
        }
        (Site::Scope(s), Choreography::Def { name, body, cont, annotation }) => {
            let redundant = defs.iter().any(|(n, b)| n == name && (Arc::ptr_eq(b, body) || **b == **body));
            let inner = bind_def(env, name, body);
            defs.push((name.clone(), body.clone()));
            let cont = apply(cont, &inner, s, kind, state, defs, action);
            defs.pop();
            let cont = cont?;
            if redundant || !calls_free(&cont, name) {
                Some(cont)
            } else {
                Some(Arc::new(Choreography::Def {
                    name: name.clone(),
                    body: body.clone(),
                    cont,
                    annotation: annotation.clone(),
                }))
            }
        }
        (Site::Unfold(s), Choreography::Call { name, .. }) => {
            let closure = env.lookup(name)?.clone();
            apply(&closure.body, &closure.body_env(), s, kind, state, defs, action)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::parse_choreography;

    fn parse(s: &str) -> Choreography {
        parse_choreography(s).unwrap()
    }

    fn n(s: &str) -> ProcName {
        ProcName::new(s).unwrap()
    }

    #[test]
    fn single_interaction() {
        let c = parse("p.c -> q; 0");
        let rs = enabled_redexes(&c);
        assert_eq!(rs.len(), 1);
        let (c2, s2) = step(&c, &ProcState::new().with(n("p"), 1u64), &rs[0]).unwrap();
        assert_eq!(c2, Choreography::End);
        assert_eq!(s2, ProcState::new().with(n("p"), 1u64).with(n("q"), 1u64));
        assert!(enabled_redexes(&Choreography::End).is_empty());
    }

    #[test]
    fn independent_prefixes_swap() {
        let c = parse("def X = 0 in p.c -> t1; t1.(s c) -> p; r.c -> t2; t2.(s c) -> r; X");
        let rs = enabled_redexes(&c);
        assert_eq!(rs.len(), 2);
        assert_eq!(rs[0].kind.to_string(), "p.c -> t1");
        assert_eq!(rs[1].kind.to_string(), "r.c -> t2");
        assert_eq!(rs[1].swapped_past().len(), 2);
        assert_eq!(rs[1].position().to_string(), "scope.cont.cont");
    }

    #[test]
    fn successor() {
        let c = parse("p.(s c) -> q; 0");
        let r = head_redex(&c).unwrap();
        let (_, s) = step(&c, &ProcState::new().with(n("p"), 7u64), &r).unwrap();
        assert_eq!(s.get(&n("q")), 8u64.into());
    }

    #[test]
    fn conditional_branches() {
        let c = parse("if p = q then (p.c -> r; 0) else (r.c -> p; 0)");
        let r = head_redex(&c).unwrap();
        let s = ProcState::new().with(n("q"), 1u64);
        let (c2, s2) = step(&c, &s, &r).unwrap();
        assert_eq!(c2.to_string(), "r.c -> p; 0");
        assert_eq!(s2, s);
        let (c3, _) = step(&c, &ProcState::new(), &r).unwrap();
        assert_eq!(c3.to_string(), "p.c -> r; 0");
    }

    #[test]
    fn crossing_a_conditional() {
        let c = parse("if p = q then (r.c -> s; p.c -> q; 0) else (r.c -> s; 0)");
        let rs = enabled_redexes(&c);
        assert_eq!(rs.len(), 2);
        let (c2, st) = step(&c, &ProcState::new().with(n("r"), 2u64), &rs[1]).unwrap();
        assert_eq!(c2.to_string(), "if p = q then (p.c -> q; 0) else (0)");
        assert_eq!(st.get(&n("s")), 2u64.into());
        // Different interactions in the branches cannot be pulled out.
        let c = parse("if p = q then (r.c -> s; 0) else (s.c -> r; 0)");
        assert_eq!(enabled_redexes(&c).len(), 1);
    }

    #[test]
    fn recursion_unfolds_and_dead_definitions_vanish() {
        let c = parse("def X = p.c -> q; 0 in X");
        let r = head_redex(&c).unwrap();
        assert_eq!(r.site, Site::Scope(Box::new(Site::Unfold(Box::new(Site::Here)))));
        let (c2, _) = step(&c, &ProcState::new(), &r).unwrap();
        assert_eq!(c2, Choreography::End);

        let lp = parse("def X = p.eps -> q; X in X");
        let r = head_redex(&lp).unwrap();
        let (c2, _) = step(&lp, &ProcState::new(), &r).unwrap();
        assert_eq!(c2, lp);
    }

    #[test]
    fn termination_collapse() {
        assert!(is_terminated(&parse("0")));
        assert!(is_terminated(&parse("def X = p.c -> q; X in 0")));
        assert!(is_terminated(&parse("def X = 0 in X")));
        assert!(!is_terminated(&parse("def X = p.c -> q; X in X")));
        assert!(!is_terminated(&parse("if p = q then 0 else 0")));
    }

    #[test]
    fn invalid_redex() {
        let c = parse("p.c -> q; q.c -> r; 0");
        let bogus = Redex {
            kind: RedexKind::Com { sender: n("q"), expr: Expr::Cell, receiver: n("r") },
            site: Site::Cont(Box::new(Site::Here)),
        };
        assert!(step(&c, &ProcState::new(), &bogus).is_err());
    }
}
