//! Seeded random generators for choreographies, states and function terms.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mc::{annotate_calls, Choreography};
use crate::projection::amend;
use crate::recfun::RecFun;
use crate::sp::Behaviour;
use crate::syntax::{Expr, Label, ProcName, ProcState, ProcVar, Value};

/// Process names the choreography generators draw from.
pub const POOL: [&str; 5] = ["p", "q", "r", "s", "t"];

/// Cell values drawn by `state` are below this bound.
pub const MAX_VALUE: u64 = 4;

#[derive(Debug, Clone, Copy)]
pub struct ChorShape {
    /// Upper bound on interactions, conditionals and definitions.
    pub budget: usize,
    pub conditionals: bool,
    pub procedures: bool,
}

impl Default for ChorShape {
    fn default() -> Self {
        ChorShape { budget: 10, conditionals: true, procedures: true }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    pool: Vec<ProcName>,
}

struct Scope {
    procedures: Vec<ProcVar>,
    /// An interaction has happened since entering the innermost body.
    guarded: bool,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: POOL.iter().map(|p| ProcName::new(p).expect("valid name")).collect(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn pair(&mut self) -> (ProcName, ProcName) {
        let mut two = self.pool.choose_multiple(&mut self.rng, 2).cloned();
        (two.next().expect("pool has two names"), two.next().expect("pool has two names"))
    }

    /// A closed, guarded, annotated choreography.
    pub fn choreography(&mut self, shape: ChorShape) -> Choreography {
        let mut budget = shape.budget;
        let mut next_name = 0;
        let c = self.chor(shape, &mut budget, &mut next_name, &Scope { procedures: Vec::new(), guarded: true });
        annotate_calls(&c).expect("generated choreographies are closed")
    }

    /// A choreography made projectable by amendment.
    pub fn projectable(&mut self, shape: ChorShape) -> Choreography {
        amend(&self.choreography(shape))
    }

    fn chor(&mut self, shape: ChorShape, budget: &mut usize, next_name: &mut usize, scope: &Scope) -> Choreography {
        let callable = scope.guarded && !scope.procedures.is_empty();
        if *budget == 0 {
            return self.stop(scope, callable);
        }
        *budget -= 1;
        let guarded = Scope { procedures: scope.procedures.clone(), guarded: true };
        let roll = self.rng.gen_range(0..100);
        match roll {
            0..=44 => {
                let (s, r) = self.pair();
                let expr = *[Expr::Cell, Expr::SuccCell, Expr::Epsilon].choose(&mut self.rng).expect("non-empty");
                Choreography::com(s, expr, r, self.chor(shape, budget, next_name, &guarded))
            }
            45..=54 => {
                let (s, r) = self.pair();
                let label = self.label();
                Choreography::sel(s, r, label, self.chor(shape, budget, next_name, &guarded))
            }
            55..=74 if shape.conditionals => {
                let (p, q) = self.pair();
                let mut half = *budget / 2;
                let then_branch = self.chor(shape, &mut half, next_name, &guarded);
                *budget -= *budget / 2 - half;
                let else_branch = self.chor(shape, budget, next_name, &guarded);
                Choreography::cond(p, q, then_branch, else_branch)
            }
            75..=89 if shape.procedures && scope.procedures.len() < 3 => {
                let name = ProcVar::new(&format!("X{next_name}")).expect("valid name");
                *next_name += 1;
                let mut procedures = scope.procedures.clone();
                procedures.push(name.clone());
                let mut half = *budget / 2;
                let body =
                    self.chor(shape, &mut half, next_name, &Scope { procedures: procedures.clone(), guarded: false });
                *budget -= *budget / 2 - half;
                let cont = self.chor(shape, budget, next_name, &Scope { procedures, guarded: scope.guarded });
                Choreography::def(name, body, cont)
            }
            _ if callable && roll >= 90 => self.stop(scope, true),
            _ => {
                let (s, r) = self.pair();
                Choreography::com(s, Expr::Cell, r, self.chor(shape, budget, next_name, &guarded))
            }
        }
    }

    fn stop(&mut self, scope: &Scope, callable: bool) -> Choreography {
        if callable && self.rng.gen_bool(0.6) {
            let name = scope.procedures.choose(&mut self.rng).expect("non-empty").clone();
            Choreography::call(name)
        } else {
            Choreography::End
        }
    }

    /// A finite behaviour over processes `p` and `q`, at most `depth` deep.
    pub fn behaviour(&mut self, depth: usize) -> Behaviour {
        let peer = self.pool[self.rng.gen_range(0..2)].clone();
        if depth == 0 {
            return Behaviour::End;
        }
        match self.rng.gen_range(0..6) {
            0 => Behaviour::End,
            1 => {
                let expr = if self.rng.gen_bool(0.5) { Expr::Cell } else { Expr::SuccCell };
                Behaviour::send(peer, expr, self.behaviour(depth - 1))
            }
            2 => Behaviour::recv(peer, self.behaviour(depth - 1)),
            3 => Behaviour::select(peer, self.label(), self.behaviour(depth - 1)),
            _ => {
                let labels: Vec<Label> = match self.rng.gen_range(0..3) {
                    0 => vec![Label::L],
                    1 => vec![Label::R],
                    _ => vec![Label::L, Label::R],
                };
                let branches: Vec<_> = labels.into_iter().map(|l| (l, self.behaviour(depth - 1))).collect();
                Behaviour::branch(peer, branches)
            }
        }
    }

    /// A behaviour of the same shape as `b` that differs mostly in the labels
    /// its branchings offer, and occasionally elsewhere.
    pub fn behaviour_variant(&mut self, b: &Behaviour, depth: usize) -> Behaviour {
        if self.rng.gen_range(0..20) == 0 {
            return self.behaviour(depth);
        }
        let sub = |g: &mut Self, c: &Behaviour| g.behaviour_variant(c, depth.saturating_sub(1));
        match b {
            Behaviour::Send { to, expr, cont } => Behaviour::send(to.clone(), *expr, sub(self, cont)),
            Behaviour::Recv { from, cont } => Behaviour::recv(from.clone(), sub(self, cont)),
            Behaviour::Select { to, label, cont } => Behaviour::select(to.clone(), *label, sub(self, cont)),
            Behaviour::Branch { from, branches } => {
                let mut out = Vec::new();
                for label in [Label::L, Label::R] {
                    match branches.get(&label) {
                        Some(body) if self.rng.gen_range(0..4) > 0 => out.push((label, sub(self, body))),
                        Some(_) => {}
                        None if self.rng.gen_bool(0.5) => out.push((label, self.behaviour(depth.saturating_sub(1)))),
                        None => {}
                    }
                }
                if out.is_empty() {
                    let (label, body) = branches.iter().next().expect("branchings are non-empty");
                    out.push((*label, sub(self, body)));
                }
                Behaviour::branch(from.clone(), out)
            }
            other => other.clone(),
        }
    }

    fn label(&mut self) -> Label {
        if self.rng.gen_bool(0.5) {
            Label::L
        } else {
            Label::R
        }
    }

    /// Values in `0..MAX_VALUE` for every pool process.
    pub fn state(&mut self) -> ProcState {
        let pool = self.pool.clone();
        pool.into_iter().map(|p| (p, Value::from(self.rng.gen_range(0..MAX_VALUE)))).collect()
    }

    /// A well-formed function term of the given arity with at most `size`
    /// nodes, built from the standard constructors only.
    pub fn recfun(&mut self, arity: usize, size: usize) -> RecFun {
        let base = |g: &mut Self| -> RecFun {
            match (arity, g.rng.gen_range(0..3)) {
                (1, 0) => RecFun::Zero,
                (1, 1) => RecFun::Succ,
                _ => RecFun::Proj { n: arity, m: g.rng.gen_range(1..=arity) },
            }
        };
        if size <= 1 || arity == 0 {
            return if arity == 0 {
                // the only arity-0 terms come from minimization
                RecFun::min(RecFun::Proj { n: 1, m: 1 }).expect("arity 1")
            } else {
                base(self)
            };
        }
        match self.rng.gen_range(0..10) {
            0..=1 => base(self),
            2..=5 => {
                let k = self.rng.gen_range(1..=2usize);
                let budget = (size - 1) / (k + 1);
                let f = self.recfun(k, budget.max(1));
                let gs = (0..k).map(|_| self.recfun(arity, budget.max(1))).collect();
                RecFun::comp(f, gs).expect("arities match")
            }
            6..=8 if arity >= 2 => {
                let budget = (size - 1) / 2;
                let f = self.recfun(arity - 1, budget.max(1));
                let g = self.recfun(arity + 1, budget.max(1));
                RecFun::prim_rec(f, g).expect("arities match")
            }
            _ => {
                let f = self.recfun(arity + 1, size - 1);
                RecFun::min(f).expect("arity at least 1")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    Closed,
    Projectable,
    CondFree,
    RecFun,
}

impl FromStr for CorpusKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "closed" => Ok(CorpusKind::Closed),
            "projectable" => Ok(CorpusKind::Projectable),
            "condfree" => Ok(CorpusKind::CondFree),
            "recfun" => Ok(CorpusKind::RecFun),
            other => Err(format!("unknown corpus kind `{other}` (expected closed, projectable, condfree or recfun)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorpusItem {
    Choreography(Choreography),
    RecFun(RecFun),
}

impl fmt::Display for CorpusItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusItem::Choreography(c) => write!(f, "{c}"),
            CorpusItem::RecFun(r) => write!(f, "{r}"),
        }
    }
}

/// `count` items of one kind. Equal seeds give equal corpora.
pub fn gen_corpus(seed: u64, count: usize, kind: CorpusKind) -> Vec<CorpusItem> {
    let mut g = Generator::new(seed);
    (0..count)
        .map(|_| match kind {
            CorpusKind::Closed => CorpusItem::Choreography(g.choreography(ChorShape::default())),
            CorpusKind::Projectable => CorpusItem::Choreography(g.projectable(ChorShape::default())),
            CorpusKind::CondFree => {
                CorpusItem::Choreography(g.choreography(ChorShape { conditionals: false, ..ChorShape::default() }))
            }
            CorpusKind::RecFun => {
                let arity = g.rng.gen_range(1..=2);
                CorpusItem::RecFun(g.recfun(arity, 6))
            }
        })
        .collect()
}
