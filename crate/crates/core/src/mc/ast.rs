use std::fmt;
use std::sync::Arc;

use crate::syntax::{Expr, Label, ProcName, ProcSet, ProcVar};

/// A Minimal Choreography.
///
/// Children are reference counted so that unfolding a procedure and
/// rebuilding a term along a reduction path share everything off the path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Choreography {
    /// `sender.expr -> receiver; cont`
    Com {
        sender: ProcName,
        expr: Expr,
        receiver: ProcName,
        cont: Arc<Choreography>,
    },
    /// `sender -> receiver[label]; cont`
    Sel {
        sender: ProcName,
        receiver: ProcName,
        label: Label,
        cont: Arc<Choreography>,
    },
    /// `if decider = sender then .. else ..`: `sender` ships its value to
    /// `decider`, which compares it with its own.
    Cond {
        decider: ProcName,
        sender: ProcName,
        then_branch: Arc<Choreography>,
        else_branch: Arc<Choreography>,
    },
    /// `def name = body in cont`
    Def {
        name: ProcVar,
        body: Arc<Choreography>,
        cont: Arc<Choreography>,
        annotation: Option<Arc<ProcSet>>,
    },
    Call {
        name: ProcVar,
        annotation: Option<Arc<ProcSet>>,
    },
    /// The exit point `0`.
    End,
}

impl Choreography {
    pub fn com(sender: ProcName, expr: Expr, receiver: ProcName, cont: Choreography) -> Self {
        Choreography::Com { sender, expr, receiver, cont: Arc::new(cont) }
    }

    pub fn sel(sender: ProcName, receiver: ProcName, label: Label, cont: Choreography) -> Self {
        Choreography::Sel { sender, receiver, label, cont: Arc::new(cont) }
    }

    pub fn cond(decider: ProcName, sender: ProcName, then_branch: Choreography, else_branch: Choreography) -> Self {
        Choreography::Cond {
            decider,
            sender,
            then_branch: Arc::new(then_branch),
            else_branch: Arc::new(else_branch),
        }
    }

    pub fn def(name: ProcVar, body: Choreography, cont: Choreography) -> Self {
        Choreography::Def { name, body: Arc::new(body), cont: Arc::new(cont), annotation: None }
    }

    pub fn call(name: ProcVar) -> Self {
        Choreography::Call { name, annotation: None }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Choreography::End)
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Choreography::Com { cont, .. } | Choreography::Sel { cont, .. } => 1 + cont.size(),
            Choreography::Cond { then_branch, else_branch, .. } => 1 + then_branch.size() + else_branch.size(),
            Choreography::Def { body, cont, .. } => 1 + body.size() + cont.size(),
            Choreography::Call { .. } | Choreography::End => 1,
        }
    }

    /// Same term with every annotation removed.
    pub fn strip_annotations(&self) -> Choreography {
        match self {
            Choreography::Com { sender, expr, receiver, cont } => {
                Choreography::com(sender.clone(), *expr, receiver.clone(), cont.strip_annotations())
            }
            Choreography::Sel { sender, receiver, label, cont } => {
                Choreography::sel(sender.clone(), receiver.clone(), *label, cont.strip_annotations())
            }
            Choreography::Cond { decider, sender, then_branch, else_branch } => Choreography::cond(
                decider.clone(),
                sender.clone(),
                then_branch.strip_annotations(),
                else_branch.strip_annotations(),
            ),
            Choreography::Def { name, body, cont, .. } => {
                Choreography::def(name.clone(), body.strip_annotations(), cont.strip_annotations())
            }
            Choreography::Call { name, .. } => Choreography::call(name.clone()),
            Choreography::End => Choreography::End,
        }
    }
}

impl fmt::Display for Choreography {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::print::print_choreography(self))
    }
}

/// One step of a path from the root of a choreography to a subterm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStep {
    /// Continuation of an interaction.
    Cont,
    Then,
    Else,
    /// Body of a definition.
    Body,
    /// Continuation (scope) of a definition.
    Scope,
    /// Into the unfolded body of a call.
    Unfold,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathStep::Cont => "cont",
            PathStep::Then => "then",
            PathStep::Else => "else",
            PathStep::Body => "body",
            PathStep::Scope => "scope",
            PathStep::Unfold => "unfold",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Path(pub Vec<PathStep>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn child(&self, step: PathStep) -> Path {
        let mut v = self.0.clone();
        v.push(step);
        Path(v)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
