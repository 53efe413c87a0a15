use std::sync::Arc;

use super::epp::project_behaviour;
use super::merge::merge;
use crate::mc::{annotate_calls, proc_names_ordered, Choreography};
use crate::syntax::{Label, ProcName};

const MAX_PASSES: usize = 10_000;

/// Inserts selections so that every conditional can be projected: for each
/// `if p = q`, innermost first, every process other than `p` whose two branch
/// projections cannot be merged is told the outcome by `p` (`L` in the then
/// branch, `R` in the else branch), in order of first occurrence. Repeats
/// until nothing changes. The result is annotated.
pub fn amend(c: &Choreography) -> Choreography {
    let mut cur = annotate_calls(c).unwrap_or_else(|_| c.clone());
    for _ in 0..MAX_PASSES {
        let next = amend_pass(&cur);
        let next = annotate_calls(&next).unwrap_or(next);
        if next == cur {
            return cur;
        }
        cur = next;
    }
    cur
}

/// Processes that `decider` must inform before running `then_branch` or
/// `else_branch`.
pub fn needed_selections(decider: &ProcName, then_branch: &Choreography, else_branch: &Choreography) -> Vec<ProcName> {
    let mut candidates = proc_names_ordered(then_branch);
    for r in proc_names_ordered(else_branch) {
        if !candidates.contains(&r) {
            candidates.push(r);
        }
    }
    candidates
        .into_iter()
        .filter(|r| r != decider)
        .filter(|r| match (project_behaviour(then_branch, r), project_behaviour(else_branch, r)) {
            (Ok(b1), Ok(b2)) => merge(&b1, &b2).is_err(),
            _ => false,
        })
        .collect()
}

fn amend_pass(c: &Choreography) -> Choreography {
    match c {
        Choreography::End | Choreography::Call { .. } => c.clone(),
        Choreography::Com { sender, expr, receiver, cont } => Choreography::Com {
            sender: sender.clone(),
            expr: *expr,
            receiver: receiver.clone(),
            cont: Arc::new(amend_pass(cont)),
        },
        Choreography::Sel { sender, receiver, label, cont } => Choreography::Sel {
            sender: sender.clone(),
            receiver: receiver.clone(),
            label: *label,
            cont: Arc::new(amend_pass(cont)),
        },
        Choreography::Def { name, body, cont, annotation } => Choreography::Def {
            name: name.clone(),
            body: Arc::new(amend_pass(body)),
            cont: Arc::new(amend_pass(cont)),
            annotation: annotation.clone(),
        },
        Choreography::Cond { decider, sender, then_branch, else_branch } => {
            let then_branch = amend_pass(then_branch);
            let else_branch = amend_pass(else_branch);
            let targets = needed_selections(decider, &then_branch, &else_branch);
            let prefix = |label: Label, body: Choreography| {
                targets.iter().rev().fold(body, |acc, r| Choreography::sel(decider.clone(), r.clone(), label, acc))
            };
            Choreography::cond(
                decider.clone(),
                sender.clone(),
                prefix(Label::L, then_branch),
                prefix(Label::R, else_branch),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::parse_choreography;
    use crate::projection::epp;
    use crate::syntax::ProcState;

    fn amended(s: &str) -> String {
        amend(&parse_choreography(s).unwrap()).to_string()
    }

    #[test]
    fn inserts_selection_for_r() {
        assert_eq!(
            amended("if p = q then (p.c -> r; 0) else (0)"),
            "if p = q then (p -> r[L]; p.c -> r; 0) else (p -> r[R]; 0)"
        );
    }

    #[test]
    fn mergeable_branches_unchanged() {
        let text = "if p = q then (p.(s c) -> r; 0) else (p.c -> r; 0)";
        assert_eq!(amended(text), text);
        assert_eq!(amended("0"), "0");
    }

    #[test]
    fn missing_selection_becomes_projectable() {
        let c = amend(&parse_choreography("if p = q then (p.c -> r; 0) else (r.c -> p; 0)").unwrap());
        assert!(epp(&c, &ProcState::new()).is_ok());
    }

    #[test]
    fn idempotent() {
        let once = amend(&parse_choreography("if p = q then (q.c -> r; s.c -> q; 0) else (r.c -> s; 0)").unwrap());
        assert_eq!(amend(&once), once);
        assert!(epp(&once, &ProcState::new()).is_ok());
    }

    #[test]
    fn inside_recursion() {
        let c = parse_choreography("def X = if p = q then (p.c -> r; X) else (0) in X").unwrap();
        let a = amend(&c);
        assert!(epp(&a, &ProcState::new()).is_ok(), "{a}");
    }
}
