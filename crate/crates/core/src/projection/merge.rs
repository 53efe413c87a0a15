use std::sync::Arc;

use crate::sp::Behaviour;

/// Two behaviours that cannot be merged: the innermost pair of subterms whose
/// shapes disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeConflict {
    pub left: Behaviour,
    pub right: Behaviour,
}

/// `b1 ⊔ b2`: defined when both behaviours have the same shape, except that
/// branchings from the same process may offer different labels, in which
/// case the branches are united (common labels merged recursively).
pub fn merge(b1: &Behaviour, b2: &Behaviour) -> Result<Behaviour, MergeConflict> {
    merge_arc(&Arc::new(b1.clone()), &Arc::new(b2.clone())).map(|b| (*b).clone())
}

fn conflict(b1: &Behaviour, b2: &Behaviour) -> MergeConflict {
    MergeConflict { left: b1.clone(), right: b2.clone() }
}

pub(crate) fn merge_arc(b1: &Arc<Behaviour>, b2: &Arc<Behaviour>) -> Result<Arc<Behaviour>, MergeConflict> {
    if Arc::ptr_eq(b1, b2) {
        return Ok(b1.clone());
    }
    let merged = match (&**b1, &**b2) {
        (Behaviour::End, Behaviour::End) => Behaviour::End,
        (Behaviour::Send { to: t1, expr: e1, cont: c1 }, Behaviour::Send { to: t2, expr: e2, cont: c2 })
            if t1 == t2 && e1 == e2 =>
        {
            Behaviour::Send { to: t1.clone(), expr: *e1, cont: merge_arc(c1, c2)? }
        }
        (Behaviour::Recv { from: f1, cont: c1 }, Behaviour::Recv { from: f2, cont: c2 }) if f1 == f2 => {
            Behaviour::Recv { from: f1.clone(), cont: merge_arc(c1, c2)? }
        }
        (Behaviour::Select { to: t1, label: l1, cont: c1 }, Behaviour::Select { to: t2, label: l2, cont: c2 })
            if t1 == t2 && l1 == l2 =>
        {
            Behaviour::Select { to: t1.clone(), label: *l1, cont: merge_arc(c1, c2)? }
        }
        (Behaviour::Branch { from: f1, branches: bs1 }, Behaviour::Branch { from: f2, branches: bs2 }) if f1 == f2 => {
            let mut branches = bs1.clone();
            for (label, b) in bs2 {
                let entry = match bs1.get(label) {
                    Some(existing) => merge_arc(existing, b)?,
                    None => b.clone(),
                };
                branches.insert(*label, entry);
            }
            Behaviour::Branch { from: f1.clone(), branches }
        }
        (
            Behaviour::Cond { sender: s1, then_branch: t1, else_branch: e1 },
            Behaviour::Cond { sender: s2, then_branch: t2, else_branch: e2 },
        ) if s1 == s2 => Behaviour::Cond {
            sender: s1.clone(),
            then_branch: merge_arc(t1, t2)?,
            else_branch: merge_arc(e1, e2)?,
        },
        (Behaviour::Def { name: n1, body: b1b, cont: c1 }, Behaviour::Def { name: n2, body: b2b, cont: c2 })
            if n1 == n2 =>
        {
            Behaviour::Def { name: n1.clone(), body: merge_arc(b1b, b2b)?, cont: merge_arc(c1, c2)? }
        }
        (Behaviour::Call { name: n1 }, Behaviour::Call { name: n2 }) if n1 == n2 => Behaviour::Call { name: n1.clone() },
        _ => return Err(conflict(b1, b2)),
    };
    Ok(Arc::new(merged))
}
