use std::fmt;
use std::sync::Arc;

use serde_json::json;
use thiserror::Error;

use super::merge::merge_arc;
use crate::mc::{annotate_calls, proc_names, Choreography, Path, PathStep};
use crate::sp::{Behaviour, Network, Process};
use crate::syntax::{Expr, ProcName, ProcState};

/// Where and why the projection of one process fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnmergeablePoint {
    /// Position of the conditional whose branches cannot be merged.
    pub path: Path,
    pub process: ProcName,
    pub left: Behaviour,
    pub right: Behaviour,
}

impl UnmergeablePoint {
    pub fn reason(&self) -> String {
        format!("cannot merge `{}` with `{}`", self.left, self.right)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "path": self.path.to_string(),
            "process": self.process.to_string(),
            "reason": self.reason(),
        })
    }
}

impl fmt::Display for UnmergeablePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "process {} at {}: {}", self.process, self.path, self.reason())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("choreography is not projectable: {}", summary(.points))]
pub struct ProjectabilityError {
    pub points: Vec<UnmergeablePoint>,
}

fn summary(points: &[UnmergeablePoint]) -> String {
    points.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; ")
}

/// `⟦c⟧r`. Expects an annotated choreography; an unannotated definition or
/// call is treated as involving `r`.
pub fn project_behaviour(c: &Choreography, r: &ProcName) -> Result<Behaviour, UnmergeablePoint> {
    let mut path = Vec::new();
    project(c, r, &mut path).map(|b| (*b).clone())
}

fn involves(annotation: &Option<Arc<crate::syntax::ProcSet>>, r: &ProcName) -> bool {
    annotation.as_ref().is_none_or(|a| a.contains(r))
}

fn project(c: &Choreography, r: &ProcName, path: &mut Vec<PathStep>) -> Result<Arc<Behaviour>, UnmergeablePoint> {
    let within = |step: PathStep, c: &Choreography, path: &mut Vec<PathStep>| {
        path.push(step);
        let out = project(c, r, path);
        path.pop();
        out
    };
    Ok(match c {
        Choreography::End => Arc::new(Behaviour::End),
        Choreography::Com { sender, expr, receiver, cont } => {
            let k = within(PathStep::Cont, cont, path)?;
            if r == sender {
                Arc::new(Behaviour::Send { to: receiver.clone(), expr: *expr, cont: k })
            } else if r == receiver {
                Arc::new(Behaviour::Recv { from: sender.clone(), cont: k })
            } else {
                k
            }
        }
        Choreography::Sel { sender, receiver, label, cont } => {
            let k = within(PathStep::Cont, cont, path)?;
            if r == sender {
                Arc::new(Behaviour::Select { to: receiver.clone(), label: *label, cont: k })
            } else if r == receiver {
                Arc::new(Behaviour::Branch { from: sender.clone(), branches: [(*label, k)].into_iter().collect() })
            } else {
                k
            }
        }
        Choreography::Cond { decider, sender, then_branch, else_branch } => {
            let t = within(PathStep::Then, then_branch, path)?;
            let e = within(PathStep::Else, else_branch, path)?;
            if r == decider {
                Arc::new(Behaviour::Cond { sender: sender.clone(), then_branch: t, else_branch: e })
            } else {
                let merged = merge_arc(&t, &e).map_err(|m| UnmergeablePoint {
                    path: Path(path.clone()),
                    process: r.clone(),
                    left: m.left,
                    right: m.right,
                })?;
                if r == sender {
                    Arc::new(Behaviour::Send { to: decider.clone(), expr: Expr::Cell, cont: merged })
                } else {
                    merged
                }
            }
        }
        Choreography::Def { name, body, cont, annotation } => {
            let k = within(PathStep::Scope, cont, path)?;
            if involves(annotation, r) {
                let b = within(PathStep::Body, body, path)?;
                Arc::new(Behaviour::Def { name: name.clone(), body: b, cont: k })
            } else {
                k
            }
        }
        Choreography::Call { name, annotation } => {
            if involves(annotation, r) {
                Arc::new(Behaviour::Call { name: name.clone() })
            } else {
                Arc::new(Behaviour::End)
            }
        }
    })
}

/// `⟦c, σ⟧`: one process per name in `c`, holding its value in `state`.
/// Calls are annotated first. Reports every process that cannot be projected.
pub fn epp(c: &Choreography, state: &ProcState) -> Result<Network, ProjectabilityError> {
    let annotated = annotate_calls(c).unwrap_or_else(|_| c.clone());
    let mut net = Network::new();
    let mut points = Vec::new();
    for p in proc_names(&annotated) {
        match project(&annotated, &p, &mut Vec::new()) {
            Ok(b) => {
                net.processes.insert(p.clone(), Process { value: state.get(&p), behaviour: b });
            }
            Err(point) => points.push(point),
        }
    }
    if points.is_empty() {
        Ok(net)
    } else {
        Err(ProjectabilityError { points })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::parse_choreography;
    use crate::sp::parse_behaviour;

    fn parse(s: &str) -> Choreography {
        annotate_calls(&parse_choreography(s).unwrap()).unwrap()
    }

    fn n(s: &str) -> ProcName {
        ProcName::new(s).unwrap()
    }

    #[test]
    fn inc_projection() {
        let inc = parse("p.c -> t; t.(s c) -> p; 0");
        assert_eq!(project_behaviour(&inc, &n("p")).unwrap(), parse_behaviour("send t.c; recv t; 0").unwrap());
        let s = ProcState::parse_bindings("p=4,t=1").unwrap();
        assert_eq!(
            epp(&inc, &s).unwrap().to_string(),
            "p[4] > send t.c; recv t; 0 | t[1] > recv p; send p.(s c); 0"
        );
    }

    #[test]
    fn missing_selection() {
        let bad = parse("if p = q then (p.c -> r; 0) else (r.c -> p; 0)");
        let err = epp(&bad, &ProcState::new()).unwrap_err();
        assert_eq!(err.points.len(), 1);
        assert_eq!(err.points[0].process, n("r"));
        assert_eq!(err.points[0].path, Path::root());

        let good = parse("if p = q then (p -> r[L]; p.c -> r; 0) else (p -> r[R]; r.c -> p; 0)");
        assert_eq!(
            project_behaviour(&good, &n("r")).unwrap(),
            parse_behaviour("branch p {L: recv p; 0, R: send p.c; 0}").unwrap()
        );
    }

    #[test]
    fn unmergeable_receive() {
        let c = parse("if p = q then (p.c -> r; 0) else (0)");
        let point = project_behaviour(&c, &n("r")).unwrap_err();
        assert_eq!(point.left, parse_behaviour("recv p; 0").unwrap());
        assert_eq!(point.right, Behaviour::End);
        assert_eq!(point.to_json()["process"], "r");
    }

    #[test]
    fn empty_choreography() {
        assert!(epp(&Choreography::End, &ProcState::new()).unwrap().is_empty());
    }

    #[test]
    fn procedures_only_where_involved() {
        let c = parse("def X = p.c -> q; X in r.c -> p; X");
        assert_eq!(project_behaviour(&c, &n("r")).unwrap(), parse_behaviour("send p.c; 0").unwrap());
        assert_eq!(
            project_behaviour(&c, &n("q")).unwrap(),
            parse_behaviour("def X = recv p; X in X").unwrap()
        );
    }
}
