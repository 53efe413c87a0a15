use std::collections::HashSet;
use std::sync::Arc;

use crate::sp::{bind_bdef, BClosure, Behaviour, Network};
use crate::syntax::Env;

/// `smaller ≺ larger`: after dropping terminated processes both networks have
/// the same processes and cell values, and every behaviour in `smaller` is the
/// one in `larger` with some branch entries deleted. Definitions and calls are
/// looked through, so erasing a dead definition or unfolding a call does not
/// count as a difference.
pub fn prunes_to(larger: &Network, smaller: &Network) -> bool {
    let larger = larger.collect_garbage();
    let smaller = smaller.collect_garbage();
    if larger.processes.len() != smaller.processes.len() {
        return false;
    }
    larger.processes.iter().zip(&smaller.processes).all(|((n1, p1), (n2, p2))| {
        n1 == n2
            && p1.value == p2.value
            && Pruning::default().check(&p1.behaviour, &Env::new(), &p2.behaviour, &Env::new())
    })
}

/// Behaviour-level `smaller ≺ larger`.
pub fn behaviour_prunes_to(larger: &Behaviour, smaller: &Behaviour) -> bool {
    Pruning::default().check(&Arc::new(larger.clone()), &Env::new(), &Arc::new(smaller.clone()), &Env::new())
}

#[derive(Default)]
struct Pruning {
    /// Pairs already under comparison; revisiting one closes a cycle.
    assumed: HashSet<(*const Behaviour, *const Behaviour)>,
}

/// Skips definitions and unfolds calls. `None` stands for a finished
/// behaviour.
fn normalize(b: &Arc<Behaviour>, env: &Env<BClosure>) -> Option<(Arc<Behaviour>, Env<BClosure>)> {
    let mut env = env.clone();
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
            _ => return Some((cur, env)),
        };
        cur = next;
    }
}

impl Pruning {
    fn check(&mut self, large: &Arc<Behaviour>, le: &Env<BClosure>, small: &Arc<Behaviour>, se: &Env<BClosure>) -> bool {
        let (large, le, small, se) = match (normalize(large, le), normalize(small, se)) {
            (None, None) => return true,
            (Some((l, le)), Some((s, se))) => (l, le, s, se),
            _ => return false,
        };
        if !self.assumed.insert((Arc::as_ptr(&large), Arc::as_ptr(&small))) {
            return true;
        }
        match (&*large, &*small) {
            (Behaviour::Send { to: t1, expr: e1, cont: c1 }, Behaviour::Send { to: t2, expr: e2, cont: c2 }) => {
                t1 == t2 && e1 == e2 && self.check(c1, &le, c2, &se)
            }
            (Behaviour::Recv { from: f1, cont: c1 }, Behaviour::Recv { from: f2, cont: c2 }) => {
                f1 == f2 && self.check(c1, &le, c2, &se)
            }
            (Behaviour::Select { to: t1, label: l1, cont: c1 }, Behaviour::Select { to: t2, label: l2, cont: c2 }) => {
                t1 == t2 && l1 == l2 && self.check(c1, &le, c2, &se)
            }
            (Behaviour::Branch { from: f1, branches: bs1 }, Behaviour::Branch { from: f2, branches: bs2 }) => {
                f1 == f2
                    && bs2.iter().all(|(label, b2)| match bs1.get(label) {
                        Some(b1) => self.check(b1, &le, b2, &se),
                        None => false,
                    })
            }
            (
                Behaviour::Cond { sender: s1, then_branch: t1, else_branch: e1 },
                Behaviour::Cond { sender: s2, then_branch: t2, else_branch: e2 },
            ) => s1 == s2 && self.check(t1, &le, t2, &se) && self.check(e1, &le, e2, &se),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sp::{parse_behaviour, parse_network};

    fn net(s: &str) -> Network {
        parse_network(s).unwrap()
    }

    #[test]
    fn reflexive() {
        let n = net("p[1] > def X = send q.c; X in X | q[0] > def X = branch p {L: recv p; X, R: 0} in X");
        assert!(prunes_to(&n, &n));
    }

    #[test]
    fn deleting_a_branch() {
        let large = net("p[0] > branch q {L: recv q; 0, R: 0} | q[0] > sel p[L]; send p.c; 0");
        let small = net("p[0] > branch q {L: recv q; 0} | q[0] > sel p[L]; send p.c; 0");
        assert!(prunes_to(&large, &small));
        assert!(!prunes_to(&small, &large));
    }

    #[test]
    fn only_deletes() {
        assert!(!behaviour_prunes_to(&Behaviour::End, &parse_behaviour("recv p; 0").unwrap()));
        assert!(!behaviour_prunes_to(&parse_behaviour("recv p; 0").unwrap(), &Behaviour::End));
    }

    #[test]
    fn values_and_garbage() {
        assert!(prunes_to(&net("p[1] > 0 | q[2] > recv p; 0"), &net("q[2] > recv p; 0")));
        assert!(!prunes_to(&net("q[1] > recv p; 0"), &net("q[2] > recv p; 0")));
    }

    #[test]
    fn modulo_unfolding_and_dead_definitions() {
        let large = parse_behaviour("def X = recv p; X in recv p; X").unwrap();
        let small = parse_behaviour("def X = recv p; X in X").unwrap();
        assert!(behaviour_prunes_to(&large, &small));
        assert!(behaviour_prunes_to(&small, &large));
        let dead = parse_behaviour("def Y = send q.c; Y in recv p; 0").unwrap();
        assert!(behaviour_prunes_to(&dead, &parse_behaviour("recv p; 0").unwrap()));
    }
}
