mod common;

use chorec_core::mc::{proc_names, seq_compose};
use chorec_core::projection::{project_behaviour, UnmergeablePoint};
use chorec_core::recfun::{encode, pi};
use chorec_core::sem::{execute, run_one};
use chorec_core::sp::{net_execute, parse_behaviour};
use chorec_core::{amend, epp, merge, parse_recfun, Outcome, ProcName, ProcState, RecFun, Scheduler};

use common::*;

#[test]
fn inc_increments() {
    let run = execute(&chor(INC), &state("p=3"), 100);
    assert_eq!(run.outcome, Outcome::Terminated);
    assert_eq!(run.state.get(&name("p")), 4u64.into());
    assert_eq!(run.steps, 2);
}

#[test]
fn inc_projection_for_any_state() {
    for s in ["", "p=3", "p=7,t=2"] {
        let sigma = state(s);
        let n = epp(&chor(INC), &sigma).unwrap();
        assert_eq!(n.processes.len(), 2);
        let p = n.get(&name("p")).unwrap();
        let t = n.get(&name("t")).unwrap();
        assert_eq!(p.value, sigma.get(&name("p")));
        assert_eq!(t.value, sigma.get(&name("t")));
        assert_eq!(*p.behaviour, parse_behaviour("send t.c; recv t; 0").unwrap());
        assert_eq!(*t.behaviour, parse_behaviour("recv p; send p.(s c); 0").unwrap());
    }
}

#[test]
fn add_macro_adds_into_p() {
    for (p, q) in [(0u64, 0u64), (2, 3), (4, 0), (0, 4)] {
        let sigma = ProcState::new().with(name("p"), p).with(name("q"), q);
        let run = execute(&chor(ADD_MACRO), &sigma, 10_000);
        assert_eq!(run.outcome, Outcome::Terminated);
        assert_eq!(run.state.get(&name("p")), (p + q).into());
        let net = net_execute(&epp(&chor(ADD_MACRO), &sigma).unwrap(), 10_000);
        assert_eq!(net.outcome, Outcome::Terminated);
        assert_eq!(net.network.get(&name("p")).unwrap().value, (p + q).into());
    }
}

#[test]
fn inc_compositions_in_add_body() {
    let composed = seq_compose(&chor("p.c -> t1; t1.(s c) -> p; 0"), &chor("r.c -> t2; t2.(s c) -> r; 0")).unwrap();
    assert_eq!(composed.to_string(), "p.c -> t1; t1.(s c) -> p; r.c -> t2; t2.(s c) -> r; 0");
}

#[test]
fn incs_run_in_either_order() {
    // The two increments of the add body are independent, so a run can
    // perform `inc(r, t2)` first.
    let c = chor("p.c -> t1; t1.(s c) -> p; r.c -> t2; t2.(s c) -> r; 0");
    let orders: std::collections::HashSet<String> = (0..64)
        .map(|seed| {
            let t = run_one(&c, &state("p=1,r=5"), 100, Scheduler::Random(seed));
            assert_eq!(t.final_state().get(&name("p")), 2u64.into());
            assert_eq!(t.final_state().get(&name("r")), 6u64.into());
            t.actions().iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
        })
        .collect();
    assert!(orders.contains("r.c -> t2, t2.(s c) -> r, p.c -> t1, t1.(s c) -> p"), "{orders:?}");
    assert!(orders.contains("p.c -> t1, t1.(s c) -> p, r.c -> t2, t2.(s c) -> r"));
}

#[test]
fn selection_projects_to_branching() {
    let c = chor("if p = q then (p -> r[L]; p.c -> r; 0) else (p -> r[R]; 0)");
    let b = project_behaviour(&c, &name("r")).unwrap();
    assert_eq!(b, parse_behaviour("branch p {L: recv p; 0, R: 0}").unwrap());
}

#[test]
fn missing_selection_is_unprojectable() {
    let c = chor(RECV_OR_NOTHING);
    let err: UnmergeablePoint = project_behaviour(&c, &name("r")).unwrap_err();
    assert_eq!(err.process, name("r"));
    assert_eq!(err.left, parse_behaviour("recv p; 0").unwrap());
    assert_eq!(err.right, parse_behaviour("0").unwrap());
    assert!(merge(&parse_behaviour("recv p; 0").unwrap(), &parse_behaviour("0").unwrap()).is_err());
}

#[test]
fn amendment_examples() {
    assert_eq!(amend(&chor(RECV_OR_NOTHING)).to_string(), RECV_OR_NOTHING_AMENDED);
    let c = chor(SAME_INPUT);
    assert_eq!(amend(&c), c);
    assert_eq!(project_behaviour(&c, &name("r")).unwrap(), parse_behaviour("recv p; 0").unwrap());
    assert_eq!(amend(&chor(UNSELECTED)).to_string(), SELECTED);
}

#[test]
fn add_and_sub_definitions() {
    let add = parse_recfun("R(P[1,1]; C(S; P[3,2]))").unwrap();
    assert_eq!(add, RecFun::add());
    assert_eq!(add.arity(), 2);
    assert_eq!(pi(&add), 4);
    let sub = RecFun::sub();
    assert_eq!(sub.arity(), 2);
    assert_eq!(pi(&sub), 12);
}

#[test]
fn sub_uses_twelve_auxiliaries() {
    let c = encode(&RecFun::sub(), &[name("px"), name("py")], &name("q"), 0).unwrap();
    let mut aux: Vec<usize> = proc_names(&c).iter().filter_map(ProcName::aux_index).collect();
    aux.sort();
    assert_eq!(aux, (0..12).collect::<Vec<_>>());
}

#[test]
fn eq_macro_single_exit() {
    let c = encode(&parse_recfun("EQ").unwrap(), &[name("px"), name("py")], &name("q"), 0).unwrap();
    assert_eq!(
        c.to_string(),
        "def T0 = r#0.c -> q; 0 in if px = py then (px.eps -> r#0; T0) else (px.(s c) -> r#0; T0)"
    );
    for (x, y) in [(2u64, 2u64), (2, 3), (0, 4)] {
        let sigma = ProcState::new().with(name("px"), x).with(name("py"), y);
        let q = execute(&c, &sigma, 100).state.get(&name("q"));
        assert_eq!(q.is_zero(), x == y, "eq({x}, {y}) = {q}");
    }
}
