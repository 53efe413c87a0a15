//! Acceptance gate: runs each criterion and prints one PASS/FAIL line.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use chorec_core::correspondence::check_correspondence;
use chorec_core::gen::{gen_corpus, ChorShape, CorpusItem, CorpusKind, Generator};
use chorec_core::mc::{freshen, proc_names, seq_compose};
use chorec_core::projection::{amend, epp, merge};
use chorec_core::recfun::{encode, oracle_eval, parallel_branches, pi, EvalError, ImplementError, Mode, RecFun};
use chorec_core::sem::{
    check_parallel_run, decide_termination_condfree, enabled_redexes, execute, fire, is_terminated,
    TerminationVerdict,
};
use chorec_core::sp::{net_run_one, parse_behaviour};
use chorec_core::{implement_function, parse_choreography, Choreography, Outcome, ProcState, Scheduler, Value};

use common::*;

type Verdict = Result<String, String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

/// Walks longer than this many steps stop.
const PROGRESS_STEPS: usize = 200;
/// Walks stop once a configuration has more nodes than this. Firing through
/// both branches of a conditional copies the rest of the term, so uniform
/// random walks on recursive terms can grow exponentially.
const PROGRESS_MAX_SIZE: usize = 2_000;

/// Progress: random walks never reach a configuration that is neither
/// finished nor able to move.
fn criterion_1() -> Verdict {
    let corpus = gen_corpus(101, 1000, CorpusKind::Closed);
    let results: Vec<(Option<String>, bool, usize)> = corpus
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, item)| {
            let CorpusItem::Choreography(c) = item else { unreachable!() };
            let mut g = Generator::new(10_000 + i as u64);
            (0..3)
                .map(|k| {
                    let mut sigma = g.state();
                    let mut rng = ChaCha8Rng::seed_from_u64(i as u64 * 3 + k);
                    let mut cur = Arc::new(freshen(c));
                    for step in 0..PROGRESS_STEPS {
                        if is_terminated(&cur) {
                            return (None, false, step);
                        }
                        if cur.size() > PROGRESS_MAX_SIZE {
                            return (None, true, step);
                        }
                        let redexes = enabled_redexes(&cur);
                        if redexes.is_empty() {
                            return (Some(format!("{c} reaches {cur}")), false, step);
                        }
                        let redex = &redexes[rng.gen_range(0..redexes.len())];
                        cur = match fire(&cur, &mut sigma, redex) {
                            Ok((next, _)) => next,
                            Err(e) => return (Some(format!("{c}: enabled redex did not fire: {e}")), false, step),
                        };
                    }
                    (None, false, PROGRESS_STEPS)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let violations: Vec<&String> = results.iter().filter_map(|(v, _, _)| v.as_ref()).collect();
    let capped = results.iter().filter(|(_, c, _)| *c).count();
    let configurations: usize = results.iter().map(|(_, _, n)| n + 1).sum();
    if violations.is_empty() {
        Ok(format!(
            "3000 walks, {configurations} configurations, 0 violations ({capped} walks stopped at size {PROGRESS_MAX_SIZE})"
        ))
    } else {
        fail(format!("{} violations, first: {}", violations.len(), violations[0]))
    }
}

/// Worked examples and amended random choreographies, each with a state.
fn correspondence_cases() -> Vec<(String, Choreography, ProcState)> {
    let mut cases = vec![
        ("inc".to_string(), chor(INC), state("p=3")),
        ("add macro".to_string(), chor(ADD_MACRO), state("p=2,q=3")),
        ("add macro, q=0".to_string(), chor(ADD_MACRO), state("p=4")),
        ("no selection amended, equal".to_string(), amend(&chor(UNSELECTED)), state("p=1,q=1")),
        ("no selection amended, different".to_string(), amend(&chor(UNSELECTED)), state("p=1,q=2")),
        ("receive or nothing, equal".to_string(), amend(&chor(RECV_OR_NOTHING)), state("p=2,q=2")),
        ("receive or nothing, different".to_string(), amend(&chor(RECV_OR_NOTHING)), state("q=2")),
        ("same input, equal".to_string(), chor(SAME_INPUT), state("")),
        ("same input, different".to_string(), chor(SAME_INPUT), state("p=3")),
    ];
    let mut g = Generator::new(202);
    for i in 0..300 {
        let c = g.projectable(ChorShape::default());
        let sigma = g.state();
        cases.push((format!("generated #{i}"), c, sigma));
    }
    cases
}

/// Operational correspondence between choreographies and their projections.
fn criterion_2(cases: &[(String, Choreography, ProcState)]) -> Verdict {
    let results: Vec<_> = cases
        .par_iter()
        .map(|(label, c, sigma)| (label, check_correspondence(c, sigma, 50, 10_000)))
        .collect();
    let mut steps = 0;
    let mut truncated = 0;
    for (label, r) in results {
        match r {
            Err(e) => return fail(format!("{label}: {e}")),
            Ok(r) if !r.passed() => {
                let first = r.completeness_failures.iter().chain(&r.soundness_failures).next();
                return fail(format!(
                    "{label}: {} completeness and {} soundness failures, first: {:?}",
                    r.completeness_failures.len(),
                    r.soundness_failures.len(),
                    first
                ));
            }
            Ok(r) => {
                steps += r.steps_checked;
                truncated += usize::from(r.truncated);
            }
        }
    }
    Ok(format!("{} choreographies, {steps} steps checked, {truncated} truncated", cases.len()))
}

/// Projected networks never get stuck under random schedules.
fn criterion_3(cases: &[(String, Choreography, ProcState)]) -> Verdict {
    let stuck: Vec<String> = cases
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (label, c, sigma))| {
            let net = epp(c, sigma).expect("projectable");
            (0..5u64)
                .filter(move |k| net_run_one(&net, 1000, Scheduler::Random(i as u64 * 5 + k)).outcome == Outcome::Stuck)
                .map(move |k| format!("{label} (schedule {k})"))
        })
        .collect();
    if stuck.is_empty() {
        Ok(format!("{} runs, none stuck", cases.len() * 5))
    } else {
        fail(format!("{} stuck runs, first: {}", stuck.len(), stuck[0]))
    }
}

/// Amendment is total, yields projectable choreographies and preserves final
/// states.
fn criterion_4() -> Verdict {
    if amend(&chor(RECV_OR_NOTHING)).to_string() != RECV_OR_NOTHING_AMENDED {
        return fail(format!("first amendment example gives {}", amend(&chor(RECV_OR_NOTHING))));
    }
    if amend(&chor(SAME_INPUT)).to_string() != SAME_INPUT {
        return fail(format!("second amendment example gives {}", amend(&chor(SAME_INPUT))));
    }
    let corpus = gen_corpus(404, 1000, CorpusKind::Closed);
    let outcomes: Vec<Result<bool, String>> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, item)| {
            let CorpusItem::Choreography(c) = item else { unreachable!() };
            let sigma = Generator::new(40_000 + i as u64).state();
            let a = amend(c);
            if let Err(e) = epp(&a, &sigma) {
                return Err(format!("{c}: amended {a} is not projectable: {e}"));
            }
            let original = execute(c, &sigma, 5000);
            let amended_short = execute(&a, &sigma, 5000);
            if amended_short.outcome == Outcome::Terminated && original.outcome != Outcome::Terminated {
                return Err(format!("{c}: only the amended choreography terminates"));
            }
            if original.outcome != Outcome::Terminated {
                return Ok(false);
            }
            // selections add steps, so the amended run gets more fuel
            let amended = execute(&a, &sigma, 50_000);
            if amended.outcome != Outcome::Terminated {
                return Err(format!("{c}: amended run ends {}", amended.outcome));
            }
            if amended.state != original.state {
                return Err(format!("{c}: final states {} and {}", original.state, amended.state));
            }
            Ok(true)
        })
        .collect();
    let mut terminating = 0;
    for o in outcomes {
        terminating += usize::from(o?);
    }
    Ok(format!("1000 amended and projected, {terminating} terminating with equal final states, examples match"))
}

fn values(xs: &[u64]) -> Vec<Value> {
    xs.iter().map(|&x| Value::from(x)).collect()
}

fn grid(arity: usize) -> Vec<Vec<u64>> {
    (0..arity).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter().flat_map(|prefix| (0..=4).map(move |x| [prefix.clone(), vec![x]].concat())).collect()
    })
}

/// Compiled functions agree with the direct evaluator.
fn criterion_5() -> Verdict {
    const FUEL: usize = 100_000;
    let functions = [
        ("Z", RecFun::Zero),
        ("S", RecFun::Succ),
        ("P[2,1]", RecFun::Proj { n: 2, m: 1 }),
        ("P[3,2]", RecFun::Proj { n: 3, m: 2 }),
        ("add", RecFun::add()),
        ("eq", RecFun::eq_composite()),
        ("sub", RecFun::sub()),
    ];
    let jobs: Vec<(&str, &RecFun, Vec<u64>, Mode)> = functions
        .iter()
        .flat_map(|(label, f)| {
            grid(f.arity())
                .into_iter()
                .flat_map(move |args| [Mode::Choreography, Mode::Network].map(|m| (*label, f, args.clone(), m)))
        })
        .collect();
    let problems: Vec<String> = jobs
        .par_iter()
        .filter_map(|(label, f, args, mode)| {
            let expected = oracle_eval(f, &values(args), FUEL);
            let got = implement_function(f, &values(args), FUEL, *mode);
            let diverging_sub = *label == "sub" && args[1] > args[0];
            match (expected, got) {
                (Ok(v), Ok(w)) if v == w && !diverging_sub => None,
                (Err(EvalError::FuelExhausted), Err(ImplementError::FuelExhausted)) if diverging_sub => None,
                (e, g) => Some(format!("{label}{args:?} in {mode} mode: oracle {e:?}, compiled {g:?}")),
            }
        })
        .collect();
    if problems.is_empty() {
        Ok(format!("{} runs agree", jobs.len()))
    } else {
        fail(format!("{} disagreements, first: {}", problems.len(), problems[0]))
    }
}

/// Auxiliary bookkeeping of the add encoding.
fn criterion_6() -> Verdict {
    let add = RecFun::add();
    if pi(&add) != 4 {
        return fail(format!("pi(add) = {}", pi(&add)));
    }
    let c = encode(&add, &[name("px"), name("py")], &name("q"), 0).map_err(|e| e.to_string())?;
    let aux: Vec<String> = proc_names(&c).iter().filter(|p| p.is_reserved()).map(|p| p.to_string()).collect();
    if aux != ["r#0", "r#1", "r#2", "r#3"] {
        return fail(format!("auxiliaries {aux:?}"));
    }
    let golden = include_str!("golden/add.mc");
    let expected = parse_choreography(golden).map_err(|e| e.to_string())?;
    let line = golden.lines().find(|l| !l.starts_with('#')).unwrap_or_default();
    if c != expected || c.to_string() != line {
        return fail(format!("compiled add is {c}"));
    }
    Ok("pi(add) = 4, auxiliaries r#0..r#3, golden text matches".into())
}

/// Disjoint choreographies run in parallel: every interleaving is realized.
fn criterion_7() -> Verdict {
    let inc1 = chor("p.c -> t1; t1.(s c) -> p; 0");
    let inc2 = chor("r.c -> t2; t2.(s c) -> r; 0");
    let r = check_parallel_run(&inc1, &inc2, &state("p=1,r=5"), 100).map_err(|e| e.to_string())?;
    if !r.passed() || r.total() != 6 {
        return fail(format!("inc;inc: {} of {} interleavings realized", r.realized.len(), r.total()));
    }
    seq_compose(&inc1, &inc2).map_err(|e| e.to_string())?;

    let s = |m| RecFun::comp(RecFun::Succ, vec![RecFun::Proj { n: 2, m }]).expect("arity 2");
    let h = RecFun::comp(RecFun::add(), vec![s(1), s(2)]).expect("arity 2");
    let branches = parallel_branches(&h, &[name("px"), name("py")], &name("q"), 0).map_err(|e| e.to_string())?;
    let sigma = state("px=2,py=3,r#0=2,r#1=3,r#2=2,r#3=3");
    let r2 = check_parallel_run(&branches[0], &branches[1], &sigma, 100).map_err(|e| e.to_string())?;
    if !r2.passed() {
        return fail(format!("parallel composition: {} of {} realized", r2.realized.len(), r2.total()));
    }
    Ok(format!("inc;inc 6/6 interleavings, composition branches {}/{}", r2.realized.len(), r2.total()))
}

/// The termination decision agrees with running out the fuel.
fn criterion_8() -> Verdict {
    let corpus = gen_corpus(808, 500, CorpusKind::CondFree);
    let disagreements: Vec<String> = corpus
        .par_iter()
        .filter_map(|item| {
            let CorpusItem::Choreography(c) = item else { unreachable!() };
            let Ok(verdict) = decide_termination_condfree(c) else {
                return Some(format!("{c}: reported a conditional"));
            };
            let outcome = execute(c, &ProcState::new(), 10_000).outcome;
            let agree = matches!(
                (verdict, outcome),
                (TerminationVerdict::Terminates, Outcome::Terminated) | (TerminationVerdict::Diverges, Outcome::FuelExhausted)
            );
            (!agree).then(|| format!("{c}: decided {verdict:?}, ran {outcome}"))
        })
        .collect();
    if disagreements.is_empty() {
        Ok("500 choreographies, 0 disagreements".into())
    } else {
        fail(format!("{} disagreements, first: {}", disagreements.len(), disagreements[0]))
    }
}

/// Algebraic laws of merging.
fn criterion_9() -> Verdict {
    let b = |s: &str| parse_behaviour(s).expect("valid behaviour");
    if merge(&b("branch p {L: recv p; 0}"), &b("branch p {R: send p.c; 0}")) != Ok(b("branch p {L: recv p; 0, R: send p.c; 0}")) {
        return fail("distinct labels are not united");
    }
    if merge(&b("recv p; 0"), &b("0")).is_ok() {
        return fail("recv p; 0 merges with 0");
    }
    let mut g = Generator::new(909);
    let mut defined = 0;
    for _ in 0..1000 {
        let x = g.behaviour(4);
        let y = g.behaviour_variant(&x, 4);
        let z = g.behaviour_variant(&x, 4);
        if merge(&x, &x).as_ref() != Ok(&x) {
            return fail(format!("not idempotent on {x}"));
        }
        if merge(&x, &y).ok() != merge(&y, &x).ok() {
            return fail(format!("not commutative on {x} and {y}"));
        }
        let left = merge(&x, &y).ok().and_then(|xy| merge(&xy, &z).ok());
        let right = merge(&y, &z).ok().and_then(|yz| merge(&x, &yz).ok());
        if left != right {
            return fail(format!("not associative on {x}, {y}, {z}"));
        }
        defined += usize::from(left.is_some());
    }
    Ok(format!("1000 cases, {defined} with all merges defined, both examples hold"))
}

fn report(n: usize, budget: Option<Duration>, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match verdict {
        Ok(d) => match budget {
            Some(b) if elapsed > b => (false, format!("{d}; took {elapsed:.1?}, budget {b:?}")),
            _ => (true, d),
        },
        Err(d) => (false, d),
    };
    println!("[{}] criterion {n}: {detail} ({elapsed:.2?})", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let cases = correspondence_cases();
    let results = [
        report(1, secs(30), criterion_1),
        report(2, secs(120), || criterion_2(&cases)),
        report(3, secs(60), || criterion_3(&cases)),
        report(4, None, criterion_4),
        report(5, secs(180), criterion_5),
        report(6, None, criterion_6),
        report(7, secs(30), criterion_7),
        report(8, None, criterion_8),
        report(9, None, criterion_9),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
