use thiserror::Error;

use super::ast::{pi, pi_parallel, ArityError, RecFun};
use crate::mc::{seq_compose_all, Choreography};
use crate::syntax::{Expr, ProcName, ProcVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("process `{0}` clashes with the auxiliary processes of the encoding")]
    NameClash(ProcName),
    #[error("process `{0}` is passed more than once")]
    DuplicateProcess(ProcName),
    #[error(transparent)]
    Arity(#[from] ArityError),
}

/// `⟨f⟩`: a single-exit choreography that reads the arguments of `f` from
/// `inputs` and leaves the result in `output`. Auxiliary processes are
/// `r#ell`, `r#(ell+1)` and so on. No selections are inserted.
pub fn encode(f: &RecFun, inputs: &[ProcName], output: &ProcName, ell: usize) -> Result<Choreography, EncodeError> {
    check_names(f, inputs, output, ell)?;
    Ok(Encoder { parallel: false }.enc(f, inputs, output, ell))
}

/// Like `encode`, but every composition first copies its inputs into fresh
/// replicas, one set per inner function, so the inner encodings share no
/// process and can run in parallel.
pub fn encode_parallel(
    f: &RecFun,
    inputs: &[ProcName],
    output: &ProcName,
    ell: usize,
) -> Result<Choreography, EncodeError> {
    check_names(f, inputs, output, ell)?;
    Ok(Encoder { parallel: true }.enc(f, inputs, output, ell))
}

/// For a composition `C(f; g1, ..., gk)`, the parallel encodings of the `gi`
/// exactly as they appear inside `encode_parallel`, input copies excluded.
pub fn parallel_branches(
    h: &RecFun,
    inputs: &[ProcName],
    output: &ProcName,
    ell: usize,
) -> Result<Vec<Choreography>, EncodeError> {
    check_names(h, inputs, output, ell)?;
    let RecFun::Comp { gs, .. } = h else {
        return Ok(Vec::new());
    };
    let layout = ParallelLayout::new(gs.len(), inputs.len(), ell);
    let enc = Encoder { parallel: true };
    let mut ell_i = layout.first_free;
    Ok(gs
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let c = enc.enc(g, &layout.replicas(i), &layout.link(i), ell_i);
            ell_i += pi_parallel(g);
            c
        })
        .collect())
}

fn check_names(f: &RecFun, inputs: &[ProcName], output: &ProcName, ell: usize) -> Result<(), EncodeError> {
    if inputs.len() != f.arity() {
        return Err(ArityError::Arguments { expected: f.arity(), found: inputs.len() }.into());
    }
    let mut seen: Vec<&ProcName> = Vec::new();
    for p in inputs.iter().chain(std::iter::once(output)) {
        if p.aux_index().is_some_and(|i| i >= ell) {
            return Err(EncodeError::NameClash(p.clone()));
        }
        if seen.contains(&p) {
            return Err(EncodeError::DuplicateProcess(p.clone()));
        }
        seen.push(p);
    }
    Ok(())
}

fn r(i: usize) -> ProcName {
    ProcName::aux(i)
}

fn trampoline(ell: usize) -> ProcVar {
    ProcVar::new(&format!("T{ell}")).expect("valid procedure name")
}

fn com(from: &ProcName, expr: Expr, to: &ProcName, cont: Choreography) -> Choreography {
    Choreography::com(from.clone(), expr, to.clone(), cont)
}

/// `inc(p, t)`: increments `p` using `t` as scratch.
fn inc(p: &ProcName, t: &ProcName, cont: Choreography) -> Choreography {
    com(p, Expr::Cell, t, com(t, Expr::SuccCell, p, cont))
}

fn seq(parts: Vec<Choreography>) -> Choreography {
    seq_compose_all(&parts).expect("encodings have one exit point")
}

/// Name allocation for the parallel encoding of a composition with `k` inner
/// functions over `n` inputs: replicas first, then the links to the outer
/// function.
struct ParallelLayout {
    k: usize,
    n: usize,
    ell: usize,
    first_free: usize,
}

impl ParallelLayout {
    fn new(k: usize, n: usize, ell: usize) -> Self {
        ParallelLayout { k, n, ell, first_free: ell + n * k + k }
    }

    fn replica(&self, i: usize, j: usize) -> ProcName {
        r(self.ell + i * self.n + j)
    }

    fn replicas(&self, i: usize) -> Vec<ProcName> {
        (0..self.n).map(|j| self.replica(i, j)).collect()
    }

    fn link(&self, i: usize) -> ProcName {
        r(self.ell + self.n * self.k + i)
    }
}

struct Encoder {
    parallel: bool,
}

impl Encoder {
    fn pi(&self, f: &RecFun) -> usize {
        if self.parallel {
            pi_parallel(f)
        } else {
            pi(f)
        }
    }

    fn enc(&self, f: &RecFun, p: &[ProcName], q: &ProcName, ell: usize) -> Choreography {
        match f {
            RecFun::Zero => com(&p[0], Expr::Epsilon, q, Choreography::End),
            RecFun::Succ => com(&p[0], Expr::SuccCell, q, Choreography::End),
            RecFun::Proj { m, .. } => com(&p[m - 1], Expr::Cell, q, Choreography::End),
            RecFun::Eq => {
                let (px, py, rr, t) = (&p[0], &p[1], r(ell), trampoline(ell));
                Choreography::def(
                    t.clone(),
                    com(&rr, Expr::Cell, q, Choreography::End),
                    Choreography::cond(
                        px.clone(),
                        py.clone(),
                        com(px, Expr::Epsilon, &rr, Choreography::call(t.clone())),
                        com(px, Expr::SuccCell, &rr, Choreography::call(t)),
                    ),
                )
            }
            RecFun::Comp { f, gs } if self.parallel => {
                let layout = ParallelLayout::new(gs.len(), p.len(), ell);
                let mut parts = Vec::new();
                for i in 0..gs.len() {
                    for (j, pj) in p.iter().enumerate() {
                        parts.push(com(pj, Expr::Cell, &layout.replica(i, j), Choreography::End));
                    }
                }
                let mut ell_i = layout.first_free;
                let links: Vec<_> = (0..gs.len()).map(|i| layout.link(i)).collect();
                for (i, g) in gs.iter().enumerate() {
                    parts.push(self.enc(g, &layout.replicas(i), &links[i], ell_i));
                    ell_i += self.pi(g);
                }
                parts.push(self.enc(f, &links, q, ell_i));
                seq(parts)
            }
            RecFun::Comp { f, gs } => {
                let links: Vec<_> = (0..gs.len()).map(|i| r(ell + i)).collect();
                let mut ell_i = ell + gs.len();
                let mut parts = Vec::new();
                for (g, link) in gs.iter().zip(&links) {
                    parts.push(self.enc(g, p, link, ell_i));
                    ell_i += self.pi(g);
                }
                parts.push(self.enc(f, &links, q, ell_i));
                seq(parts)
            }
            RecFun::PrimRec { f, g } => {
                let (acc, counter, tmp, t) = (r(ell), r(ell + 1), r(ell + 2), trampoline(ell));
                let ell_f = ell + 3;
                let ell_g = ell_f + self.pi(f);
                let mut g_inputs = vec![counter.clone(), acc.clone()];
                g_inputs.extend_from_slice(&p[1..]);
                let step = seq(vec![
                    self.enc(g, &g_inputs, &tmp, ell_g),
                    com(&tmp, Expr::Cell, &acc, inc(&counter, &tmp, Choreography::call(t.clone()))),
                ]);
                let body = Choreography::cond(
                    counter.clone(),
                    p[0].clone(),
                    com(&acc, Expr::Cell, q, Choreography::End),
                    step,
                );
                let start = seq(vec![
                    self.enc(f, &p[1..], &acc, ell_f),
                    com(&tmp, Expr::Epsilon, &counter, Choreography::call(t.clone())),
                ]);
                Choreography::def(t, body, start)
            }
            RecFun::Min { f } => {
                let (acc, counter, zero, t) = (r(ell), r(ell + 1), r(ell + 2), trampoline(ell));
                let mut f_inputs = p.to_vec();
                f_inputs.push(counter.clone());
                let test = com(
                    &counter,
                    Expr::Epsilon,
                    &zero,
                    Choreography::cond(
                        zero.clone(),
                        acc.clone(),
                        com(&counter, Expr::Cell, q, Choreography::End),
                        inc(&counter, &zero, Choreography::call(t.clone())),
                    ),
                );
                let body = seq(vec![self.enc(f, &f_inputs, &acc, ell + 3), test]);
                Choreography::def(t.clone(), body, com(&zero, Expr::Epsilon, &counter, Choreography::call(t)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{exit_points, proc_names};

    fn n(s: &str) -> ProcName {
        ProcName::new(s).unwrap()
    }

    #[test]
    fn base_cases() {
        assert_eq!(encode(&RecFun::Zero, &[n("p")], &n("q"), 0).unwrap().to_string(), "p.eps -> q; 0");
        assert_eq!(encode(&RecFun::Succ, &[n("p")], &n("q"), 0).unwrap().to_string(), "p.(s c) -> q; 0");
        assert_eq!(
            encode_parallel(&RecFun::Zero, &[n("p")], &n("q"), 0).unwrap(),
            encode(&RecFun::Zero, &[n("p")], &n("q"), 0).unwrap()
        );
    }

    #[test]
    fn add_expansion() {
        let c = encode(&RecFun::add(), &[n("px"), n("py")], &n("q"), 0).unwrap();
        assert_eq!(
            c.to_string(),
            "def T0 = if r#1 = px then (r#0.c -> q; 0) else (r#0.c -> r#3; r#3.(s c) -> r#2; r#2.c -> r#0; \
             r#1.c -> r#2; r#2.(s c) -> r#1; T0) in py.c -> r#0; r#2.eps -> r#1; T0"
        );
        assert_eq!(exit_points(&c), 1);
    }

    #[test]
    fn auxiliaries_are_contiguous() {
        for f in [RecFun::add(), RecFun::sub(), RecFun::eq_composite()] {
            for ell in [0, 5] {
                let c = encode(&f, &[n("px"), n("py")], &n("q"), ell).unwrap();
                let aux: Vec<_> = proc_names(&c).iter().filter_map(|p| p.aux_index()).collect();
                let expected: Vec<_> = (ell..ell + pi(&f)).collect();
                let mut aux = aux;
                aux.sort();
                assert_eq!(aux, expected, "{f}");
            }
        }
    }

    #[test]
    fn reserved_names_rejected() {
        assert_eq!(
            encode(&RecFun::add(), &[ProcName::aux(0), n("py")], &n("q"), 0),
            Err(EncodeError::NameClash(ProcName::aux(0)))
        );
        assert!(encode(&RecFun::add(), &[ProcName::aux(0), n("py")], &n("q"), 1).is_ok());
        assert!(matches!(encode(&RecFun::add(), &[n("p"), n("p")], &n("q"), 0), Err(EncodeError::DuplicateProcess(_))));
    }

    #[test]
    fn parallel_branches_are_disjoint() {
        let s = |m| RecFun::comp(RecFun::Succ, vec![RecFun::Proj { n: 2, m }]).unwrap();
        let h = RecFun::comp(RecFun::add(), vec![s(1), s(2)]).unwrap();
        let branches = parallel_branches(&h, &[n("px"), n("py")], &n("q"), 0).unwrap();
        assert_eq!(branches.len(), 2);
        assert!(proc_names(&branches[0]).is_disjoint(&proc_names(&branches[1])));
        let whole = encode_parallel(&h, &[n("px"), n("py")], &n("q"), 0).unwrap();
        assert_eq!(exit_points(&whole), 1);
        let aux = proc_names(&whole).iter().filter(|p| p.is_reserved()).count();
        assert_eq!(aux, pi_parallel(&h));
    }
}
