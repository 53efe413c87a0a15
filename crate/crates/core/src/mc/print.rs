use std::fmt::Write;

use super::ast::Choreography;
use crate::syntax::ProcSet;

/// Canonical single-line rendering; `parse_choreography` reads it back to an
/// equal term.
pub fn print_choreography(c: &Choreography) -> String {
    let mut out = String::new();
    write_chor(&mut out, c);
    out
}

fn write_chor(out: &mut String, c: &Choreography) {
    let mut c = c;
    loop {
        match c {
            Choreography::Com { sender, expr, receiver, cont } => {
                let _ = write!(out, "{sender}.{expr} -> {receiver}; ");
                c = cont;
            }
            Choreography::Sel { sender, receiver, label, cont } => {
                let _ = write!(out, "{sender} -> {receiver}[{label}]; ");
                c = cont;
            }
            Choreography::Cond { decider, sender, then_branch, else_branch } => {
                let _ = write!(out, "if {decider} = {sender} then (");
                write_chor(out, then_branch);
                out.push_str(") else (");
                write_chor(out, else_branch);
                out.push(')');
                return;
            }
            Choreography::Def { name, body, cont, annotation } => {
                let _ = write!(out, "def {name}");
                write_annotation(out, annotation.as_deref());
                out.push_str(" = ");
                write_chor(out, body);
                out.push_str(" in ");
                c = cont;
            }
            Choreography::Call { name, annotation } => {
                out.push_str(name.as_str());
                write_annotation(out, annotation.as_deref());
                return;
            }
            Choreography::End => {
                out.push('0');
                return;
            }
        }
    }
}

fn write_annotation(out: &mut String, annotation: Option<&ProcSet>) {
    if let Some(set) = annotation {
        out.push_str("^{");
        for (i, p) in set.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(p.as_str());
        }
        out.push('}');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::parse_choreography;
    use crate::syntax::{Expr, Label, ProcName};

    fn n(s: &str) -> ProcName {
        ProcName::new(s).unwrap()
    }

    #[test]
    fn simple_forms() {
        assert_eq!(print_choreography(&Choreography::End), "0");
        let com = Choreography::com(n("p"), Expr::Epsilon, n("q"), Choreography::End);
        assert_eq!(print_choreography(&com), "p.eps -> q; 0");
        let sel = Choreography::sel(n("p"), n("q"), Label::L, Choreography::End);
        assert_eq!(print_choreography(&sel), "p -> q[L]; 0");
    }

    #[test]
    fn round_trips() {
        for text in [
            "if p = q then (p -> r[L]; p.c -> r; 0) else (p -> r[R]; 0)",
            "def X = if r = q then (0) else (p.c -> t1; t1.(s c) -> p; X) in t1.eps -> r; X",
            "def X^{p, q} = p.c -> q; X^{p, q} in X^{p, q}",
            "def X = def Y = p.c -> q; Y in Y in q.eps -> p; X",
        ] {
            let c = parse_choreography(text).unwrap();
            assert_eq!(print_choreography(&c), text);
            assert_eq!(parse_choreography(&print_choreography(&c)).unwrap(), c);
        }
    }
}
