use std::fmt::Write;

use super::ast::{Behaviour, Network};

pub fn print_behaviour(b: &Behaviour) -> String {
    let mut out = String::new();
    write_behaviour(&mut out, b);
    out
}

fn write_behaviour(out: &mut String, b: &Behaviour) {
    let mut b = b;
    loop {
        match b {
            Behaviour::Send { to, expr, cont } => {
                let _ = write!(out, "send {to}.{expr}; ");
                b = cont;
            }
            Behaviour::Recv { from, cont } => {
                let _ = write!(out, "recv {from}; ");
                b = cont;
            }
            Behaviour::Select { to, label, cont } => {
                let _ = write!(out, "sel {to}[{label}]; ");
                b = cont;
            }
            Behaviour::Branch { from, branches } => {
                let _ = write!(out, "branch {from} {{");
                for (i, (label, body)) in branches.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "{label}: ");
                    write_behaviour(out, body);
                }
                out.push('}');
                return;
            }
            Behaviour::Cond { sender, then_branch, else_branch } => {
                let _ = write!(out, "if c = {sender} then (");
                write_behaviour(out, then_branch);
                out.push_str(") else (");
                write_behaviour(out, else_branch);
                out.push(')');
                return;
            }
            Behaviour::Def { name, body, cont } => {
                let _ = write!(out, "def {name} = ");
                write_behaviour(out, body);
                out.push_str(" in ");
                b = cont;
            }
            Behaviour::Call { name } => {
                out.push_str(name.as_str());
                return;
            }
            Behaviour::End => {
                out.push('0');
                return;
            }
        }
    }
}

/// `p[v] > B | q[w] > B'`, processes in name order; `0` when empty.
pub fn print_network(n: &Network) -> String {
    if n.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (name, p)) in n.processes.iter().enumerate() {
        if i > 0 {
            out.push_str(" | ");
        }
        let _ = write!(out, "{name}[{}] > ", p.value);
        write_behaviour(&mut out, &p.behaviour);
    }
    out
}
