use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::ast::{Behaviour, Network, Process};
use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::mc::{parse_expr, parse_label, parse_proc_name};
use crate::syntax::{ProcName, ProcVar, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("process `{0}` is defined more than once")]
    DuplicateProcess(ProcName),
    #[error("{line}:{col}: call to unbound procedure `{name}`")]
    UnboundProcedure { name: ProcVar, line: usize, col: usize },
}

/// Parses `p[3] > send q.c; 0 | q[0] > recv p; 0`, or `0` for the empty
/// network.
pub fn parse_network(text: &str) -> Result<Network, NetworkParseError> {
    let mut p = Parser { cur: Cursor::new(text)?, scope: Vec::new() };
    let mut net = Network::new();
    if matches!(p.cur.peek(), Tok::Num(n) if n == "0") && *p.cur.peek_at(1) == Tok::Eof {
        return Ok(net);
    }
    loop {
        let name = parse_proc_name(&mut p.cur)?;
        p.cur.expect(Tok::LBracket)?;
        let value = match p.cur.next() {
            Tok::Num(n) => n.parse::<Value>().expect("digits parse as a natural"),
            other => return Err(p.cur.error(format!("expected a value, found {other}")).into()),
        };
        p.cur.expect(Tok::RBracket)?;
        p.cur.expect(Tok::Gt)?;
        let behaviour = p.behaviour()?;
        if net.processes.contains_key(&name) {
            return Err(NetworkParseError::DuplicateProcess(name));
        }
        net.processes.insert(name, Process { value, behaviour: Arc::new(behaviour) });
        if !p.cur.eat(&Tok::Bar) {
            break;
        }
    }
    p.cur.expect_end()?;
    Ok(net)
}

pub fn parse_behaviour(text: &str) -> Result<Behaviour, NetworkParseError> {
    let mut p = Parser { cur: Cursor::new(text)?, scope: Vec::new() };
    let b = p.behaviour()?;
    p.cur.expect_end()?;
    Ok(b)
}

struct Parser {
    cur: Cursor,
    scope: Vec<ProcVar>,
}

impl Parser {
    fn behaviour(&mut self) -> Result<Behaviour, NetworkParseError> {
        let (line, col) = self.cur.position();
        match self.cur.peek().clone() {
            Tok::Num(n) if n == "0" => {
                self.cur.next();
                Ok(Behaviour::End)
            }
            Tok::LParen => {
                self.cur.next();
                let b = self.behaviour()?;
                self.cur.expect(Tok::RParen)?;
                Ok(b)
            }
            Tok::Upper(_) => {
                let name = self.proc_var()?;
                if !self.scope.contains(&name) {
                    return Err(NetworkParseError::UnboundProcedure { name, line, col });
                }
                Ok(Behaviour::Call { name })
            }
            Tok::Lower(kw) => match kw.as_str() {
                "send" => {
                    self.cur.next();
                    let to = parse_proc_name(&mut self.cur)?;
                    self.cur.expect(Tok::Dot)?;
                    let expr = parse_expr(&mut self.cur)?;
                    let cont = self.cont()?;
                    Ok(Behaviour::send(to, expr, cont))
                }
                "recv" => {
                    self.cur.next();
                    let from = parse_proc_name(&mut self.cur)?;
                    let cont = self.cont()?;
                    Ok(Behaviour::recv(from, cont))
                }
                "sel" => {
                    self.cur.next();
                    let to = parse_proc_name(&mut self.cur)?;
                    self.cur.expect(Tok::LBracket)?;
                    let label = parse_label(&mut self.cur)?;
                    self.cur.expect(Tok::RBracket)?;
                    let cont = self.cont()?;
                    Ok(Behaviour::select(to, label, cont))
                }
                "branch" => {
                    self.cur.next();
                    let from = parse_proc_name(&mut self.cur)?;
                    self.cur.expect(Tok::LBrace)?;
                    let mut branches = BTreeMap::new();
                    loop {
                        let label = parse_label(&mut self.cur)?;
                        self.cur.expect(Tok::Colon)?;
                        let body = self.behaviour()?;
                        if branches.insert(label, Arc::new(body)).is_some() {
                            return Err(self.cur.error(format!("label {label} appears twice in a branch")).into());
                        }
                        if self.cur.eat(&Tok::RBrace) {
                            break;
                        }
                        self.cur.expect(Tok::Comma)?;
                    }
                    Ok(Behaviour::Branch { from, branches })
                }
                "if" => {
                    self.cur.next();
                    self.cur.expect_keyword("c")?;
                    self.cur.expect(Tok::Eq)?;
                    let sender = parse_proc_name(&mut self.cur)?;
                    self.cur.expect_keyword("then")?;
                    let then_branch = self.behaviour()?;
                    self.cur.expect_keyword("else")?;
                    let else_branch = self.behaviour()?;
                    Ok(Behaviour::cond(sender, then_branch, else_branch))
                }
                "def" => {
                    self.cur.next();
                    let name = self.proc_var()?;
                    self.cur.expect(Tok::Eq)?;
                    self.scope.push(name.clone());
                    let parts = self.behaviour().and_then(|body| {
                        self.cur.expect_keyword("in")?;
                        Ok((body, self.behaviour()?))
                    });
                    self.scope.pop();
                    let (body, cont) = parts?;
                    Ok(Behaviour::def(name, body, cont))
                }
                _ => Err(self.cur.error(format!("expected a behaviour, found `{kw}`")).into()),
            },
            other => Err(self.cur.error(format!("expected a behaviour, found {other}")).into()),
        }
    }

    fn cont(&mut self) -> Result<Behaviour, NetworkParseError> {
        if self.cur.eat(&Tok::Semi) {
            self.behaviour()
        } else {
            Ok(Behaviour::End)
        }
    }

    fn proc_var(&mut self) -> Result<ProcVar, NetworkParseError> {
        match self.cur.peek().clone() {
            Tok::Upper(s) => {
                let v = ProcVar::new(&s).map_err(|e| self.cur.error(e.to_string()))?;
                self.cur.next();
                Ok(v)
            }
            other => Err(self.cur.error(format!("expected a procedure name, found {other}")).into()),
        }
    }
}
