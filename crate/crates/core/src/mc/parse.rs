use std::sync::Arc;

use thiserror::Error;

use super::ast::Choreography;
use super::ops::{validate, ValidationError};
use crate::lexer::{Cursor, SyntaxError, Tok};
use crate::syntax::{Expr, Label, ProcName, ProcSet, ProcVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{col}: {error}")]
    At {
        line: usize,
        col: usize,
        error: ValidationError,
    },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl ParseError {
    pub fn validation(&self) -> Option<&ValidationError> {
        match self {
            ParseError::At { error, .. } | ParseError::Invalid(error) => Some(error),
            ParseError::Syntax(_) => None,
        }
    }
}

/// Parses and validates a choreography.
pub fn parse_choreography(text: &str) -> Result<Choreography, ParseError> {
    let mut p = Parser { cur: Cursor::new(text)?, scope: Vec::new() };
    let c = p.chor()?;
    p.cur.expect_end()?;
    validate(&c)?;
    Ok(c)
}

struct Parser {
    cur: Cursor,
    scope: Vec<ProcVar>,
}

impl Parser {
    fn chor(&mut self) -> Result<Choreography, ParseError> {
        let (line, col) = self.cur.position();
        match self.cur.peek().clone() {
            Tok::Num(n) if n == "0" => {
                self.cur.next();
                Ok(Choreography::End)
            }
            Tok::LParen => {
                self.cur.next();
                let c = self.chor()?;
                self.cur.expect(Tok::RParen)?;
                Ok(c)
            }
            Tok::Lower(kw) if kw == "def" => {
                self.cur.next();
                let name = self.proc_var()?;
                let annotation = self.annotation()?;
                self.cur.expect(Tok::Eq)?;
                self.scope.push(name.clone());
                let body = self.chor();
                let body = body.and_then(|b| {
                    self.cur.expect_keyword("in")?;
                    Ok(b)
                });
                let cont = body.and_then(|b| Ok((b, self.chor()?)));
                self.scope.pop();
                let (body, cont) = cont?;
                Ok(Choreography::Def { name, body: Arc::new(body), cont: Arc::new(cont), annotation })
            }
            Tok::Lower(kw) if kw == "if" => {
                self.cur.next();
                let decider = self.proc_name()?;
                self.cur.expect(Tok::Eq)?;
                let sender = self.proc_name()?;
                if decider == sender {
                    return Err(at(line, col, ValidationError::SelfCommunication(decider)));
                }
                self.cur.expect_keyword("then")?;
                let then_branch = self.chor()?;
                self.cur.expect_keyword("else")?;
                let else_branch = self.chor()?;
                Ok(Choreography::cond(decider, sender, then_branch, else_branch))
            }
            Tok::Upper(_) => {
                let name = self.proc_var()?;
                if !self.scope.contains(&name) {
                    return Err(at(line, col, ValidationError::UnboundProcedure(name)));
                }
                let annotation = self.annotation()?;
                Ok(Choreography::Call { name, annotation })
            }
            Tok::Lower(_) => {
                let sender = self.proc_name()?;
                if self.cur.eat(&Tok::Dot) {
                    let expr = self.expr()?;
                    self.cur.expect(Tok::Arrow)?;
                    let receiver = self.proc_name()?;
                    if sender == receiver {
                        return Err(at(line, col, ValidationError::SelfCommunication(sender)));
                    }
                    let cont = self.cont()?;
                    Ok(Choreography::com(sender, expr, receiver, cont))
                } else {
                    self.cur.expect(Tok::Arrow)?;
                    let receiver = self.proc_name()?;
                    if sender == receiver {
                        return Err(at(line, col, ValidationError::SelfCommunication(sender)));
                    }
                    self.cur.expect(Tok::LBracket)?;
                    let label = self.label()?;
                    self.cur.expect(Tok::RBracket)?;
                    let cont = self.cont()?;
                    Ok(Choreography::sel(sender, receiver, label, cont))
                }
            }
            other => Err(self.cur.error(format!("expected a choreography, found {other}")).into()),
        }
    }

    /// `; C`, or nothing for an implicit `0`.
    fn cont(&mut self) -> Result<Choreography, ParseError> {
        if self.cur.eat(&Tok::Semi) {
            self.chor()
        } else {
            Ok(Choreography::End)
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        parse_expr(&mut self.cur).map_err(Into::into)
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        parse_label(&mut self.cur).map_err(Into::into)
    }

    fn proc_name(&mut self) -> Result<ProcName, ParseError> {
        parse_proc_name(&mut self.cur).map_err(Into::into)
    }

    fn proc_var(&mut self) -> Result<ProcVar, ParseError> {
        match self.cur.peek().clone() {
            Tok::Upper(s) => {
                let v = ProcVar::new(&s).map_err(|e| self.cur.error(e.to_string()))?;
                self.cur.next();
                Ok(v)
            }
            other => Err(self.cur.error(format!("expected a procedure name, found {other}")).into()),
        }
    }

    fn annotation(&mut self) -> Result<Option<Arc<ProcSet>>, ParseError> {
        if !self.cur.eat(&Tok::Caret) {
            return Ok(None);
        }
        self.cur.expect(Tok::LBrace)?;
        let mut set = ProcSet::new();
        if !self.cur.eat(&Tok::RBrace) {
            loop {
                set.insert(self.proc_name()?);
                if self.cur.eat(&Tok::RBrace) {
                    break;
                }
                self.cur.expect(Tok::Comma)?;
            }
        }
        Ok(Some(Arc::new(set)))
    }
}

fn at(line: usize, col: usize, error: ValidationError) -> ParseError {
    ParseError::At { line, col, error }
}

pub(crate) fn parse_proc_name(cur: &mut Cursor) -> Result<ProcName, SyntaxError> {
    match cur.peek().clone() {
        Tok::Lower(s) => {
            let p = ProcName::new(&s).map_err(|e| cur.error(e.to_string()))?;
            cur.next();
            Ok(p)
        }
        other => Err(cur.error(format!("expected a process name, found {other}"))),
    }
}

/// `eps`, `c`, `s c` or `(s c)`.
pub(crate) fn parse_expr(cur: &mut Cursor) -> Result<Expr, SyntaxError> {
    if cur.is_keyword("eps") {
        cur.next();
        return Ok(Expr::Epsilon);
    }
    if cur.is_keyword("c") {
        cur.next();
        return Ok(Expr::Cell);
    }
    let parens = cur.eat(&Tok::LParen);
    if !cur.is_keyword("s") {
        return Err(cur.error(format!("expected `eps`, `c` or `s c`, found {}", cur.peek())));
    }
    cur.next();
    cur.expect_keyword("c")?;
    if parens {
        cur.expect(Tok::RParen)?;
    }
    Ok(Expr::SuccCell)
}

pub(crate) fn parse_label(cur: &mut Cursor) -> Result<Label, SyntaxError> {
    let label = match cur.peek() {
        Tok::Upper(s) if s == "L" => Label::L,
        Tok::Upper(s) if s == "R" => Label::R,
        other => return Err(cur.error(format!("expected label `L` or `R`, found {other}"))),
    };
    cur.next();
    Ok(label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(s: &str) -> ProcName {
        ProcName::new(s).unwrap()
    }

    #[test]
    fn inc_macro() {
        let c = parse_choreography("p.c -> t; t.(s c) -> p; 0").unwrap();
        let expected = Choreography::com(
            n("p"),
            Expr::Cell,
            n("t"),
            Choreography::com(n("t"), Expr::SuccCell, n("p"), Choreography::End),
        );
        assert_eq!(c, expected);
    }

    #[test]
    fn end_alone() {
        assert_eq!(parse_choreography("0").unwrap(), Choreography::End);
        assert_eq!(parse_choreography("  ( 0 ) # done").unwrap(), Choreography::End);
    }

    #[test]
    fn self_communication_rejected() {
        let e = parse_choreography("p.c -> p; 0").unwrap_err();
        assert_eq!(e.validation(), Some(&ValidationError::SelfCommunication(n("p"))));
        assert!(matches!(
            parse_choreography("if p = p then 0 else 0").unwrap_err().validation(),
            Some(ValidationError::SelfCommunication(_))
        ));
    }

    #[test]
    fn unbound_call_rejected() {
        let e = parse_choreography("p.c -> q; X").unwrap_err();
        assert!(matches!(e, ParseError::At { line: 1, col: 11, error: ValidationError::UnboundProcedure(_) }));
        assert!(parse_choreography("(def X = p.c -> q; X in 0); X").is_err());
    }

    #[test]
    fn implicit_end_and_bare_succ() {
        let a = parse_choreography("p.s c -> q").unwrap();
        let b = parse_choreography("p.(s c) -> q; 0").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn annotations() {
        let c = parse_choreography("def X^{p, q} = p.c -> q; X^{p,q} in X^{}").unwrap();
        match c {
            Choreography::Def { annotation: Some(a), cont, .. } => {
                assert_eq!(a.len(), 2);
                assert!(matches!(&*cont, Choreography::Call { annotation: Some(s), .. } if s.is_empty()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_choreography("p.c -> q;\n  q.x -> p").unwrap_err();
        match e {
            ParseError::Syntax(s) => assert_eq!((s.line, s.col), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_choreography("p.c -> q; 0 0").is_err());
        assert!(parse_choreography("p -> q[M]; 0").is_err());
    }
}
