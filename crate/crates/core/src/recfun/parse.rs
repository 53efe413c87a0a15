use thiserror::Error;

use super::ast::{ArityError, RecFun};
use crate::lexer::{Cursor, SyntaxError, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecFunParseError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{col}: {error}")]
    Arity { line: usize, col: usize, error: ArityError },
}

/// Parses `Z | S | EQ | P[n,m] | C(f; g1, ..., gk) | R(f; g) | M(f)`.
pub fn parse_recfun(text: &str) -> Result<RecFun, RecFunParseError> {
    let mut cur = Cursor::new(text)?;
    let f = term(&mut cur)?;
    cur.expect_end()?;
    Ok(f)
}

fn number(cur: &mut Cursor) -> Result<usize, RecFunParseError> {
    match cur.peek().clone() {
        Tok::Num(n) => {
            let v = n.parse().map_err(|_| cur.error(format!("number `{n}` is too large")))?;
            cur.next();
            Ok(v)
        }
        other => Err(cur.error(format!("expected a number, found {other}")).into()),
    }
}

fn term(cur: &mut Cursor) -> Result<RecFun, RecFunParseError> {
    let (line, col) = cur.position();
    let checked = |r: Result<RecFun, ArityError>| r.map_err(|error| RecFunParseError::Arity { line, col, error });
    let head = match cur.peek().clone() {
        Tok::Upper(s) => s,
        other => return Err(cur.error(format!("expected a function, found {other}")).into()),
    };
    cur.next();
    match head.as_str() {
        "Z" => Ok(RecFun::Zero),
        "S" => Ok(RecFun::Succ),
        "EQ" => Ok(RecFun::Eq),
        "P" => {
            cur.expect(Tok::LBracket)?;
            let n = number(cur)?;
            cur.expect(Tok::Comma)?;
            let m = number(cur)?;
            cur.expect(Tok::RBracket)?;
            checked(RecFun::proj(n, m))
        }
        "C" => {
            cur.expect(Tok::LParen)?;
            let f = term(cur)?;
            cur.expect(Tok::Semi)?;
            let mut gs = vec![term(cur)?];
            while cur.eat(&Tok::Comma) {
                gs.push(term(cur)?);
            }
            cur.expect(Tok::RParen)?;
            checked(RecFun::comp(f, gs))
        }
        "R" => {
            cur.expect(Tok::LParen)?;
            let f = term(cur)?;
            cur.expect(Tok::Semi)?;
            let g = term(cur)?;
            cur.expect(Tok::RParen)?;
            checked(RecFun::prim_rec(f, g))
        }
        "M" => {
            cur.expect(Tok::LParen)?;
            let f = term(cur)?;
            cur.expect(Tok::RParen)?;
            checked(RecFun::min(f))
        }
        other => Err(SyntaxError { line, col, message: format!("unknown function `{other}`") }.into()),
    }
}
