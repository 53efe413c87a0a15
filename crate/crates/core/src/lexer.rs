//! Tokenizer shared by the `.mc`, `.sp` and `.rf` parsers.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase identifier, including the reserved `r#<n>` form.
    Lower(String),
    /// Uppercase identifier.
    Upper(String),
    Num(String),
    Dot,
    Arrow,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Eq,
    Comma,
    Bar,
    Gt,
    Caret,
    Colon,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Num(s) => write!(f, "`{s}`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Gt => f.write_str("`>`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };

        if c.is_whitespace() {
            advance(1, &mut i);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
            continue;
        }
        let single = match c {
            '.' => Some(Tok::Dot),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '=' => Some(Tok::Eq),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Bar),
            '>' => Some(Tok::Gt),
            '^' => Some(Tok::Caret),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            advance(1, &mut i);
            out.push(Spanned { tok, line: start_line, col: start_col });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(2, &mut i);
            out.push(Spanned { tok: Tok::Arrow, line: start_line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let mut n = 0;
            while chars.get(i + n).is_some_and(|d| d.is_ascii_digit()) {
                n += 1;
            }
            let s: String = chars[i..i + n].iter().collect();
            advance(n, &mut i);
            out.push(Spanned { tok: Tok::Num(s), line: start_line, col: start_col });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut n = 0;
            while chars.get(i + n).is_some_and(|d| d.is_ascii_alphanumeric() || *d == '_') {
                n += 1;
            }
            let mut s: String = chars[i..i + n].iter().collect();
            // `r#<digits>` is a single auxiliary process name, not a comment.
            if s == "r"
                && chars.get(i + n) == Some(&'#')
                && chars.get(i + n + 1).is_some_and(|d| d.is_ascii_digit())
            {
                n += 1;
                while chars.get(i + n).is_some_and(|d| d.is_ascii_digit()) {
                    n += 1;
                }
                s = chars[i..i + n].iter().collect();
            }
            advance(n, &mut i);
            let tok = if c.is_ascii_uppercase() { Tok::Upper(s) } else { Tok::Lower(s) };
            out.push(Spanned { tok, line: start_line, col: start_col });
            continue;
        }
        return Err(SyntaxError {
            line: start_line,
            col: start_col,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Cursor over a token stream with the helpers every parser here needs.
pub struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Cursor { toks: tokenize(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    pub fn next(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        let s = &self.toks[self.pos];
        SyntaxError { line: s.line, col: s.col, message: message.into() }
    }

    pub fn position(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    pub fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Lower(s) if s == kw)
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.is_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found {}", self.peek())))
        }
    }

    pub fn expect_end(&self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing {}", self.peek())))
        }
    }
}
