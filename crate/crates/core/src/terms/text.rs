//! Text syntax: `x0`, `x1`, … are variables; other words (letters, digits,
//! `_`, `'`) and double-quoted strings are coefficient names; `&` is meet,
//! `|` is join and binds more loosely; `^'` is postfix orthocomplement.

use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use thiserror::Error;

use super::Term;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {position}: {message}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn variable_index(word: &str) -> Option<u32> {
    let digits = word.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Word(String),
    Quoted(String),
    Meet,
    Join,
    Perp,
    Open,
    Close,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars: Peekable<CharIndices> = src.char_indices().peekable();
    let err = |position, message: &str| SyntaxError { position, message: message.into() };
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '&' => {
                chars.next();
                out.push((pos, Token::Meet));
            }
            '|' => {
                chars.next();
                out.push((pos, Token::Join));
            }
            '(' => {
                chars.next();
                out.push((pos, Token::Open));
            }
            ')' => {
                chars.next();
                out.push((pos, Token::Close));
            }
            '^' => {
                chars.next();
                match chars.next() {
                    Some((_, '\'')) => out.push((pos, Token::Perp)),
                    _ => return Err(err(pos, "expected `^'`")),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e)) => s.push(e),
                            None => return Err(err(pos, "unterminated string")),
                        },
                        Some((_, ch)) => s.push(ch),
                        None => return Err(err(pos, "unterminated string")),
                    }
                }
                out.push((pos, Token::Quoted(s)));
            }
            c if is_word_char(c) => {
                let mut s = String::new();
                while let Some(&(_, ch)) = chars.peek() {
                    if !is_word_char(ch) {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                out.push((pos, Token::Word(s)));
            }
            other => return Err(err(pos, &format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: &str) -> SyntaxError {
        SyntaxError { position: self.offset(), message: message.into() }
    }

    fn join(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.meet()?;
        while self.peek() == Some(&Token::Join) {
            self.pos += 1;
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.postfix()?;
        while self.peek() == Some(&Token::Meet) {
            self.pos += 1;
            t = Term::meet(t, self.postfix()?);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Token::Perp) {
            self.pos += 1;
            t = Term::perp(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let token = self.peek().cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        match token {
            Token::Open => {
                self.pos += 1;
                let t = self.join()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(t)
            }
            Token::Word(w) => {
                self.pos += 1;
                Ok(match variable_index(&w) {
                    Some(i) => Term::Var(i),
                    None => Term::constant(&w),
                })
            }
            Token::Quoted(s) => {
                self.pos += 1;
                Ok(Term::constant(&s))
            }
            _ => Err(self.error("expected a variable, coefficient or `(`")),
        }
    }
}

pub fn parse(src: &str) -> Result<Term, SyntaxError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0, end: src.len() };
    let t = p.join()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(t)
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    let bare = !name.is_empty() && name.chars().all(is_word_char) && variable_index(name).is_none();
    if bare {
        return f.write_str(name);
    }
    f.write_str("\"")?;
    for c in name.chars() {
        if c == '"' || c == '\\' {
            f.write_str("\\")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("\"")
}

// precedence: 1 join, 2 meet, 3 postfix/atom
fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, min_prec: u8) -> fmt::Result {
    let prec = match t {
        Term::Join(..) => 1,
        Term::Meet(..) => 2,
        _ => 3,
    };
    if prec < min_prec {
        f.write_str("(")?;
    }
    match t {
        Term::Var(i) => write!(f, "x{i}")?,
        Term::Const(c) => write_name(f, c)?,
        Term::Join(a, b) => {
            write_term(f, a, 1)?;
            f.write_str(" | ")?;
            write_term(f, b, 2)?;
        }
        Term::Meet(a, b) => {
            write_term(f, a, 2)?;
            f.write_str(" & ")?;
            write_term(f, b, 3)?;
        }
        Term::Perp(a) => {
            write_term(f, a, 3)?;
            f.write_str(" ^'")?;
        }
    }
    if prec < min_prec {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 1)
    }
}
