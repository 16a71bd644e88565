//! `.bf` text format.
//!
//! ```text
//! formula := "(var" NAME ")" | "(not" formula ")"
//!          | "(and" formula formula+ ")" | "(or" formula formula+ ")"
//! NAME    := "z." INT | "zp." INT | "x[" TAG "," INT "]" | IDENT
//! ```
//!
//! Tokens may be separated by arbitrary whitespace. Serialization puts a
//! single space between tokens and preserves child order.

use super::{Formula, VarName};
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 4096;

pub(super) fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Var(v) => {
            out.push_str("(var ");
            out.push_str(v.as_str());
            out.push(')');
        }
        Formula::Not(c) => {
            out.push_str("(not ");
            write_formula(c, out);
            out.push(')');
        }
        Formula::And(cs) | Formula::Or(cs) => {
            out.push_str(if matches!(f, Formula::And(_)) { "(and" } else { "(or" });
            for c in cs {
                out.push(' ');
                write_formula(c, out);
            }
            out.push(')');
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the token and the byte offset where it starts.
    fn next(&mut self) -> (Tok<'a>, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        match rest.chars().next() {
            None => (Tok::End, start),
            Some('(') => {
                self.pos += 1;
                (Tok::Open, start)
            }
            Some(')') => {
                self.pos += 1;
                (Tok::Close, start)
            }
            Some(_) => {
                let len = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                self.pos += len;
                (Tok::Atom(&rest[..len]), start)
            }
        }
    }

    fn peek(&mut self) -> (Tok<'a>, usize) {
        let save = self.pos;
        let t = self.next();
        self.pos = save;
        t
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

/// Parses one formula from `.bf` text.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut lx = Lexer { src: text, pos: 0 };
    if lx.peek().0 == Tok::End {
        return Err(Error::EmptyFormula);
    }
    let f = parse_node(&mut lx, 0)?;
    match lx.next() {
        (Tok::End, _) => Ok(f),
        (_, pos) => Err(syntax(pos, "trailing input after formula")),
    }
}

fn expect_close(lx: &mut Lexer<'_>) -> Result<()> {
    match lx.next() {
        (Tok::Close, _) => Ok(()),
        (_, pos) => Err(syntax(pos, "expected `)`")),
    }
}

fn parse_node(lx: &mut Lexer<'_>, depth: usize) -> Result<Formula> {
    if depth > MAX_DEPTH {
        return Err(syntax(lx.pos, "nesting too deep"));
    }
    match lx.next() {
        (Tok::Open, _) => {}
        (Tok::End, pos) => return Err(syntax(pos, "unexpected end of input")),
        (_, pos) => return Err(syntax(pos, "expected `(`")),
    }
    let (head, head_pos) = lx.next();
    let keyword = match head {
        Tok::Atom(k) => k,
        _ => return Err(syntax(head_pos, "expected operator keyword")),
    };
    match keyword {
        "var" => {
            let (tok, pos) = lx.next();
            let name = match tok {
                Tok::Atom(n) => n,
                _ => return Err(syntax(pos, "expected variable name")),
            };
            let v: VarName = name
                .parse()
                .map_err(|_| syntax(pos, format!("invalid variable name `{name}`")))?;
            expect_close(lx)?;
            Ok(Formula::Var(v))
        }
        "not" => {
            let inner = parse_node(lx, depth + 1)?;
            expect_close(lx)?;
            Ok(Formula::not(inner))
        }
        "and" | "or" => {
            let mut children = Vec::new();
            loop {
                match lx.peek() {
                    (Tok::Close, _) => {
                        lx.next();
                        break;
                    }
                    (Tok::End, pos) => return Err(syntax(pos, "unexpected end of input")),
                    _ => children.push(parse_node(lx, depth + 1)?),
                }
            }
            if children.len() < 2 {
                return Err(syntax(
                    head_pos,
                    format!("`{keyword}` needs at least 2 operands, got {}", children.len()),
                ));
            }
            Ok(if keyword == "and" {
                Formula::And(children)
            } else {
                Formula::Or(children)
            })
        }
        other => Err(syntax(head_pos, format!("unknown operator `{other}`"))),
    }
}
