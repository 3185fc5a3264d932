//! Recursive-descent parser for the ASCII formula syntax:
//!
//! ```text
//! formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
//! or := and ("|" and)* ; and := unary ("&" unary)* ;
//! unary := "!" unary | "E" var "." unary | "A" var "." unary
//!        | "(" formula ")" | "true" | "false" | atom ;
//! atom := pred "(" var ("," var)* ")" | var "=" var ;
//! var := "x" digits
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::formula::{Formula, Signature, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DoubleArrow,
    Equals,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'=' => Tok::Equals,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => return Err(syntax(start, "unexpected character")),
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

fn syntax(pos: usize, msg: &str) -> Error {
    Error::Syntax {
        pos,
        msg: msg.to_string(),
    }
}

fn as_var(name: &str) -> Option<Var> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &alloc::format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<Var> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) => {
                as_var(&name).ok_or_else(|| syntax(pos, "expected a variable like x1"))
            }
            _ => Err(syntax(pos, "expected a variable like x1")),
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::Iff(lhs.into(), rhs.into());
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::Implies(lhs.into(), rhs.into()));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.bump() {
            Tok::Bang => Ok(Formula::not(self.unary()?)),
            Tok::LParen => {
                let f = self.iff()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "E" | "A" => {
                    let v = self.var()?;
                    self.expect(Tok::Dot, "`.` after quantified variable")?;
                    let body = self.unary()?;
                    Ok(if name == "E" {
                        Formula::exists(v, body)
                    } else {
                        Formula::forall(v, body)
                    })
                }
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => match as_var(&name) {
                    Some(a) => {
                        self.expect(Tok::Equals, "`=` after variable")?;
                        Ok(Formula::Eq(a, self.var()?))
                    }
                    None => self.atom(pos, &name),
                },
            },
            _ => Err(syntax(pos, "expected a formula")),
        }
    }

    fn atom(&mut self, pos: usize, name: &str) -> Result<Formula> {
        let (pred, arity) = self
            .sig
            .lookup(name)
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
        self.expect(Tok::LParen, "`(` after predicate")?;
        let mut args = alloc::vec![self.var()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.var()?);
        }
        self.expect(Tok::RParen, "`)` after arguments")?;
        if args.len() != arity {
            let _ = pos;
            return Err(Error::ArityMismatch {
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Formula::Atom { pred, args })
    }
}

/// Parses `text`, resolving predicate names against `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        sig,
    };
    let f = p.iff()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(f)
}
