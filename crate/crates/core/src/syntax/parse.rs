//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! term   ::= sum
//! sum    ::= scale ( '+' scale )*
//! scale  ::= coeff '.' scale | app
//! app    ::= atom+
//! atom   ::= var | '0' | ('λ' | '\') var '.' term | '(' term ')'
//! ```
//!
//! `(M)N` is read as the juxtaposition of the atoms `(M)` and `N`.

use crate::error::{Error, Result};
use crate::semiring::{Coefficient, SemiringId};

use super::{PureTerm, RawTerm, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Lambda,
    Dot,
    Plus,
    Minus,
    Slash,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            'λ' | '\\' => {
                bump(&mut chars);
                Tok::Lambda
            }
            '.' => {
                bump(&mut chars);
                Tok::Dot
            }
            '+' => {
                bump(&mut chars);
                Tok::Plus
            }
            '-' => {
                bump(&mut chars);
                Tok::Minus
            }
            '/' => {
                bump(&mut chars);
                Tok::Slash
            }
            '(' => {
                bump(&mut chars);
                Tok::LParen
            }
            ')' => {
                bump(&mut chars);
                Tok::RParen
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Number(s)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_' || d == '\'') {
                        break;
                    }
                    s.push(d);
                    bump(&mut chars);
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Error::Syntax {
                    line: l,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    semiring: SemiringId,
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let s = &self.toks[self.pos];
        Err(Error::Syntax {
            line: s.line,
            column: s.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut acc = self.scale()?;
        while *self.peek() == Tok::Plus {
            self.advance();
            let rhs = self.scale()?;
            acc = RawTerm::sum(acc, rhs);
        }
        Ok(acc)
    }

    /// Length in tokens of a coefficient literal followed by `.`, if one
    /// starts here.
    fn coefficient_ahead(&self) -> Option<usize> {
        let len = match (self.peek(), self.peek_at(1), self.peek_at(2)) {
            (Tok::Number(_), Tok::Slash, Tok::Number(_)) => 3,
            (Tok::Number(_), _, _) => 1,
            (Tok::Minus, Tok::Number(_), _) => 2,
            (Tok::Ident(s), _, _) if self.semiring == SemiringId::Bool && (s == "T" || s == "F") => 1,
            _ => return None,
        };
        (*self.peek_at(len) == Tok::Dot).then_some(len)
    }

    fn scale(&mut self) -> Result<RawTerm> {
        if let Some(len) = self.coefficient_ahead() {
            let mut literal = String::new();
            for _ in 0..len {
                match self.advance() {
                    Tok::Number(s) | Tok::Ident(s) => literal.push_str(&s),
                    Tok::Minus => literal.push('-'),
                    Tok::Slash => literal.push('/'),
                    _ => unreachable!("coefficient_ahead only admits literal tokens"),
                }
            }
            let coeff = match Coefficient::parse(&literal, self.semiring) {
                Ok(c) => c,
                Err(e) => {
                    self.pos -= len;
                    return self.error(e.to_string());
                }
            };
            self.expect(Tok::Dot, "`.`")?;
            let body = self.scale()?;
            return Ok(RawTerm::scale(coeff, body));
        }
        self.app()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(_) | Tok::Lambda | Tok::LParen => self.coefficient_ahead().is_none(),
            Tok::Number(n) => n == "0" && self.coefficient_ahead().is_none(),
            _ => false,
        }
    }

    fn app(&mut self) -> Result<RawTerm> {
        if !self.starts_atom() {
            return self.error(format!("expected a term, found {}", describe(self.peek())));
        }
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let arg = self.atom()?;
            acc = RawTerm::app(acc, arg);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<RawTerm> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(RawTerm::Var(self.resolve(name)))
            }
            Tok::Number(n) if n == "0" => {
                self.advance();
                Ok(RawTerm::Zero)
            }
            Tok::Lambda => {
                self.advance();
                let name = match self.peek().clone() {
                    Tok::Ident(name) => {
                        self.advance();
                        name
                    }
                    other => return self.error(format!("expected a binder name, found {}", describe(&other))),
                };
                self.expect(Tok::Dot, "`.` after binder")?;
                self.scope.push(name);
                let body = self.term();
                self.scope.pop();
                Ok(RawTerm::lam(body?))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => self.error(format!("expected a term, found {}", describe(&other))),
        }
    }

    fn resolve(&self, name: String) -> Var {
        match self.scope.iter().rev().position(|n| *n == name) {
            Some(index) => Var::Bound(index),
            None => Var::Free(name),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("`{s}`"),
        Tok::Lambda => "`λ`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Slash => "`/`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses a raw term whose coefficients live in `semiring`.
pub fn parse(text: &str, semiring: SemiringId) -> Result<RawTerm> {
    let mut parser = Parser {
        toks: lex(text)?,
        pos: 0,
        semiring,
        scope: Vec::new(),
    };
    let term = parser.term()?;
    if *parser.peek() != Tok::End {
        return parser.error(format!("unexpected {}", describe(parser.peek())));
    }
    Ok(term)
}

/// Parses a term that must lie in the pure fragment.
pub fn parse_pure(text: &str) -> Result<PureTerm> {
    parse(text, SemiringId::Nat)?
        .to_pure()
        .ok_or_else(|| Error::usage(format!("`{text}` is not a pure λ-term")))
}
