//! Recursive descent parser for the surface grammar.
//!
//! ```text
//! formula  := quant | impl
//! quant    := ("E" | "A") ident { ident } "." formula
//!           | "#" ident "=" ident "." formula
//! impl     := disj [ "->" impl ]
//! disj     := conj { "|" conj }
//! conj     := unary { "&" unary }
//! unary    := "~" unary | "(" formula ")" | atom
//! atom     := lin ("=" | "<=" | "<") lin [ "mod" nat ]
//! lin      := prod { "+" prod }
//! prod     := [ nat "*" ] ident | nat
//! ```
//!
//! `t1 = t2 mod n` is the congruence `t1 = t2 (mod n)`; `mod` after `<=` or
//! `<` is rejected. `E`, `A` and `mod` are reserved words.

use super::{Formula, LinearForm};
use num_bigint::BigInt;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at {line}:{col} (offset {offset}): {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(BigInt),
    KwE,
    KwA,
    KwMod,
    LParen,
    RParen,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Eq,
    Le,
    Lt,
    Plus,
    Star,
    Dot,
    Hash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::KwE => "`E`".into(),
            Tok::KwA => "`A`".into(),
            Tok::KwMod => "`mod`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Hash => "`#`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    offset: usize,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a str,
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            chars: src.chars().collect(),
            i: 0,
            line: 1,
            col: 1,
        }
    }

    fn pos(&self) -> Pos {
        Pos {
            offset: self.i,
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.i).copied()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).copied()
    }

    fn err(&self, pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: pos.offset,
            line: pos.line,
            col: pos.col,
            message: message.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, Pos)>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let pos = self.pos();
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                '~' => {
                    self.bump();
                    Tok::Tilde
                }
                '&' => {
                    self.bump();
                    Tok::Amp
                }
                '|' => {
                    self.bump();
                    Tok::Pipe
                }
                '+' => {
                    self.bump();
                    Tok::Plus
                }
                '*' => {
                    self.bump();
                    Tok::Star
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '#' => {
                    self.bump();
                    Tok::Hash
                }
                '=' => {
                    self.bump();
                    Tok::Eq
                }
                '<' => {
                    self.bump();
                    if self.peek() == Some('=') {
                        self.bump();
                        Tok::Le
                    } else {
                        Tok::Lt
                    }
                }
                '-' => {
                    self.bump();
                    if self.peek() == Some('>') {
                        self.bump();
                        Tok::Arrow
                    } else {
                        return Err(self.err(pos, "expected `->` (subtraction is not a term)"));
                    }
                }
                d if d.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(d) = self.peek() {
                        if d.is_ascii_digit() {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Nat(s.parse().expect("digits"))
                }
                a if a.is_ascii_alphabetic() => {
                    let mut s = String::new();
                    while let Some(x) = self.peek() {
                        if x.is_ascii_alphanumeric() || x == '_' {
                            s.push(x);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match s.as_str() {
                        "E" => Tok::KwE,
                        "A" => Tok::KwA,
                        "mod" => Tok::KwMod,
                        _ => Tok::Ident(s),
                    }
                }
                other => {
                    return Err(self.err(pos, format!("unexpected character `{other}`")));
                }
            };
            out.push((tok, pos));
        }
        let _ = self.src;
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    end: Pos,
    scope: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        let p = self.pos();
        ParseError {
            offset: p.offset,
            line: p.line,
            col: p.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.bump();
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {}, found {}", want.describe(), t.describe()))),
            None => Err(self.err(format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                if let Some(Tok::Ident(s)) = self.bump() {
                    Ok(s)
                } else {
                    unreachable!()
                }
            }
            Some(t) => Err(self.err(format!("expected identifier, found {}", t.describe()))),
            None => Err(self.err("expected identifier, found end of input")),
        }
    }

    fn bind(&mut self, v: &str) -> Result<(), ParseError> {
        if !self.scope.insert(v.to_string()) {
            return Err(self.err(format!("variable `{v}` is already bound in this scope")));
        }
        Ok(())
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::KwE) | Some(Tok::KwA) => {
                let universal = matches!(self.peek(), Some(Tok::KwA));
                self.bump();
                let mut vars = vec![self.ident()?];
                while matches!(self.peek(), Some(Tok::Ident(_))) {
                    vars.push(self.ident()?);
                }
                self.expect(Tok::Dot)?;
                for v in &vars {
                    self.bind(v)?;
                }
                let body = self.formula()?;
                for v in &vars {
                    self.scope.remove(v);
                }
                let mut f = body;
                for v in vars.into_iter().rev() {
                    f = if universal {
                        Formula::forall(v, f)
                    } else {
                        Formula::exists(v, f)
                    };
                }
                Ok(f)
            }
            Some(Tok::Hash) => {
                self.bump();
                let z = self.ident()?;
                self.expect(Tok::Eq)?;
                let y = self.ident()?;
                if z == y {
                    return Err(self.err(format!(
                        "counting quantifier uses `{z}` as both solution and count variable"
                    )));
                }
                self.expect(Tok::Dot)?;
                self.bind(&z)?;
                let body = self.formula()?;
                self.scope.remove(&z);
                if body.bound_vars().contains(&y) {
                    return Err(self.err(format!("count variable `{y}` is rebound in the body")));
                }
                Ok(Formula::count(z, y, body))
            }
            _ => self.impl_(),
        }
    }

    fn impl_(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if matches!(self.peek(), Some(Tok::Arrow)) {
            self.bump();
            let rhs = self.impl_()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conj()?];
        while matches!(self.peek(), Some(Tok::Pipe)) {
            self.bump();
            parts.push(self.conj()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(Formula::or(parts))
        }
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while matches!(self.peek(), Some(Tok::Amp)) {
            self.bump();
            parts.push(self.unary()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(Formula::and(parts))
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.lin()?;
        let op = match self.peek() {
            Some(Tok::Eq) => Tok::Eq,
            Some(Tok::Le) => Tok::Le,
            Some(Tok::Lt) => Tok::Lt,
            Some(t) => {
                let t = t.describe();
                return Err(self.err(format!("expected `=`, `<=` or `<`, found {t}")));
            }
            None => return Err(self.err("expected `=`, `<=` or `<`, found end of input")),
        };
        self.bump();
        let rhs = self.lin()?;
        let diff = lhs.sub(&rhs);
        if matches!(self.peek(), Some(Tok::KwMod)) {
            if op != Tok::Eq {
                return Err(self.err("`mod` is only valid after `=`"));
            }
            self.bump();
            match self.bump() {
                Some(Tok::Nat(n)) => {
                    if n < BigInt::from(1) {
                        return Err(self.err("congruence modulus must be at least 1"));
                    }
                    Ok(Formula::atom_mod(diff, n))
                }
                Some(t) => {
                    self.i -= 1;
                    Err(self.err(format!("expected modulus, found {}", t.describe())))
                }
                None => Err(self.err("expected modulus, found end of input")),
            }
        } else {
            match op {
                Tok::Eq => Ok(Formula::atom_eq(diff)),
                Tok::Le => Ok(Formula::atom_le(diff)),
                Tok::Lt => Ok(Formula::atom_le(diff.add_constant(1))),
                _ => unreachable!(),
            }
        }
    }

    fn lin(&mut self) -> Result<LinearForm, ParseError> {
        let mut acc = self.prod()?;
        while matches!(self.peek(), Some(Tok::Plus)) {
            self.bump();
            acc = acc.add(&self.prod()?);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<LinearForm, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                self.bump();
                if matches!(self.peek(), Some(Tok::Star)) {
                    self.bump();
                    let v = self.ident()?;
                    Ok(LinearForm::term(n, v))
                } else {
                    Ok(LinearForm::constant(n))
                }
            }
            Some(Tok::Ident(_)) => {
                let v = self.ident()?;
                Ok(LinearForm::var(v))
            }
            Some(t) => Err(self.err(format!(
                "expected term (number or identifier), found {}",
                t.describe()
            ))),
            None => Err(self.err("expected term, found end of input")),
        }
    }
}

/// Parse a formula in the surface grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let end = Pos {
        offset: text.len(),
        line: text.lines().count().max(1),
        col: text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1),
    };
    let mut p = Parser {
        toks,
        i: 0,
        end,
        scope: BTreeSet::new(),
    };
    let f = p.formula()?;
    if p.i != p.toks.len() {
        let t = p.peek().unwrap().describe();
        return Err(p.err(format!("unexpected trailing {t}")));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::super::Atom;
    use super::*;

    #[test]
    fn parses_exists_doubling() {
        // E y. x = y + y  =>  Exists(y, x - 2y = 0)
        let f = parse("E y. x = y + y").unwrap();
        let want = Formula::exists(
            "y",
            Formula::atom_eq(LinearForm::var("x").sub(&LinearForm::term(2, "y"))),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn parses_count() {
        // # z = y . z < x  =>  Count(z, y, z - x + 1 <= 0)
        let f = parse("# z = y . z < x").unwrap();
        let want = Formula::count(
            "z",
            "y",
            Formula::atom_le(LinearForm::var("z").sub(&LinearForm::var("x")).add_constant(1)),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn error_offset_reported() {
        let e = parse("x +").unwrap_err();
        assert_eq!(e.offset, 3);
    }

    #[test]
    fn congruence_surface_form() {
        let f = parse("x = 1 mod 2").unwrap();
        assert!(matches!(f, Formula::Atom(Atom::Mod(_, _))));
        assert!(parse("x <= 1 mod 2").is_err());
        assert!(parse("x = y mod 0").is_err());
    }

    #[test]
    fn multi_binder_quantifier() {
        let f = parse("A x y. x <= y | y <= x").unwrap();
        match f {
            Formula::Forall(x, inner) => {
                assert_eq!(x, "x");
                assert!(matches!(*inner, Formula::Forall(..)));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn rejects_rebinding() {
        assert!(parse("E x. E x. x = 0").is_err());
        assert!(parse("# z = y . E y. z = y").is_err());
        assert!(parse("# z = z . z < 5").is_err());
        // the count variable may be bound by an outer quantifier
        assert!(parse("E y. # z = y . z < 5").is_ok());
    }

    #[test]
    fn strict_less_desugars() {
        assert_eq!(parse("x < y").unwrap(), parse("x + 1 <= y").unwrap());
    }

    #[test]
    fn implication_right_assoc() {
        let f = parse("x = 0 -> y = 0 -> z = 0").unwrap();
        match f {
            Formula::Implies(_, rhs) => assert!(matches!(*rhs, Formula::Implies(..))),
            other => panic!("unexpected shape {other:?}"),
        }
    }
}
