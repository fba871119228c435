//! Polynomial expressions: lexer, recursive-descent parser and canonical printer.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' INTEGER)?
//! atom  := INTEGER | RATIONAL | IDENT | '(' expr ')'
//! ```
//!
//! `RATIONAL` is `p/q` written without spaces. Identifiers are declared
//! variables, previously defined names, `zeta`, and `I` when `4 | m`.

mod system;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cycfield::{CycNumber, CycloField};
use crate::poly::Polynomial;

pub use system::{parse_system, render_system, SystemFile};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax(String),
    UndeclaredIdentifier(String),
    ExponentOverflow,
    Directive(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Lexical(m) => write!(f, "lexical error: {m}"),
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UndeclaredIdentifier(id) => write!(f, "undeclared identifier `{id}`"),
            ParseErrorKind::ExponentOverflow => {
                write!(f, "exponent overflow (limit {MAX_EXPONENT})")
            }
            ParseErrorKind::Directive(m) => write!(f, "{m}"),
        }
    }
}

/// Names an expression may refer to.
#[derive(Debug, Clone)]
pub struct Scope {
    pub field: CycloField,
    pub vars: Vec<String>,
    pub defs: Vec<(String, Polynomial)>,
}

impl Scope {
    pub fn new(field: &CycloField, vars: &[&str]) -> Self {
        Scope {
            field: field.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            defs: Vec::new(),
        }
    }

    fn lookup(&self, name: &str) -> Option<Polynomial> {
        if let Some(v) = self.vars.iter().position(|n| n == name) {
            return Some(Polynomial::var(&self.field, v));
        }
        if let Some((_, p)) = self.defs.iter().rev().find(|(n, _)| n == name) {
            return Some(p.clone());
        }
        match name {
            "zeta" => Some(Polynomial::constant(self.field.root_of_unity(1))),
            "I" => self.field.imaginary_unit().map(Polynomial::constant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Rat(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Rat(q) => write!(f, "`{q}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize, usize)>,
    end: (usize, usize),
}

fn lex(text: &str, line0: usize, col0: usize) -> Result<Lexed, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    let err = |line, col, msg: String| ParseError {
        line,
        col,
        kind: ParseErrorKind::Lexical(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: BigInt = chars[start..i].iter().collect::<String>().parse().expect("digits");
            let tok = if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                let ds = i + 1;
                i = ds;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let den: BigInt = chars[ds..i].iter().collect::<String>().parse().expect("digits");
                if den.is_zero() {
                    return Err(err(tl, tc, "zero denominator".into()));
                }
                Tok::Rat(BigRational::new(num, den))
            } else {
                Tok::Int(num)
            };
            col += i - start;
            toks.push((tok, tl, tc));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            toks.push((Tok::Ident(chars[start..i].iter().collect()), tl, tc));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
        };
        toks.push((tok, tl, tc));
        i += 1;
        col += 1;
    }
    Ok(Lexed { toks, end: (line, col) })
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
    scope: &'a Scope,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |&(_, l, c)| (l, c))
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError { line, col, kind })
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        self.fail(ParseErrorKind::Syntax(msg.into()))
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Int(_) | Tok::Rat(_) | Tok::Ident(_) | Tok::LParen) => {
                    return self.syntax("implicit multiplication, write `*` explicitly");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let e = match self.peek() {
            Some(Tok::Int(n)) => match u32::try_from(n) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.fail(ParseErrorKind::ExponentOverflow),
            },
            Some(t) => return self.syntax(format!("expected integer exponent, found {t}")),
            None => return self.syntax("expected integer exponent, found end of input"),
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::Caret) {
            return self.syntax("chained exponent, add parentheses");
        }
        Ok(base.pow(e))
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let field = &self.scope.field;
        let out = match self.peek().cloned() {
            Some(Tok::Int(n)) => Polynomial::constant(field.rational(BigRational::from_integer(n))),
            Some(Tok::Rat(q)) => Polynomial::constant(field.rational(q)),
            Some(Tok::Ident(name)) => match self.scope.lookup(&name) {
                Some(p) => p,
                None => return self.fail(ParseErrorKind::UndeclaredIdentifier(name)),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return match self.peek() {
                        Some(t) => self.syntax(format!("expected `)`, found {t}")),
                        None => self.syntax("expected `)`, found end of input"),
                    };
                }
                inner
            }
            Some(t) => return self.syntax(format!("unexpected {t}")),
            None => return self.syntax("unexpected end of input"),
        };
        self.pos += 1;
        Ok(out)
    }
}

/// Parses an expression starting at 1-based `(line, col)` of some larger text.
pub fn parse_expression_at(text: &str, scope: &Scope, line: usize, col: usize) -> Result<Polynomial, ParseError> {
    let Lexed { toks, end } = lex(text, line, col)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        scope,
    };
    let out = p.expr()?;
    match p.peek() {
        None => Ok(out),
        Some(Tok::RParen) => p.syntax("unmatched `)`"),
        Some(t) => p.syntax(format!("unexpected {t}")),
    }
}

pub fn parse_expression(text: &str, scope: &Scope) -> Result<Polynomial, ParseError> {
    parse_expression_at(text, scope, 1, 1)
}

fn write_monomial(out: &mut String, exps: &[u32], names: &[String]) {
    let mut first = true;
    for (v, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        match names.get(v) {
            Some(n) => out.push_str(n),
            None => out.push_str(&format!("x{v}")),
        }
        if e > 1 {
            out.push_str(&format!("^{e}"));
        }
    }
}

/// Splits a coefficient into sign and magnitude text when it is a single
/// power-basis term; `None` for sums like `zeta + 1`.
fn simple_coefficient(c: &CycNumber) -> Option<(bool, String)> {
    if c.support_len() != 1 {
        return None;
    }
    let (k, q) = c.terms().next().expect("one term");
    let abs = q.abs();
    let text = match (k, abs.is_one()) {
        (0, _) => abs.to_string(),
        (1, true) => "zeta".to_string(),
        (1, false) => format!("{abs}*zeta"),
        (k, true) => format!("zeta^{k}"),
        (k, false) => format!("{abs}*zeta^{k}"),
    };
    Some((q.is_negative(), text))
}

/// Canonical text: graded-lex order, explicit `*` and `^`.
pub fn render(f: &Polynomial, names: &[String]) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in f.terms().iter().enumerate() {
        let (neg, coeff) = match simple_coefficient(c) {
            Some((neg, text)) => (neg, Some(text)),
            None => (false, Some(format!("({c})"))),
        };
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let coeff = coeff.filter(|t| !(t == "1" && !m.is_one()));
        if let Some(t) = &coeff {
            out.push_str(t);
        }
        if !m.is_one() {
            if coeff.is_some() {
                out.push('*');
            }
            write_monomial(&mut out, m.exponents(), names);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope(m: u32) -> Scope {
        Scope::new(&CycloField::new(m).unwrap(), &["x", "y"])
    }

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn davenport_difference() {
        let s = scope(4);
        let f = parse_expression("(x^2+2)^3 - (x^3+3*x)^2", &s).unwrap();
        assert_eq!(render(&f, &names()), "3*x^2 + 8");
        assert!(parse_expression("x - x", &s).unwrap().is_zero());
        assert!(parse_expression("I^2 + 1", &s).unwrap().is_zero());
    }

    #[test]
    fn printing() {
        let s = scope(3);
        assert_eq!(render(&Polynomial::zero(&s.field), &names()), "0");
        for text in [
            "zeta*x + 1",
            "-x^2*y + 1/2*y - 3",
            "(zeta + 1)*x^3 - zeta^0",
            "-2*zeta*x*y^2 + (2*zeta - 1/3)",
        ] {
            let f = parse_expression(text, &s).unwrap();
            let again = parse_expression(&render(&f, &names()), &s).unwrap();
            assert_eq!(f, again, "{text}");
        }
        let f = parse_expression("zeta*x + 1", &s).unwrap();
        assert_eq!(render(&f, &names()), "zeta*x + 1");
        let g = parse_expression("(zeta+1)*x - x^2", &s).unwrap();
        assert_eq!(render(&g, &names()), "-x^2 + (zeta + 1)*x");
    }

    #[test]
    fn errors_are_positioned() {
        let s = scope(4);
        let e = parse_expression("2x", &s).unwrap_err();
        assert_eq!((e.line, e.col), (1, 2));
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        let e = parse_expression("x + w", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UndeclaredIdentifier("w".into()));
        assert_eq!(e.col, 5);
        let e = parse_expression("x^99999999999", &s).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ExponentOverflow);
        let e = parse_expression("(x + 1", &s).unwrap_err();
        assert_eq!(e.col, 7);
        let e = parse_expression("x $ 1", &s).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Lexical(_)));
        assert!(parse_expression("I", &scope(3)).is_err());
        assert!(parse_expression("1/0", &s).is_err());
        assert!(parse_expression("", &s).is_err());
        assert!(parse_expression("x^2^2", &s).is_err());
    }
}
