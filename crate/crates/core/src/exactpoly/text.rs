//! Text grammar for polynomials, maps, vector fields and points.
//!
//! Variables are `x`, `y` in dimension 2 and `x1 .. xn` otherwise (`x1`, `x2`
//! are also accepted in dimension 2). Coefficients are integers or `a/b`;
//! operators are `+ - * / ^` with parentheses. Canonical output lists terms in
//! descending graded-lex order, e.g. `x^4 + 2*x^2*y + y^2 + x`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::Rational;
use crate::error::{Error, Result};

pub fn var_name(nvars: usize, i: usize) -> String {
    if nvars == 2 {
        ["x", "y"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

fn format_monomial(m: &Monomial) -> String {
    let n = m.nvars();
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                var_name(n, i)
            } else {
                format!("{}^{}", var_name(n, i), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if m.is_one() {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&format_monomial(m));
        } else {
            out.push_str(&format_rational(&a));
            out.push('*');
            out.push_str(&format_monomial(m));
        }
    }
    out
}

pub fn format_list(items: &[Polynomial], open: char, close: char) -> String {
    let body = items.iter().map(format_polynomial).collect::<Vec<_>>().join(", ");
    format!("{open}{body}{close}")
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str, nvars: usize) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &src[start..i];
                let idx = resolve_var(name, nvars).ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: format!("unknown variable `{name}` for dimension {nvars}"),
                })?;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            other => {
                return Err(Error::Parse { pos: start, msg: format!("unexpected character `{other}`") })
            }
        }
        i += 1;
    }
    Ok(out)
}

fn resolve_var(name: &str, nvars: usize) -> Option<usize> {
    if nvars == 2 {
        match name {
            "x" => return Some(0),
            "y" => return Some(1),
            _ => {}
        }
    }
    let idx: usize = name.strip_prefix('x')?.parse().ok()?;
    (1..=nvars).contains(&idx).then(|| idx - 1)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    nvars: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(Error::Parse { pos: at, msg: "division by a non-constant or zero".into() });
                    }
                    acc = acc.scale(&(Rational::one() / d.constant_term()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.nvars, Rational::from_integer(n)))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Polynomial::var(self.nvars, i))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(_) => self.err("expected a number, variable or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_polynomial(src: &str, nvars: usize) -> Result<Polynomial> {
    let toks = lex(src, nvars)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, nvars, end: src.len() };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Split `open a, b, ... close` at top-level commas.
pub fn split_list(src: &str, open: char, close: char) -> Result<Vec<String>> {
    let s = src.trim();
    let inner = s
        .strip_prefix(open)
        .and_then(|r| r.strip_suffix(close))
        .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected `{open} ... {close}`") })?;
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if ch == ',' && depth == 0 {
            parts.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse { pos: 0, msg: "unbalanced parentheses".into() });
    }
    parts.push(cur);
    if parts.iter().any(|p| p.trim().is_empty()) {
        return Err(Error::Parse { pos: 0, msg: "empty component".into() });
    }
    Ok(parts)
}

/// Parse `open p1, ..., pn close`; the dimension is the component count.
pub fn parse_list(src: &str, open: char, close: char) -> Result<Vec<Polynomial>> {
    let parts = split_list(src, open, close)?;
    let n = parts.len();
    parts.iter().map(|p| parse_polynomial(p, n)).collect()
}

pub fn parse_rational(src: &str) -> Result<Rational> {
    let p = parse_polynomial(src, 0)?;
    Ok(p.constant_term())
}

/// A point `(a1, ..., an)` with rational coordinates.
pub fn parse_point(src: &str) -> Result<Vec<Rational>> {
    let parts = split_list(src, '(', ')')?;
    parts.iter().map(|p| parse_rational(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    #[test]
    fn canonical_output() {
        assert_eq!(p("x + y^2 + 2*x^2*y + x^4").to_string(), "x^4 + 2*x^2*y + y^2 + x");
        assert_eq!(p("-x").to_string(), "-x");
        assert_eq!(p("y - 3/2*x*y + 1").to_string(), "-3/2*x*y + y + 1");
        assert_eq!(p("x - x").to_string(), "0");
        assert_eq!(p("-(1/2)").to_string(), "-1/2");
    }

    #[test]
    fn grammar_features() {
        assert_eq!(p("(x+y)^2"), p("x^2 + 2*x*y + y^2"));
        assert_eq!(p("x1*x2"), p("x*y"));
        assert_eq!(p("6/4 * x"), p("3/2*x"));
        assert_eq!(p("x/2"), p("1/2*x"));
        assert_eq!(p("-x^2"), -&p("x^2"));
        assert_eq!(parse_polynomial("x1 + x3^2", 3).unwrap().to_string(), "x3^2 + x1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_polynomial("z", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x +", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x/y", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("x4", 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("(x", 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_polynomial("", 2), Err(Error::Parse { .. })));
    }

    #[test]
    fn lists_and_points() {
        let m = parse_list("(x+y^2, y)", '(', ')').unwrap();
        assert_eq!(format_list(&m, '(', ')'), "(y^2 + x, y)");
        let f = parse_list("[x1, x2*x3, 0]", '[', ']').unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(parse_point("(1/2, -3)").unwrap(), vec![Rational::new(1.into(), 2.into()), Rational::from_integer((-3).into())]);
    }
}
