//! Infix parser.
//!
//! Grammar: `+ - * / ^`, parentheses, and the functions `exp ln log sin cos
//! tan arctan atan sqrt`. Identifiers resolve in this order: registered odd
//! generator, jet `field` or `field_idx` of a registered field, plain symbol.
//! Decimal literals are read exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::CasError;
use crate::expr::{Expr, Func, Jet, Odd};
use crate::rational::{q, Q};
use crate::registry;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(parse_decimal(&text).ok_or_else(|| err(start, "bad number"))?)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<Q> {
    match s.split_once('.') {
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
        Some((a, b)) => {
            if b.contains('.') {
                return None;
            }
            let digits = format!("{a}{b}");
            let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
            let d = num_traits::pow(BigInt::from(10), b.len());
            Some(Q::new(n, d))
        }
    }
}

fn err(pos: usize, msg: &str) -> CasError {
    CasError::Parse { pos, msg: msg.to_string() }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    len: usize,
    env: Option<&'a BTreeMap<String, Expr>>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(err(self.pos(), &format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|e| err(pos, &e.to_string()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat('^') {
            let pos = self.pos();
            let e = self.unary()?;
            let k = e.as_number().ok_or_else(|| err(pos, "exponent must be a rational number"))?;
            return base.pow(&k).map_err(|e| err(pos, &e.to_string()));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Expr::num(n))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.i += 1;
                if self.peek() == Some(&Tok::Op('(')) {
                    if let Some(f) = function(&name) {
                        self.i += 1;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        return f(&arg).map_err(|e| err(pos, &e.to_string()));
                    }
                }
                if let Some(v) = self.env.and_then(|env| env.get(&name)) {
                    return Ok(v.clone());
                }
                Ok(identifier(&name))
            }
            Some(Tok::Op(c)) => Err(err(pos, &format!("unexpected '{c}'"))),
            None => Err(err(pos, "unexpected end of input")),
        }
    }
}

type FuncBuilder = fn(&Expr) -> Result<Expr>;

fn function(name: &str) -> Option<FuncBuilder> {
    if name == "sqrt" {
        return Some(|a| a.pow(&q(1, 2)));
    }
    Some(match Func::from_name(name)? {
        Func::Exp => |a| Expr::func(Func::Exp, a),
        Func::Ln => |a| Expr::func(Func::Ln, a),
        Func::Sin => |a| Expr::func(Func::Sin, a),
        Func::Cos => |a| Expr::func(Func::Cos, a),
        Func::Tan => |a| Expr::func(Func::Tan, a),
        Func::Atan => |a| Expr::func(Func::Atan, a),
    })
}

fn identifier(name: &str) -> Expr {
    if registry::generator_id(name).is_some() {
        return Expr::odd(Odd::gen(name));
    }
    if registry::field_parity(name).is_some() {
        return Expr::from_jet(Jet::new(name, &[]));
    }
    if let Some((field, suffix)) = name.split_once('_') {
        if registry::field_parity(field).is_some()
            && !suffix.is_empty()
            && suffix.chars().all(|c| registry::JET_VARS.contains(&c))
        {
            let idx: Vec<char> = suffix.chars().collect();
            return Expr::from_jet(Jet::new(field, &idx));
        }
    }
    Expr::sym(name)
}

/// Parses an infix expression.
pub fn parse(src: &str) -> Result<Expr> {
    parse_env(src, None)
}

/// Parses with identifiers in `env` replaced by their bound values, so that
/// bound parameters may appear in exponents.
pub fn parse_with(src: &str, env: &BTreeMap<String, Expr>) -> Result<Expr> {
    parse_env(src, Some(env))
}

fn parse_env(src: &str, env: Option<&BTreeMap<String, Expr>>) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks, i: 0, len: src.chars().count(), env };
    if p.peek().is_none() {
        return Err(err(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.i != p.toks.len() {
        return Err(err(p.pos(), "trailing input"));
    }
    Ok(e)
}

/// Parses a rational literal such as `3/5`, `-2` or `0.25`.
pub fn parse_rational(src: &str) -> Result<Q> {
    parse(src)?
        .as_number()
        .ok_or_else(|| err(0, "not a rational number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn bound_parameters() {
        let env: BTreeMap<String, Expr> = [("a".to_string(), Expr::frac(2, 7))].into();
        assert_eq!(parse_with("t^(-a/(1+3*a))*a", &env).unwrap(), parse("2/7*t^(-2/13)").unwrap());
        assert!(parse("t^a").is_err());
    }

    #[test]
    fn round_trip_forms() {
        for s in [
            "x",
            "3/7*x",
            "-x + 1",
            "x^(-2)*t^(1/2)",
            "R_tx*xi_x + S",
            "exp(x + t)",
            "sin(x)^2",
            "(x + 1)^(1/2)",
            "3*(2)^(1/2)",
            "eta1*eta2*K",
        ] {
            let once = rt(s);
            let twice = rt(&once);
            assert_eq!(once, twice, "{s}");
        }
    }

    #[test]
    fn arithmetic() {
        assert_eq!(parse("(x+1)^2 - x^2 - 2*x").unwrap(), Expr::one());
        assert_eq!(parse("0.25").unwrap(), Expr::frac(1, 4));
        assert_eq!(parse("eta2*eta1 + eta1*eta2").unwrap(), Expr::zero());
        assert_eq!(parse("sqrt(4*x^2)").unwrap(), parse("2*x").unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("x +"), Err(CasError::Parse { .. })));
        assert!(matches!(parse("x ^ y"), Err(CasError::Parse { .. })));
        assert!(matches!(parse("(x"), Err(CasError::Parse { .. })));
        assert!(matches!(parse("x $"), Err(CasError::Parse { .. })));
    }
}
