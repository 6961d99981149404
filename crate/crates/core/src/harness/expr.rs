//! Whitelisted expressions for spatial profiles and scalar config values.
//!
//! ```text
//! expr    = term (('+' | '-') term)*
//! term    = unary (('*' | '/') unary)*
//! unary   = '-' unary | power
//! power   = atom ('^' unary)?
//! atom    = number | 'x' | 'pi' | call | '(' expr ')'
//! call    = const(a) | poly(a0, a1, ...) | sin(e) | cos(e) | exp(e) | sqrt(e)
//! ```
//!
//! `poly(a0, a1, ..., am)` is `a0 + a1 x + ... + am x^m`. Scalars are
//! expressions that do not mention `x`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Const,
    Poly,
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    fn lookup(name: &str) -> Option<Self> {
        Some(match name {
            "const" => Self::Const,
            "poly" => Self::Poly,
            "sin" => Self::Sin,
            "cos" => Self::Cos,
            "exp" => Self::Exp,
            "sqrt" => Self::Sqrt,
            _ => return None,
        })
    }
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x),
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval(x), b.eval(x));
                match op {
                    '+' => a + b,
                    '-' => a - b,
                    '*' => a * b,
                    '/' => a / b,
                    _ => a.powf(b),
                }
            }
            Expr::Call(f, args) => match f {
                Func::Const => args[0].eval(x),
                Func::Poly => args.iter().rev().fold(0.0, |acc, a| acc * x + a.eval(x)),
                Func::Sin => args[0].eval(x).sin(),
                Func::Cos => args[0].eval(x).cos(),
                Func::Exp => args[0].eval(x).exp(),
                Func::Sqrt => args[0].eval(x).sqrt(),
            },
        }
    }

    pub fn mentions_x(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::X => true,
            Expr::Neg(e) => e.mentions_x(),
            Expr::Bin(_, a, b) => a.mentions_x() || b.mentions_x(),
            Expr::Call(_, args) => args.iter().any(Expr::mentions_x),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn err(src: &str, pos: usize, msg: &str) -> Error {
    Error::InvalidConfiguration(format!("expression {src:?} at offset {pos}: {msg}"))
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(Expr::Bin('^', Box::new(base), Box::new(self.unary()?)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.src, self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let rest = &self.src[start..];
                let mut end = rest
                    .find(|ch: char| !(ch.is_ascii_digit() || ch == '.'))
                    .unwrap_or(rest.len());
                // exponent part
                if rest[end..].starts_with(['e', 'E']) {
                    let tail = &rest[end + 1..];
                    let sign = usize::from(tail.starts_with(['+', '-']));
                    let digits = tail[sign..]
                        .find(|ch: char| !ch.is_ascii_digit())
                        .unwrap_or(tail.len() - sign);
                    if digits > 0 {
                        end += 1 + sign + digits;
                    }
                }
                let v: f64 = rest[..end]
                    .parse()
                    .map_err(|_| err(self.src, start, "malformed number"))?;
                self.pos = start + end;
                Ok(Expr::Num(v))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let rest = &self.src[start..];
                let end = rest
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(rest.len());
                let name = &rest[..end];
                self.pos = start + end;
                match name {
                    "x" => return Ok(Expr::X),
                    "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
                    _ => {}
                }
                let f = Func::lookup(name)
                    .ok_or_else(|| err(self.src, start, &format!("unknown name '{name}'")))?;
                if !self.eat('(') {
                    return Err(err(self.src, self.pos, "expected '(' after function name"));
                }
                let mut args = vec![self.expr()?];
                while self.eat(',') {
                    args.push(self.expr()?);
                }
                if !self.eat(')') {
                    return Err(err(self.src, self.pos, "expected ')'"));
                }
                if f != Func::Poly && args.len() != 1 {
                    return Err(err(self.src, start, &format!("{name} takes one argument")));
                }
                if f == Func::Const && args[0].mentions_x() {
                    return Err(err(
                        self.src,
                        start,
                        "const() argument must not depend on x",
                    ));
                }
                if f == Func::Poly && args.iter().any(Expr::mentions_x) {
                    return Err(err(
                        self.src,
                        start,
                        "poly() coefficients must not depend on x",
                    ));
                }
                Ok(Expr::Call(f, args))
            }
            Some(c) => Err(err(self.src, start, &format!("unexpected '{c}'"))),
            None => Err(err(self.src, start, "unexpected end of input")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(src, p.pos, "trailing input"));
    }
    Ok(e)
}

/// Parses an expression that must not depend on `x`.
pub fn parse_scalar(src: &str) -> Result<f64> {
    let e = parse(src)?;
    if e.mentions_x() {
        return Err(err(src, 0, "scalar value must not depend on x"));
    }
    let v = e.eval(0.0);
    if !v.is_finite() {
        return Err(err(src, 0, "value is not finite"));
    }
    Ok(v)
}
