//! Expression grammar: integer and `p/q` literals, identifiers, `+ - * / ^`,
//! parentheses and unary minus. No implicit multiplication. Exponents are
//! integer literals (optionally signed). `log(...)`/`ln(...)` is accepted only
//! by [`parse_loglinear`], and only linearly.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::error::{SymError, SymResult};
use super::loglin::LogLinearExpr;
use super::poly::{Polynomial, Vars, Q};
use super::ratfunc::RationalFunction;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn lex(s: &str) -> SymResult<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            out.push((st, Tok::Num(s[st..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((st, Tok::Ident(s[st..i].to_string())));
        } else if "+-*/^".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else if c == '(' {
            out.push((i, Tok::LParen));
            i += 1;
        } else if c == ')' {
            out.push((i, Tok::RParen));
            i += 1;
        } else {
            return Err(SymError::Parse { offset: i, message: format!("unexpected character `{}`", c) });
        }
    }
    Ok(out)
}

#[derive(Clone)]
enum Val {
    Rat(RationalFunction),
    Log(LogLinearExpr),
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a Vars,
    allow_log: bool,
    len: usize,
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> SymResult<T> {
        Err(SymError::Parse { offset: self.offset(), message: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> SymResult<Val> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let rhs = self.term()?;
            acc = self.combine(acc, rhs, c)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> SymResult<Val> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.bump();
            let rhs = self.unary()?;
            acc = self.combine(acc, rhs, c)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> SymResult<Val> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                let v = self.unary()?;
                Ok(match v {
                    Val::Rat(r) => Val::Rat(-r),
                    Val::Log(l) => Val::Log(l.scale(&-Q::one())),
                })
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> SymResult<Val> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            let neg = match self.peek() {
                Some(Tok::Op('-')) => {
                    self.bump();
                    true
                }
                Some(Tok::Op('+')) => {
                    self.bump();
                    false
                }
                _ => false,
            };
            let e = match self.bump() {
                Some(Tok::Num(n)) => n,
                _ => {
                    self.pos -= 1;
                    return self.err("exponent must be an integer literal");
                }
            };
            let e: i32 = match i32::try_from(&e) {
                Ok(v) if v <= 10_000 => v,
                _ => return Err(SymError::Exponent),
            };
            let e = if neg { -e } else { e };
            return match base {
                Val::Rat(r) => match r.pow(e) {
                    Ok(v) => Ok(Val::Rat(v)),
                    Err(_) => self.err("zero raised to a negative power"),
                },
                Val::Log(_) => self.err("log term raised to a power"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> SymResult<Val> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Val::Rat(RationalFunction::constant(self.vars, Q::from_integer(n)))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    _ => {
                        self.pos -= 1;
                        self.err("expected `)`")
                    }
                }
            }
            Some(Tok::Ident(name)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    if name != "log" && name != "ln" {
                        self.pos -= 1;
                        return self.err(format!("unknown function `{}`", name));
                    }
                    if !self.allow_log {
                        self.pos -= 1;
                        return self.err("log is not allowed in a rational expression");
                    }
                    self.bump();
                    let arg = match self.expr()? {
                        Val::Rat(r) => r,
                        Val::Log(_) => return self.err("nested log"),
                    };
                    if !matches!(self.bump(), Some(Tok::RParen)) {
                        self.pos -= 1;
                        return self.err("expected `)`");
                    }
                    let p = match arg.as_polynomial() {
                        Ok(p) => p.clone(),
                        Err(_) => return self.err("log argument must be a polynomial"),
                    };
                    return LogLinearExpr::log(Q::one(), p).map(Val::Log);
                }
                match RationalFunction::var(self.vars, &name) {
                    Ok(v) => Ok(Val::Rat(v)),
                    Err(e) => {
                        self.pos -= 1;
                        let _ = e;
                        self.err(format!("unknown variable `{}`", name))
                    }
                }
            }
            Some(_) => {
                self.pos -= 1;
                self.err("unexpected token")
            }
            None => self.err("unexpected end of input"),
        }
    }

    fn combine(&self, a: Val, b: Val, op: char) -> SymResult<Val> {
        use Val::*;
        let as_log = |r: RationalFunction| LogLinearExpr::from_rational(r);
        match (a, b, op) {
            (Rat(x), Rat(y), '+') => Ok(Rat(&x + &y)),
            (Rat(x), Rat(y), '-') => Ok(Rat(&x - &y)),
            (Rat(x), Rat(y), '*') => Ok(Rat(&x * &y)),
            (Rat(x), Rat(y), '/') => {
                if y.is_zero() {
                    return Err(SymError::DivisionByZero);
                }
                Ok(Rat(&x / &y))
            }
            (x, y, '+' | '-') => {
                let lx = match x {
                    Rat(r) => as_log(r),
                    Log(l) => l,
                };
                let ly = match y {
                    Rat(r) => as_log(r),
                    Log(l) => l,
                };
                let ly = if op == '-' { ly.scale(&-Q::one()) } else { ly };
                Ok(Log(lx.add(&ly)?))
            }
            (Rat(c), Log(l), '*') | (Log(l), Rat(c), '*') => match c.as_constant() {
                Some(k) => Ok(Log(l.scale(&k))),
                None => self.err("log term multiplied by a non-constant"),
            },
            (Log(l), Rat(c), '/') => match c.as_constant() {
                Some(k) if !k.is_zero() => Ok(Log(l.scale(&k.recip()))),
                _ => self.err("log term divided by a non-constant"),
            },
            _ => self.err("non-linear use of log"),
        }
    }
}

fn run(s: &str, vars: &Vars, allow_log: bool) -> SymResult<Val> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, vars, allow_log, len: s.len() };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

pub fn parse_rational(s: &str, vars: &Vars) -> SymResult<RationalFunction> {
    match run(s, vars, false)? {
        Val::Rat(r) => Ok(r),
        Val::Log(_) => unreachable!("logs disabled"),
    }
}

pub fn parse_polynomial(s: &str, vars: &Vars) -> SymResult<Polynomial> {
    let r = parse_rational(s, vars)?;
    let (n, d) = r.into_parts();
    if d.is_one() {
        Ok(n)
    } else {
        Err(SymError::NotPolynomial(format!("({})/({})", n, d)))
    }
}

pub fn parse_loglinear(s: &str, vars: &Vars) -> SymResult<LogLinearExpr> {
    match run(s, vars, true)? {
        Val::Rat(r) => Ok(LogLinearExpr::from_rational(r)),
        Val::Log(l) => Ok(l),
    }
}

/// Rational literal `n`, `-n`, `n/d` or `-n/d`.
pub fn parse_q(s: &str) -> SymResult<Q> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t),
    };
    let bad = || SymError::Parse { offset: 0, message: format!("invalid rational `{}`", s) };
    let v = match body.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(SymError::DivisionByZero);
            }
            Q::new(n, d)
        }
        None => Q::from_integer(body.parse().map_err(|_| bad())?),
    };
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::poly::vars;

    #[test]
    fn precedence() {
        let vs = vars(&["x", "y", "z"]);
        assert_eq!(parse_polynomial("-x^2", &vs).unwrap().to_string(), "-x^2");
        assert_eq!(parse_polynomial("2*(x+y)^2 - 4*x*y", &vs).unwrap().to_string(), "2*x^2 + 2*y^2");
        assert_eq!(parse_polynomial("x/2", &vs).unwrap().to_string(), "1/2*x");
        assert_eq!(parse_rational("x^-1", &vs).unwrap().to_string(), "(1)/(x)");
        assert_eq!(parse_polynomial("1/2*x", &vs).unwrap(), parse_polynomial("x/2", &vs).unwrap());
    }

    #[test]
    fn errors_carry_offsets() {
        let vs = vars(&["x", "y", "z"]);
        match parse_polynomial("x + q", &vs) {
            Err(SymError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{:?}", other),
        }
        assert!(parse_polynomial("x y", &vs).is_err());
        assert!(parse_polynomial("1/x", &vs).is_err());
        assert!(parse_rational("log(x)", &vs).is_err());
        assert!(parse_loglinear("log(x)*y", &vs).is_err());
        assert!(parse_rational("x^y", &vs).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_q("-3/6").unwrap(), Q::new((-1).into(), 2.into()));
        assert_eq!(parse_q("7").unwrap(), Q::from_integer(7.into()));
        assert!(parse_q("1/0").is_err());
    }
}
