//! Arbitrary-precision reals for numeric sampling checks.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use super::error::{SymError, SymResult};
use super::poly::{Polynomial, Q};
use super::ratfunc::RationalFunction;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary precision for a requested number of decimal digits, with guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 64
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    p: usize,
}

impl Real {
    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn zero(p: usize) -> Self {
        Real { v: BigFloat::from_word(0, p), p }
    }

    pub fn from_i64(n: i64, p: usize) -> Self {
        Real { v: BigFloat::from_i64(n, p), p }
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        Real { v: BigFloat::from_f64(x, p), p }
    }

    pub fn from_q(x: &Q, p: usize) -> Self {
        let parse = |s: String| with_cc(|cc| BigFloat::parse(&s, Radix::Dec, p, RM, cc));
        let n = parse(x.numer().to_string());
        if x.denom() == &num_bigint::BigInt::from(1) {
            return Real { v: n, p };
        }
        let d = parse(x.denom().to_string());
        Real { v: n.div(&d, p, RM), p }
    }

    pub fn parse(s: &str, p: usize) -> Self {
        Real { v: with_cc(|cc| BigFloat::parse(s, Radix::Dec, p, RM, cc)), p }
    }

    pub fn pi(p: usize) -> Self {
        Real { v: with_cc(|cc| cc.pi(p, RM)), p }
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub fn abs(&self) -> Self {
        Real { v: self.v.abs(), p: self.p }
    }

    pub fn ln(&self) -> Self {
        Real { v: with_cc(|cc| self.v.ln(self.p, RM, cc)), p: self.p }
    }

    pub fn exp(&self) -> Self {
        Real { v: with_cc(|cc| self.v.exp(self.p, RM, cc)), p: self.p }
    }

    pub fn sin(&self) -> Self {
        Real { v: with_cc(|cc| self.v.sin(self.p, RM, cc)), p: self.p }
    }

    pub fn cos(&self) -> Self {
        Real { v: with_cc(|cc| self.v.cos(self.p, RM, cc)), p: self.p }
    }

    pub fn sqrt(&self) -> Self {
        Real { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn powi(&self, n: u32) -> Self {
        Real { v: self.v.powi(n as usize, self.p, RM), p: self.p }
    }

    pub fn recip(&self) -> Self {
        Real { v: self.v.reciprocal(self.p, RM), p: self.p }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        self * &Real::from_i64(k, self.p)
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let s = with_cc(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let x = self.to_f64();
        if digits <= 17 || !x.is_finite() {
            return format!("{:.*e}", digits.saturating_sub(1).min(16), x);
        }
        with_cc(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into())
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&o.v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                let p = self.p.max(o.p);
                Real { v: self.v.$m(&o.v, p, RM), p }
            }
        }
        impl $tr for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: -self.v.clone(), p: self.p }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// Polynomial with coefficients pre-converted for repeated real evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Vec<u32>, Real)>,
    maxdeg: Vec<u32>,
    p: usize,
}

impl CompiledPoly {
    pub fn new(poly: &Polynomial, p: usize) -> Self {
        let n = poly.nvars();
        let maxdeg = (0..n).map(|i| poly.degree_in(i)).collect();
        let terms = poly.terms().map(|(m, c)| (m.exps().to_vec(), Real::from_q(c, p))).collect();
        CompiledPoly { terms, maxdeg, p }
    }

    pub fn eval(&self, at: &[Real]) -> Real {
        let powers: Vec<Vec<Real>> = at
            .iter()
            .zip(&self.maxdeg)
            .map(|(x, d)| {
                let mut v = vec![Real::from_i64(1, self.p)];
                for k in 0..*d as usize {
                    let next = &v[k] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Real::zero(self.p);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    t = &t * &powers[i][*k as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct CompiledRational {
    num: CompiledPoly,
    den: Option<CompiledPoly>,
}

impl CompiledRational {
    pub fn new(r: &RationalFunction, p: usize) -> Self {
        let den = if r.denom().is_one() { None } else { Some(CompiledPoly::new(r.denom(), p)) };
        CompiledRational { num: CompiledPoly::new(r.numer(), p), den }
    }

    pub fn eval(&self, at: &[Real]) -> SymResult<Real> {
        let n = self.num.eval(at);
        match &self.den {
            None => Ok(n),
            Some(d) => {
                let dv = d.eval(at);
                if dv.is_zero() {
                    return Err(SymError::Pole);
                }
                Ok(&n / &dv)
            }
        }
    }
}

/// Double-precision evaluator for trajectory integration.
#[derive(Clone, Debug)]
pub struct CompiledF64 {
    num: Vec<(Vec<i32>, f64)>,
    den: Vec<(Vec<i32>, f64)>,
}

fn f64_terms(p: &Polynomial) -> Vec<(Vec<i32>, f64)> {
    use num_traits::ToPrimitive;
    p.terms()
        .map(|(m, c)| (m.exps().iter().map(|e| *e as i32).collect(), c.to_f64().unwrap_or(f64::NAN)))
        .collect()
}

fn eval_terms(t: &[(Vec<i32>, f64)], at: &[f64]) -> f64 {
    t.iter().map(|(e, c)| e.iter().zip(at).fold(*c, |acc, (k, x)| acc * x.powi(*k))).sum()
}

impl CompiledF64 {
    pub fn new(r: &RationalFunction) -> Self {
        CompiledF64 { num: f64_terms(r.numer()), den: f64_terms(r.denom()) }
    }

    /// Non-finite at poles.
    pub fn eval(&self, at: &[f64]) -> f64 {
        eval_terms(&self.num, at) / eval_terms(&self.den, at)
    }
}
