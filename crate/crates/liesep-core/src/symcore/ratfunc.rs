use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::error::{SymError, SymResult};
use super::gcd::gcd;
use super::poly::{Polynomial, Vars, Q};

/// Reduced quotient of polynomials. The denominator has graded-lex leading
/// coefficient 1 and shares no factor with the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> SymResult<Self> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            return RationalFunction { num: num.scale(&inv), den: Polynomial::one(num.vars()) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Self::normalize_unit(num, den)
    }

    fn normalize_unit(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            return RationalFunction { num, den };
        }
        let inv = lc.recip();
        RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero(vars: &Vars) -> Self {
        RationalFunction { num: Polynomial::zero(vars), den: Polynomial::one(vars) }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::from_poly(Polynomial::from_int(vars, c))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn var(vars: &Vars, name: &str) -> SymResult<Self> {
        Ok(Self::from_poly(Polynomial::var(vars, name)?))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_polynomial(&self) -> SymResult<&Polynomial> {
        if self.den.is_one() {
            Ok(&self.num)
        } else {
            Err(SymError::NotPolynomial(self.to_string()))
        }
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> SymResult<Self> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::normalize_unit(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> SymResult<Self> {
        if e >= 0 {
            let e = e as u32;
            Ok(RationalFunction { num: self.num.pow(e), den: self.den.pow(e) })
        } else {
            self.recip()?.pow(-e)
        }
    }

    /// Exact partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative(i));
        }
        let dn = self.num.derivative(i);
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // (n'd - nd')/(d·d); cancel against each copy of d in turn
        let mut top = &(&dn * &self.den) - &(&self.num * &dd);
        if top.is_zero() {
            return Self::zero(self.vars());
        }
        let mut halves = [self.den.clone(), self.den.clone()];
        for h in halves.iter_mut() {
            let g = gcd(&top, h);
            if !g.is_constant() {
                top = top.div_exact(&g).unwrap();
                *h = h.div_exact(&g).unwrap();
            }
        }
        let [a, b] = halves;
        Self::normalize_unit(top, &a * &b)
    }

    pub fn derivative_by(&self, name: &str) -> SymResult<Self> {
        Ok(self.derivative(self.num.var_position(name)?))
    }

    pub fn eval(&self, at: &[Q]) -> SymResult<Q> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(SymError::Pole);
        }
        Ok(self.num.eval(at) / d)
    }

    /// Substitute each variable by a rational function over a common target list.
    pub fn compose(&self, images: &[RationalFunction]) -> Self {
        let n = eval_poly_rf(&self.num, images);
        let d = eval_poly_rf(&self.den, images);
        &n / &d
    }

    pub fn translate(&self, shift: &[Q]) -> Self {
        Self::reduce(self.num.translate(shift), self.den.translate(shift))
    }

    pub fn with_vars(&self, target: &Vars) -> SymResult<Self> {
        Ok(RationalFunction { num: self.num.with_vars(target)?, den: self.den.with_vars(target)? })
    }

    pub fn to_string_with(&self, mult: &str) -> String {
        if self.den.is_one() {
            self.num.to_string_with(mult)
        } else {
            format!("({})/({})", self.num.to_string_with(mult), self.den.to_string_with(mult))
        }
    }
}

fn eval_poly_rf(p: &Polynomial, images: &[RationalFunction]) -> RationalFunction {
    let target = images[0].vars().clone();
    let mut acc = RationalFunction::zero(&target);
    for (m, c) in p.terms() {
        let mut t = RationalFunction::constant(&target, c.clone());
        for (i, e) in m.exps().iter().enumerate() {
            if *e > 0 {
                t = &t * &images[i].pow(*e as i32).expect("nonnegative power");
            }
        }
        acc = &acc + &t;
    }
    acc
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with("*"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({})", self)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -self.num, den: self.den }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalFunction::from_poly(&self.num + &o.num);
        }
        if self.den == o.den {
            return RationalFunction::reduce(&self.num + &o.num, self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        if g.is_constant() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            // coprime reduced inputs give a reduced sum
            return RationalFunction::normalize_unit(num, &self.den * &o.den);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let num = &(&self.num * &d1) + &(&o.num * &b1);
        if num.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        let den = &self.den * &d1;
        let h = gcd(&num, &g);
        if h.is_constant() {
            RationalFunction::normalize_unit(num, den)
        } else {
            RationalFunction::normalize_unit(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero(self.vars());
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalFunction::from_poly(&self.num * &o.num);
        }
        let cancel = |n: &Polynomial, d: &Polynomial| -> (Polynomial, Polynomial) {
            if d.is_one() || n.is_constant() {
                return (n.clone(), d.clone());
            }
            let g = gcd(n, d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
            }
        };
        let (a, d) = cancel(&self.num, &o.den);
        let (c, b) = cancel(&o.num, &self.den);
        RationalFunction::normalize_unit(&a * &c, &b * &d)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self * &o.recip().expect("division by the zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: &RationalFunction) -> RationalFunction {
                (&self).$m(o)
            }
        }
        impl $tr<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
