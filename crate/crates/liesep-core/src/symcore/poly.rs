use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::error::{SymError, SymResult};

pub type Q = BigRational;
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector ordered graded-lex: total degree first, then lex with the
/// first declared variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial {
    deg: u32,
    exps: SmallVec<[u32; 4]>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { deg: 0, exps: SmallVec::from_elem(0, n) }
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        Monomial { deg: exps.iter().sum(), exps: SmallVec::from_slice(exps) }
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut m = Self::one(n);
        m.exps[i] = e;
        m.deg = e;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> =
            self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect();
        Monomial { deg: self.deg + other.deg, exps }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> =
            other.exps.iter().zip(self.exps.iter()).map(|(a, b)| a - b).collect();
        Monomial { deg: other.deg - self.deg, exps }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> =
            self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.min(b)).collect();
        Monomial { deg: exps.iter().sum(), exps }
    }

    fn with_exp(&self, i: usize, e: u32) -> Monomial {
        let mut m = self.clone();
        m.deg = m.deg - m.exps[i] + e;
        m.exps[i] = e;
        m
    }
}

/// Multivariate polynomial with exact rational coefficients. Terms are kept in
/// graded-lex order; zero coefficients never appear.
#[derive(Clone)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_vars(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

pub(crate) fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

fn check_vars(a: &Vars, b: &Vars) {
    if !same_vars(a, b) {
        panic!("variable lists differ: [{}] vs [{}]", a.join(","), b.join(","));
    }
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn constant(vars: &Vars, c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::constant(vars, q(c))
    }

    pub fn var(vars: &Vars, name: &str) -> SymResult<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SymError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &Vars, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i, 1), Q::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Q) -> Self {
        assert_eq!(m.exps.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(vars: &Vars, it: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in it {
            assert_eq!(m.exps.len(), vars.len());
            p.add_term(m, c);
        }
        p
    }

    /// `self -= c * m * other`, in place.
    fn sub_shifted(&mut self, other: &Polynomial, m: &Monomial, c: &Q) {
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), -(oc * c));
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_position(&self, name: &str) -> SymResult<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SymError::UnknownVariable(name.to_string()))
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one(self.nvars())).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.deg)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exps[i]).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps[i] > 0)
    }

    /// Smallest total degree among the monomials.
    pub fn order_at_origin(&self) -> SymResult<u32> {
        self.terms.keys().next().map(|m| m.deg).ok_or(SymError::ZeroOrder)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    /// Homogeneous part of top total degree.
    pub fn top_homogeneous(&self) -> Polynomial {
        let Some(d) = self.total_degree() else { return self.clone() };
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.deg == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e > 0 {
                out.terms.insert(m.with_exp(i, e - 1), c * Q::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    pub fn derivative_by(&self, name: &str) -> SymResult<Polynomial> {
        Ok(self.derivative(self.var_position(name)?))
    }

    pub fn eval(&self, at: &[Q]) -> Q {
        assert_eq!(at.len(), self.nvars());
        let maxd: Vec<u32> = (0..self.nvars()).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<Q>> = at
            .iter()
            .zip(maxd.iter())
            .map(|(x, d)| {
                let mut v = Vec::with_capacity(*d as usize + 1);
                let mut acc = Q::one();
                v.push(acc.clone());
                for _ in 0..*d {
                    acc = &acc * x;
                    v.push(acc.clone());
                }
                v
            })
            .collect();
        let mut sum = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exps.iter().enumerate() {
                if *e > 0 {
                    t *= &powers[i][*e as usize];
                }
            }
            sum += t;
        }
        sum
    }

    /// Substitute variable i by `images[i]`; all images share one variable list.
    pub fn compose(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars());
        let target = images[0].vars.clone();
        let mut cache: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, e) in m.exps.iter().enumerate() {
                let e = *e as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e];
            }
            out = &out + &t;
        }
        out
    }

    /// `x_i -> x_i + shift_i`.
    pub fn translate(&self, shift: &[Q]) -> Polynomial {
        if shift.iter().all(|s| s.is_zero()) {
            return self.clone();
        }
        let images: Vec<Polynomial> = (0..self.nvars())
            .map(|i| &Polynomial::var_index(&self.vars, i) + &Polynomial::constant(&self.vars, shift[i].clone()))
            .collect();
        self.compose(&images)
    }

    /// Re-embed into another variable list, matching by name.
    pub fn with_vars(&self, target: &Vars) -> SymResult<Polynomial> {
        if same_vars(&self.vars, target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.nvars());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.involves(i) {
                        return Err(SymError::UnknownVariable(v.clone()));
                    }
                    map.push(None)
                }
            }
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, e) in m.exps.iter().enumerate() {
                if let Some(j) = map[i] {
                    exps[j] += e;
                }
            }
            out.add_term(Monomial::from_exps(&exps), c.clone());
        }
        Ok(out)
    }

    /// Coefficients with respect to variable i: `self = Σ_k coeffs[k] x_i^k`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Polynomial> {
        let d = self.degree_in(i) as usize;
        let mut out = vec![Polynomial::zero(&self.vars); d + 1];
        for (m, c) in &self.terms {
            let e = m.exps[i] as usize;
            out[e].terms.insert(m.with_exp(i, 0), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(vars: &Vars, i: usize, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.add_term(m.with_exp(i, m.exps[i] + k as u32), a.clone());
            }
        }
        out
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Scaled so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Rational content: the positive rational c with self = c * (integer polynomial with coprime coefficients).
    pub fn rational_content(&self) -> Q {
        if self.is_zero() {
            return Q::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Q::new(num, den)
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.rational_content();
        if self.leading_coefficient().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Multivariate division by graded-lex leading terms.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        check_vars(&self.vars, &divisor.vars);
        let (lm, lc) = match divisor.leading() {
            None => panic!("division by the zero polynomial"),
            Some((m, c)) => (m.clone(), c.clone()),
        };
        let mut quot = Polynomial::zero(&self.vars);
        let mut rem = Polynomial::zero(&self.vars);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c / &lc;
                p.sub_shifted(divisor, &qm, &qc);
                quot.add_term(qm, qc);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
        (quot, rem)
    }

    /// Exact quotient if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        // cheap rejection by degree in each variable
        for i in 0..self.nvars() {
            if divisor.degree_in(i) > self.degree_in(i) {
                return None;
            }
        }
        let (lm, lc) = {
            let (m, c) = divisor.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut quot = Polynomial::zero(&self.vars);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c / &lc;
            p.sub_shifted(divisor, &qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn is_divisible_by(&self, divisor: &Polynomial) -> bool {
        self.div_exact(divisor).is_some()
    }

    pub fn to_string_with(&self, mult: &str) -> String {
        format_poly(self, mult)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

pub(crate) fn format_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_monomial(vars: &[String], m: &Monomial, mult: &str) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], e)),
        }
    }
    parts.join(mult)
}

fn format_poly(p: &Polynomial, mult: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            s.push_str(&format_q(&a));
        } else {
            let mono = format_monomial(&p.vars, m, mult);
            if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format_q(&a));
                s.push_str(mult);
                s.push_str(&mono);
            }
        }
    }
    s
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, "*"))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -(self.clone())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        check_vars(&self.vars, &other.vars);
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        check_vars(&self.vars, &other.vars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        check_vars(&self.vars, &other.vars);
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms.iter().next().unwrap();
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Q> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let p = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, other: Polynomial) -> Polynomial {
                (&self).$m(&other)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, other: &Polynomial) -> Polynomial {
                (&self).$m(other)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, other: Polynomial) -> Polynomial {
                self.$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn v3() -> Vars {
        vars(&["x", "y", "z"])
    }

    #[test]
    fn grlex_order_and_printing() {
        let vs = vars(&["u", "v", "w"]);
        let u = Polynomial::var(&vs, "u").unwrap();
        let v = Polynomial::var(&vs, "v").unwrap();
        let w = Polynomial::var(&vs, "w").unwrap();
        let det = (&w - &v) * (&(&u * &u) - &v) * Polynomial::from_int(&vs, 16);
        assert_eq!(det.to_string(), "-16*u^2*v + 16*u^2*w + 16*v^2 - 16*v*w");
        assert_eq!((&v - &w).leading().unwrap().0.exps(), &[0, 1, 0]);
    }

    #[test]
    fn order_and_degree() {
        let vs = v3();
        let x = Polynomial::var(&vs, "x").unwrap();
        let y = Polynomial::var(&vs, "y").unwrap();
        let p = &(&x * &x) * &y;
        assert_eq!(p.order_at_origin().unwrap(), 3);
        assert_eq!((&Polynomial::one(&vs) + &x).order_at_origin().unwrap(), 0);
        assert!(Polynomial::zero(&vs).order_at_origin().is_err());
    }

    #[test]
    fn division() {
        let vs = v3();
        let x = Polynomial::var(&vs, "x").unwrap();
        let y = Polynomial::var(&vs, "y").unwrap();
        let a = &x + &y;
        let b = &x - &y;
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&(&x + &Polynomial::one(&vs))).is_none());
        let (qq, r) = (&p + &Polynomial::one(&vs)).div_rem(&a);
        assert_eq!(&(&qq * &a) + &r, &p + &Polynomial::one(&vs));
    }

    #[test]
    fn compose_translate() {
        let vs = v3();
        let x = Polynomial::var(&vs, "x").unwrap();
        let p = &x * &x;
        let t = p.translate(&[q(1), q(0), q(0)]);
        assert_eq!(t.to_string(), "x^2 + 2*x + 1");
    }
}
