use std::collections::BTreeMap;

use num_traits::Zero;

use super::error::{SymError, SymResult};
use super::gcd::gcd;
use super::loglin::LogLinearExpr;
use super::poly::{Polynomial, Vars, Q};
use super::ratfunc::RationalFunction;
use super::real::{bits_for_digits, Real};

/// Exact evaluation site, keyed by variable name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point {
    coords: BTreeMap<String, Q>,
}

impl Point {
    pub fn new<I, S>(it: I) -> Self
    where
        I: IntoIterator<Item = (S, Q)>,
        S: Into<String>,
    {
        Point { coords: it.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }

    pub fn origin(vars: &Vars) -> Self {
        Self::new(vars.iter().map(|v| (v.clone(), Q::zero())))
    }

    pub fn get(&self, name: &str) -> Option<&Q> {
        self.coords.get(name)
    }

    pub fn set(&mut self, name: &str, v: Q) {
        self.coords.insert(name.to_string(), v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Q)> {
        self.coords.iter()
    }

    /// Coordinates in the order of `vars`.
    pub fn coords_for(&self, vars: &Vars) -> SymResult<Vec<Q>> {
        vars.iter()
            .map(|v| self.coords.get(v).cloned().ok_or_else(|| SymError::MissingCoordinate(v.clone())))
            .collect()
    }
}

pub trait Differentiate {
    fn differentiate(&self, var: &str) -> SymResult<RationalFunction>;
}

impl Differentiate for Polynomial {
    fn differentiate(&self, var: &str) -> SymResult<RationalFunction> {
        Ok(self.derivative_by(var)?.into())
    }
}

impl Differentiate for RationalFunction {
    fn differentiate(&self, var: &str) -> SymResult<RationalFunction> {
        self.derivative_by(var)
    }
}

impl Differentiate for LogLinearExpr {
    fn differentiate(&self, var: &str) -> SymResult<RationalFunction> {
        self.derivative_by(var)
    }
}

pub trait Evaluate {
    type Output;
    fn evaluate(&self, at: &Point) -> SymResult<Self::Output>;
}

impl Evaluate for Polynomial {
    type Output = Q;
    fn evaluate(&self, at: &Point) -> SymResult<Q> {
        Ok(self.eval(&at.coords_for(self.vars())?))
    }
}

impl Evaluate for RationalFunction {
    type Output = Q;
    fn evaluate(&self, at: &Point) -> SymResult<Q> {
        self.eval(&at.coords_for(self.vars())?)
    }
}

/// Default precision for log evaluation, in decimal digits.
pub const DEFAULT_DIGITS: u32 = 30;

impl Evaluate for LogLinearExpr {
    type Output = Real;
    fn evaluate(&self, at: &Point) -> SymResult<Real> {
        self.eval_real(&at.coords_for(self.vars())?, bits_for_digits(DEFAULT_DIGITS))
    }
}

/// Whether `p` and `q` share a factor vanishing at `at`: their gcd is
/// non-constant and vanishes there.
pub fn shares_noninvertible_factor(p: &Polynomial, q: &Polynomial, at: &Point) -> SymResult<bool> {
    let g = gcd(p, q);
    if g.is_zero() {
        // both zero: every factor is shared
        return Ok(true);
    }
    if g.is_constant() {
        return Ok(false);
    }
    Ok(g.evaluate(at)?.is_zero())
}
