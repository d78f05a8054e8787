use std::fmt;

use num_traits::{One, Zero};

use super::error::{SymError, SymResult};
use super::gcd::gcd;
use super::poly::{format_q, Polynomial, Vars, Q};
use super::ratfunc::RationalFunction;
use super::real::{CompiledPoly, CompiledRational, Real};

/// `rational + Σ c_k log(p_k)`. Arguments are non-constant and pairwise coprime.
/// Absolute values are implicit: symbolic derivatives are those of `log|p|`.
#[derive(Clone, PartialEq, Eq)]
pub struct LogLinearExpr {
    rational: RationalFunction,
    logs: Vec<(Q, Polynomial)>,
}

impl LogLinearExpr {
    pub fn new(rational: RationalFunction, logs: Vec<(Q, Polynomial)>) -> SymResult<Self> {
        let mut merged: Vec<(Q, Polynomial)> = Vec::new();
        for (c, p) in logs {
            if p.is_constant() {
                return Err(SymError::ConstantLogArgument(p.to_string()));
            }
            if let Some(slot) = merged.iter_mut().find(|(_, q)| *q == p) {
                slot.0 += c;
            } else {
                merged.push((c, p));
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        for i in 0..merged.len() {
            for j in i + 1..merged.len() {
                if !gcd(&merged[i].1, &merged[j].1).is_constant() {
                    return Err(SymError::NonCoprimeLogArguments(
                        merged[i].1.to_string(),
                        merged[j].1.to_string(),
                    ));
                }
            }
        }
        Ok(LogLinearExpr { rational, logs: merged })
    }

    pub fn zero(vars: &Vars) -> Self {
        LogLinearExpr { rational: RationalFunction::zero(vars), logs: Vec::new() }
    }

    pub fn from_rational(r: RationalFunction) -> Self {
        LogLinearExpr { rational: r, logs: Vec::new() }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self::from_rational(p.into())
    }

    /// `c * log(p)`.
    pub fn log(c: Q, p: Polynomial) -> SymResult<Self> {
        let vars = p.vars().clone();
        Self::new(RationalFunction::zero(&vars), vec![(c, p)])
    }

    pub fn vars(&self) -> &Vars {
        self.rational.vars()
    }

    pub fn rational_part(&self) -> &RationalFunction {
        &self.rational
    }

    pub fn log_terms(&self) -> &[(Q, Polynomial)] {
        &self.logs
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.rational.is_constant() && self.logs.is_empty()
    }

    pub fn add(&self, other: &LogLinearExpr) -> SymResult<Self> {
        let mut logs = self.logs.clone();
        logs.extend(other.logs.iter().cloned());
        Self::new(&self.rational + &other.rational, logs)
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        LogLinearExpr {
            rational: self.rational.scale(c),
            logs: self.logs.iter().map(|(k, p)| (k * c, p.clone())).collect(),
        }
    }

    /// `∂_i`, always rational: d/dx of c·log p is c·p_x/p.
    pub fn derivative(&self, i: usize) -> RationalFunction {
        let mut acc = self.rational.derivative(i);
        for (c, p) in &self.logs {
            let dp = p.derivative(i);
            if dp.is_zero() {
                continue;
            }
            let term = RationalFunction::new(dp.scale(c), p.clone()).expect("nonzero log argument");
            acc = &acc + &term;
        }
        acc
    }

    pub fn derivative_by(&self, name: &str) -> SymResult<RationalFunction> {
        let i = self
            .vars()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| SymError::UnknownVariable(name.to_string()))?;
        Ok(self.derivative(i))
    }

    pub fn gradient_components(&self) -> Vec<RationalFunction> {
        (0..self.rational.nvars()).map(|i| self.derivative(i)).collect()
    }

    pub fn with_vars(&self, target: &Vars) -> SymResult<Self> {
        let logs = self
            .logs
            .iter()
            .map(|(c, p)| Ok((c.clone(), p.with_vars(target)?)))
            .collect::<SymResult<Vec<_>>>()?;
        Ok(LogLinearExpr { rational: self.rational.with_vars(target)?, logs })
    }

    /// High-precision value. Log arguments must be positive at the point.
    pub fn eval_real(&self, at: &[Q], prec: usize) -> SymResult<Real> {
        let x: Vec<Real> = at.iter().map(|a| Real::from_q(a, prec)).collect();
        self.compile(prec).eval(&x)
    }

    pub fn compile(&self, prec: usize) -> CompiledLogLinear {
        CompiledLogLinear {
            rational: CompiledRational::new(&self.rational, prec),
            logs: self
                .logs
                .iter()
                .map(|(c, p)| (Real::from_q(c, prec), CompiledPoly::new(p, prec), p.to_string()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledLogLinear {
    rational: CompiledRational,
    logs: Vec<(Real, CompiledPoly, String)>,
}

impl CompiledLogLinear {
    pub fn eval(&self, at: &[Real]) -> SymResult<Real> {
        let mut acc = self.rational.eval(at)?;
        for (c, p, name) in &self.logs {
            let v = p.eval(at);
            if !v.is_positive() {
                return Err(SymError::LogDomain(name.clone()));
            }
            acc = &acc + &(c * &v.ln());
        }
        Ok(acc)
    }
}

impl fmt::Display for LogLinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.rational.is_zero() || self.logs.is_empty() {
            parts.push(self.rational.to_string());
        }
        for (c, p) in &self.logs {
            let body = format!("log({})", p);
            let s = if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{}", body)
            } else if c.is_integer() {
                format!("{}*{}", format_q(c), body)
            } else {
                format!("({})*{}", format_q(c), body)
            };
            parts.push(s);
        }
        let mut out = String::new();
        for (k, s) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(s);
            } else if let Some(rest) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(s);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for LogLinearExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogLinearExpr({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::{parse_loglinear, parse_polynomial};
    use crate::symcore::poly::{q, vars};

    #[test]
    fn log_rule() {
        let vs = vars(&["u", "v", "w"]);
        let e = parse_loglinear("5/2*log(v-u^2)", &vs).unwrap();
        let d = e.derivative_by("v").unwrap();
        assert_eq!(d.to_string(), "(-5/2)/(u^2 - v)");
        let l = parse_loglinear("w + 2*log(v-u^2) + 3*log(w-v)", &vs).unwrap();
        assert_eq!(l.log_terms().len(), 2);
        assert_eq!(l.to_string(), "w + 2*log(-u^2 + v) + 3*log(-v + w)");
    }

    #[test]
    fn rejects_shared_arguments() {
        let vs = vars(&["x", "y", "z"]);
        let p = parse_polynomial("x*y", &vs).unwrap();
        let r = parse_polynomial("x*z", &vs).unwrap();
        let e = LogLinearExpr::new(RationalFunction::zero(&vs), vec![(q(1), p), (q(1), r)]);
        assert!(matches!(e, Err(SymError::NonCoprimeLogArguments(..))));
        assert!(matches!(LogLinearExpr::log(q(1), parse_polynomial("3", &vs).unwrap()), Err(SymError::ConstantLogArgument(_))));
    }

    #[test]
    fn evaluation_domain() {
        let vs = vars(&["u", "v", "w"]);
        let l = parse_loglinear("log(w-v)", &vs).unwrap();
        assert!(matches!(l.eval_real(&[q(0), q(2), q(1)], 128), Err(SymError::LogDomain(_))));
        let v = l.eval_real(&[q(0), q(1), q(3)], 128).unwrap();
        assert!((v.to_f64() - 2f64.ln()).abs() < 1e-15);
    }
}
