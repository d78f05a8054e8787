//! Closure condition, gauge exponents and conjugation to Schrödinger form.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::invert_metric;
use crate::operators::{laplace_beltrami, span_coefficients, FirstOrderOp, MetricTensor, SecondOrderOp, VectorField};
use crate::symcore::{LogLinearExpr, Monomial, Polynomial, RationalFunction, Q};

/// `(∇f)^i = Σ_j g^{ij} ∂_j f`.
pub fn gradient(g: &MetricTensor, f: &LogLinearExpr) -> VectorField {
    let n = g.dim();
    let df: Vec<RationalFunction> = (0..n).map(|j| f.derivative(j)).collect();
    let comps = (0..n)
        .map(|i| {
            let mut acc = RationalFunction::zero(g.vars());
            for j in 0..n {
                if !g.g[i][j].is_zero() && !df[j].is_zero() {
                    acc = &acc + &(&g.g[i][j] * &df[j]);
                }
            }
            acc
        })
        .collect();
    VectorField::new(comps)
}

/// Closedness of `ω_i = g_{ij} V^j`. The witness is the first failing pair
/// `(i, j)`, 1-based, `i < j`.
pub fn closure_check(g: &MetricTensor, v: &VectorField) -> Result<(bool, Option<(usize, usize)>)> {
    let n = g.dim();
    if v.dim() != n {
        return Err(Error::Dimension(format!("vector field has {} components, metric is {}x{}", v.dim(), n, n)));
    }
    if v.is_zero() {
        return Ok((true, None));
    }
    let lower = invert_metric(g)?.g_lower;
    let omega: Vec<RationalFunction> = (0..n)
        .map(|i| {
            (0..n).fold(RationalFunction::zero(g.vars()), |acc, j| {
                if lower[i][j].is_zero() || v.components[j].is_zero() {
                    acc
                } else {
                    &acc + &(&lower[i][j] * &v.components[j])
                }
            })
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if omega[j].derivative(i) != omega[i].derivative(j) {
                return Ok((false, Some((i + 1, j + 1))));
            }
        }
    }
    Ok((true, None))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSolution {
    pub sigma: LogLinearExpr,
    pub verified: bool,
    /// `V - ∇σ`.
    pub residual: VectorField,
}

/// Solves `∇σ = V` over `σ = poly(deg ≤ cap, no constant) + Σ c_k log p_k`.
pub fn solve_gauge_exponent(
    g: &MetricTensor,
    v: &VectorField,
    log_candidates: &[Polynomial],
    poly_degree_cap: u32,
) -> Result<GaugeSolution> {
    let vars = g.vars().clone();
    let n = g.dim();
    let mut basis: Vec<LogLinearExpr> = Vec::new();
    for d in 1..=poly_degree_cap {
        for e in exponent_vectors(n, d) {
            basis.push(LogLinearExpr::from_poly(Polynomial::monomial(&vars, Monomial::from_exps(&e), Q::from_integer(1.into()))));
        }
    }
    for p in log_candidates {
        basis.push(LogLinearExpr::log(Q::from_integer(1.into()), p.clone())?);
    }
    let zero = RationalFunction::zero(&vars);
    let gens: Vec<FirstOrderOp> = basis.iter().map(|b| FirstOrderOp::new(gradient(g, b), zero.clone())).collect();
    let target = FirstOrderOp::new(v.clone(), zero);
    let sigma = match span_coefficients(&gens, &target) {
        Some(coeffs) => {
            let mut rational = Polynomial::zero(&vars);
            let mut logs = Vec::new();
            for (b, c) in basis.iter().zip(&coeffs) {
                if c.is_zero() {
                    continue;
                }
                match b.log_terms().first() {
                    Some((_, p)) => logs.push((c.clone(), p.clone())),
                    None => rational = &rational + &b.rational_part().numer().scale(c),
                }
            }
            LogLinearExpr::new(RationalFunction::from(rational), logs)?
        }
        None => LogLinearExpr::zero(&vars),
    };
    let residual = v.sub(&gradient(g, &sigma));
    Ok(GaugeSolution { verified: residual.is_zero(), sigma, residual })
}

fn exponent_vectors(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in exponent_vectors(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `e^{-σ/2} ∘ H ∘ e^{σ/2}`
    Plus,
    /// `e^{σ/2} ∘ H ∘ e^{-σ/2}`
    Minus,
}

/// Exact conjugation of `H` by the gauge factor selected by `sign`.
pub fn conjugate(h: &SecondOrderOp, sigma: &LogLinearExpr, sign: Sign) -> SecondOrderOp {
    let n = h.dim();
    let half = match sign {
        Sign::Plus => Q::new(1.into(), 2.into()),
        Sign::Minus => Q::new((-1).into(), 2.into()),
    };
    let s1: Vec<RationalFunction> = (0..n).map(|i| sigma.derivative(i).scale(&half)).collect();
    let two = Q::from_integer(2.into());
    let mut b = h.b.components.clone();
    let mut c = h.c.clone();
    for i in 0..n {
        if !s1[i].is_zero() && !h.b.components[i].is_zero() {
            c = &c + &(&h.b.components[i] * &s1[i]);
        }
        for j in 0..n {
            let a = &h.a[i][j];
            if a.is_zero() {
                continue;
            }
            if !s1[i].is_zero() {
                b[j] = &b[j] + &(a * &s1[i]).scale(&two);
            }
            let s2 = &s1[i].derivative(j) + &(&s1[i] * &s1[j]);
            if !s2.is_zero() {
                c = &c + &(a * &s2);
            }
        }
    }
    SecondOrderOp { a: h.a.clone(), b: VectorField::new(b), c }
}

pub const CONVENTION_NOTE: &str = "H0 = Δ_g + ∇σ + U0 is conjugated as e^{σ/2} ∘ H0 ∘ e^{-σ/2} = Δ_g + U \
with U = U0 - ½Δσ - ¼|∇σ|²; a physical operator -½Δ_g + V + U0' maps to H0 = -2(…), \
so σ solves ∇σ = -2V and U0 = -2U0'";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchrodingerForm {
    pub metric: MetricTensor,
    pub potential: RationalFunction,
    /// First-order part left after conjugation; zero when σ is a true exponent.
    pub residual: VectorField,
    pub convention: String,
}

/// Potential of `Δ_g + ∇σ + U0` after removing its first-order part.
pub fn schrodinger_potential(g: &MetricTensor, sigma: &LogLinearExpr, u0: &RationalFunction) -> Result<SchrodingerForm> {
    let mut h = laplace_beltrami(g)?;
    let lb_b = h.b.clone();
    h.b = h.b.add(&gradient(g, sigma));
    h.c = u0.clone();
    let conj = conjugate(&h, sigma, Sign::Minus);
    Ok(SchrodingerForm {
        metric: g.clone(),
        potential: conj.c,
        residual: conj.b.sub(&lb_b),
        convention: CONVENTION_NOTE.to_string(),
    })
}

impl fmt::Display for SchrodingerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ_g + ({})", self.potential)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::field_from_strs;
    use crate::symcore::{parse_loglinear, parse_polynomial, parse_rational, vars, Vars};

    fn xyz() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn uvw() -> Vars {
        vars(&["u", "v", "w"])
    }

    fn a13_metric() -> MetricTensor {
        let vs = uvw();
        let p = |s: &str| parse_polynomial(s, &vs).unwrap();
        MetricTensor::from_polys(vec![
            vec![p("-1"), p("-2*u"), p("-2*u")],
            vec![p("-2*u"), p("-4*v"), p("-4*v")],
            vec![p("-2*u"), p("-4*v"), p("-4*w")],
        ])
        .unwrap()
    }

    #[test]
    fn gradient_examples() {
        let vs = xyz();
        let g = gradient(&MetricTensor::identity(&vs), &parse_loglinear("x^2", &vs).unwrap());
        assert_eq!(g.components[0], parse_rational("2*x", &vs).unwrap());
        assert!(g.components[1].is_zero());
        let u = uvw();
        let lam = parse_loglinear("3*w + 5*log(v-u^2) + 7*log(w-v)", &u).unwrap();
        let g = gradient(&a13_metric(), &lam);
        let want = ["-6*u", "-20-12*v", "-48-12*w"];
        for (c, w) in g.components.iter().zip(want) {
            assert_eq!(c, &parse_rational(w, &u).unwrap());
        }
    }

    #[test]
    fn closure_examples() {
        let vs = xyz();
        let id = MetricTensor::identity(&vs);
        let rot = field_from_strs(&vs, &["-y", "x", "0"], "0").unwrap().vector;
        assert_eq!(closure_check(&id, &rot).unwrap(), (false, Some((1, 2))));
        assert_eq!(closure_check(&id, &VectorField::zero(&vs)).unwrap(), (true, None));
        let u = uvw();
        let v = gradient(&a13_metric(), &parse_loglinear("w + 2*log(v-u^2) - log(w-v)", &u).unwrap());
        assert!(closure_check(&a13_metric(), &v).unwrap().0);
    }

    #[test]
    fn recovers_exponent() {
        let u = uvw();
        let lam = parse_loglinear("3*w + 5*log(v-u^2) + 7*log(w-v)", &u).unwrap();
        let v = gradient(&a13_metric(), &lam);
        let p = |s: &str| parse_polynomial(s, &u).unwrap();
        let sol = solve_gauge_exponent(&a13_metric(), &v, &[p("v-u^2"), p("w-v")], 2).unwrap();
        assert!(sol.verified);
        assert_eq!(sol.sigma, lam);
        let sol = solve_gauge_exponent(&a13_metric(), &VectorField::zero(&u), &[p("v-u^2")], 2).unwrap();
        assert!(sol.verified && sol.sigma.is_zero());
        let sol = solve_gauge_exponent(&a13_metric(), &v, &[p("w-v")], 1).unwrap();
        assert!(!sol.verified && !sol.residual.is_zero());
    }

    #[test]
    fn conjugation_round_trip() {
        let vs = xyz();
        let g = MetricTensor::diagonal(&[
            parse_rational("1+x^2", &vs).unwrap(),
            parse_rational("y", &vs).unwrap(),
            parse_rational("2", &vs).unwrap(),
        ]);
        let mut h = laplace_beltrami(&g).unwrap();
        h.c = parse_rational("x*z", &vs).unwrap();
        let s = parse_loglinear("x*y + 3/2*log(1+z^2)", &vs).unwrap();
        let there = conjugate(&h, &s, Sign::Plus);
        assert_ne!(there, h);
        assert_eq!(conjugate(&there, &s, Sign::Minus), h);
        assert_eq!(conjugate(&h, &LogLinearExpr::zero(&vs), Sign::Plus), h);
    }

    #[test]
    fn potential_trivial_and_flat() {
        let vs = xyz();
        let id = MetricTensor::identity(&vs);
        let five = parse_rational("5", &vs).unwrap();
        let sf = schrodinger_potential(&id, &LogLinearExpr::zero(&vs), &five).unwrap();
        assert_eq!(sf.potential, five);
        // σ = x²: U = -½·2 - ¼·4x²
        let sf = schrodinger_potential(&id, &parse_loglinear("x^2", &vs).unwrap(), &five).unwrap();
        assert_eq!(sf.potential, parse_rational("4 - x^2", &vs).unwrap());
        assert!(sf.residual.is_zero());
    }
}
