//! First- and second-order differential operators with rational coefficients,
//! Lie-algebra realizations, and the operator/metric dictionary `g = -2A`.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symcore::linalg;
use crate::symcore::{lcm, LogLinearExpr, Polynomial, RationalFunction, Vars, Q};

pub type RfMatrix = Vec<Vec<RationalFunction>>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorField {
    pub components: Vec<RationalFunction>,
}

impl VectorField {
    pub fn new(components: Vec<RationalFunction>) -> Self {
        VectorField { components }
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField { components: vec![RationalFunction::zero(vars); vars.len()] }
    }

    /// `∂_i`.
    pub fn coordinate(vars: &Vars, i: usize) -> Self {
        let mut v = Self::zero(vars);
        v.components[i] = RationalFunction::one(vars);
        v
    }

    pub fn from_polys(ps: &[Polynomial]) -> Self {
        VectorField { components: ps.iter().cloned().map(RationalFunction::from).collect() }
    }

    pub fn vars(&self) -> &Vars {
        self.components[0].vars()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// `X(f) = Σ X^i ∂_i f`.
    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let mut acc = RationalFunction::zero(f.vars());
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(i);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    pub fn apply_loglinear(&self, f: &LogLinearExpr) -> RationalFunction {
        let mut acc = RationalFunction::zero(f.vars());
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(c * &f.derivative(i));
        }
        acc
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { components: self.components.iter().zip(&o.components).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        VectorField { components: self.components.iter().zip(&o.components).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        VectorField { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_rf(&self, f: &RationalFunction) -> VectorField {
        VectorField { components: self.components.iter().map(|a| a * f).collect() }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars().clone();
        let mut parts = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(format!("({})*d_{}", c, vars[i]));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `vector + multiplier`, acting on scalars as `f ↦ vector(f) + multiplier·f`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FirstOrderOp {
    pub vector: VectorField,
    pub multiplier: RationalFunction,
}

impl FirstOrderOp {
    pub fn new(vector: VectorField, multiplier: RationalFunction) -> Self {
        FirstOrderOp { vector, multiplier }
    }

    pub fn from_field(vector: VectorField) -> Self {
        let m = RationalFunction::zero(vector.vars());
        FirstOrderOp { vector, multiplier: m }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_field(VectorField::zero(vars))
    }

    pub fn vars(&self) -> &Vars {
        self.vector.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.multiplier.is_zero()
    }

    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        &self.vector.apply(f) + &(&self.multiplier * f)
    }

    fn slots(&self) -> Vec<&RationalFunction> {
        let mut v: Vec<&RationalFunction> = self.vector.components.iter().collect();
        v.push(&self.multiplier);
        v
    }
}

impl fmt::Display for FirstOrderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.multiplier.is_zero() {
            write!(f, "{}", self.vector)
        } else {
            write!(f, "{} + ({})", self.vector, self.multiplier)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub name: String,
    pub generators: Vec<FirstOrderOp>,
}

impl Realization {
    pub fn new(name: impl Into<String>, generators: Vec<FirstOrderOp>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Dimension("a realization needs at least one generator".into()));
        }
        let n = generators[0].vector.dim();
        if generators.iter().any(|g| g.vector.dim() != n) {
            return Err(Error::Dimension("generators act on different dimensions".into()));
        }
        Ok(Realization { name: name.into(), generators })
    }

    pub fn vars(&self) -> &Vars {
        self.generators[0].vars()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Coefficients of `Σ C^{ij} T_i T_j + Σ L^k T_k`, `C` symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSpec {
    pub c: Vec<Vec<Q>>,
    pub l: Vec<Q>,
}

impl CoefficientSpec {
    pub fn new(c: Vec<Vec<Q>>, l: Vec<Q>) -> Result<Self> {
        let m = l.len();
        if c.len() != m || c.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("C must be {m}x{m} to match L")));
        }
        for i in 0..m {
            for j in 0..i {
                if c[i][j] != c[j][i] {
                    return Err(Error::Dimension(format!("C is not symmetric at ({},{})", i + 1, j + 1)));
                }
            }
        }
        Ok(CoefficientSpec { c, l })
    }

    /// Replaces `C` by `(C + Cᵀ)/2`.
    pub fn symmetrized(c: Vec<Vec<Q>>, l: Vec<Q>) -> Result<Self> {
        let m = c.len();
        if c.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("C must be square".into()));
        }
        let half = Q::new(1.into(), 2.into());
        let s = (0..m).map(|i| (0..m).map(|j| (&c[i][j] + &c[j][i]) * &half).collect()).collect();
        Self::new(s, l)
    }

    pub fn size(&self) -> usize {
        self.l.len()
    }
}

/// `Σ A^{ij} ∂_i∂_j + Σ b^i ∂_i + c` with `A` symmetric.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SecondOrderOp {
    pub a: RfMatrix,
    pub b: VectorField,
    pub c: RationalFunction,
}

impl SecondOrderOp {
    pub fn zero(vars: &Vars) -> Self {
        let n = vars.len();
        SecondOrderOp {
            a: vec![vec![RationalFunction::zero(vars); n]; n],
            b: VectorField::zero(vars),
            c: RationalFunction::zero(vars),
        }
    }

    pub fn vars(&self) -> &Vars {
        self.c.vars()
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn apply(&self, f: &RationalFunction) -> RationalFunction {
        let n = self.dim();
        let grad: Vec<RationalFunction> = (0..n).map(|i| f.derivative(i)).collect();
        let mut acc = &self.c * f;
        for i in 0..n {
            if !self.b.components[i].is_zero() {
                acc = &acc + &(&self.b.components[i] * &grad[i]);
            }
            for j in 0..n {
                if !self.a[i][j].is_zero() {
                    acc = &acc + &(&self.a[i][j] * &grad[i].derivative(j));
                }
            }
        }
        acc
    }

    pub fn add(&self, o: &SecondOrderOp) -> SecondOrderOp {
        SecondOrderOp {
            a: self.a.iter().zip(&o.a).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect(),
            b: self.b.add(&o.b),
            c: &self.c + &o.c,
        }
    }

    pub fn scale(&self, k: &Q) -> SecondOrderOp {
        SecondOrderOp {
            a: self.a.iter().map(|r| r.iter().map(|x| x.scale(k)).collect()).collect(),
            b: self.b.scale(k),
            c: self.c.scale(k),
        }
    }

    pub fn first_order_part(&self) -> &VectorField {
        &self.b
    }

    pub fn zeroth_order_part(&self) -> &RationalFunction {
        &self.c
    }
}

impl fmt::Display for SecondOrderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = self.vars().clone();
        let n = self.dim();
        let mut parts = Vec::new();
        for i in 0..n {
            for j in i..n {
                let coef = if i == j { self.a[i][j].clone() } else { self.a[i][j].scale(&Q::from_integer(2.into())) };
                if !coef.is_zero() {
                    parts.push(format!("({})*d_{}{}", coef, vars[i], vars[j]));
                }
            }
        }
        for i in 0..n {
            if !self.b.components[i].is_zero() {
                parts.push(format!("({})*d_{}", self.b.components[i], vars[i]));
            }
        }
        if !self.c.is_zero() {
            parts.push(format!("({})", self.c));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Contravariant (upper-index) metric.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MetricTensor {
    pub g: RfMatrix,
}

impl MetricTensor {
    pub fn new(g: RfMatrix) -> Result<Self> {
        let n = g.len();
        if n == 0 || g.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("metric must be a non-empty square matrix".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(Error::Dimension(format!("metric is not symmetric at ({},{})", i + 1, j + 1)));
                }
            }
        }
        Ok(MetricTensor { g })
    }

    pub fn from_polys(g: Vec<Vec<Polynomial>>) -> Result<Self> {
        Self::new(g.into_iter().map(|r| r.into_iter().map(RationalFunction::from).collect()).collect())
    }

    pub fn diagonal(entries: &[RationalFunction]) -> Self {
        let vars = entries[0].vars().clone();
        let n = entries.len();
        let mut g = vec![vec![RationalFunction::zero(&vars); n]; n];
        for i in 0..n {
            g[i][i] = entries[i].clone();
        }
        MetricTensor { g }
    }

    pub fn identity(vars: &Vars) -> Self {
        Self::diagonal(&vec![RationalFunction::one(vars); vars.len()])
    }

    pub fn vars(&self) -> &Vars {
        self.g[0][0].vars()
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn determinant(&self) -> RationalFunction {
        linalg::det(&self.g, self.vars())
    }

    pub fn scale(&self, k: &Q) -> Self {
        MetricTensor { g: self.g.iter().map(|r| r.iter().map(|x| x.scale(k)).collect()).collect() }
    }

    /// Entries as polynomials, when they all are.
    pub fn polynomial_entries(&self) -> Option<Vec<Vec<Polynomial>>> {
        self.g
            .iter()
            .map(|r| r.iter().map(|x| x.as_polynomial().ok().cloned()).collect::<Option<Vec<_>>>())
            .collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.g.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

/// `[X, Y] = XY - YX`: vector part is the field bracket, multiplier is
/// `X(η_Y) - Y(η_X)`.
pub fn lie_bracket(x: &FirstOrderOp, y: &FirstOrderOp) -> Result<FirstOrderOp> {
    if x.vector.dim() != y.vector.dim() {
        return Err(Error::Dimension("bracket of operators on different dimensions".into()));
    }
    let comps = (0..x.vector.dim())
        .map(|i| &x.vector.apply(&y.vector.components[i]) - &y.vector.apply(&x.vector.components[i]))
        .collect();
    let mult = &x.vector.apply(&y.multiplier) - &y.vector.apply(&x.multiplier);
    Ok(FirstOrderOp::new(VectorField::new(comps), mult))
}

struct ProductTerms {
    second: RfMatrix,
    first: Vec<RationalFunction>,
    zeroth: RationalFunction,
}

/// Expansion of `T_a T_b`.
fn product(ta: &FirstOrderOp, tb: &FirstOrderOp) -> ProductTerms {
    let vars = ta.vars().clone();
    let n = ta.vector.dim();
    let (a, b) = (&ta.vector, &tb.vector);
    let second = (0..n)
        .map(|p| (0..n).map(|q| &a.components[p] * &b.components[q]).collect())
        .collect();
    let first = (0..n)
        .map(|q| {
            let mut t = a.apply(&b.components[q]);
            if !tb.multiplier.is_zero() {
                t = &t + &(&tb.multiplier * &a.components[q]);
            }
            if !ta.multiplier.is_zero() {
                t = &t + &(&ta.multiplier * &b.components[q]);
            }
            t
        })
        .collect();
    let zeroth = if ta.multiplier.is_zero() && tb.multiplier.is_zero() {
        RationalFunction::zero(&vars)
    } else {
        &a.apply(&tb.multiplier) + &(&ta.multiplier * &tb.multiplier)
    };
    ProductTerms { second, first, zeroth }
}

/// Expands `Σ C^{ij} T_i T_j + Σ L^k T_k` into coefficient form.
pub fn build_lie_algebraic(spec: &CoefficientSpec, r: &Realization) -> Result<SecondOrderOp> {
    let m = spec.size();
    if m != r.len() {
        return Err(Error::Dimension(format!("spec has {} coefficients, realization has {} generators", m, r.len())));
    }
    let vars = r.vars().clone();
    let n = vars.len();
    let pairs: Vec<(usize, usize)> =
        (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| !spec.c[i][j].is_zero()).collect();
    let partials: Vec<SecondOrderOp> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let t = product(&r.generators[i], &r.generators[j]);
            let k = &spec.c[i][j];
            SecondOrderOp {
                a: t.second.iter().map(|row| row.iter().map(|x| x.scale(k)).collect()).collect(),
                b: VectorField::new(t.first.iter().map(|x| x.scale(k)).collect()),
                c: t.zeroth.scale(k),
            }
        })
        .collect();
    let mut h = SecondOrderOp::zero(&vars);
    for p in &partials {
        h = h.add(p);
    }
    for (k, lk) in spec.l.iter().enumerate() {
        if lk.is_zero() {
            continue;
        }
        let t = &r.generators[k];
        h.b = h.b.add(&t.vector.scale(lk));
        h.c = &h.c + &t.multiplier.scale(lk);
    }
    // symmetrize the symbol
    let half = Q::new(1.into(), 2.into());
    let a = (0..n)
        .map(|i| (0..n).map(|j| (&h.a[i][j] + &h.a[j][i]).scale(&half)).collect())
        .collect();
    h.a = a;
    Ok(h)
}

/// `g = -2A`.
pub fn extract_metric(h: &SecondOrderOp) -> MetricTensor {
    let k = -Q::from_integer(2.into());
    MetricTensor { g: h.a.iter().map(|r| r.iter().map(|x| x.scale(&k)).collect()).collect() }
}

/// `Δ = g^{ij}∂_ij + ∂_i(g^{ij})∂_j - g^{ij}∂_i(G)/(2G) ∂_j`, `G = det g^{..}`.
pub fn laplace_beltrami(g: &MetricTensor) -> Result<SecondOrderOp> {
    let det = g.determinant();
    if det.is_zero() {
        return Err(Error::DegenerateMetric);
    }
    let vars = g.vars().clone();
    let n = g.dim();
    let two_det = det.scale(&Q::from_integer(2.into()));
    let dlog: Vec<RationalFunction> = (0..n).map(|i| &det.derivative(i) / &two_det).collect();
    let b = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = RationalFunction::zero(&vars);
            for i in 0..n {
                if g.g[i][j].is_zero() {
                    continue;
                }
                acc = &acc + &g.g[i][j].derivative(i);
                acc = &acc - &(&g.g[i][j] * &dlog[i]);
            }
            acc
        })
        .collect();
    Ok(SecondOrderOp { a: g.g.clone(), b: VectorField::new(b), c: RationalFunction::zero(&vars) })
}

/// `H = -½Δ_g + V + U0`.
pub fn decompose(h: &SecondOrderOp, g: &MetricTensor) -> Result<(VectorField, RationalFunction)> {
    let sym = extract_metric(h);
    if &sym != g {
        let (i, j) = first_difference(&sym.g, &g.g);
        return Err(Error::SymbolMismatch(format!(
            "entry ({},{}): operator gives {}, metric has {}",
            i + 1,
            j + 1,
            sym.g[i][j],
            g.g[i][j]
        )));
    }
    let lb = laplace_beltrami(g)?;
    let half = Q::new(1.into(), 2.into());
    let v = h.b.add(&lb.b.scale(&half));
    Ok((v, h.c.clone()))
}

fn first_difference(a: &RfMatrix, b: &RfMatrix) -> (usize, usize) {
    for i in 0..a.len() {
        for j in 0..a.len() {
            if a[i][j] != b[i][j] {
                return (i, j);
            }
        }
    }
    (0, 0)
}

/// Whether every generator maps `λ` to a function of `λ`: all 2×2 minors of
/// `[∇T(λ); ∇λ]` vanish identically. Multipliers are ignored; only the
/// vector part moves level sets.
pub fn check_imprimitivity(r: &Realization, lambda: &LogLinearExpr) -> Result<bool> {
    if lambda.is_constant() {
        return Err(Error::Domain("λ must be non-constant".into()));
    }
    let n = r.vars().len();
    let grad_l: Vec<RationalFunction> = (0..n).map(|i| lambda.derivative(i)).collect();
    let ok = r.generators.par_iter().all(|t| {
        let tl = t.vector.apply_loglinear(lambda);
        let grad_t: Vec<RationalFunction> = (0..n).map(|i| tl.derivative(i)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let m = &(&grad_t[i] * &grad_l[j]) - &(&grad_t[j] * &grad_l[i]);
                if !m.is_zero() {
                    return false;
                }
            }
        }
        true
    });
    Ok(ok)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureWitness {
    pub pair: (usize, usize),
    pub bracket: String,
}

/// Rational coefficients `c` with `Σ c_k T_k = op`, if any.
pub fn span_coefficients(gens: &[FirstOrderOp], op: &FirstOrderOp) -> Option<Vec<Q>> {
    let vars = op.vars().clone();
    let m = gens.len();
    let mut all: Vec<&RationalFunction> = gens.iter().flat_map(|g| g.slots()).collect();
    all.extend(op.slots());
    let den = all.iter().fold(Polynomial::one(&vars), |acc, r| {
        if r.denom().is_one() {
            acc
        } else {
            lcm(&acc, r.denom())
        }
    });
    let cleared = |r: &RationalFunction| -> Polynomial {
        if r.is_zero() {
            return Polynomial::zero(&vars);
        }
        let f = den.div_exact(r.denom()).expect("lcm divisible by each denominator");
        r.numer() * &f
    };
    let slots = op.vector.dim() + 1;
    let gen_polys: Vec<Vec<Polynomial>> =
        gens.iter().map(|g| g.slots().into_iter().map(cleared).collect()).collect();
    let target: Vec<Polynomial> = op.slots().into_iter().map(cleared).collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    for s in 0..slots {
        let mut monos: Vec<_> = target[s].terms().map(|(mm, _)| mm.clone()).collect();
        for g in &gen_polys {
            monos.extend(g[s].terms().map(|(mm, _)| mm.clone()));
        }
        monos.sort();
        monos.dedup();
        for mono in monos {
            rows.push((0..m).map(|k| gen_polys[k][s].coefficient(&mono)).collect());
            rhs.push(target[s].coefficient(&mono));
        }
    }
    if rows.is_empty() {
        return Some(vec![Q::zero(); m]);
    }
    linalg::solve(&rows, &rhs)
}

/// Checks that each pairwise bracket lies in the rational span of the generators.
pub fn verify_closure_under_bracket(r: &Realization) -> Result<(bool, Option<ClosureWitness>)> {
    let m = r.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let results: Vec<Result<Option<ClosureWitness>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let b = lie_bracket(&r.generators[i], &r.generators[j])?;
            if b.is_zero() || span_coefficients(&r.generators, &b).is_some() {
                Ok(None)
            } else {
                Ok(Some(ClosureWitness { pair: (i + 1, j + 1), bracket: b.to_string() }))
            }
        })
        .collect();
    for res in results {
        if let Some(w) = res? {
            return Ok((false, Some(w)));
        }
    }
    Ok((true, None))
}

/// Helper for building generators from polynomial strings.
pub fn field_from_strs(vars: &Vars, comps: &[&str], multiplier: &str) -> Result<FirstOrderOp> {
    use crate::symcore::parse_rational;
    let c = comps.iter().map(|s| parse_rational(s, vars)).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(FirstOrderOp::new(VectorField::new(c), parse_rational(multiplier, vars)?))
}
