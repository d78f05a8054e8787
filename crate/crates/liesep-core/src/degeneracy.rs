//! Degeneracy locus, genericity, order-based reachability of degenerate
//! points of diagonal metrics, fold maps and metric pushforward.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operators::MetricTensor;
use crate::symcore::{gcd, Monomial, Point, Polynomial, RationalFunction, Vars, Q};

/// `det g^{..}` as a polynomial. Rational metrics contribute the numerator.
pub fn degeneracy_locus(g: &MetricTensor) -> Polynomial {
    g.determinant().numer().clone()
}

/// `diag(P, Q, R)` with a candidate degenerate point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMetric {
    pub entries: [Polynomial; 3],
    pub basepoint: Point,
}

impl DiagonalMetric {
    pub fn new(p: Polynomial, q: Polynomial, r: Polynomial) -> Result<Self> {
        let vars = p.vars().clone();
        Self::with_basepoint(p, q, r, Point::origin(&vars))
    }

    pub fn with_basepoint(p: Polynomial, q: Polynomial, r: Polynomial, basepoint: Point) -> Result<Self> {
        if p.nvars() != 3 || q.vars() != p.vars() || r.vars() != p.vars() {
            return Err(Error::Dimension("diagonal metric needs three entries over the same three variables".into()));
        }
        if p.is_zero() && q.is_zero() && r.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        basepoint.coords_for(p.vars())?;
        Ok(DiagonalMetric { entries: [p, q, r], basepoint })
    }

    pub fn vars(&self) -> &Vars {
        self.entries[0].vars()
    }

    pub fn to_metric(&self) -> MetricTensor {
        MetricTensor::diagonal(&self.entries.iter().map(|e| RationalFunction::from(e.clone())).collect::<Vec<_>>())
    }

    /// Entries with the basepoint moved to the origin.
    pub fn centered(&self) -> Result<[Polynomial; 3]> {
        let shift = self.basepoint.coords_for(self.vars())?;
        Ok(self.entries.clone().map(|e| e.translate(&shift)))
    }
}

/// True when no two entries share a factor vanishing at the basepoint.
/// The witness is the gcd of the first offending pair.
pub fn is_generic(dm: &DiagonalMetric) -> Result<(bool, Option<Polynomial>)> {
    let at = dm.basepoint.coords_for(dm.vars())?;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (a, b) = (&dm.entries[i], &dm.entries[j]);
        let g = gcd(a, b);
        let shared = if g.is_zero() { true } else { !g.is_constant() && g.eval(&at).is_zero() };
        if shared {
            return Ok((false, Some(g)));
        }
    }
    Ok((true, None))
}

/// Per entry: every non-invertible factor depends only on that entry's own
/// variable. Entries must be a coordinate monomial times a polynomial
/// invertible at the basepoint.
pub fn check_own_variable_factors(dm: &DiagonalMetric) -> Result<[bool; 3]> {
    let centered = dm.centered()?;
    let vars = dm.vars().clone();
    let mut out = [false; 3];
    for (i, e) in centered.iter().enumerate() {
        if e.is_zero() {
            return Err(Error::UnsupportedEntry { entry: i + 1, reason: "entry is identically zero".into() });
        }
        let m = e.monomial_content();
        let rest = e.div_exact(&Polynomial::monomial(&vars, m.clone(), Q::one())).expect("monomial content divides");
        if rest.constant_term().is_zero() {
            return Err(Error::UnsupportedEntry {
                entry: i + 1,
                reason: format!("cofactor {} of the coordinate monomial is not invertible at the basepoint", rest),
            });
        }
        out[i] = m.exps().iter().enumerate().all(|(k, &d)| k == i || d == 0);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReachabilityKind {
    Unreachable,
    Case1,
    Case2,
    Case3,
}

impl ReachabilityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReachabilityKind::Unreachable => "unreachable",
            ReachabilityKind::Case1 => "case1",
            ReachabilityKind::Case2 => "case2",
            ReachabilityKind::Case3 => "case3",
        }
    }
}

impl fmt::Display for ReachabilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityVerdict {
    pub kind: ReachabilityKind,
    /// Orders of `P, Q, R` at the basepoint.
    pub orders: [u32; 3],
    /// `relabeling[k]` is the original index placed in slot `k`; order-1
    /// entries come last.
    pub relabeling: [usize; 3],
}

pub fn classify_reachability(dm: &DiagonalMetric) -> Result<ReachabilityVerdict> {
    let centered = dm.centered()?;
    let det = &(&centered[0] * &centered[1]) * &centered[2];
    let at_origin = det.constant_term();
    if !at_origin.is_zero() {
        return Err(Error::NotDegenerate(at_origin.to_string()));
    }
    let mut orders = [0u32; 3];
    for (i, e) in centered.iter().enumerate() {
        orders[i] = e.order_at_origin().map_err(|_| Error::UnsupportedEntry {
            entry: i + 1,
            reason: "entry is identically zero".into(),
        })?;
    }
    let mut relabeling = [0usize, 1, 2];
    relabeling.sort_by_key(|&i| (orders[i], i));
    let kind = if orders.iter().any(|&o| o >= 2) {
        ReachabilityKind::Unreachable
    } else {
        match orders.iter().filter(|&&o| o == 1).count() {
            1 => ReachabilityKind::Case1,
            2 => ReachabilityKind::Case2,
            3 => ReachabilityKind::Case3,
            _ => unreachable!("det vanishes at the basepoint, so some entry has positive order"),
        }
    };
    Ok(ReachabilityVerdict { kind, orders, relabeling })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FoldKind {
    Identity,
    Phi1,
    Phi2,
    Phi3,
}

impl FoldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FoldKind::Identity => "identity",
            FoldKind::Phi1 => "phi1",
            FoldKind::Phi2 => "phi2",
            FoldKind::Phi3 => "phi3",
        }
    }
}

/// Coordinatewise map `x^i = ξ^i` or `x^i = (ξ^i)²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldMap {
    pub kind: FoldKind,
    pub squared: [bool; 3],
}

impl FoldMap {
    pub fn identity() -> Self {
        FoldMap { kind: FoldKind::Identity, squared: [false; 3] }
    }

    /// Polynomial components over `vars`, read as source coordinates.
    pub fn components(&self, vars: &Vars) -> Vec<Polynomial> {
        (0..3)
            .map(|i| {
                let e = if self.squared[i] { 2 } else { 1 };
                Polynomial::monomial(vars, Monomial::var(3, i, e), Q::one())
            })
            .collect()
    }

    pub fn describe(&self, vars: &Vars) -> Vec<String> {
        (0..3)
            .map(|i| {
                let name = &vars[i];
                if self.squared[i] {
                    format!("{} = {}'^2", name, name)
                } else {
                    format!("{} = {}'", name, name)
                }
            })
            .collect()
    }
}

/// `φ₁`, `φ₂`, `φ₃` square the coordinates whose entries have order one.
pub fn fold_map_for(verdict: &ReachabilityVerdict) -> Result<FoldMap> {
    let kind = match verdict.kind {
        ReachabilityKind::Unreachable => return Err(Error::Unreachable),
        ReachabilityKind::Case1 => FoldKind::Phi1,
        ReachabilityKind::Case2 => FoldKind::Phi2,
        ReachabilityKind::Case3 => FoldKind::Phi3,
    };
    let mut squared = [false; 3];
    for i in 0..3 {
        squared[i] = verdict.orders[i] == 1;
    }
    Ok(FoldMap { kind, squared })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointMap {
    Fold(FoldMap),
    /// Components `x^i = φ^i(ξ)` over the source variables.
    Polynomial(Vec<Polynomial>),
}

/// Exponent `k` when `p = ξ_i^k` exactly.
fn pure_power(p: &Polynomial, i: usize) -> Option<u32> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    if !c.is_one() {
        return None;
    }
    let e = m.exps();
    if e.iter().enumerate().all(|(k, &d)| (k == i) == (d > 0)) {
        Some(e[i])
    } else {
        None
    }
}

fn reexpress(p: &Polynomial, powers: &[u32], entry: (usize, usize)) -> Result<Polynomial> {
    let mut terms = Vec::with_capacity(p.len());
    for (m, c) in p.terms() {
        let mut e = m.exps().to_vec();
        for (k, &pw) in powers.iter().enumerate() {
            if e[k] % pw != 0 {
                let mono = Polynomial::monomial(p.vars(), m.clone(), c.clone());
                return Err(Error::NotExpressible(format!(
                    "entry ({},{}): term {} has exponent {} in {}, not a multiple of {}",
                    entry.0 + 1,
                    entry.1 + 1,
                    mono,
                    e[k],
                    p.vars()[k],
                    pw
                )));
            }
            e[k] /= pw;
        }
        terms.push((Monomial::from_exps(&e), c.clone()));
    }
    Ok(Polynomial::from_terms(p.vars(), terms))
}

/// `(φ_* g̃)^{ij} = Σ ∂_a φ^i ∂_b φ^j g̃^{ab}`, re-expressed in target
/// coordinates. Target coordinates reuse the source variable names
/// positionally. Re-expression needs each component to be a pure power of
/// its own variable.
pub fn pushforward_metric(phi: &PointMap, g: &MetricTensor) -> Result<MetricTensor> {
    let vars = g.vars().clone();
    let n = g.dim();
    let comps = match phi {
        PointMap::Fold(f) => f.components(&vars),
        PointMap::Polynomial(c) => c.clone(),
    };
    if comps.len() != n || comps.iter().any(|c| c.vars() != &vars) {
        return Err(Error::Dimension(format!("map has {} components, metric is {}x{}", comps.len(), n, n)));
    }
    let mut powers = Vec::with_capacity(n);
    for (i, c) in comps.iter().enumerate() {
        match pure_power(c, i) {
            Some(k) => powers.push(k),
            None => {
                return Err(Error::NotExpressible(format!(
                    "component {} = {} is not a power of {}; inverse on monomials unavailable",
                    i + 1,
                    c,
                    vars[i]
                )))
            }
        }
    }
    let jac: Vec<Vec<RationalFunction>> =
        comps.iter().map(|c| (0..n).map(|a| RationalFunction::from(c.derivative(a))).collect()).collect();
    let mut out = vec![vec![RationalFunction::zero(&vars); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = RationalFunction::zero(&vars);
            for a in 0..n {
                if jac[i][a].is_zero() {
                    continue;
                }
                for b in 0..n {
                    if jac[j][b].is_zero() || g.g[a][b].is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&jac[i][a] * &jac[j][b]) * &g.g[a][b]);
                }
            }
            let num = reexpress(acc.numer(), &powers, (i, j))?;
            let den = reexpress(acc.denom(), &powers, (i, j))?;
            let v = RationalFunction::new(num, den)?;
            out[j][i] = v.clone();
            out[i][j] = v;
        }
    }
    MetricTensor::new(out)
}
