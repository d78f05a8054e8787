//! Partial separation in Cartesian, cylindrical and spherical coordinates,
//! Stäckel-form tests in ellipsoidal and paraboloidal coordinates, and the
//! separated equations.
//!
//! Numeric tests work in "test coordinates": `(x, y, z)`, `(s, θ, z)` and
//! `(s, θ, φ)` with `s = r²`, and `u_i = ξ_i²` for the two confocal families.
//! Derivatives are fourth-order central differences at high precision.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symcore::{bits_for_digits, vars, CompiledRational, LogLinearExpr, Polynomial, RationalFunction, Real, Vars, Q};

/// Real-valued function of three high-precision reals; `None` off the domain.
pub type RealFn = Arc<dyn Fn(&[Real]) -> Option<Real> + Send + Sync>;

#[derive(Clone)]
pub enum Potential {
    /// Rational function of Cartesian `(x, y, z)`.
    Symbolic(RationalFunction),
    /// Callable on Cartesian coordinates.
    Numeric(RealFn),
}

impl Potential {
    pub fn numeric(&self, prec: usize) -> RealFn {
        match self {
            Potential::Symbolic(r) => {
                let c = CompiledRational::new(r, prec);
                Arc::new(move |x: &[Real]| c.eval(x).ok())
            }
            Potential::Numeric(f) => f.clone(),
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Symbolic(r) => write!(f, "Symbolic({})", r),
            Potential::Numeric(_) => f.write_str("Numeric(<fn>)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoordinateSystem {
    Cartesian,
    /// Axis along `z`.
    Cylindrical,
    /// `θ` polar from the `z` axis, `φ` azimuth.
    Spherical,
    /// Confocal parameters `a² > b² > 0`.
    Ellipsoidal { a2: Q, b2: Q },
    Paraboloidal { a2: Q, b2: Q },
}

impl CoordinateSystem {
    pub fn ellipsoidal(a2: Q, b2: Q) -> Result<Self> {
        check_confocal(&a2, &b2)?;
        Ok(CoordinateSystem::Ellipsoidal { a2, b2 })
    }

    pub fn paraboloidal(a2: Q, b2: Q) -> Result<Self> {
        check_confocal(&a2, &b2)?;
        Ok(CoordinateSystem::Paraboloidal { a2, b2 })
    }

    pub fn name(&self) -> String {
        match self {
            CoordinateSystem::Cartesian => "cartesian".into(),
            CoordinateSystem::Cylindrical => "cylindrical".into(),
            CoordinateSystem::Spherical => "spherical".into(),
            CoordinateSystem::Ellipsoidal { a2, b2 } => format!("ellipsoidal:{}:{}", a2, b2),
            CoordinateSystem::Paraboloidal { a2, b2 } => format!("paraboloidal:{}:{}", a2, b2),
        }
    }

    /// Accepts `cartesian`, `cylindrical`, `spherical`, `ellipsoidal:a2:b2`,
    /// `paraboloidal:a2:b2`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let q = |t: &str| crate::symcore::parse_q(t).map_err(Error::from);
        match parts.as_slice() {
            ["cartesian"] => Ok(CoordinateSystem::Cartesian),
            ["cylindrical"] => Ok(CoordinateSystem::Cylindrical),
            ["spherical"] => Ok(CoordinateSystem::Spherical),
            ["ellipsoidal", a, b] => Self::ellipsoidal(q(a)?, q(b)?),
            ["paraboloidal", a, b] => Self::paraboloidal(q(a)?, q(b)?),
            _ => Err(Error::Domain(format!("unknown coordinate system `{}`", s))),
        }
    }

    pub fn coordinate_names(&self) -> [&'static str; 3] {
        match self {
            CoordinateSystem::Cartesian => ["x", "y", "z"],
            CoordinateSystem::Cylindrical => ["s", "theta", "z"],
            CoordinateSystem::Spherical => ["s", "theta", "phi"],
            _ => ["u1", "u2", "u3"],
        }
    }

    /// Default sample box in test coordinates.
    pub fn default_bounds(&self) -> [(f64, f64); 3] {
        match self {
            CoordinateSystem::Cartesian => [(0.25, 1.75); 3],
            CoordinateSystem::Cylindrical => [(0.3, 2.5), (0.25, 1.3), (0.25, 1.75)],
            CoordinateSystem::Spherical => [(0.3, 2.5), (0.25, 1.3), (0.25, 1.3)],
            CoordinateSystem::Ellipsoidal { a2, b2 } | CoordinateSystem::Paraboloidal { a2, b2 } => {
                let (a, b) = (q_f64(a2), q_f64(b2));
                let m = 0.1 * (a - b).min(b);
                [(a + m, a + (a - b) + m), (b + m, a - m), (m, b - m)]
            }
        }
    }

    /// Cartesian point for test coordinates; `None` outside the chart.
    pub fn to_cartesian(&self, q: &[Real]) -> Option<[Real; 3]> {
        let p = q[0].precision();
        match self {
            CoordinateSystem::Cartesian => Some([q[0].clone(), q[1].clone(), q[2].clone()]),
            CoordinateSystem::Cylindrical => {
                if !q[0].is_positive() {
                    return None;
                }
                let r = q[0].sqrt();
                Some([&r * &q[1].cos(), &r * &q[1].sin(), q[2].clone()])
            }
            CoordinateSystem::Spherical => {
                if !q[0].is_positive() {
                    return None;
                }
                let r = q[0].sqrt();
                let st = q[1].sin();
                Some([&(&r * &st) * &q[2].cos(), &(&r * &st) * &q[2].sin(), &r * &q[1].cos()])
            }
            CoordinateSystem::Ellipsoidal { a2, b2 } => {
                let (a, b) = (Real::from_q(a2, p), Real::from_q(b2, p));
                let pa = prod_shift(q, &a);
                let pb = prod_shift(q, &b);
                let pz = &(&q[0] * &q[1]) * &q[2];
                let y1 = &pa / &(&a * &(&a - &b));
                let y2 = &pb / &(&b * &(&b - &a));
                let y3 = &pz / &(&a * &b);
                Some([sqrt_nonneg(&y1)?, sqrt_nonneg(&y2)?, sqrt_nonneg(&y3)?])
            }
            CoordinateSystem::Paraboloidal { a2, b2 } => {
                let (a, b) = (Real::from_q(a2, p), Real::from_q(b2, p));
                let y1 = &prod_shift(q, &a) / &(&a - &b);
                let y2 = &prod_shift(q, &b) / &(&b - &a);
                let sum = &(&(&q[0] + &q[1]) + &q[2]) - &(&a + &b);
                let y3 = &sum * &Real::from_q(&Q::new(1.into(), 2.into()), p);
                Some([sqrt_nonneg(&y1)?, sqrt_nonneg(&y2)?, y3])
            }
        }
    }
}

impl fmt::Display for CoordinateSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_confocal(a2: &Q, b2: &Q) -> Result<()> {
    if !(b2 > &Q::zero() && a2 > b2) {
        return Err(Error::Domain(format!("confocal parameters need a² > b² > 0, got a² = {}, b² = {}", a2, b2)));
    }
    Ok(())
}

fn q_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn prod_shift(q: &[Real], c: &Real) -> Real {
    &(&(&q[0] - c) * &(&q[1] - c)) * &(&q[2] - c)
}

fn sqrt_nonneg(x: &Real) -> Option<Real> {
    if x.is_zero() {
        return Some(x.clone());
    }
    if !x.is_positive() {
        return None;
    }
    Some(x.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaKind {
    Plane,
    Cylinder,
    Sphere,
}

/// The invariant whose level sets are planes, cylinders or spheres.
pub fn invariants_to_cartesian(kind: LambdaKind) -> LogLinearExpr {
    let vs = vars(&["x", "y", "z"]);
    let x = Polynomial::var_index(&vs, 0);
    let y = Polynomial::var_index(&vs, 1);
    let z = Polynomial::var_index(&vs, 2);
    let p = match kind {
        LambdaKind::Plane => x,
        LambdaKind::Cylinder => &(&x * &x) + &(&y * &y),
        LambdaKind::Sphere => &(&(&x * &x) + &(&y * &y)) + &(&z * &z),
    };
    LogLinearExpr::from_poly(p)
}

#[derive(Clone, Debug)]
pub struct SampleOptions {
    pub samples: usize,
    pub digits: u32,
    pub step: f64,
    pub tolerance: f64,
    pub seed: u64,
    /// Sample box in test coordinates; the system default when `None`.
    pub bounds: Option<[(f64, f64); 3]>,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { samples: 30, digits: 30, step: 1e-4, tolerance: 1e-6, seed: 7, bounds: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Separates,
    Fails,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Separates => "separates",
            Verdict::Fails => "fails",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Symbolic,
    Numeric,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Symbolic => "symbolic",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Test coordinates.
    pub coords: Vec<f64>,
    pub cartesian: Vec<f64>,
    pub condition: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionSummary {
    pub name: String,
    /// Largest absolute value over the samples.
    pub max_abs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeparabilityReport {
    pub system: CoordinateSystem,
    pub verdict: Verdict,
    pub method: Method,
    /// `(name, definition)` of the extracted parts when separating.
    pub components: Vec<(String, String)>,
    pub witness: Option<Witness>,
    pub conditions: Vec<ConditionSummary>,
    pub tolerance: f64,
    pub samples: usize,
    pub digits: u32,
}

impl SeparabilityReport {
    pub fn separates(&self) -> bool {
        self.verdict == Verdict::Separates
    }
}

// fourth-order central stencils: (offset, weight), common denominator 12
const D1: &[(i8, i64)] = &[(-2, 1), (-1, -8), (1, 8), (2, -1)];
const D2: &[(i8, i64)] = &[(-2, -1), (-1, 16), (0, -30), (1, 16), (2, -1)];
const D0: &[(i8, i64)] = &[(0, 1)];

/// Values above this are treated as a pole hit and the sample is redrawn.
const BLOWUP: f64 = 1e12;

struct Stencil<'a> {
    f: &'a (dyn Fn(&[Real]) -> Option<Real> + Sync),
    at: Vec<Real>,
    h: Real,
    cache: HashMap<[i8; 3], Real>,
}

impl<'a> Stencil<'a> {
    fn new(f: &'a (dyn Fn(&[Real]) -> Option<Real> + Sync), at: Vec<Real>, h: Real) -> Self {
        Stencil { f, at, h, cache: HashMap::new() }
    }

    fn value(&mut self, o: [i8; 3]) -> Option<Real> {
        if let Some(v) = self.cache.get(&o) {
            return Some(v.clone());
        }
        let pt: Vec<Real> =
            (0..3).map(|k| if o[k] == 0 { self.at[k].clone() } else { &self.at[k] + &self.h.scale_i64(o[k] as i64) }).collect();
        let v = (self.f)(&pt)?;
        if !v.is_finite() || v.to_f64().abs() > BLOWUP {
            return None;
        }
        self.cache.insert(o, v.clone());
        Some(v)
    }

    fn derivative(&mut self, orders: [u32; 3]) -> Option<Real> {
        let st = |k: u32| match k {
            0 => D0,
            1 => D1,
            2 => D2,
            _ => panic!("stencils go up to second order per axis"),
        };
        let p = self.h.precision();
        let mut acc = Real::zero(p);
        for &(i, ci) in st(orders[0]) {
            for &(j, cj) in st(orders[1]) {
                for &(k, ck) in st(orders[2]) {
                    let v = self.value([i, j, k])?;
                    acc = &acc + &v.scale_i64(ci * cj * ck);
                }
            }
        }
        let nd = orders.iter().filter(|&&o| o > 0).count() as u32;
        let hp = orders.iter().sum::<u32>();
        let denom = &Real::from_i64(12i64.pow(nd), p) * &self.h.powi(hp);
        Some(&acc / &denom)
    }
}

/// One numeric condition: a signed combination of mixed derivatives.
#[derive(Clone, Debug)]
struct Condition {
    name: String,
    terms: Vec<[u32; 3]>,
}

fn cond(name: &str, terms: &[[u32; 3]]) -> Condition {
    Condition { name: name.to_string(), terms: terms.to_vec() }
}

type Reconstruct = Arc<dyn Fn(&[Real]) -> Option<Real> + Send + Sync>;

struct NumericPlan {
    system: CoordinateSystem,
    /// The function whose derivatives are tested, in test coordinates.
    w: RealFn,
    conditions: Vec<Condition>,
    reconstruct: Option<Reconstruct>,
    components: Vec<(String, String)>,
}

fn run_numeric(plan: NumericPlan, opts: &SampleOptions) -> Result<SeparabilityReport> {
    let prec = bits_for_digits(opts.digits);
    let bounds = opts.bounds.unwrap_or_else(|| plan.system.default_bounds());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let candidates: Vec<Vec<f64>> = (0..opts.samples * 4)
        .map(|_| bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect())
        .collect();
    let h = Real::from_f64(opts.step, prec);
    let w = plan.w.clone();
    let evaluated: Vec<Option<(Vec<f64>, Vec<f64>)>> = candidates
        .par_iter()
        .map(|c| {
            let at: Vec<Real> = c.iter().map(|&x| Real::from_f64(x, prec)).collect();
            let f: &(dyn Fn(&[Real]) -> Option<Real> + Sync) = &*w;
            let mut st = Stencil::new(f, at.clone(), h.clone());
            let mut vals = Vec::with_capacity(plan.conditions.len() + 1);
            for cnd in &plan.conditions {
                let mut acc = Real::zero(prec);
                for t in &cnd.terms {
                    acc = &acc + &st.derivative(*t)?;
                }
                vals.push(acc.to_f64());
            }
            if let Some(r) = &plan.reconstruct {
                vals.push(r(&at)?.to_f64());
            }
            if vals.iter().any(|v| !v.is_finite()) {
                return None;
            }
            Some((c.clone(), vals))
        })
        .collect();
    let good: Vec<(Vec<f64>, Vec<f64>)> = evaluated.into_iter().flatten().take(opts.samples).collect();
    if good.len() < opts.samples {
        return Err(Error::Domain(format!(
            "only {} of {} sample points avoided poles in {} coordinates",
            good.len(),
            opts.samples,
            plan.system
        )));
    }
    let mut names: Vec<String> = plan.conditions.iter().map(|c| c.name.clone()).collect();
    if plan.reconstruct.is_some() {
        names.push("reconstruction".into());
    }
    let mut conditions: Vec<ConditionSummary> =
        names.iter().map(|n| ConditionSummary { name: n.clone(), max_abs: 0.0 }).collect();
    let mut worst: Option<(usize, usize, f64)> = None;
    for (si, (_, vals)) in good.iter().enumerate() {
        for (ci, v) in vals.iter().enumerate() {
            let a = v.abs();
            if a > conditions[ci].max_abs {
                conditions[ci].max_abs = a;
            }
            if a > opts.tolerance && worst.map_or(true, |(_, _, b)| a > b) {
                worst = Some((si, ci, *v));
            }
        }
    }
    let witness = worst.map(|(si, ci, v)| {
        let coords = good[si].0.clone();
        let at: Vec<Real> = coords.iter().map(|&x| Real::from_f64(x, prec)).collect();
        let cartesian = plan.system.to_cartesian(&at).map(|c| c.iter().map(|r| r.to_f64()).collect()).unwrap_or_default();
        Witness { coords, cartesian, condition: names[ci].clone(), value: v }
    });
    let verdict = if witness.is_some() { Verdict::Fails } else { Verdict::Separates };
    Ok(SeparabilityReport {
        system: plan.system,
        verdict,
        method: Method::Numeric,
        components: if verdict == Verdict::Separates { plan.components } else { Vec::new() },
        witness,
        conditions,
        tolerance: opts.tolerance,
        samples: good.len(),
        digits: opts.digits,
    })
}

fn center(bounds: &[(f64, f64); 3]) -> [f64; 3] {
    [0, 1, 2].map(|k| 0.5 * (bounds[k].0 + bounds[k].1))
}

fn fmt_point(p: &[f64]) -> String {
    p.iter().map(|x| format!("{:.6}", x)).collect::<Vec<_>>().join(", ")
}

/// Tests `U = F(x) + G(y,z)`, `U = F(r) + G(θ,z)/r² + H(θ,z)` or
/// `U = F(r) + G(θ,φ)/r²` according to `system`.
pub fn partial_separation_test(u: &Potential, system: &CoordinateSystem, opts: &SampleOptions) -> Result<SeparabilityReport> {
    if let (Potential::Symbolic(r), CoordinateSystem::Cartesian) = (u, system) {
        return cartesian_symbolic(r, opts);
    }
    let prec = bits_for_digits(opts.digits);
    let uf = u.numeric(prec);
    let bounds = opts.bounds.unwrap_or_else(|| system.default_bounds());
    let c = center(&bounds);
    let (s0, s1) = (c[0], c[0] + 0.25 * (bounds[0].1 - bounds[0].0));
    let re = |x: f64| Real::from_f64(x, prec);
    let sys = system.clone();
    let plan = match system {
        CoordinateSystem::Cartesian => {
            let w = uf.clone();
            let (x0, y0, z0) = (re(c[0]), re(c[1]), re(c[2]));
            let uu = uf.clone();
            let reconstruct: Reconstruct = Arc::new(move |q: &[Real]| {
                let a = uu(q)?;
                let b = uu(&[q[0].clone(), y0.clone(), z0.clone()])?;
                let g = uu(&[x0.clone(), q[1].clone(), q[2].clone()])?;
                let d = uu(&[x0.clone(), y0.clone(), z0.clone()])?;
                Some(&(&(&a - &b) - &g) + &d)
            });
            NumericPlan {
                system: sys,
                w,
                conditions: vec![cond("d2U/dxdy", &[[1, 1, 0]]), cond("d2U/dxdz", &[[1, 0, 1]])],
                reconstruct: Some(reconstruct),
                components: vec![
                    ("F(x)".into(), format!("U(x, y0, z0) - U(x0, y0, z0) with (x0, y0, z0) = ({})", fmt_point(&c))),
                    ("G(y,z)".into(), "U(x0, y, z)".into()),
                ],
            }
        }
        CoordinateSystem::Cylindrical | CoordinateSystem::Spherical => {
            let cyl = matches!(system, CoordinateSystem::Cylindrical);
            let s2 = sys.clone();
            let uu = uf.clone();
            let w: RealFn = Arc::new(move |q: &[Real]| {
                let x = s2.to_cartesian(q)?;
                Some(&q[0] * &uu(&x)?)
            });
            let wr = w.clone();
            let (a0, b0) = (re(c[1]), re(c[2]));
            let (rs0, rs1) = (re(s0), re(s1));
            let reconstruct: Reconstruct = Arc::new(move |q: &[Real]| {
                let dw = |s: &Real| -> Option<Real> {
                    let here = wr(&[s.clone(), q[1].clone(), q[2].clone()])?;
                    let base = wr(&[s.clone(), a0.clone(), b0.clone()])?;
                    Some(&here - &base)
                };
                let d = dw(&q[0])?;
                let d0 = dw(&rs0)?;
                if !cyl {
                    return Some(&d - &d0);
                }
                let d1 = dw(&rs1)?;
                let span = &rs1 - &rs0;
                let interp = &(&(&(&q[0] - &rs0) * &d1) + &(&(&rs1 - &q[0]) * &d0)) / &span;
                Some(&d - &interp)
            });
            if cyl {
                NumericPlan {
                    system: sys,
                    w,
                    conditions: vec![cond("d3(sU)/ds2dtheta", &[[2, 1, 0]]), cond("d3(sU)/ds2dz", &[[2, 0, 1]])],
                    reconstruct: Some(reconstruct),
                    components: vec![
                        ("F(r)".into(), format!("U(r, theta0, z0) with (theta0, z0) = ({})", fmt_point(&c[1..]))),
                        (
                            "H(theta,z)".into(),
                            format!("[dW(s1) - dW(s0)]/(s1 - s0), dW(s) = r^2 U(r,theta,z) - r^2 U(r,theta0,z0), s0 = {:.6}, s1 = {:.6}", s0, s1),
                        ),
                        ("G(theta,z)".into(), "dW(s0) - s0*H(theta,z)".into()),
                    ],
                }
            } else {
                NumericPlan {
                    system: sys,
                    w,
                    conditions: vec![cond("d2(sU)/dsdtheta", &[[1, 1, 0]]), cond("d2(sU)/dsdphi", &[[1, 0, 1]])],
                    reconstruct: Some(reconstruct),
                    components: vec![
                        ("F(r)".into(), format!("U(r, theta0, phi0) with (theta0, phi0) = ({})", fmt_point(&c[1..]))),
                        (
                            "G(theta,phi)".into(),
                            format!("s0*[U(r0,theta,phi) - U(r0,theta0,phi0)], s0 = r0^2 = {:.6}", s0),
                        ),
                    ],
                }
            }
        }
        _ => {
            return Err(Error::Domain(format!(
                "partial separation is tested in cartesian, cylindrical and spherical coordinates, not {}",
                system
            )))
        }
    };
    run_numeric(plan, opts)
}

fn find_base(r: &RationalFunction) -> Option<Vec<Q>> {
    let grid: Vec<i64> = vec![1, 2, 3, -1, 5, 7];
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                let p = vec![Q::from_integer(a.into()), Q::from_integer(b.into()), Q::from_integer(c.into())];
                if !r.denom().eval(&p).is_zero() {
                    return Some(p);
                }
            }
        }
    }
    None
}

fn nonzero_witness(r: &RationalFunction, name: &str) -> Witness {
    let vals = [1i64, 2, 3, 5, -1, 7, 11];
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                let p = vec![Q::from_integer(a.into()), Q::from_integer(b.into()), Q::from_integer(c.into())];
                if let Ok(v) = r.eval(&p) {
                    if !v.is_zero() {
                        let coords = vec![a as f64, b as f64, c as f64];
                        return Witness { cartesian: coords.clone(), coords, condition: name.into(), value: q_f64(&v) };
                    }
                }
            }
        }
    }
    Witness { coords: vec![], cartesian: vec![], condition: name.into(), value: f64::NAN }
}

fn cartesian_symbolic(u: &RationalFunction, opts: &SampleOptions) -> Result<SeparabilityReport> {
    if u.nvars() != 3 {
        return Err(Error::Dimension("potential must be a function of three Cartesian variables".into()));
    }
    let ux = u.derivative(0);
    let c1 = ux.derivative(1);
    let c2 = ux.derivative(2);
    let conditions = vec![
        ConditionSummary { name: "d2U/dxdy".into(), max_abs: if c1.is_zero() { 0.0 } else { f64::INFINITY } },
        ConditionSummary { name: "d2U/dxdz".into(), max_abs: if c2.is_zero() { 0.0 } else { f64::INFINITY } },
    ];
    let mut report = SeparabilityReport {
        system: CoordinateSystem::Cartesian,
        verdict: Verdict::Fails,
        method: Method::Symbolic,
        components: vec![],
        witness: None,
        conditions,
        tolerance: 0.0,
        samples: 0,
        digits: opts.digits,
    };
    if !c1.is_zero() {
        report.witness = Some(nonzero_witness(&c1, "d2U/dxdy"));
        return Ok(report);
    }
    if !c2.is_zero() {
        report.witness = Some(nonzero_witness(&c2, "d2U/dxdz"));
        return Ok(report);
    }
    let (f, g) = cartesian_split(u)?;
    if &(&f + &g) != u {
        return Err(Error::Domain("cartesian split failed to reconstruct the potential".into()));
    }
    report.verdict = Verdict::Separates;
    report.components = vec![("F(x)".into(), f.to_string()), ("G(y,z)".into(), g.to_string())];
    Ok(report)
}

/// `F(x) = U(x,y0,z0) - U(x0,y0,z0)`, `G(y,z) = U(x0,y,z)`.
pub fn cartesian_split(u: &RationalFunction) -> Result<(RationalFunction, RationalFunction)> {
    let vs = u.vars().clone();
    let base = find_base(u).ok_or_else(|| Error::Domain("no base point off the poles".into()))?;
    let var = |i: usize| RationalFunction::from(Polynomial::var_index(&vs, i));
    let cst = |q: &Q| RationalFunction::constant(&vs, q.clone());
    let f = &u.compose(&[var(0), cst(&base[1]), cst(&base[2])]) - &cst(&u.eval(&base)?);
    let g = u.compose(&[cst(&base[0]), var(1), var(2)]);
    Ok((f, g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StackelConditions {
    /// `∂₁∂₂∂₃W = 0` and `∂_i²∂_j²W = 0`.
    Literal,
    /// Literal set plus `∂_i²(∂_j+∂_k)W = 0` and a reconstruction residual.
    Full,
}

/// `W = U·(u₁-u₂)(u₂-u₃)(u₁-u₃)` must be `A(u₁)(u₂-u₃) + B(u₂)(u₁-u₃) + C(u₃)(u₁-u₂)`.
pub fn stackel_form_test(
    u: &Potential,
    system: &CoordinateSystem,
    which: StackelConditions,
    opts: &SampleOptions,
) -> Result<SeparabilityReport> {
    if !matches!(system, CoordinateSystem::Ellipsoidal { .. } | CoordinateSystem::Paraboloidal { .. }) {
        return Err(Error::Domain(format!("Stäckel test needs ellipsoidal or paraboloidal coordinates, not {}", system)));
    }
    let prec = bits_for_digits(opts.digits);
    let uf = u.numeric(prec);
    let sys = system.clone();
    let w: RealFn = Arc::new(move |q: &[Real]| {
        let x = sys.to_cartesian(q)?;
        let v = uf(&x)?;
        Some(&v * &stackel_vandermonde(q))
    });
    stackel_on_w(w, system.clone(), which, opts)
}

fn stackel_vandermonde(q: &[Real]) -> Real {
    &(&(&q[0] - &q[1]) * &(&q[1] - &q[2])) * &(&q[0] - &q[2])
}

/// The Stäckel conditions applied directly to `W(u₁,u₂,u₃)`.
pub fn stackel_on_w(
    w: RealFn,
    system: CoordinateSystem,
    which: StackelConditions,
    opts: &SampleOptions,
) -> Result<SeparabilityReport> {
    let prec = bits_for_digits(opts.digits);
    let bounds = opts.bounds.unwrap_or_else(|| system.default_bounds());
    let c = center(&bounds);
    let mut conditions = vec![
        cond("(i) d3W/du1du2du3", &[[1, 1, 1]]),
        cond("(ii) d4W/du1^2du2^2", &[[2, 2, 0]]),
        cond("(ii) d4W/du1^2du3^2", &[[2, 0, 2]]),
        cond("(ii) d4W/du2^2du3^2", &[[0, 2, 2]]),
    ];
    let mut reconstruct = None;
    if which == StackelConditions::Full {
        conditions.push(cond("(iii) d2/du1^2 (d/du2 + d/du3) W", &[[2, 1, 0], [2, 0, 1]]));
        conditions.push(cond("(iii) d2/du2^2 (d/du1 + d/du3) W", &[[1, 2, 0], [0, 2, 1]]));
        conditions.push(cond("(iii) d2/du3^2 (d/du1 + d/du2) W", &[[1, 0, 2], [0, 1, 2]]));
        let wr = w.clone();
        let p: Vec<Real> = c.iter().map(|&x| Real::from_f64(x, prec)).collect();
        let r: Reconstruct = Arc::new(move |q: &[Real]| {
            let a = |u1: &Real| -> Option<Real> { Some(&wr(&[u1.clone(), p[1].clone(), p[2].clone()])? / &(&p[1] - &p[2])) };
            let a_p1 = a(&p[0])?;
            let b = &(&wr(&[p[0].clone(), q[1].clone(), p[2].clone()])? - &(&a_p1 * &(&q[1] - &p[2]))) / &(&p[0] - &p[2]);
            let cc = &(&wr(&[p[0].clone(), p[1].clone(), q[2].clone()])? - &(&a_p1 * &(&p[1] - &q[2]))) / &(&p[0] - &p[1]);
            let model = &(&(&a(&q[0])? * &(&q[1] - &q[2])) + &(&b * &(&q[0] - &q[2]))) + &(&cc * &(&q[0] - &q[1]));
            Some(&wr(q)? - &model)
        });
        reconstruct = Some(r);
    }
    let plan = NumericPlan {
        system,
        w,
        conditions,
        reconstruct,
        components: vec![
            ("A(u1)".into(), format!("W(u1, p2, p3)/(p2 - p3) with p = ({})", fmt_point(&c))),
            ("B(u2)".into(), "[W(p1, u2, p3) - A(p1)(u2 - p3)]/(p1 - p3)".into()),
            ("C(u3)".into(), "[W(p1, p2, u3) - A(p1)(p2 - u3)]/(p1 - p2)".into()),
        ],
    };
    run_numeric(plan, opts)
}

/// Whether `σ = ρ(λ) + η(other two)` in the given system.
pub fn sigma_separation_check(sigma: &LogLinearExpr, system: &CoordinateSystem, opts: &SampleOptions) -> Result<bool> {
    if sigma.vars().len() != 3 {
        return Err(Error::Dimension("σ must be a function of three Cartesian variables".into()));
    }
    if matches!(system, CoordinateSystem::Cartesian) {
        let sx = sigma.derivative(0);
        return Ok(sx.derivative(1).is_zero() && sx.derivative(2).is_zero());
    }
    let prec = bits_for_digits(opts.digits);
    let compiled = sigma.compile(prec);
    let sys = system.clone();
    let w: RealFn = Arc::new(move |q: &[Real]| {
        let x = sys.to_cartesian(q)?;
        compiled.eval(&x).ok()
    });
    let conditions = match system {
        CoordinateSystem::Cylindrical => vec![cond("d2sigma/dsdtheta", &[[1, 1, 0]]), cond("d2sigma/dsdz", &[[1, 0, 1]])],
        CoordinateSystem::Spherical => vec![cond("d2sigma/dsdtheta", &[[1, 1, 0]]), cond("d2sigma/dsdphi", &[[1, 0, 1]])],
        _ => return Err(Error::Domain(format!("σ splitting is defined for the three partial-separation systems, not {}", system))),
    };
    let plan = NumericPlan { system: system.clone(), w, conditions, reconstruct: None, components: vec![] };
    Ok(run_numeric(plan, opts)?.separates())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatedEquations {
    pub system: String,
    pub one_variable: String,
    pub residual: String,
    pub constants: Vec<String>,
    /// Definitions of `F`, `G`, `H` used in the equations.
    pub parts: Vec<(String, String)>,
}

/// The one-variable and residual equations of `(Δ + U)Ψ = EΨ`.
pub fn emit_separated_equations(u: &Potential, system: &CoordinateSystem, opts: &SampleOptions) -> Result<SeparatedEquations> {
    let report = partial_separation_test(u, system, opts)?;
    if !report.separates() {
        return Err(Error::NotSeparable(system.name()));
    }
    let (one, two, constants) = match system {
        CoordinateSystem::Cartesian => (
            "[d_xx + F(x) - E] Psi1(x) = alpha Psi1(x)",
            "[d_yy + d_zz + G(y,z)] Psi2(y,z) = -alpha Psi2(y,z)",
            vec!["alpha"],
        ),
        CoordinateSystem::Cylindrical => (
            "[d_rr + (1/r) d_r + F(r) - E] Psi1(r) = (alpha/r^2 + beta) Psi1(r)",
            "[d_thetatheta + d_zz + G(theta,z) + H(theta,z)] Psi2(theta,z) = -(alpha + beta) Psi2(theta,z)",
            vec!["alpha", "beta"],
        ),
        CoordinateSystem::Spherical => (
            "[d_rr + (2/r) d_r + F(r) - E] Psi1(r) = (alpha/r^2) Psi1(r)",
            "[(1/sin(theta)^2) d_phiphi + d_thetatheta + cot(theta) d_theta + G(theta,phi)] Psi2(theta,phi) = -alpha Psi2(theta,phi)",
            vec!["alpha"],
        ),
        _ => unreachable!("partial_separation_test rejects other systems"),
    };
    Ok(SeparatedEquations {
        system: system.name(),
        one_variable: one.to_string(),
        residual: two.to_string(),
        constants: constants.into_iter().map(String::from).collect(),
        parts: report.components,
    })
}

/// Exact membership oracle: is the polynomial `W` of the form
/// `A(u₁)(u₂-u₃) + B(u₂)(u₁-u₃) + C(u₃)(u₁-u₂)` with polynomial `A, B, C`?
pub fn stackel_form_oracle(w: &Polynomial) -> bool {
    use crate::symcore::{linalg, Monomial};
    let vs = w.vars().clone();
    if w.is_zero() {
        return true;
    }
    let d = w.total_degree().unwrap_or(0);
    let var = |i: usize| Polynomial::var_index(&vs, i);
    let diff = |i: usize, j: usize| &var(i) - &var(j);
    let mut basis: Vec<Polynomial> = Vec::new();
    for k in 0..d {
        for (i, (j, l)) in [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))] {
            let mono = Polynomial::monomial(&vs, Monomial::var(3, i, k), Q::one());
            basis.push(&mono * &diff(j, l));
        }
    }
    let mut monos: Vec<Monomial> = w.terms().map(|(m, _)| m.clone()).collect();
    for b in &basis {
        monos.extend(b.terms().map(|(m, _)| m.clone()));
    }
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Q>> = monos.iter().map(|m| basis.iter().map(|b| b.coefficient(m)).collect()).collect();
    let rhs: Vec<Q> = monos.iter().map(|m| w.coefficient(m)).collect();
    linalg::solve(&rows, &rhs).is_some()
}

pub fn uvw_vars() -> Vars {
    vars(&["u1", "u2", "u3"])
}
