//! The two worked examples: the a1+a1+a1 operator on `(u, v, w)` and the
//! sl4 counter-example on `(x, y, z)`, with their printed values and the
//! pipelines that recompute them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::degeneracy::degeneracy_locus;
use crate::error::{Error, Result};
use crate::gauge::{closure_check, gradient, schrodinger_potential, solve_gauge_exponent, GaugeSolution, SchrodingerForm};
use crate::operators::{
    build_lie_algebraic, decompose, extract_metric, field_from_strs, laplace_beltrami, span_coefficients, CoefficientSpec,
    FirstOrderOp, MetricTensor, Realization, SecondOrderOp, VectorField,
};
use crate::separability::RealFn;
use crate::symcore::{
    bits_for_digits, parse_polynomial, q, qr, vars, CompiledRational, LogLinearExpr, Monomial, Polynomial,
    RationalFunction, Real, Vars, Q,
};

fn poly(s: &str, vs: &Vars) -> Polynomial {
    parse_polynomial(s, vs).expect("built-in polynomial literal")
}

fn realization(name: &str, vs: &Vars, fields: &[[&str; 3]]) -> Realization {
    let gens = fields.iter().map(|c| field_from_strs(vs, c, "0").expect("built-in generator")).collect();
    Realization::new(name, gens).expect("built-in realization")
}

/// The a1+a1+a1 example at fixed rational `(α, β, γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A13Example {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
    pub realization: Realization,
    /// `C` with the printed `L = (0, 2α, 4β-4, 4α, 4β+4γ-6, 4α)`.
    pub spec_printed: CoefficientSpec,
    /// `C` with `L = (0, α, 2β+1, 2α, 2β+2γ+2, 2α)`, the one consistent with
    /// the printed exponent and potential.
    pub spec_consistent: CoefficientSpec,
    pub metric: MetricTensor,
    /// `αw + β log(v-u²) + γ log(w-v)`.
    pub sigma: LogLinearExpr,
    /// `α(2β+2γ+3) + α²w + β(β-1)/(v-u²) + γ(γ-1)/(w-v)`.
    pub potential: RationalFunction,
    pub determinant: Polynomial,
}

pub fn a13_vars() -> Vars {
    vars(&["u", "v", "w"])
}

pub fn a13_realization() -> Realization {
    let vs = a13_vars();
    realization(
        "a1+a1+a1",
        &vs,
        &[["1", "0", "0"], ["u", "0", "0"], ["0", "1", "0"], ["0", "v", "0"], ["0", "0", "1"], ["0", "0", "w"]],
    )
}

pub fn a13_c() -> Vec<Vec<Q>> {
    let rows: [[i64; 6]; 6] = [
        [0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 1, 0],
        [0, 1, 0, 1, 0, 0],
        [0, 0, 1, 0, 2, 0],
        [0, 1, 0, 2, 0, 1],
        [0, 0, 0, 0, 1, 0],
    ];
    let mut c: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    c[0][0] = qr(1, 2);
    c
}

pub fn build_a13(alpha: Q, beta: Q, gamma: Q) -> A13Example {
    let vs = a13_vars();
    let (a, b, g) = (&alpha, &beta, &gamma);
    let l_printed = vec![q(0), a * q(2), b * q(4) - q(4), a * q(4), b * q(4) + g * q(4) - q(6), a * q(4)];
    let l_consistent = vec![q(0), a.clone(), b * q(2) + q(1), a * q(2), b * q(2) + g * q(2) + q(2), a * q(2)];
    let metric = MetricTensor::from_polys(vec![
        vec![poly("-1", &vs), poly("-2*u", &vs), poly("-2*u", &vs)],
        vec![poly("-2*u", &vs), poly("-4*v", &vs), poly("-4*v", &vs)],
        vec![poly("-2*u", &vs), poly("-4*v", &vs), poly("-4*w", &vs)],
    ])
    .expect("3x3 metric");
    let p1 = poly("v - u^2", &vs);
    let p2 = poly("w - v", &vs);
    let mut logs = Vec::new();
    for (c, p) in [(b, &p1), (g, &p2)] {
        if !c.is_zero() {
            logs.push((c.clone(), p.clone()));
        }
    }
    let sigma = LogLinearExpr::new(RationalFunction::from(poly("w", &vs).scale(a)), logs).expect("coprime log arguments");
    let cst = |x: Q| RationalFunction::constant(&vs, x);
    let potential = &(&(&cst(a * (b * q(2) + g * q(2) + q(3))) + &RationalFunction::from(poly("w", &vs).scale(&(a * a))))
        + &(&cst(b * (b - q(1))) / &RationalFunction::from(p1)))
        + &(&cst(g * (g - q(1))) / &RationalFunction::from(p2));
    A13Example {
        realization: a13_realization(),
        spec_printed: CoefficientSpec::new(a13_c(), l_printed).expect("symmetric C"),
        spec_consistent: CoefficientSpec::new(a13_c(), l_consistent).expect("symmetric C"),
        metric,
        sigma,
        potential,
        determinant: poly("16*(w-v)*(u^2-v)", &vs),
        alpha,
        beta,
        gamma,
    }
}

/// Everything the generic pipeline derives from one coefficient choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineRun {
    pub operator: SecondOrderOp,
    pub metric: MetricTensor,
    /// `H = -½Δ_g + V + U0`.
    pub v: VectorField,
    pub u0: RationalFunction,
    pub closed: bool,
    /// Solves `∇σ = -2V`.
    pub gauge: GaugeSolution,
    /// Potential of `-2H` after conjugation.
    pub schrodinger: SchrodingerForm,
}

/// Runs metric extraction, decomposition, closure, gauge and conjugation.
pub fn run_pipeline(h: SecondOrderOp, log_candidates: &[Polynomial], poly_degree_cap: u32) -> Result<PipelineRun> {
    let metric = extract_metric(&h);
    let (v, u0) = decompose(&h, &metric)?;
    let (closed, _) = closure_check(&metric, &v)?;
    let m2 = -Q::from_integer(2.into());
    let gauge = solve_gauge_exponent(&metric, &v.scale(&m2), log_candidates, poly_degree_cap)?;
    let schrodinger = schrodinger_potential(&metric, &gauge.sigma, &u0.scale(&m2))?;
    Ok(PipelineRun { operator: h, metric, v, u0, closed, gauge, schrodinger })
}

impl A13Example {
    pub fn log_candidates(&self) -> Vec<Polynomial> {
        let vs = a13_vars();
        vec![poly("v - u^2", &vs), poly("w - v", &vs)]
    }

    pub fn operator(&self, spec: &CoefficientSpec) -> Result<SecondOrderOp> {
        build_lie_algebraic(spec, &self.realization)
    }

    pub fn run(&self, spec: &CoefficientSpec) -> Result<PipelineRun> {
        run_pipeline(self.operator(spec)?, &self.log_candidates(), 1)
    }
}

/// `Σ c T_i T_j` (anticommutators for `i ≠ j`) plus `Σ c T_k`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCombination {
    pub quadratic: Vec<(Q, usize, usize)>,
    pub linear: Vec<(Q, usize)>,
}

impl TCombination {
    pub fn to_spec(&self, m: usize) -> Result<CoefficientSpec> {
        let mut c = vec![vec![Q::zero(); m]; m];
        let mut l = vec![Q::zero(); m];
        for (k, i, j) in &self.quadratic {
            if *i == 0 || *j == 0 || *i > m || *j > m {
                return Err(Error::Dimension(format!("generator index out of range 1..={}", m)));
            }
            c[i - 1][j - 1] += k;
            if i != j {
                c[j - 1][i - 1] += k;
            }
        }
        for (k, i) in &self.linear {
            if *i == 0 || *i > m {
                return Err(Error::Dimension(format!("generator index out of range 1..={}", m)));
            }
            l[i - 1] += k;
        }
        CoefficientSpec::new(c, l)
    }
}

impl fmt::Display for TCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, i, j) in &self.quadratic {
            parts.push(if i == j { format!("{}*T{}^2", k, i) } else { format!("{}*{{T{},T{}}}", k, i, j) });
        }
        for (k, i) in &self.linear {
            parts.push(format!("{}*T{}", k, i));
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// The sl4 counter-example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL4Example {
    /// Inner product on the weight space in `(L1, L2, L3)`.
    pub k: [[Q; 3]; 3],
    /// Contravariant metric on `(x, y, z)` with the `-8π²/3` factor omitted.
    pub metric: MetricTensor,
    /// As printed, with `2(xy - 6y)` in entries (1,2) and (2,1).
    pub metric_verbatim: MetricTensor,
    /// The omitted factor divided by `π²`.
    pub metric_factor_over_pi2: Q,
    pub sigma_printed: Polynomial,
    /// The a3 realization `T1..T12`.
    pub realization: Realization,
    pub laplacian_printed: TCombination,
    /// Printed quadratic part plus `2T12²`, first-order part `T4 + T12`.
    pub laplacian_corrected: TCombination,
    /// Coefficients of `∇ log σ` over `T1..T12`.
    pub grad_log_sigma_printed: Vec<Q>,
    /// The bracketed polynomial of the printed rational potential.
    pub potential_numerator_printed: Polynomial,
}

pub fn sl4_vars() -> Vars {
    vars(&["x", "y", "z"])
}

const SL4_METRIC: [[&str; 3]; 3] = [
    ["2*x^2 - z^2 - 4*y - 8", "2*(x*y - 6*x)", "3*x*z"],
    ["2*(x*y - 6*x)", "4*(y^2 - 2*x^2 - 2*z^2 - 4)", "2*(y*z + 6*z)"],
    ["3*x*z", "2*(y*z + 6*z)", "2*z^2 - x^2 + 4*y - 8"],
];

const SL4_SIGMA_PRINTED: &str = "-16*(x^2+z^2)^3 + (x^2+z^2+58/39)*(320*y^2+768) + (x^2-z^2)*(32*y^3-1152*y) \
     + (x^4+z^4-352/39)*(-4*y^2+240) - 144*(x^4-z^4)*y - 8*x^2*y^2*z^2 - 1248*x^2*z^2 - 64*y^4";

const SL4_POTENTIAL_NUMERATOR: &str = "x^6 + 3*x^4*z^2 + 3*x^2*z^4 + z^6 - 18*x^4*y + 2*x^2*y^3 - 2*y^3*z^2 + 18*y*z^4 \
     + 60*x^4 + 60*x^2*y^2 - 312*x^2*z^2 - 8*y^4 + 60*y^2*z^2 + 60*z^4 - 360*x^2*y + 360*y*z^2 + 336*x^2 + 192*y^2 \
     + 336*z^2 - 640";

pub fn sl4_realization() -> Realization {
    let vs = sl4_vars();
    realization(
        "a3",
        &vs,
        &[
            ["1", "0", "0"],
            ["0", "1", "0"],
            ["0", "0", "1"],
            ["x", "0", "0"],
            ["0", "x", "0"],
            ["0", "0", "x"],
            ["y", "0", "0"],
            ["0", "y", "0"],
            ["0", "0", "y"],
            ["z", "0", "0"],
            ["0", "z", "0"],
            ["0", "0", "z"],
        ],
    )
}

fn sl4_metric_from(entries: [[&str; 3]; 3]) -> MetricTensor {
    let vs = sl4_vars();
    MetricTensor::from_polys(entries.iter().map(|r| r.iter().map(|s| poly(s, &vs)).collect()).collect()).expect("3x3 metric")
}

pub fn build_sl4() -> SL4Example {
    let vs = sl4_vars();
    let third = |n: i64| qr(n, 3);
    let k = [[q(2), third(-2), third(-2)], [third(-2), q(2), third(-2)], [third(-2), third(-2), q(2)]];
    let mut verbatim = SL4_METRIC;
    verbatim[0][1] = "2*(x*y - 6*y)";
    verbatim[1][0] = "2*(x*y - 6*y)";
    let quadratic: Vec<(Q, usize, usize)> = vec![
        (q(-8), 1, 1),
        (q(-16), 2, 2),
        (q(-8), 3, 3),
        (q(2), 4, 4),
        (q(-8), 5, 5),
        (q(-1), 6, 6),
        (q(4), 8, 8),
        (q(-1), 10, 10),
        (q(-8), 11, 11),
        (q(-2), 1, 7),
        (q(2), 3, 9),
        (q(-12), 2, 4),
        (q(12), 2, 12),
        (q(3), 4, 12),
        (q(2), 4, 8),
        (q(2), 8, 12),
    ];
    let laplacian_printed = TCombination { quadratic: quadratic.clone(), linear: vec![(q(-2), 4), (q(-4), 8), (q(-3), 12)] };
    let mut corrected_quadratic = quadratic;
    corrected_quadratic.push((q(2), 12, 12));
    let laplacian_corrected = TCombination { quadratic: corrected_quadratic, linear: vec![(q(1), 4), (q(1), 12)] };
    let mut grad = vec![q(0); 12];
    grad[3] = q(12);
    grad[11] = q(12);
    grad[7] = q(16);
    SL4Example {
        k,
        metric: sl4_metric_from(SL4_METRIC),
        metric_verbatim: sl4_metric_from(verbatim),
        metric_factor_over_pi2: qr(-8, 3),
        sigma_printed: poly(SL4_SIGMA_PRINTED, &vs),
        realization: sl4_realization(),
        laplacian_printed,
        laplacian_corrected,
        grad_log_sigma_printed: grad,
        potential_numerator_printed: poly(SL4_POTENTIAL_NUMERATOR, &vs),
    }
}

/// Computed determinant rescaled by the scalar that makes the most
/// coefficients agree with `reference`; ties go to the reference's grlex
/// leading monomial.
pub fn normalize_like(det: &Polynomial, reference: &Polynomial) -> Option<Polynomial> {
    let mut votes: Vec<(Q, usize)> = Vec::new();
    for (m, c) in reference.terms().rev() {
        let d = det.coefficient(m);
        if d.is_zero() {
            continue;
        }
        let r = c / &d;
        match votes.iter_mut().find(|(k, _)| *k == r) {
            Some(v) => v.1 += 1,
            None => votes.push((r, 1)),
        }
    }
    let mut best: Option<&(Q, usize)> = None;
    for v in &votes {
        if best.map_or(true, |b| v.1 > b.1) {
            best = Some(v);
        }
    }
    Some(det.scale(&best?.0))
}

/// A monomial whose coefficient differs between two polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientDiff {
    pub monomial: String,
    pub computed: Q,
    pub printed: Q,
}

pub fn coefficient_diffs(computed: &Polynomial, printed: &Polynomial) -> Vec<CoefficientDiff> {
    let mut monos: Vec<Monomial> = computed.terms().chain(printed.terms()).map(|(m, _)| m.clone()).collect();
    monos.sort();
    monos.dedup();
    let vs = computed.vars().clone();
    monos
        .into_iter()
        .rev()
        .filter_map(|m| {
            let (a, b) = (computed.coefficient(&m), printed.coefficient(&m));
            (a != b).then(|| CoefficientDiff {
                monomial: Polynomial::monomial(&vs, m, Q::one()).to_string(),
                computed: a,
                printed: b,
            })
        })
        .collect()
}

impl SL4Example {
    /// `-det` of the metric: the sign whose sextic part is the printed
    /// `-16(x²+z²)³` and under which the printed rational potential reduces
    /// to `80 + 4Σ csc²`.
    pub fn sigma(&self) -> Polynomial {
        degeneracy_locus(&self.metric).scale(&q(-1))
    }

    /// `80 - 64 P/σ` with the printed bracket `P` and the computed σ.
    pub fn potential_printed(&self) -> RationalFunction {
        let vs = sl4_vars();
        let frac = &RationalFunction::from(self.potential_numerator_printed.clone()) / &RationalFunction::from(self.sigma());
        &RationalFunction::from_int(&vs, 80) - &frac.scale(&q(64))
    }

    /// `-Δ + ∇ log σ` with `Δ` the Laplace-Beltrami operator of the metric.
    pub fn operator(&self) -> Result<SecondOrderOp> {
        let mut h = laplace_beltrami(&self.metric)?.scale(&q(-1));
        let ls = LogLinearExpr::log(Q::one(), self.sigma())?;
        h.b = h.b.add(&gradient(&self.metric, &ls));
        Ok(h)
    }

    pub fn run(&self) -> Result<PipelineRun> {
        run_pipeline(self.operator()?, &[self.sigma()], 0)
    }

    /// Coefficients of `∇ log σ` over `T1..T12`, when it lies in their span.
    pub fn grad_log_sigma_coefficients(&self) -> Result<Option<Vec<Q>>> {
        let vs = sl4_vars();
        let ls = LogLinearExpr::log(Q::one(), self.sigma())?;
        let field = FirstOrderOp::new(gradient(&self.metric, &ls), RationalFunction::zero(&vs));
        Ok(span_coefficients(&self.realization.generators, &field))
    }

    pub fn expand(&self, t: &TCombination) -> Result<SecondOrderOp> {
        build_lie_algebraic(&t.to_spec(12)?, &self.realization)
    }
}

/// `(χ1, χ2, χ3)` at torus angles `(L1, L2, L3)`, `L4 = -L1-L2-L3`.
pub fn characters(l: [f64; 3]) -> [Complex64; 3] {
    let z = torus_point(l);
    let e1 = z.iter().sum();
    let mut e2 = Complex64::zero();
    let mut e3 = Complex64::zero();
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += z[i] * z[j];
            for k in j + 1..4 {
                e3 += z[i] * z[j] * z[k];
            }
        }
    }
    [e1, e2, e3]
}

fn torus_point(l: [f64; 3]) -> [Complex64; 4] {
    let l4 = -(l[0] + l[1] + l[2]);
    [l[0], l[1], l[2], l4].map(|t| Complex64::from_polar(1.0, 2.0 * PI * t))
}

/// `(x, y, z) = (Re χ1, χ2, Im χ1)`.
pub fn real_coordinates(l: [f64; 3]) -> [f64; 3] {
    let c = characters(l);
    [c[0].re, c[1].re, c[0].im]
}

/// Same map at high precision.
pub fn real_coordinates_real(l: &[Real]) -> [Real; 3] {
    let p = l[0].precision();
    let two_pi = &Real::pi(p) * &Real::from_i64(2, p);
    let l4 = &Real::zero(p) - &(&(&l[0] + &l[1]) + &l[2]);
    let ls = [l[0].clone(), l[1].clone(), l[2].clone(), l4];
    let mut x = Real::zero(p);
    let mut z = Real::zero(p);
    let mut y = Real::zero(p);
    for i in 0..4 {
        let a = &two_pi * &ls[i];
        x = &x + &a.cos();
        z = &z + &a.sin();
        for j in i + 1..4 {
            y = &y + &(&two_pi * &(&ls[i] + &ls[j])).cos();
        }
    }
    [x, y, z]
}

/// `∂(x, y, z)/∂(L1, L2, L3)`.
fn real_jacobian(l: [f64; 3]) -> [[f64; 3]; 3] {
    let z = torus_point(l);
    // ∂z_k/∂L_a = 2πi z_k δ_ka for k < 3, ∂z_4/∂L_a = -2πi z_4
    let dz = |k: usize, a: usize| -> Complex64 {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        if k == 3 {
            -i2pi * z[3]
        } else if k == a {
            i2pi * z[k]
        } else {
            Complex64::zero()
        }
    };
    let mut jac = [[0.0; 3]; 3];
    for a in 0..3 {
        let mut d1 = Complex64::zero();
        let mut d2 = Complex64::zero();
        for k in 0..4 {
            let others: Vec<Complex64> = (0..4).filter(|&j| j != k).map(|j| z[j]).collect();
            d1 += dz(k, a);
            d2 += dz(k, a) * others.iter().sum::<Complex64>();
        }
        jac[0][a] = d1.re;
        jac[1][a] = d2.re;
        jac[2][a] = d1.im;
    }
    jac
}

/// `Π_{j<k} sin²(π(L_j - L_k))`; small values are near the degeneracy locus.
pub fn weyl_denominator(l: [f64; 3]) -> f64 {
    let ls = [l[0], l[1], l[2], -(l[0] + l[1] + l[2])];
    let mut p = 1.0;
    for j in 0..4 {
        for k in j + 1..4 {
            p *= (PI * (ls[j] - ls[k])).sin().powi(2);
        }
    }
    p
}

/// Random torus angles at least `margin` away from the walls.
pub fn sample_torus(rng: &mut impl Rng, margin: f64) -> [f64; 3] {
    loop {
        let l = [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)];
        let ls = [l[0], l[1], l[2], -(l[0] + l[1] + l[2])];
        let ok = (0..4).all(|j| (j + 1..4).all(|k| (PI * (ls[j] - ls[k])).sin().abs() > margin));
        if ok {
            return l;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricCheck {
    pub passed: bool,
    pub samples: usize,
    /// Largest entry error relative to the largest entry at that sample.
    pub max_rel_err: f64,
    pub worst_entry: Option<(usize, usize)>,
}

/// Rebuilds the metric at random torus points from `K` and the characters and
/// compares with `factor · metric(x, y, z)`.
pub fn verify_invariant_metric_numeric(ex: &SL4Example, metric: &MetricTensor, samples: usize, seed: u64) -> Result<MetricCheck> {
    if samples < 10 {
        return Err(Error::Domain("at least 10 samples are needed".into()));
    }
    let kf: Vec<Vec<f64>> = ex.k.iter().map(|r| r.iter().map(q_f64).collect()).collect();
    let factor = q_f64(&ex.metric_factor_over_pi2) * PI * PI;
    let entries: Vec<Vec<crate::symcore::CompiledF64>> =
        metric.g.iter().map(|r| r.iter().map(crate::symcore::CompiledF64::new).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<[f64; 3]> = (0..samples).map(|_| sample_torus(&mut rng, 0.05)).collect();
    let errs: Vec<(f64, (usize, usize))> = points
        .par_iter()
        .map(|&l| {
            let jac = real_jacobian(l);
            let xyz = real_coordinates(l);
            let mut scale: f64 = 0.0;
            let mut built = [[0.0; 3]; 3];
            let mut want = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            s += jac[i][a] * kf[a][b] * jac[j][b];
                        }
                    }
                    built[i][j] = s;
                    want[i][j] = factor * entries[i][j].eval(&xyz);
                    scale = scale.max(want[i][j].abs());
                }
            }
            let mut worst = (0.0, (1, 1));
            for i in 0..3 {
                for j in 0..3 {
                    let e = (built[i][j] - want[i][j]).abs() / scale;
                    if e > worst.0 {
                        worst = (e, (i + 1, j + 1));
                    }
                }
            }
            worst
        })
        .collect();
    let (max_rel_err, worst_entry) = errs.iter().fold((0.0, None), |acc, &(e, ij)| if e > acc.0 { (e, Some(ij)) } else { acc });
    Ok(MetricCheck { passed: max_rel_err <= 1e-9, samples, max_rel_err, worst_entry })
}

fn q_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// `Σ_{j<k} 1/sin²(π(L_j - L_k))`.
pub fn csc2_sum(l: [f64; 3]) -> f64 {
    let ls = [l[0], l[1], l[2], -(l[0] + l[1] + l[2])];
    let mut s = 0.0;
    for j in 0..4 {
        for k in j + 1..4 {
            s += 1.0 / (PI * (ls[j] - ls[k])).sin().powi(2);
        }
    }
    s
}

/// `80 + Σ 1/sin²(πi(L_j - L_k))` read literally; `sin(iθ) = i sinh θ`.
pub fn potential_trig_printed(l: [f64; 3]) -> f64 {
    let ls = [l[0], l[1], l[2], -(l[0] + l[1] + l[2])];
    let mut s = 80.0;
    for j in 0..4 {
        for k in j + 1..4 {
            s -= 1.0 / (PI * (ls[j] - ls[k])).sinh().powi(2);
        }
    }
    s
}

/// The printed form with `πi` read as `π`: `80 + Σ csc²`.
pub fn potential_trig_real_reading(l: [f64; 3]) -> f64 {
    80.0 + csc2_sum(l)
}

/// Orthonormal frame `ŷ` in which the roots become `ŷ_a ± ŷ_b` (scaled).
/// `ŷ = y·√(3/8)` with `y1 = L1+L2`, `y2 = L1+L3`, `y3 = -(L2+L3)`.
pub fn frame_to_torus(yhat: &[Real]) -> [Real; 3] {
    let p = yhat[0].precision();
    let s = (&Real::from_i64(8, p) / &Real::from_i64(3, p)).sqrt();
    let y: Vec<Real> = yhat.iter().map(|v| v * &s).collect();
    let half = Real::from_f64(0.5, p);
    let l1 = &(&(&y[0] + &y[1]) + &y[2]) * &half;
    let l2 = &y[0] - &l1;
    let l3 = &y[1] - &l1;
    [l1, l2, l3]
}

/// `U` as a function of the orthonormal frame `ŷ`; `None` at poles.
pub fn potential_in_frame(u: &RationalFunction, digits: u32) -> RealFn {
    let c = CompiledRational::new(u, bits_for_digits(digits));
    Arc::new(move |yhat: &[Real]| {
        let l = frame_to_torus(yhat);
        let xyz = real_coordinates_real(&l);
        c.eval(&xyz).ok()
    })
}

/// Closed form of the pinned sl4 potential from the flat metric on the
/// torus: `σ ∝ Π sin²` in the `L` chart and `K` constant.
pub fn potential_from_torus_chart(ex: &SL4Example, l: [f64; 3]) -> f64 {
    // metric on (L1,L2,L3) is K·(8π²/3) scaled by the omitted factor; the
    // Laplace-Beltrami operator of a constant metric is K^{ab}∂a∂b
    let kf: Vec<Vec<f64>> = ex.k.iter().map(|r| r.iter().map(q_f64).collect()).collect();
    let c = 1.0 / (q_f64(&ex.metric_factor_over_pi2) * PI * PI);
    let ls = [l[0], l[1], l[2], -(l[0] + l[1] + l[2])];
    let root = |j: usize, k: usize| -> [f64; 3] {
        let e = |i: usize| -> [f64; 3] {
            if i == 3 {
                [-1.0, -1.0, -1.0]
            } else {
                let mut v = [0.0; 3];
                v[i] = 1.0;
                v
            }
        };
        let (a, b) = (e(j), e(k));
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    };
    // f = log σ = 2 Σ log|sin π(L_j-L_k)| + const
    let mut grad = [0.0; 3];
    let mut hess = [[0.0; 3]; 3];
    for j in 0..4 {
        for k in j + 1..4 {
            let r = root(j, k);
            let t = PI * (ls[j] - ls[k]);
            let cot = t.cos() / t.sin();
            let csc2 = 1.0 / t.sin().powi(2);
            for a in 0..3 {
                grad[a] += 2.0 * PI * cot * r[a];
                for b in 0..3 {
                    hess[a][b] -= 2.0 * PI * PI * csc2 * r[a] * r[b];
                }
            }
        }
    }
    let mut lap = 0.0;
    let mut norm = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            lap += c * kf[a][b] * hess[a][b];
            norm += c * kf[a][b] * grad[a] * grad[b];
        }
    }
    // pinned potential for exponent -log σ on the metric 2G:
    // -½Δ_{2G}(-f) - ¼|∇f|²_{2G} = Δ_G f - ½|∇f|²_G
    lap - 0.5 * norm
}
