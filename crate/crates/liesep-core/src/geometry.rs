//! Levi-Civita data of a contravariant metric: inverse, Christoffel symbols,
//! Riemann and Ricci tensors, the diagonal Ricci rearrangement, the `H^i(g)`
//! divisibility test and a numeric gradient-flow trapping demo.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gauge::gradient;
use crate::operators::{MetricTensor, RfMatrix};
use crate::symcore::linalg;
use crate::symcore::{CompiledF64, LogLinearExpr, Polynomial, RationalFunction, Vars, Q};

/// Lower-index metric `g_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovariantMetric {
    pub g_lower: RfMatrix,
}

/// `Γ^k_{ij}` stored as `gamma[k][i][j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Christoffel {
    pub gamma: Vec<RfMatrix>,
}

/// `R^l_{ijk}` stored as `r[l][i][j][k]`, antisymmetric in `j, k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannTensor {
    pub r: Vec<Vec<RfMatrix>>,
}

/// `R_{ik} = R^l_{ilk}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicciTensor {
    pub r: RfMatrix,
}

fn vars_of(m: &RfMatrix) -> Vars {
    m[0][0].vars().clone()
}

fn invert(m: &RfMatrix) -> Result<RfMatrix> {
    let vars = vars_of(m);
    let det = linalg::det(m, &vars);
    if det.is_zero() {
        return Err(Error::DegenerateMetric);
    }
    let inv = det.recip()?;
    Ok(linalg::adjugate(m, &vars).iter().map(|r| r.iter().map(|x| x * &inv).collect()).collect())
}

/// Adjugate over determinant.
pub fn invert_metric(g: &MetricTensor) -> Result<CovariantMetric> {
    Ok(CovariantMetric { g_lower: invert(&g.g)? })
}

fn christoffel_from(lower: &RfMatrix, upper: &RfMatrix) -> Christoffel {
    let vars = vars_of(lower);
    let n = lower.len();
    // dg[k][i][j] = ∂_k g_ij
    let dg: Vec<RfMatrix> =
        (0..n).map(|k| (0..n).map(|i| (0..n).map(|j| lower[i][j].derivative(k)).collect()).collect()).collect();
    let half = Q::new(1.into(), 2.into());
    let gamma = (0..n)
        .into_par_iter()
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let mut acc = RationalFunction::zero(&vars);
                            for l in 0..n {
                                if upper[k][l].is_zero() {
                                    continue;
                                }
                                let s = &(&dg[i][l][j] + &dg[j][l][i]) - &dg[l][i][j];
                                if !s.is_zero() {
                                    acc = &acc + &(&upper[k][l] * &s);
                                }
                            }
                            acc.scale(&half)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Christoffel { gamma }
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} - ∂_l g_{ij})`.
pub fn christoffel(gl: &CovariantMetric) -> Result<Christoffel> {
    let upper = invert(&gl.g_lower)?;
    Ok(christoffel_from(&gl.g_lower, &upper))
}

/// `R^l_{ijk} = ∂_j Γ^l_{ik} - ∂_k Γ^l_{ij} + Γ^l_{jm}Γ^m_{ik} - Γ^l_{km}Γ^m_{ij}`.
pub fn riemann(c: &Christoffel) -> RiemannTensor {
    let g = &c.gamma;
    let n = g.len();
    let vars = vars_of(&g[0]);
    let comps: Vec<((usize, usize, usize, usize), RationalFunction)> = (0..n)
        .flat_map(|l| (0..n).flat_map(move |i| (0..n).flat_map(move |j| (j + 1..n).map(move |k| (l, i, j, k)))))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(l, i, j, k)| {
            let mut acc = &g[l][i][k].derivative(j) - &g[l][i][j].derivative(k);
            for m in 0..n {
                acc = &acc + &(&g[l][j][m] * &g[m][i][k]);
                acc = &acc - &(&g[l][k][m] * &g[m][i][j]);
            }
            ((l, i, j, k), acc)
        })
        .collect();
    let mut r = vec![vec![vec![vec![RationalFunction::zero(&vars); n]; n]; n]; n];
    for ((l, i, j, k), v) in comps {
        r[l][i][k][j] = -&v;
        r[l][i][j][k] = v;
    }
    RiemannTensor { r }
}

pub fn ricci(rm: &RiemannTensor) -> RicciTensor {
    let n = rm.r.len();
    let vars = vars_of(&rm.r[0][0]);
    let r = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (0..n).fold(RationalFunction::zero(&vars), |acc, l| &acc + &rm.r[l][i][l][k]))
                .collect()
        })
        .collect();
    RicciTensor { r }
}

/// Riemann tensor through the general route, for contravariant input.
pub fn riemann_of(g: &MetricTensor) -> Result<RiemannTensor> {
    let lower = invert(&g.g)?;
    Ok(riemann(&christoffel_from(&lower, &g.g)))
}

pub fn ricci_of(g: &MetricTensor) -> Result<RicciTensor> {
    Ok(ricci(&riemann_of(g)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureWitness {
    /// `(l, i, j, k)`, 1-based.
    pub index: (usize, usize, usize, usize),
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub flat: bool,
    pub witness: Option<CurvatureWitness>,
    /// Independent components `R^l_{ijk}`, `j < k`, that were checked.
    pub components_checked: usize,
}

/// Riemann numerators over the common denominator `4 D^4`, `D = det g^{..}`,
/// for polynomial contravariant metrics. Avoids rational-function gcds.
pub struct PolyCurvature {
    pub det: Polynomial,
    /// `n[l][i][j]` with `Γ^l_{ij} = n / (2 D^2)`.
    pub n: Vec<Vec<Vec<Polynomial>>>,
}

impl PolyCurvature {
    pub fn new(g: &[Vec<Polynomial>]) -> Result<Self> {
        let vars = g[0][0].vars().clone();
        let dim = g.len();
        let det = linalg::det(g, &vars);
        if det.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        let adj = linalg::adjugate(g, &vars);
        let dd: Vec<Polynomial> = (0..dim).map(|k| det.derivative(k)).collect();
        // e[i][j][k]: numerator of ∂_k g_ij over D^2
        let e: Vec<Vec<Vec<Polynomial>>> = (0..dim)
            .into_par_iter()
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        (0..dim)
                            .map(|k| &(&adj[i][j].derivative(k) * &det) - &(&adj[i][j] * &dd[k]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let idx: Vec<(usize, usize, usize)> =
            (0..dim).flat_map(|l| (0..dim).flat_map(move |i| (0..dim).map(move |j| (l, i, j)))).collect();
        let flat: Vec<Polynomial> = idx
            .par_iter()
            .map(|&(l, i, j)| {
                if j < i {
                    return Polynomial::zero(&vars);
                }
                let mut acc = Polynomial::zero(&vars);
                for k in 0..dim {
                    if g[l][k].is_zero() {
                        continue;
                    }
                    let s = &(&e[k][j][i] + &e[k][i][j]) - &e[i][j][k];
                    acc = &acc + &(&g[l][k] * &s);
                }
                acc
            })
            .collect();
        let mut n = vec![vec![vec![Polynomial::zero(&vars); dim]; dim]; dim];
        for (&(l, i, j), v) in idx.iter().zip(flat) {
            if j >= i {
                n[l][i][j] = v;
            }
        }
        for l in 0..dim {
            for i in 0..dim {
                for j in 0..i {
                    n[l][i][j] = n[l][j][i].clone();
                }
            }
        }
        Ok(PolyCurvature { det, n })
    }

    /// Numerator of `R^l_{ijk}` over `4 D^4`.
    pub fn riemann_numerator(&self, l: usize, i: usize, j: usize, k: usize) -> Polynomial {
        let d = &self.det;
        let n = &self.n;
        let dj = d.derivative(j);
        let dk = d.derivative(k);
        let two = Q::from_integer(2.into());
        let mut inner = &(&n[l][i][k].derivative(j) * d) - &(&n[l][i][k] * &dj).scale(&two);
        inner = &inner - &(&n[l][i][j].derivative(k) * d);
        inner = &inner + &(&n[l][i][j] * &dk).scale(&two);
        let mut acc = (&inner * d).scale(&two);
        for m in 0..n.len() {
            acc = &acc + &(&n[l][j][m] * &n[m][i][k]);
            acc = &acc - &(&n[l][k][m] * &n[m][i][j]);
        }
        acc
    }

    pub fn riemann_component(&self, l: usize, i: usize, j: usize, k: usize) -> RationalFunction {
        let den = self.det.pow(4).scale(&Q::from_integer(4.into()));
        RationalFunction::new(self.riemann_numerator(l, i, j, k), den).expect("nonzero determinant")
    }
}

/// Every Riemann component vanishes identically.
pub fn is_flat(g: &MetricTensor) -> Result<FlatnessReport> {
    let n = g.dim();
    let idx: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|l| (0..n).flat_map(move |i| (0..n).flat_map(move |j| (j + 1..n).map(move |k| (l, i, j, k)))))
        .collect();
    let count = idx.len();
    if let Some(polys) = g.polynomial_entries() {
        let pc = PolyCurvature::new(&polys)?;
        let hit = idx.par_iter().find_first(|&&(l, i, j, k)| !pc.riemann_numerator(l, i, j, k).is_zero());
        return Ok(match hit {
            None => FlatnessReport { flat: true, witness: None, components_checked: count },
            Some(&(l, i, j, k)) => FlatnessReport {
                flat: false,
                witness: Some(CurvatureWitness {
                    index: (l + 1, i + 1, j + 1, k + 1),
                    value: pc.riemann_component(l, i, j, k).to_string(),
                }),
                components_checked: count,
            },
        });
    }
    let rm = riemann_of(g)?;
    for &(l, i, j, k) in &idx {
        if !rm.r[l][i][j][k].is_zero() {
            return Ok(FlatnessReport {
                flat: false,
                witness: Some(CurvatureWitness {
                    index: (l + 1, i + 1, j + 1, k + 1),
                    value: rm.r[l][i][j][k].to_string(),
                }),
                components_checked: count,
            });
        }
    }
    Ok(FlatnessReport { flat: true, witness: None, components_checked: count })
}

/// The three printed right-hand sides for `diag(P, Q, R)`, `g = PQR`,
/// `H^i = g^{ii} ∂_i`. Returned in the order of the left-hand sides
/// `2 R_11 g², 2 R_22 g², 2 R_33 g²`.
pub fn ricci_diagonal_closed_form(
    p: &RationalFunction,
    q: &RationalFunction,
    r: &RationalFunction,
) -> [RationalFunction; 3] {
    let g = &(p * q) * r;
    let g2 = &g * &g;
    let k = |n: i64| Q::from_integer(n.into());
    let d = |f: &RationalFunction, i: usize| f.derivative(i);
    let dd = |f: &RationalFunction, i: usize| f.derivative(i).derivative(i);
    let h = |coef: &RationalFunction, i: usize, f: &RationalFunction| coef * &f.derivative(i);
    let lead = |coef: &RationalFunction, i: usize| {
        let hg = h(coef, i, &g);
        &(&hg * &hg).scale(&k(-3)) + &(&g * &h(coef, i, &hg)).scale(&k(2))
    };
    let sum = |ts: Vec<RationalFunction>| ts.iter().fold(RationalFunction::zero(p.vars()), |a, t| &a + t);
    let (x, y, z) = (0, 1, 2);

    let e1 = {
        let b2 = sum(vec![
            &d(p, y) * &d(q, y),
            &d(p, z) * &d(r, z),
            (q * &dd(p, y)).scale(&k(2)),
            (r * &dd(p, z)).scale(&k(2)),
            &d(p, x) * &d(p, x),
            (p * &dd(p, x)).scale(&k(-2)),
        ]);
        let p2 = p * p;
        let b1 = sum(vec![
            (&(&p2 * p) * &(&d(q, x) * &d(r, x))).scale(&k(2)),
            &(&p2 * q) * &(&d(p, x) * &d(r, x)),
            &(&p2 * r) * &(&d(p, x) * &d(q, x)),
            -(&(&(p * q) * q) * &(&d(p, y) * &d(r, y))),
            -(&(&(p * r) * r) * &(&d(p, z) * &d(q, z))),
            (&(&(q * r) * r) * &(&d(p, z) * &d(p, z))).scale(&k(-3)),
            (&(&(q * q) * r) * &(&d(p, y) * &d(p, y))).scale(&k(-3)),
        ]);
        sum(vec![lead(p, x), &g2 * &b2, &g * &b1])
    };
    let e2 = {
        let b2 = sum(vec![
            &d(p, x) * &d(q, x),
            &d(q, z) * &d(r, z),
            (r * &dd(q, z)).scale(&k(2)),
            (p * &dd(q, x)).scale(&k(2)),
            &d(q, y) * &d(q, y),
            (q * &dd(q, y)).scale(&k(-2)),
        ]);
        let q2 = q * q;
        let b1 = sum(vec![
            (&(&q2 * q) * &(&d(p, y) * &d(r, y))).scale(&k(2)),
            &(&q2 * p) * &(&d(q, y) * &d(r, y)),
            &(&q2 * r) * &(&d(p, y) * &d(q, y)),
            -(&(&(p * p) * q) * &(&d(r, x) * &d(q, x))),
            -(&(&(q * r) * r) * &(&d(p, z) * &d(q, z))),
            (&(&(p * r) * r) * &(&d(q, z) * &d(q, z))).scale(&k(-3)),
            (&(&(p * p) * r) * &(&d(q, x) * &d(q, x))).scale(&k(-3)),
        ]);
        sum(vec![lead(q, y), &g2 * &b2, &g * &b1])
    };
    let e3 = {
        let b2 = sum(vec![
            &d(q, y) * &d(r, y),
            &d(p, x) * &d(r, x),
            (q * &dd(r, y)).scale(&k(2)),
            (p * &dd(r, x)).scale(&k(2)),
            &d(r, z) * &d(r, z),
            (r * &dd(r, z)).scale(&k(-2)),
        ]);
        let r2 = r * r;
        let b1 = sum(vec![
            (&(&r2 * r) * &(&d(p, z) * &d(q, z))).scale(&k(2)),
            &(&r2 * q) * &(&d(p, z) * &d(r, z)),
            &(&r2 * p) * &(&d(q, z) * &d(r, z)),
            -(&(&(q * q) * r) * &(&d(p, y) * &d(r, y))),
            -(&(&(p * p) * r) * &(&d(q, x) * &d(r, x))),
            (&(&(p * q) * q) * &(&d(r, y) * &d(r, y))).scale(&k(-3)),
            (&(&(p * p) * q) * &(&d(r, x) * &d(r, x))).scale(&k(-3)),
        ]);
        sum(vec![lead(r, z), &g2 * &b2, &g * &b1])
    };
    [e1, e2, e3]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HDivisibility {
    /// `H^i(g) = μ^i g` for each `i`.
    Exact([Polynomial; 3]),
    /// First index (1-based) whose division leaves a remainder.
    Failure { index: usize, remainder: Polynomial },
}

/// Exact division of `H^i(g) = g^{ii} ∂_i(PQR)` by `g = PQR`.
pub fn h_divisibility(p: &Polynomial, q: &Polynomial, r: &Polynomial) -> HDivisibility {
    let g = &(p * q) * r;
    let entries = [p, q, r];
    let mut mus: Vec<Polynomial> = Vec::with_capacity(3);
    for (i, e) in entries.iter().enumerate() {
        let hg = *e * &g.derivative(i);
        match hg.div_exact(&g) {
            Some(mu) => mus.push(mu),
            None => {
                let (_, rem) = hg.div_rem(&g);
                return HDivisibility::Failure { index: i + 1, remainder: rem };
            }
        }
    }
    let [a, b, c]: [Polynomial; 3] = mus.try_into().expect("three entries");
    HDivisibility::Exact([a, b, c])
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    /// `(t, x)` samples; times strictly increase.
    pub points: Vec<(f64, Vec<f64>)>,
    pub dt: f64,
    /// Sign of `det g` at each sample.
    pub det_signs: Vec<i8>,
    pub min_abs_det: f64,
    /// `|det g|` dropped below 1e-9 without a sign change.
    pub approached_locus: bool,
    pub truncated: Option<String>,
}

impl Trajectory {
    pub fn sign_constant(&self) -> bool {
        self.det_signs.windows(2).all(|w| w[0] == w[1])
    }
}

pub const LOCUS_THRESHOLD: f64 = 1e-9;

/// Fixed-step RK4 for `x' = ∇f` with `(∇f)^i = g^{ij} ∂_j f`.
pub fn gradient_flow_trap_demo(
    g: &MetricTensor,
    f: &LogLinearExpr,
    start: &[f64],
    steps: usize,
    dt: f64,
) -> Result<Trajectory> {
    let n = g.dim();
    if start.len() != n {
        return Err(Error::Dimension(format!("start point has {} coordinates, metric has {}", start.len(), n)));
    }
    let field: Vec<CompiledF64> = gradient(g, f).components.iter().map(CompiledF64::new).collect();
    let det = CompiledF64::new(&g.determinant());
    let logs: Vec<(CompiledF64, String)> = f
        .log_terms()
        .iter()
        .map(|(_, p)| (CompiledF64::new(&RationalFunction::from(p.clone())), p.to_string()))
        .collect();
    let d0 = det.eval(start);
    if d0 == 0.0 || !d0.is_finite() {
        return Err(Error::Domain("start point lies on the degeneracy locus".into()));
    }
    let eval = |x: &[f64]| -> Option<Vec<f64>> {
        let v: Vec<f64> = field.iter().map(|c| c.eval(x)).collect();
        if v.iter().all(|c| c.is_finite()) {
            Some(v)
        } else {
            None
        }
    };
    let sign = |d: f64| -> i8 {
        if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        }
    };
    let mut traj = Trajectory {
        points: vec![(0.0, start.to_vec())],
        dt,
        det_signs: vec![sign(d0)],
        min_abs_det: d0.abs(),
        approached_locus: d0.abs() < LOCUS_THRESHOLD,
        truncated: None,
    };
    let mut x = start.to_vec();
    let axpy = |x: &[f64], k: &[f64], h: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + h * b).collect() };
    for s in 1..=steps {
        let step = (|| {
            let k1 = eval(&x)?;
            let k2 = eval(&axpy(&x, &k1, dt / 2.0))?;
            let k3 = eval(&axpy(&x, &k2, dt / 2.0))?;
            let k4 = eval(&axpy(&x, &k3, dt))?;
            Some((0..n).map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect::<Vec<f64>>())
        })();
        let Some(next) = step else {
            traj.truncated = Some(format!("pole of the gradient field at step {}", s));
            break;
        };
        if next.iter().any(|c| !c.is_finite()) {
            traj.truncated = Some(format!("non-finite state at step {}", s));
            break;
        }
        if let Some((_, name)) = logs.iter().find(|(p, _)| p.eval(&next) <= 0.0) {
            traj.truncated = Some(format!("left the chart: log argument {} not positive at step {}", name, s));
            break;
        }
        let d = det.eval(&next);
        traj.min_abs_det = traj.min_abs_det.min(d.abs());
        if d.abs() < LOCUS_THRESHOLD {
            traj.approached_locus = true;
        }
        traj.det_signs.push(sign(d));
        traj.points.push((s as f64 * dt, next.clone()));
        x = next;
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{parse_loglinear, parse_polynomial, parse_rational, vars};

    fn xyz() -> Vars {
        vars(&["x", "y", "z"])
    }

    fn rf(s: &str) -> RationalFunction {
        parse_rational(s, &xyz()).unwrap()
    }

    fn diag(a: &str, b: &str, c: &str) -> MetricTensor {
        MetricTensor::diagonal(&[rf(a), rf(b), rf(c)])
    }

    #[test]
    fn inverse_examples() {
        let id = invert_metric(&MetricTensor::identity(&xyz())).unwrap();
        assert_eq!(id.g_lower[1][1], rf("1"));
        let d = invert_metric(&diag("1+x^2", "y", "2")).unwrap();
        assert_eq!(d.g_lower[0][0], rf("1/(1+x^2)"));
        assert_eq!(d.g_lower[2][2], rf("1/2"));
        assert!(d.g_lower[0][1].is_zero());
    }

    #[test]
    fn flat_and_curved() {
        let rep = is_flat(&diag("1", "1", "z^2")).unwrap();
        assert!(rep.flat);
        let rep = is_flat(&diag("1", "1", "x")).unwrap();
        assert!(!rep.flat);
        assert!(rep.witness.is_some());
        assert!(is_flat(&MetricTensor::identity(&xyz())).unwrap().flat);
    }

    #[test]
    fn fast_path_matches_general() {
        let vs = xyz();
        let p = |s: &str| parse_polynomial(s, &vs).unwrap();
        let g = vec![
            vec![p("1+x^2"), p("y"), p("0")],
            vec![p("y"), p("2+z"), p("x")],
            vec![p("0"), p("x"), p("3")],
        ];
        let pc = PolyCurvature::new(&g).unwrap();
        let m = MetricTensor::from_polys(g).unwrap();
        let general = riemann_of(&m).unwrap();
        for &(l, i, j, k) in &[(0, 1, 0, 2), (2, 0, 1, 2), (1, 1, 0, 1)] {
            assert_eq!(pc.riemann_component(l, i, j, k), general.r[l][i][j][k]);
        }
    }

    #[test]
    fn ricci_of_curved_surface_slice() {
        // dx² + dz²/x on (x, z): Gaussian curvature -3/(4x²)
        let m = diag("1", "1", "x");
        let ric = ricci_of(&m).unwrap();
        assert_eq!(ric.r[0][0], rf("-3/(4*x^2)"));
        assert!(ric.r[1][1].is_zero());
    }

    #[test]
    fn divisibility() {
        let vs = xyz();
        let p = |s: &str| parse_polynomial(s, &vs).unwrap();
        match h_divisibility(&p("1"), &p("1"), &p("z^2")) {
            HDivisibility::Exact([a, b, c]) => {
                assert!(a.is_zero() && b.is_zero());
                assert_eq!(c, p("2*z"));
            }
            other => panic!("{:?}", other),
        }
        match h_divisibility(&p("x"), &p("1"), &p("1")) {
            HDivisibility::Exact([a, _, _]) => assert_eq!(a, p("1")),
            other => panic!("{:?}", other),
        }
        match h_divisibility(&p("y"), &p("x"), &p("1")) {
            HDivisibility::Failure { index, remainder } => {
                assert_eq!(index, 1);
                assert!(!remainder.is_zero());
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn trapping_runs() {
        let vs = xyz();
        let f = parse_loglinear("-z", &vs).unwrap();
        let t = gradient_flow_trap_demo(&diag("1", "1", "z^2"), &f, &[0.0, 0.0, 1.0], 2000, 1e-3).unwrap();
        assert!(t.sign_constant());
        assert!(t.truncated.is_none());
        // z' = -z², so z(2) = 1/3
        let z = t.points.last().unwrap().1[2];
        assert!((z - 1.0 / 3.0).abs() < 1e-9, "{}", z);
        let still = gradient_flow_trap_demo(&diag("1", "1", "z^2"), &parse_loglinear("5", &vs).unwrap(), &[0.3, 0.1, 1.0], 10, 1e-3).unwrap();
        assert!(still.points.iter().all(|(_, p)| p == &vec![0.3, 0.1, 1.0]));
    }
}
