//! Algebraic invariants checked on random inputs.

use num_traits::{One, Zero};
use proptest::prelude::*;

use liesep_core::degeneracy::{
    classify_reachability, degeneracy_locus, is_generic, pushforward_metric, DiagonalMetric, FoldKind, FoldMap, PointMap,
};
use liesep_core::examples_builtin::{a13_realization, a13_vars};
use liesep_core::gauge::{closure_check, conjugate, gradient, schrodinger_potential, solve_gauge_exponent, Sign};
use liesep_core::geometry::{invert_metric, riemann_of};
use liesep_core::operators::{
    build_lie_algebraic, check_imprimitivity, extract_metric, laplace_beltrami, CoefficientSpec, MetricTensor, SecondOrderOp,
    VectorField,
};
use liesep_core::separability::{partial_separation_test, stackel_form_oracle, uvw_vars, CoordinateSystem, Potential, SampleOptions};
use liesep_core::symcore::{gcd, q, qr, vars, CompiledF64, LogLinearExpr, Monomial, Point, Polynomial, RationalFunction, Vars, Q};

fn xyz() -> Vars {
    vars(&["x", "y", "z"])
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Up to `terms` monomials of total degree ≤ `deg` over the first `nv` of `vs`.
fn poly_in(vs: Vars, nv: usize, deg: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=deg, nv), -5i64..=5), 0..=terms).prop_map(move |ts| {
        let n = vs.len();
        let mut p = Polynomial::zero(&vs);
        for (mut e, c) in ts {
            while e.iter().sum::<u32>() > deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            e.resize(n, 0);
            p = &p + &Polynomial::monomial(&vs, Monomial::from_exps(&e), q(c));
        }
        p
    })
}

fn poly(deg: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    poly_in(xyz(), 3, deg, terms)
}

fn nonzero_poly(deg: u32, terms: usize) -> impl Strategy<Value = Polynomial> {
    poly(deg, terms).prop_filter("nonzero", |p| !p.is_zero())
}

/// Nonzero constant term, so invertible at the origin.
fn unit_at_origin(deg: u32) -> impl Strategy<Value = Polynomial> {
    (poly(deg, 3), prop_oneof![-4i64..=-1, 1i64..=4])
        .prop_map(|(p, c)| &(&p - &Polynomial::constant(p.vars(), p.constant_term())) + &Polynomial::from_int(p.vars(), c))
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| qr(n, d))
}

fn q_matrix(m: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(prop::collection::vec(small_q(), m), m)
}

fn symmetric_metric(deg: u32) -> impl Strategy<Value = MetricTensor> {
    prop::collection::vec(poly(deg, 2), 6)
        .prop_map(|e| {
            let vs = xyz();
            let one = |k: i64| Polynomial::from_int(&vs, k);
            let g = vec![
                vec![&e[0] + &one(2), e[1].clone(), e[2].clone()],
                vec![e[1].clone(), &e[3] + &one(3), e[4].clone()],
                vec![e[2].clone(), e[4].clone(), &e[5] + &one(5)],
            ];
            MetricTensor::from_polys(g).unwrap()
        })
        .prop_filter("nondegenerate", |g| !g.determinant().is_zero())
}

fn diagonal_metric(deg: u32) -> impl Strategy<Value = MetricTensor> {
    prop::collection::vec(nonzero_poly(deg, 3), 3)
        .prop_map(|e| MetricTensor::diagonal(&e.into_iter().map(RationalFunction::from).collect::<Vec<_>>()))
}

fn halve_exponents(p: &Polynomial) -> Polynomial {
    Polynomial::from_terms(p.vars(), p.terms().map(|(m, c)| (Monomial::from_exps(&m.exps().iter().map(|e| e / 2).collect::<Vec<_>>()), c.clone())))
}

fn double_exponents(p: &Polynomial) -> Polynomial {
    Polynomial::from_terms(p.vars(), p.terms().map(|(m, c)| (Monomial::from_exps(&m.exps().iter().map(|e| e * 2).collect::<Vec<_>>()), c.clone())))
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn distributivity(p in poly(4, 5), qq in poly(4, 5), r in poly(4, 5)) {
        prop_assert_eq!(&(&p + &qq) * &r, &(&p * &r) + &(&qq * &r));
    }

    #[test]
    fn product_rule(p in poly(4, 5), qq in poly(4, 5), i in 0usize..3) {
        let lhs = (&p * &qq).derivative(i);
        let rhs = &(&p * &qq.derivative(i)) + &(&qq * &p.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_idempotent(n in poly(3, 4), d in nonzero_poly(3, 4)) {
        let r = RationalFunction::new(n, d).unwrap();
        let again = RationalFunction::new(r.numer().clone(), r.denom().clone()).unwrap();
        prop_assert_eq!(&again, &r);
        prop_assert!(r.denom().leading_coefficient().is_one());
    }

    #[test]
    fn derivative_matches_central_difference(p in poly(4, 6), i in 0usize..3, pt in prop::array::uniform3(-1.0f64..1.0)) {
        let f = CompiledF64::new(&RationalFunction::from(p.clone()));
        let df = CompiledF64::new(&RationalFunction::from(p.derivative(i)));
        let h = 1e-5;
        let (mut a, mut b) = (pt, pt);
        a[i] += h;
        b[i] -= h;
        let fd = (f.eval(&a) - f.eval(&b)) / (2.0 * h);
        prop_assert!((fd - df.eval(&pt)).abs() <= 1e-6, "{} vs {}", fd, df.eval(&pt));
    }

    #[test]
    fn build_is_linear(c1 in q_matrix(6), c2 in q_matrix(6), l1 in prop::collection::vec(small_q(), 6), l2 in prop::collection::vec(small_q(), 6)) {
        let r = a13_realization();
        let s1 = CoefficientSpec::symmetrized(c1.clone(), l1.clone()).unwrap();
        let s2 = CoefficientSpec::symmetrized(c2.clone(), l2.clone()).unwrap();
        let sum_c: Vec<Vec<Q>> = c1.iter().zip(&c2).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        let sum_l: Vec<Q> = l1.iter().zip(&l2).map(|(x, y)| x + y).collect();
        let s12 = CoefficientSpec::symmetrized(sum_c, sum_l).unwrap();
        let lhs = build_lie_algebraic(&s12, &r).unwrap();
        let rhs = build_lie_algebraic(&s1, &r).unwrap().add(&build_lie_algebraic(&s2, &r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn metric_ignores_antisymmetric_part(c in q_matrix(6), k in q_matrix(6)) {
        let r = a13_realization();
        let l = vec![Q::zero(); 6];
        let anti: Vec<Vec<Q>> = (0..6).map(|i| (0..6).map(|j| &k[i][j] - &k[j][i]).collect()).collect();
        let shifted: Vec<Vec<Q>> = c.iter().zip(&anti).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        let g1 = extract_metric(&build_lie_algebraic(&CoefficientSpec::symmetrized(c, l.clone()).unwrap(), &r).unwrap());
        let g2 = extract_metric(&build_lie_algebraic(&CoefficientSpec::symmetrized(shifted, l).unwrap(), &r).unwrap());
        prop_assert_eq!(g1, g2);
    }

    #[test]
    fn imprimitivity_survives_reparametrization(lam in poly_in(a13_vars(), 3, 2, 3)) {
        prop_assume!(!lam.is_constant());
        let r = a13_realization();
        let h = &lam + &lam.pow(3);
        let a = check_imprimitivity(&r, &LogLinearExpr::from_poly(lam)).unwrap();
        let b = check_imprimitivity(&r, &LogLinearExpr::from_poly(h)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gcd_of_common_multiples(p in poly(2, 3), qq in poly(2, 3), r in nonzero_poly(2, 3)) {
        let g = gcd(&(&p * &r), &(&qq * &r));
        prop_assert!(g.is_divisible_by(&r), "gcd {} not divisible by {}", g, r);
    }

    #[test]
    fn gradient_rules(g in symmetric_metric(1), f1 in poly(2, 3), f2 in poly(2, 3), p in nonzero_poly(2, 3)) {
        let lf = |x: &Polynomial| LogLinearExpr::from_poly(x.clone());
        let sum = gradient(&g, &lf(&(&f1 + &f2)));
        prop_assert_eq!(sum, gradient(&g, &lf(&f1)).add(&gradient(&g, &lf(&f2))));
        prop_assume!(!p.is_constant());
        let via_log = gradient(&g, &LogLinearExpr::log(Q::one(), p.clone()).unwrap());
        let inv = RationalFunction::from(p.clone()).recip().unwrap();
        prop_assert_eq!(via_log, gradient(&g, &lf(&p)).mul_rf(&inv));
    }

    #[test]
    fn conjugation_round_trip(g in symmetric_metric(1), b in prop::collection::vec(poly(2, 3), 3), c in poly(2, 3), s in poly(2, 3), lp in nonzero_poly(1, 2)) {
        let mut h = laplace_beltrami(&g).unwrap();
        h.b = h.b.add(&VectorField::from_polys(&b));
        h.c = RationalFunction::from(c);
        let mut logs = vec![];
        if !lp.is_constant() {
            logs.push((qr(3, 2), lp));
        }
        let sigma = LogLinearExpr::new(RationalFunction::from(s), logs).unwrap();
        let back = conjugate(&conjugate(&h, &sigma, Sign::Plus), &sigma, Sign::Minus);
        prop_assert_eq!(back, h);
    }

    #[test]
    fn gauge_removes_first_order_part(g in symmetric_metric(1), s in poly(2, 3), u0 in poly(2, 3)) {
        let sigma = LogLinearExpr::from_poly(s);
        let form = schrodinger_potential(&g, &sigma, &RationalFunction::from(u0)).unwrap();
        prop_assert!(form.residual.is_zero());
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn inverse_times_metric_is_identity(g in symmetric_metric(2)) {
        let lower = invert_metric(&g).unwrap().g_lower;
        let vs = xyz();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = RationalFunction::zero(&vs);
                for k in 0..3 {
                    acc = &acc + &(&lower[i][k] * &g.g[k][j]);
                }
                let want = if i == j { RationalFunction::one(&vs) } else { RationalFunction::zero(&vs) };
                prop_assert_eq!(acc, want);
            }
        }
    }

    #[test]
    fn riemann_is_antisymmetric(g in diagonal_metric(2)) {
        let rm = riemann_of(&g).unwrap();
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        prop_assert_eq!(&rm.r[l][i][j][k], &-&rm.r[l][i][k][j]);
                    }
                }
            }
        }
    }

    #[test]
    fn laplacian_symbol_is_the_metric(g in symmetric_metric(2)) {
        let h: SecondOrderOp = laplace_beltrami(&g).unwrap();
        prop_assert_eq!(&h.a, &g.g);
    }

    #[test]
    fn phi3_multiplies_determinant(e in prop::collection::vec(nonzero_poly(1, 3), 3)) {
        // entries even in every source variable
        let ev: Vec<Polynomial> = e.iter().map(double_exponents).collect();
        let gt = MetricTensor::diagonal(&ev.iter().cloned().map(RationalFunction::from).collect::<Vec<_>>());
        let phi3 = PointMap::Fold(FoldMap { kind: FoldKind::Phi3, squared: [true; 3] });
        let pushed = pushforward_metric(&phi3, &gt).unwrap();
        let det_t = halve_exponents(&(&(&ev[0] * &ev[1]) * &ev[2]));
        let vs = xyz();
        let xyz64 = Polynomial::monomial(&vs, Monomial::from_exps(&[1, 1, 1]), q(64));
        prop_assert_eq!(degeneracy_locus(&pushed), &xyz64 * &det_t);
    }

    #[test]
    fn reachability_ignores_units(
        orders in prop::array::uniform3(0u32..=2),
        units in prop::collection::vec(unit_at_origin(2), 3),
        k in 0usize..3,
        extra in unit_at_origin(2),
    ) {
        prop_assume!(orders.iter().any(|&o| o > 0));
        let vs = xyz();
        let e: Vec<Polynomial> = (0..3)
            .map(|i| &Polynomial::monomial(&vs, Monomial::var(3, i, orders[i]), q(1)) * &units[i])
            .collect();
        let dm = DiagonalMetric::new(e[0].clone(), e[1].clone(), e[2].clone()).unwrap();
        let mut f = e.clone();
        f[k] = &f[k] * &extra;
        let dm2 = DiagonalMetric::new(f[0].clone(), f[1].clone(), f[2].clone()).unwrap();
        let (a, b) = (classify_reachability(&dm).unwrap(), classify_reachability(&dm2).unwrap());
        prop_assert_eq!(a.kind, b.kind);
        prop_assert_eq!(a.orders, b.orders);
    }

    #[test]
    fn genericity_is_symmetric(e in prop::collection::vec(nonzero_poly(2, 3), 3), perm in 0usize..6) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let p = perms[perm];
        let base = Point::origin(&xyz());
        let dm = DiagonalMetric::with_basepoint(e[0].clone(), e[1].clone(), e[2].clone(), base.clone()).unwrap();
        let dm2 = DiagonalMetric::with_basepoint(e[p[0]].clone(), e[p[1]].clone(), e[p[2]].clone(), base).unwrap();
        prop_assert_eq!(is_generic(&dm).unwrap().0, is_generic(&dm2).unwrap().0);
    }

    #[test]
    fn gauge_shifts_with_added_gradient(a in small_q(), b in small_q(), c in small_q(), p in poly_in(a13_vars(), 3, 1, 3)) {
        let vs = a13_vars();
        let g = MetricTensor::from_polys(vec![
            vec![Polynomial::from_int(&vs, -1), Polynomial::var_index(&vs, 0).scale(&q(-2)), Polynomial::var_index(&vs, 0).scale(&q(-2))],
            vec![Polynomial::var_index(&vs, 0).scale(&q(-2)), Polynomial::var_index(&vs, 1).scale(&q(-4)), Polynomial::var_index(&vs, 1).scale(&q(-4))],
            vec![Polynomial::var_index(&vs, 0).scale(&q(-2)), Polynomial::var_index(&vs, 1).scale(&q(-4)), Polynomial::var_index(&vs, 2).scale(&q(-4))],
        ]).unwrap();
        let p1 = &Polynomial::var_index(&vs, 1) - &Polynomial::var_index(&vs, 0).pow(2);
        let p2 = &Polynomial::var_index(&vs, 2) - &Polynomial::var_index(&vs, 1);
        let mut logs = vec![];
        for (k, arg) in [(b, p1.clone()), (c, p2.clone())] {
            if !k.is_zero() {
                logs.push((k, arg));
            }
        }
        let sigma = LogLinearExpr::new(RationalFunction::from(Polynomial::var_index(&vs, 2).scale(&a)), logs).unwrap();
        let p0 = &p - &Polynomial::constant(&vs, p.constant_term());
        let shift = LogLinearExpr::from_poly(p0);
        let v = gradient(&g, &sigma);
        let w = v.add(&gradient(&g, &shift));
        prop_assert!(closure_check(&g, &v).unwrap().0);
        prop_assert!(closure_check(&g, &w).unwrap().0);
        let cands = [p1, p2];
        let s1 = solve_gauge_exponent(&g, &v, &cands, 1).unwrap();
        let s2 = solve_gauge_exponent(&g, &w, &cands, 1).unwrap();
        prop_assert!(s1.verified && s2.verified);
        prop_assert_eq!(s2.sigma, s1.sigma.add(&shift).unwrap());
    }

    #[test]
    fn separation_is_additive(f1 in poly_in(xyz(), 1, 3, 3), f2 in poly_in(xyz(), 1, 3, 3), g1 in poly(3, 4), g2 in poly(3, 4)) {
        // F(x) + G(y, z): drop every x-dependence from the G parts
        let strip = |p: &Polynomial| {
            Polynomial::from_terms(p.vars(), p.terms().filter(|(m, _)| m.exps()[0] == 0).map(|(m, c)| (m.clone(), c.clone())))
        };
        let u1 = RationalFunction::from(&f1 + &strip(&g1));
        let u2 = RationalFunction::from(&f2 + &strip(&g2));
        let opts = SampleOptions::default();
        let sep = |u: RationalFunction| partial_separation_test(&Potential::Symbolic(u), &CoordinateSystem::Cartesian, &opts).unwrap().separates();
        prop_assert!(sep(u1.clone()) && sep(u2.clone()));
        prop_assert!(sep(&u1 + &u2));
    }

    #[test]
    fn stackel_oracle_accepts_true_forms(a in poly_in(uvw_vars(), 1, 3, 3), b in poly_in(uvw_vars(), 1, 3, 3), c in poly_in(uvw_vars(), 1, 3, 3)) {
        let vs = uvw_vars();
        let u = |i: usize| Polynomial::var_index(&vs, i);
        let univariate = |p: &Polynomial, i: usize| {
            Polynomial::from_terms(&vs, p.terms().map(|(m, k)| (Monomial::var(3, i, m.exps()[0]), k.clone())))
        };
        let w = &(&(&univariate(&a, 0) * &(&u(1) - &u(2))) + &(&univariate(&b, 1) * &(&u(0) - &u(2))))
            + &(&univariate(&c, 2) * &(&u(0) - &u(1)));
        prop_assert!(stackel_form_oracle(&w));
        let off = &u(0).pow(2) * &u(1);
        prop_assert!(!stackel_form_oracle(&(&w + &off)));
    }
}
