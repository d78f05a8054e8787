//! Multivariate GCD over Q: recursive content/primitive split with a
//! subresultant PRS in a chosen main variable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Polynomial, Vars, Q};

/// A greatest common divisor, normalized to graded-lex leading coefficient 1.
/// `gcd(p, 0)` is `p` normalized.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return Polynomial::one(p.vars());
    }
    gcd_rec(&p.primitive(), &q.primitive()).monic()
}

pub fn lcm(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() || q.is_zero() {
        return Polynomial::zero(p.vars());
    }
    let g = gcd(p, q);
    (p * &q.div_exact(&g).expect("gcd divides")).monic()
}

fn gcd_list(items: &[Polynomial]) -> Polynomial {
    let vars = items[0].vars().clone();
    let mut acc = Polynomial::zero(&vars);
    for it in items {
        if it.is_zero() {
            continue;
        }
        acc = if acc.is_zero() { it.primitive() } else { gcd_rec(&acc, it) };
        if acc.is_constant() {
            return Polynomial::one(&vars);
        }
    }
    if acc.is_zero() {
        acc
    } else {
        acc.primitive()
    }
}

/// Works on nonzero inputs; result is primitive up to a rational unit.
fn gcd_rec(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let vars = p.vars().clone();
    if p.is_constant() || q.is_constant() {
        return Polynomial::one(&vars);
    }
    if p == q {
        return p.primitive();
    }
    // pull out the shared monomial factor first
    let mp = p.monomial_content();
    let mq = q.monomial_content();
    if !mp.is_one() || !mq.is_one() {
        let mg = mp.gcd(&mq);
        let p1 = p.div_exact(&Polynomial::monomial(&vars, mp, Q::one())).unwrap();
        let q1 = q.div_exact(&Polynomial::monomial(&vars, mq, Q::one())).unwrap();
        let g = gcd_rec(&p1, &q1);
        return &g * &Polynomial::monomial(&vars, mg, Q::one());
    }

    let n = p.nvars();
    let shared: Vec<usize> = (0..n).filter(|&i| p.involves(i) && q.involves(i)).collect();
    if shared.is_empty() {
        // a variable present in only one side can only live in that side's content
        return gcd_without_shared(p, q);
    }
    for i in 0..n {
        if p.involves(i) != q.involves(i) {
            let (with, without) = if p.involves(i) { (p, q) } else { (q, p) };
            let mut items = with.coefficients_in(i);
            items.push(without.clone());
            return gcd_list(&items);
        }
    }

    // main variable: smallest combined degree keeps the PRS short
    let x = *shared
        .iter()
        .min_by_key(|&&i| (p.degree_in(i).min(q.degree_in(i)), p.degree_in(i) + q.degree_in(i)))
        .unwrap();

    // divisibility shortcut
    let (small, big) = if p.len() <= q.len() { (p, q) } else { (q, p) };
    if big.is_divisible_by(small) {
        return small.primitive();
    }

    if let Some(h) = heuristic_gcd(&p.primitive(), &q.primitive()) {
        return h;
    }

    let pc = p.coefficients_in(x);
    let qc = q.coefficients_in(x);
    let cont_p = gcd_list(&pc);
    let cont_q = gcd_list(&qc);
    let c = if cont_p.is_constant() || cont_q.is_constant() {
        Polynomial::one(&vars)
    } else {
        gcd_rec(&cont_p, &cont_q)
    };
    let pp: Vec<Polynomial> = if cont_p.is_constant() {
        pc
    } else {
        pc.iter().map(|a| a.div_exact(&cont_p).expect("content divides")).collect()
    };
    let qp: Vec<Polynomial> = if cont_q.is_constant() {
        qc
    } else {
        qc.iter().map(|a| a.div_exact(&cont_q).expect("content divides")).collect()
    };

    if image_is_coprime(&pp, &qp, x) {
        return c;
    }

    let g = subresultant(pp, qp);
    let g = primitive_part(g);
    let gp = Polynomial::from_coefficients_in(&vars, x, &g);
    (&c * &gp).primitive()
}

fn gcd_without_shared(p: &Polynomial, q: &Polynomial) -> Polynomial {
    // disjoint variable supports: the gcd is a constant unless one side's
    // content in its variables is shared, which cannot happen for disjoint supports
    let _ = (p, q);
    Polynomial::one(p.vars())
}

fn degree(v: &[Polynomial]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn trim(mut v: Vec<Polynomial>) -> Vec<Polynomial> {
    while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn primitive_part(v: Vec<Polynomial>) -> Vec<Polynomial> {
    let c = gcd_list(&v);
    if c.is_zero() || c.is_constant() {
        return v;
    }
    v.iter().map(|a| a.div_exact(&c).expect("content divides")).collect()
}

/// Pseudo-remainder of `a` by `b` (coefficient vectors in the main variable).
fn prem(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    let m = degree(a).unwrap();
    let n = degree(b).unwrap();
    let lcb = &b[n];
    let mut r: Vec<Polynomial> = a.to_vec();
    let mut steps = 0usize;
    let total = m + 1 - n;
    while let Some(d) = degree(&r) {
        if d < n {
            break;
        }
        let lr = r[d].clone();
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (k, bk) in b.iter().enumerate().take(n + 1) {
            let t = &lr * bk;
            r[d - n + k] = &r[d - n + k] - &t;
        }
        steps += 1;
        r = trim(r);
        if r.iter().all(|c| c.is_zero()) {
            break;
        }
    }
    if steps < total && !r.iter().all(|c| c.is_zero()) {
        let f = lcb.pow((total - steps) as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    trim(r)
}

fn subresultant(p: Vec<Polynomial>, q: Vec<Polynomial>) -> Vec<Polynomial> {
    let vars = p[0].vars().clone();
    let (mut a, mut b) = if degree(&p) >= degree(&q) { (p, q) } else { (q, p) };
    let mut g = Polynomial::one(&vars);
    let mut h = Polynomial::one(&vars);
    loop {
        let da = degree(&a).unwrap();
        let db = degree(&b).unwrap();
        let d = da - db;
        let r = prem(&a, &b);
        if r.iter().all(|c| c.is_zero()) {
            return b;
        }
        if degree(&r) == Some(0) {
            return vec![Polynomial::one(&vars)];
        }
        let div = &g * &h.pow(d as u32);
        a = b;
        b = r.iter().map(|c| c.div_exact(&div).expect("subresultant division")).collect();
        g = a[degree(&a).unwrap()].clone();
        h = if d == 0 {
            h
        } else {
            let num = g.pow(d as u32);
            num.div_exact(&h.pow((d - 1) as u32)).expect("subresultant h update")
        };
    }
}

/// Checks coprimality of univariate images under a random-free fixed
/// substitution of the other variables. A degree-0 image gcd proves the
/// true gcd has degree 0 in the main variable.
fn image_is_coprime(p: &[Polynomial], q: &[Polynomial], x: usize) -> bool {
    let vars = p[0].vars().clone();
    let n = vars.len();
    let dp = degree(p).unwrap();
    let dq = degree(q).unwrap();
    if dp == 0 || dq == 0 {
        return true;
    }
    for attempt in 0..3i64 {
        let point: Vec<Q> = (0..n)
            .map(|i| if i == x { Q::zero() } else { Q::from_integer(((i as i64) * 7 + attempt * 13 + 3).into()) })
            .collect();
        let lp = p[dp].eval(&point);
        let lq = q[dq].eval(&point);
        if lp.is_zero() || lq.is_zero() {
            continue;
        }
        let up: Vec<Q> = p.iter().map(|c| c.eval(&point)).collect();
        let uq: Vec<Q> = q.iter().map(|c| c.eval(&point)).collect();
        return univariate_gcd_degree(up, uq) == 0;
    }
    false
}

fn udeg(v: &[Q]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn univariate_gcd_degree(mut a: Vec<Q>, mut b: Vec<Q>) -> usize {
    if udeg(&a) < udeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let Some(db) = udeg(&b) else {
            return udeg(&a).unwrap_or(0);
        };
        if db == 0 {
            return 0;
        }
        // a mod b
        let lb = b[db].clone();
        while let Some(da) = udeg(&a) {
            if da < db {
                break;
            }
            let f = &a[da] / &lb;
            for k in 0..=db {
                let t = &f * &b[k];
                a[da - db + k] -= t;
            }
            a[da] = Q::zero();
        }
        std::mem::swap(&mut a, &mut b);
    }
}

type IPoly = Vec<(Vec<u32>, BigInt)>;

fn to_ipoly(p: &Polynomial) -> IPoly {
    p.terms().map(|(m, c)| (m.exps().to_vec(), c.to_integer())).collect()
}

fn from_ipoly(vars: &Vars, t: &IPoly) -> Polynomial {
    Polynomial::from_terms(vars, t.iter().map(|(e, c)| (Monomial::from_exps(e), Q::from_integer(c.clone()))))
}

fn icontent(t: &IPoly) -> BigInt {
    t.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c))
}

fn max_norm(t: &IPoly) -> BigInt {
    t.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

/// Coefficient of the lexicographically largest exponent vector.
fn lex_lc(t: &IPoly) -> BigInt {
    t.iter().max_by(|a, b| a.0.cmp(&b.0)).map(|(_, c)| c.clone()).unwrap_or_default()
}

fn eval_var(t: &IPoly, v: usize, x: &BigInt) -> IPoly {
    let maxd = t.iter().map(|(e, _)| e[v]).max().unwrap_or(0) as usize;
    let mut pows = vec![BigInt::one()];
    for k in 0..maxd {
        let next = &pows[k] * x;
        pows.push(next);
    }
    let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (e, c) in t {
        let mut e2 = e.clone();
        let d = e2[v] as usize;
        e2[v] = 0;
        *acc.entry(e2).or_default() += c * &pows[d];
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Inverse of evaluation at `x` via balanced base-`x` digits.
fn interpolate(h: &IPoly, v: usize, x: &BigInt) -> IPoly {
    let half = x / 2;
    let mut out = Vec::new();
    let mut cur = h.clone();
    let mut i = 0u32;
    while !cur.is_empty() {
        let mut next = Vec::new();
        for (e, c) in cur {
            let mut g = c.mod_floor(x);
            if g > half {
                g -= x;
            }
            if !g.is_zero() {
                let mut e2 = e.clone();
                e2[v] = i;
                out.push((e2, g.clone()));
            }
            let r = (c - g) / x;
            if !r.is_zero() {
                next.push((e, r));
            }
        }
        cur = next;
        i += 1;
    }
    out
}

fn heu_rec(vars: &Vars, f: &IPoly, g: &IPoly) -> Option<IPoly> {
    let n = vars.len();
    let c = icontent(f).gcd(&icontent(g));
    let Some(v) = (0..n).find(|&i| f.iter().chain(g.iter()).any(|(e, _)| e[i] > 0)) else {
        return Some(vec![(vec![0; n], c)]);
    };
    let f: IPoly = f.iter().map(|(e, k)| (e.clone(), k / &c)).collect();
    let g: IPoly = g.iter().map(|(e, k)| (e.clone(), k / &c)).collect();
    let (fnorm, gnorm) = (max_norm(&f), max_norm(&g));
    let b: BigInt = BigInt::from(2) * fnorm.clone().min(gnorm.clone()) + BigInt::from(29);
    let mut x = (b.clone().min(BigInt::from(99) * b.sqrt()))
        .max(BigInt::from(2) * (&fnorm / lex_lc(&f).abs()).min(&gnorm / lex_lc(&g).abs()) + 4);
    let (fp, gp) = (from_ipoly(vars, &f), from_ipoly(vars, &g));
    for _ in 0..6 {
        let ff = eval_var(&f, v, &x);
        let gg = eval_var(&g, v, &x);
        if !ff.is_empty() && !gg.is_empty() {
            if let Some(h) = heu_rec(vars, &ff, &gg) {
                let h = interpolate(&h, v, &x);
                let hc = icontent(&h);
                if !hc.is_zero() {
                    let sign = if lex_lc(&h).is_negative() { -hc } else { hc };
                    let h: IPoly = h.into_iter().map(|(e, k)| (e, k / &sign)).collect();
                    let hp = from_ipoly(vars, &h);
                    if fp.is_divisible_by(&hp) && gp.is_divisible_by(&hp) {
                        return Some(h.into_iter().map(|(e, k)| (e, k * &c)).collect());
                    }
                }
            }
        }
        x = BigInt::from(73794) * &x * x.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

/// Heuristic gcd by integer evaluation and balanced-digit reconstruction,
/// accepted only when the candidate divides both inputs.
fn heuristic_gcd(p: &Polynomial, q: &Polynomial) -> Option<Polynomial> {
    let h = heu_rec(p.vars(), &to_ipoly(p), &to_ipoly(q))?;
    Some(from_ipoly(p.vars(), &h).primitive())
}

/// The largest monomial dividing both.
pub fn monomial_gcd(a: &Monomial, b: &Monomial) -> Monomial {
    a.gcd(b)
}
