//! Small exact linear algebra: Gaussian elimination over Q and cofactor
//! determinants/adjugates for symbolic matrices.

use num_traits::{One, Zero};

use super::poly::{Polynomial, Vars, Q};
use super::ratfunc::RationalFunction;

pub trait Ring: Clone {
    fn zero_like(v: &Vars) -> Self;
    fn one_like(v: &Vars) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Ring for Polynomial {
    fn zero_like(v: &Vars) -> Self {
        Polynomial::zero(v)
    }
    fn one_like(v: &Vars) -> Self {
        Polynomial::one(v)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
}

impl Ring for RationalFunction {
    fn zero_like(v: &Vars) -> Self {
        RationalFunction::zero(v)
    }
    fn one_like(v: &Vars) -> Self {
        RationalFunction::one(v)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
}

fn minor<T: Clone>(m: &[Vec<T>], row: usize, col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Cofactor expansion; fine for the 3×3 (and smaller) matrices used here.
pub fn det<T: Ring>(m: &[Vec<T>], vars: &Vars) -> T {
    let n = m.len();
    match n {
        0 => panic!("determinant of an empty matrix"),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        3 => {
            let a = m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1]));
            let b = m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]));
            let c = m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]));
            m[0][0].mul(&a).sub(&m[0][1].mul(&b)).add(&m[0][2].mul(&c))
        }
        _ => {
            let mut acc = T::zero_like(vars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let t = m[0][j].mul(&det(&minor(m, 0, j), vars));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// `adj(m)` with `m · adj(m) = det(m) · I`.
pub fn adjugate<T: Ring>(m: &[Vec<T>], vars: &Vars) -> Vec<Vec<T>> {
    let n = m.len();
    let mut out = vec![vec![T::zero_like(vars); n]; n];
    if n == 1 {
        out[0][0] = T::one_like(vars);
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, j, i), vars);
            out[i][j] = if (i + j) % 2 == 0 { c } else { T::zero_like(vars).sub(&c) };
        }
    }
    out
}

/// Row-reduce `[a | b]` over Q. Returns one solution (free variables set to
/// zero) or `None` when inconsistent.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    let pivots = reduce(&mut m, cols);
    for r in pivots.len()..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

pub fn rank(a: &[Vec<Q>]) -> usize {
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut m = a.to_vec();
    reduce(&mut m, cols).len()
}

/// Reduced row echelon form on the first `cols` columns; returns pivot columns.
fn reduce(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = m.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = m.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn identity_q(n: usize) -> Vec<Vec<Q>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse::parse_polynomial;
    use crate::symcore::poly::{q, vars};

    #[test]
    fn solve_small() {
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)], vec![q(0), q(1)]];
        assert_eq!(solve(&a, &[q(3), q(6), q(1)]), Some(vec![q(1), q(1)]));
        assert_eq!(solve(&a, &[q(3), q(7), q(1)]), None);
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn symbolic_det_adj() {
        let vs = vars(&["u", "v", "w"]);
        let p = |s: &str| parse_polynomial(s, &vs).unwrap();
        let m = vec![
            vec![p("-1"), p("-2*u"), p("-2*u")],
            vec![p("-2*u"), p("-4*v"), p("-4*v")],
            vec![p("-2*u"), p("-4*v"), p("-4*w")],
        ];
        let d = det(&m, &vs);
        assert_eq!(d, p("16*(w-v)*(u^2-v)"));
        let adj = adjugate(&m, &vs);
        for i in 0..3 {
            for j in 0..3 {
                let mut s = Polynomial::zero(&vs);
                for k in 0..3 {
                    s = &s + &(&m[i][k] * &adj[k][j]);
                }
                assert_eq!(s, if i == j { d.clone() } else { Polynomial::zero(&vs) });
            }
        }
    }
}
