//! Independent reference computations. Nothing here calls the engines.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Determinant by fraction-exact elimination.
pub fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if piv != c {
            m.swap(piv, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let factor = &m[r][c] / &m[c][c];
            for k in c..n {
                let sub = &factor * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    d
}

fn for_each_combo(gens: &[Vec<i64>], bound: i64, mut f: impl FnMut(&[i64], &[i64])) {
    let rank = gens[0].len();
    let mut coeffs = vec![-bound; gens.len()];
    let mut v = vec![0i64; rank];
    loop {
        v.iter_mut().for_each(|x| *x = 0);
        for (c, g) in coeffs.iter().zip(gens) {
            for (x, y) in v.iter_mut().zip(g) {
                *x += c * y;
            }
        }
        f(&coeffs, &v);
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return;
            }
            coeffs[i] += 1;
            if coeffs[i] <= bound {
                break;
            }
            coeffs[i] = -bound;
            i += 1;
        }
    }
}

fn adjugate(m: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    let n = m.len();
    let to_q = |rows: &[Vec<i64>]| {
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect()
    };
    let det_m = det(to_q(m)).to_integer().to_i64().unwrap();
    if n == 1 {
        return (vec![vec![1]], det_m);
    }
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> =
                (0..n).filter(|&r| r != j).map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect()).collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * det(to_q(&minor)).to_integer().to_i64().unwrap();
        }
    }
    (adj, det_m)
}

/// `#{x in Γω : 0 <= x < y for all positive y in Γν}` where `Γω` has the
/// independent (pre-scaled integer) generators `omega` and `Γν` is spanned
/// by the rows of `m` in those generators. Every element of `Γω` with
/// coefficients in `[-bound, bound]` is visited; membership in `Γν` is
/// decided exactly. `Vec` ordering is lexicographic.
pub fn box_initial_index(omega: &[Vec<i64>], m: &[Vec<i64>], bound: i64) -> u64 {
    let (adj, d) = adjugate(m);
    let in_nu = |c: &[i64]| (0..c.len()).all(|j| c.iter().zip(&adj).map(|(ci, row)| ci * row[j]).sum::<i64>() % d == 0);
    let zero = vec![0i64; omega[0].len()];
    let mut y0: Option<Vec<i64>> = None;
    let mut elems = Vec::new();
    for_each_combo(omega, bound, |c, x| {
        if x >= zero.as_slice() {
            elems.push(x.to_vec());
            if x > zero.as_slice() && in_nu(c) && y0.as_deref().map_or(true, |m| x < m) {
                y0 = Some(x.to_vec());
            }
        }
    });
    let Some(y0) = y0 else {
        return 0;
    };
    elems.iter().filter(|x| **x < y0).count() as u64
}

// ---- integer polynomials ------------------------------------------------------

pub type IntPoly = Vec<BigInt>;

fn to_q(a: &[BigInt]) -> Vec<BigRational> {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_q(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / b.last().unwrap();
        for (j, bj) in b.iter().enumerate() {
            let s = &c * bj;
            r[k + j] -= s;
        }
        r = trim_q(r);
    }
    r
}

/// `gcd(g, g') = 1` over Q.
pub fn squarefree(g: &[BigInt]) -> bool {
    let mut a = trim_q(to_q(g));
    let mut b: Vec<BigRational> =
        trim_q(a.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect());
    while !b.is_empty() {
        let r = rem_q(&a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

fn eval_shift(g: &[BigInt], a: &BigInt, pk: &BigInt) -> IntPoly {
    // g(a + pk x) by Horner
    let mut h: IntPoly = vec![BigInt::zero()];
    for c in g.iter().rev() {
        let mut next = vec![BigInt::zero(); h.len() + 1];
        for (i, hi) in h.iter().enumerate() {
            next[i] += hi * a;
            next[i + 1] += hi * pk;
        }
        next[0] += c;
        h = next;
    }
    h
}

fn mod_p(n: &BigInt, p: &BigInt) -> i64 {
    n.mod_floor(p).to_i64().unwrap()
}

fn count_in_disc(g: &[BigInt], p: u64, a: &BigInt, pk: &BigInt) -> usize {
    let pb = BigInt::from(p);
    let mut h = eval_shift(g, a, pk);
    while h.iter().all(|c| c.is_zero() || c.is_multiple_of(&pb)) {
        for c in h.iter_mut() {
            *c /= &pb;
        }
    }
    let hbar: Vec<i64> = h.iter().map(|c| mod_p(c, &pb)).collect();
    let pi = p as i64;
    let eval = |poly: &[i64], x: i64| poly.iter().rev().fold(0i64, |acc, c| (acc * x + c).rem_euclid(pi));
    let deriv: Vec<i64> = hbar.iter().enumerate().skip(1).map(|(i, c)| (c * i as i64).rem_euclid(pi)).collect();
    let mut count = 0;
    for x0 in 0..pi {
        if eval(&hbar, x0) != 0 {
            continue;
        }
        if eval(&deriv, x0) != 0 {
            count += 1;
        } else {
            count += count_in_disc(g, p, &(a + pk * BigInt::from(x0)), &(pk * &pb));
        }
    }
    count
}

/// Roots in `Z_p` of a monic squarefree integer polynomial, by refining
/// residue discs until every residual root is simple.
pub fn padic_roots(g: &[BigInt], p: u64) -> usize {
    count_in_disc(g, p, &BigInt::zero(), &BigInt::one())
}

fn dk_roots(g: &[BigInt]) -> Vec<Complex64> {
    let n = g.len() - 1;
    let c: Vec<f64> = g.iter().map(|x| x.to_f64().unwrap()).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + k);
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::new(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..2000 {
        let prev = z.clone();
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            let zi = z[i];
            z[i] = zi - eval(zi) / denom;
        }
        if z.iter().zip(&prev).all(|(a, b)| (a - b).norm() < 1e-15 * (1.0 + a.norm())) {
            break;
        }
    }
    z
}

/// `∏_{i<j} (x - (α_i + α_j + λ α_i α_j))` for a monic quartic, rounded from
/// floating-point roots; `None` when rounding is not clean.
pub fn pair_resolvent(g: &[BigInt], lambda: i64) -> Option<IntPoly> {
    let roots = dk_roots(g);
    let lam = lambda as f64;
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let s = roots[i] + roots[j] + roots[i] * roots[j] * lam;
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * s;
            }
            poly = next;
        }
    }
    let mut out = Vec::new();
    for c in &poly {
        let r = c.re.round();
        if (c.re - r).abs() > 1e-4 || c.im.abs() > 1e-4 || r.abs() > 1e15 {
            return None;
        }
        out.push(BigInt::from(r as i64));
    }
    // the x^5 coefficient is -(3 e1 + λ e2)
    let e1 = -&g[3];
    let e2 = g[2].clone();
    if out[5] != -(BigInt::from(3) * e1 + BigInt::from(lambda) * e2) {
        return None;
    }
    Some(out)
}

/// Number of irreducible factors over `Q_p` of a monic squarefree integer
/// polynomial of degree at most 4. Roots decide every case except a quartic
/// without roots, where a Galois-stable pair of roots (a root of the pair
/// resolvent) means two quadratic factors.
pub fn padic_factor_count(g: &[BigInt], p: u64) -> Option<usize> {
    let n = g.len() - 1;
    let r1 = padic_roots(g, p);
    Some(match (n, r1) {
        (_, r) if r == n => n,
        (2, 0) | (3, 0) => 1,
        (3, 1) => 2,
        (4, 2) => 3,
        (4, 1) => 2,
        (4, 0) => {
            let res = (1..20).find_map(|l| pair_resolvent(g, l).filter(|r| squarefree(r)))?;
            if padic_roots(&res, p) > 0 {
                2
            } else {
                1
            }
        }
        _ => unreachable!("degree {n} with {r1} roots"),
    })
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn abs_max(a: &[BigInt]) -> BigInt {
    a.iter().map(Signed::abs).max().unwrap_or_default()
}
