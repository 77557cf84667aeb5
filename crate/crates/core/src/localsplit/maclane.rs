//! MacLane chains of augmented valuations over a discretely valued field.
//!
//! Level `j` carries a key polynomial `φ_j` and `λ_j = μ_j(φ_j)`; `μ_j` is
//! the minimum over the `φ_j`-adic expansion of `μ_{j-1}(a_i) + i λ_j`, with
//! `μ_0` the base valuation on constants. The value group of `μ_j` is
//! `(1/E_j) Z` with `E_j = e_1 ⋯ e_j`, and its residues of degree-bounded
//! elements live in `F_{j+1} = F_j[y]/(ψ_j)`, `F_1 = κ`.
//!
//! Residues are normalized by a fixed monomial basis: every value `γ` of
//! `μ_j` is matched with one product `π^n φ_1^{t_1} ⋯ φ_j^{t_j}`,
//! `0 ≤ t_i < e_i` (see [`Chain::mono`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::field::{self, ValuedField};
use crate::gf::{FiniteField, Gf, GfPoly};

#[derive(Debug, Clone)]
pub(crate) struct Level<E> {
    pub phi: Vec<E>,
    pub lambda: BigRational,
    /// Relative ramification `e_j`.
    pub e: i64,
    /// `e_j λ_j`, a value of `μ_{j-1}`.
    pub beta: BigRational,
    /// `E_j`.
    pub big_e: i64,
    /// `ψ_j` and `F_{j+1}`, once a residual factor has been chosen.
    pub psi: Option<GfPoly>,
    pub above: Option<FiniteField>,
}

pub(crate) type Exps = Vec<i64>;

fn int(q: &BigRational) -> i64 {
    assert!(q.is_integer(), "value {q} is not integral");
    q.to_integer().to_i64().expect("exponent fits in i64")
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn combine(a: &[i64], b: &[i64], k: i64, c: &[i64]) -> Exps {
    (0..a.len()).map(|s| a[s] + k * b[s] - c[s]).collect()
}

pub(crate) struct Chain<'a, K: ValuedField> {
    pub k: &'a K,
    pub lv: &'a [Level<K::Elem>],
}

impl<'a, K: ValuedField> Chain<'a, K> {
    fn level(&self, j: usize) -> &Level<K::Elem> {
        &self.lv[j - 1]
    }

    fn big_e(&self, j: usize) -> i64 {
        if j == 0 {
            1
        } else {
            self.level(j).big_e
        }
    }

    /// `F_j`.
    pub fn field(&self, j: usize) -> FiniteField {
        if j == 1 {
            self.k.residue_field().clone()
        } else {
            self.level(j - 1).above.clone().expect("level has a residual factor")
        }
    }

    /// `μ_j(a)`; `None` for zero. For `j = 0`, `a` must be constant.
    pub fn value(&self, j: usize, a: &[K::Elem]) -> Option<BigRational> {
        if a.is_empty() {
            return None;
        }
        if j == 0 {
            debug_assert_eq!(a.len(), 1);
            return self.k.valuation(&a[0]).map(rat);
        }
        let l = self.level(j);
        field::expand(self.k, a, &l.phi)
            .iter()
            .enumerate()
            .filter_map(|(i, c)| self.value(j - 1, c).map(|w| w + &l.lambda * rat(i as i64)))
            .min()
    }

    /// The `t ∈ [0, e_j)` with `γ - t λ_j` a value of `μ_{j-1}`.
    fn offset(&self, j: usize, gamma: &BigRational) -> i64 {
        let l = self.level(j);
        let prev = rat(self.big_e(j - 1));
        (0..l.e).find(|&t| ((gamma - &l.lambda * rat(t)) * &prev).is_integer()).expect("value lies in the value group")
    }

    pub fn mono(&self, j: usize, gamma: &BigRational) -> Exps {
        if j == 0 {
            return vec![int(gamma)];
        }
        let t = self.offset(j, gamma);
        let mut m = self.mono(j - 1, &(gamma - &self.level(j).lambda * rat(t)));
        m.push(t);
        m
    }

    /// Residue in `F_j` of a value-zero monomial in `π, φ_1, …, φ_{j-1}`.
    fn res_mono(&self, j: usize, q: &[i64]) -> Gf {
        if j == 1 {
            debug_assert_eq!(q, &[0]);
            return self.k.residue_field().one();
        }
        let l = self.level(j - 1);
        let top = q[j - 1];
        debug_assert_eq!(top % l.e, 0);
        let c = top / l.e;
        let mb = self.mono(j - 2, &l.beta);
        let inner: Exps = (0..j - 1).map(|s| q[s] + c * mb[s]).collect();
        let r = self.res_mono(j - 1, &inner);
        let fj = self.field(j);
        fj.mul(&fj.powi(&fj.generator(), c), &fj.embed(&r))
    }

    /// Residue in `F_j` of `a / mono(j-1, μ_{j-1}(a))` for nonzero `a` with
    /// `deg a < deg φ_j`.
    pub fn unit(&self, j: usize, a: &[K::Elem]) -> Gf {
        if j == 1 {
            let w = self.k.valuation(&a[0]).expect("nonzero");
            return self.k.reduce(&self.k.mul(&a[0], &self.k.uniformizer_pow(-w)));
        }
        let (_, r) = self.residual(j - 1, a);
        let fj = self.field(j);
        let z = fj.generator();
        r.iter().rev().fold(fj.zero(), |acc, c| fj.add(&fj.mul(&acc, &z), &fj.embed(c)))
    }

    /// `μ_j(a)` and the residual polynomial of `a` at level `j`, over `F_j`.
    /// The coefficient of `Y^k` comes from the term `φ_j^{t + k e_j}`.
    pub fn residual(&self, j: usize, a: &[K::Elem]) -> (BigRational, GfPoly) {
        let l = self.level(j);
        let parts = field::expand(self.k, a, &l.phi);
        let vals: Vec<Option<BigRational>> = parts.iter().map(|c| self.value(j - 1, c)).collect();
        let gamma = vals
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.as_ref().map(|w| w + &l.lambda * rat(i as i64)))
            .min()
            .expect("nonzero polynomial");
        let t = self.offset(j, &gamma);
        let base = self.mono(j - 1, &(&gamma - &l.lambda * rat(t)));
        let mb = self.mono(j - 1, &l.beta);
        let fj = self.field(j);
        let mut r = Vec::new();
        for (i, w) in vals.iter().enumerate() {
            let Some(w) = w else { continue };
            if w + &l.lambda * rat(i as i64) != gamma {
                continue;
            }
            let kk = (i as i64 - t) / l.e;
            let q = combine(&self.mono(j - 1, w), &mb, kk, &base);
            let c = fj.mul(&self.unit(j, &parts[i]), &self.res_mono(j, &q));
            let kk = kk as usize;
            if r.len() <= kk {
                r.resize(kk + 1, fj.zero());
            }
            r[kk] = c;
        }
        (gamma, fj.poly_trim(r))
    }

    /// A polynomial `A` with `deg A < deg φ_j`, `μ_{j-1}(A) = δ` and
    /// `unit(j, A) = c`.
    pub fn lift(&self, j: usize, c: &Gf, delta: &BigRational) -> Vec<K::Elem> {
        let fj = self.field(j);
        if fj.is_zero(c) {
            return Vec::new();
        }
        let k = self.k;
        if j == 1 {
            return vec![k.mul(&k.uniformizer_pow(int(delta)), &k.lift(c))];
        }
        let l = self.level(j - 1);
        let fprev = self.field(j - 1);
        let t = self.offset(j - 1, delta);
        let base = self.mono(j - 2, &(delta - &l.lambda * rat(t)));
        let mb = self.mono(j - 2, &l.beta);
        let mut acc = Vec::new();
        for (idx, cl) in fj.coords(c).iter().enumerate() {
            if fprev.is_zero(cl) {
                continue;
            }
            let i = t + l.e * idx as i64;
            let w = delta - &l.lambda * rat(i);
            let q = combine(&self.mono(j - 2, &w), &mb, idx as i64, &base);
            let target = fprev.div(cl, &self.res_mono(j - 1, &q));
            let a = self.lift(j - 1, &target, &w);
            let term = field::mul(k, &a, &field::pow(k, &l.phi, i as usize));
            acc = field::add(k, &acc, &term);
        }
        acc
    }

    /// Key polynomial over `μ_j` whose residual polynomial is a nonzero
    /// multiple of the monic `ψ ∈ F_j[y]`, `ψ(0) ≠ 0`.
    pub fn key_polynomial(&self, j: usize, psi: &[Gf]) -> Vec<K::Elem> {
        let l = self.level(j);
        let k = self.k;
        let f = psi.len() as i64 - 1;
        let fj = self.field(j);
        let mb = self.mono(j - 1, &l.beta);
        let top = self.mono(j - 1, &(&l.beta * rat(f)));
        let q = |i: i64| combine(&self.mono(j - 1, &(&l.beta * rat(f - i))), &mb, i, &top);
        let rf = self.res_mono(j, &q(f));
        let mut phi = field::pow(k, &l.phi, (l.e * f) as usize);
        for i in 0..f {
            let coeff = &psi[i as usize];
            if fj.is_zero(coeff) {
                continue;
            }
            let target = fj.div(&fj.mul(coeff, &rf), &self.res_mono(j, &q(i)));
            let a = self.lift(j, &target, &(&l.beta * rat(f - i)));
            let term = field::mul(k, &a, &field::pow(k, &l.phi, (l.e * i) as usize));
            phi = field::add(k, &phi, &term);
        }
        phi
    }
}

/// Lower convex hull of `(x, y)` points with increasing `x`, as
/// `(x_start, x_end, slope)` sides from left to right.
pub(crate) fn lower_hull(points: &[(i64, BigRational)]) -> Vec<(i64, i64, BigRational)> {
    let mut hull: Vec<&(i64, BigRational)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = rat(b.0 - a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * rat(p.0 - a.0);
            if cross > BigRational::zero() {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    hull.windows(2).map(|w| (w[0].0, w[1].0, (&w[1].1 - &w[0].1) / rat(w[1].0 - w[0].0))).collect()
}

pub(crate) fn denominator(q: &BigRational) -> i64 {
    q.denom().to_i64().expect("denominator fits in i64")
}

pub(crate) fn one_level<E>(phi: Vec<E>, lambda: BigRational, prev_big_e: i64) -> Level<E> {
    let e = denominator(&(&lambda * rat(prev_big_e)));
    let beta = &lambda * rat(e);
    Level { phi, lambda, e, beta, big_e: prev_big_e * e, psi: None, above: None }
}
