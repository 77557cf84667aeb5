//! Discretely valued base fields with finite residue fields, and dense
//! polynomial arithmetic over them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::gf::{FiniteField, Gf, GfPoly};

/// A field with a normalized discrete valuation (`v(π) = 1`) whose residue
/// field is finite.
pub trait ValuedField {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `None` stands for `+∞`.
    fn valuation(&self, a: &Self::Elem) -> Option<i64>;
    fn uniformizer_pow(&self, n: i64) -> Self::Elem;
    fn residue_field(&self) -> &FiniteField;
    /// Residue class of an element of nonnegative value.
    fn reduce(&self, a: &Self::Elem) -> Gf;
    /// A fixed representative of a residue class.
    fn lift(&self, c: &Gf) -> Self::Elem;
    fn characteristic(&self) -> u64;
    fn format(&self, a: &Self::Elem) -> String;
    fn describe(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BaseError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("uniformizer {0} is not a monic irreducible polynomial of positive degree")]
    NotIrreducible(String),
}

/// `Q` with the `p`-adic valuation.
#[derive(Debug, Clone)]
pub struct PadicRationals {
    p: u64,
    residue: FiniteField,
}

impl PadicRationals {
    pub fn new(p: u64) -> Result<Self, BaseError> {
        if !crate::raminv::is_prime(p) {
            return Err(BaseError::NotPrime(p));
        }
        Ok(PadicRationals { p, residue: FiniteField::prime(p) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn ord(&self, n: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = n.clone();
        let mut k = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return k;
            }
            n = q;
            k += 1;
        }
    }

    fn mod_p(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("residue fits")
    }
}

impl ValuedField for PadicRationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn valuation(&self, a: &BigRational) -> Option<i64> {
        if a.is_zero() {
            return None;
        }
        Some(self.ord(a.numer()) - self.ord(a.denom()))
    }
    fn uniformizer_pow(&self, n: i64) -> BigRational {
        let p = BigRational::from_integer(self.p.into());
        if n >= 0 {
            num_traits::pow(p, n as usize)
        } else {
            num_traits::pow(p.recip(), n.unsigned_abs() as usize)
        }
    }
    fn residue_field(&self) -> &FiniteField {
        &self.residue
    }
    fn reduce(&self, a: &BigRational) -> Gf {
        let f = &self.residue;
        let num = Gf::Prime(self.mod_p(a.numer()));
        let den = Gf::Prime(self.mod_p(a.denom()));
        f.div(&num, &den)
    }
    fn lift(&self, c: &Gf) -> BigRational {
        match c {
            Gf::Prime(v) => BigRational::from_integer((*v).into()),
            Gf::Ext(_) => panic!("residue of Q_p is a prime field"),
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn describe(&self) -> String {
        format!("v_{} on Q", self.p)
    }
}

/// An element of `F_q(t)`: reduced fraction with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: GfPoly,
    pub den: GfPoly,
}

/// `F_q(t)` with the `π`-adic valuation for a monic irreducible `π ∈ F_q[t]`.
#[derive(Debug, Clone)]
pub struct FunctionField {
    fq: FiniteField,
    pi: GfPoly,
    residue: FiniteField,
}

impl FunctionField {
    pub fn new(fq: FiniteField, pi: GfPoly) -> Result<Self, BaseError> {
        let pi = fq.poly_trim(pi);
        let monic = pi.last().is_some_and(|l| fq.is_one(l));
        if !monic || !fq.is_irreducible(&pi) {
            return Err(BaseError::NotIrreducible(fq.format_poly(&pi, "t")));
        }
        let residue = if pi.len() == 2 { fq.clone() } else { FiniteField::extension(&fq, &pi) };
        Ok(FunctionField { fq, pi, residue })
    }

    pub fn constants(&self) -> &FiniteField {
        &self.fq
    }

    pub fn uniformizer(&self) -> &GfPoly {
        &self.pi
    }

    pub fn poly(&self, num: GfPoly) -> RatFunc {
        self.frac(num, vec![self.fq.one()])
    }

    /// `num / den`; `den` must be nonzero.
    pub fn frac(&self, num: GfPoly, den: GfPoly) -> RatFunc {
        let f = &self.fq;
        let num = f.poly_trim(num);
        let den = f.poly_trim(den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return RatFunc { num, den: vec![f.one()] };
        }
        let g = f.poly_gcd(&num, &den);
        let (num, _) = f.poly_divrem(&num, &g);
        let (den, _) = f.poly_divrem(&den, &g);
        let lead = f.inv(den.last().expect("nonzero"));
        RatFunc { num: f.poly_scale(&num, &lead), den: f.poly_scale(&den, &lead) }
    }

    fn ord(&self, a: &[Gf]) -> i64 {
        let mut a = a.to_vec();
        let mut k = 0;
        loop {
            let (q, r) = self.fq.poly_divrem(&a, &self.pi);
            if !r.is_empty() {
                return k;
            }
            a = q;
            k += 1;
        }
    }

    fn residue_of_poly(&self, a: &[Gf]) -> Gf {
        if self.pi.len() == 2 {
            let root = self.fq.neg(&self.pi[0]);
            self.fq.poly_eval(a, &root)
        } else {
            self.residue.from_coords(a)
        }
    }
}

impl ValuedField for FunctionField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        self.poly(Vec::new())
    }
    fn one(&self) -> RatFunc {
        self.poly(vec![self.fq.one()])
    }
    fn from_int(&self, n: i64) -> RatFunc {
        self.poly(vec![self.fq.from_i64(n)])
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.fq;
        if a.den == b.den {
            return self.frac(f.poly_add(&a.num, &b.num), a.den.clone());
        }
        let num = f.poly_add(&f.poly_mul(&a.num, &b.den), &f.poly_mul(&b.num, &a.den));
        self.frac(num, f.poly_mul(&a.den, &b.den))
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        let num = a.num.iter().map(|c| self.fq.neg(c)).collect();
        RatFunc { num, den: a.den.clone() }
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let f = &self.fq;
        self.frac(f.poly_mul(&a.num, &b.num), f.poly_mul(&a.den, &b.den))
    }
    fn inv(&self, a: &RatFunc) -> RatFunc {
        assert!(!a.num.is_empty(), "inverse of zero");
        self.frac(a.den.clone(), a.num.clone())
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_empty()
    }
    fn valuation(&self, a: &RatFunc) -> Option<i64> {
        if a.num.is_empty() {
            return None;
        }
        Some(self.ord(&a.num) - self.ord(&a.den))
    }
    fn uniformizer_pow(&self, n: i64) -> RatFunc {
        let f = &self.fq;
        let mut p = vec![f.one()];
        for _ in 0..n.unsigned_abs() {
            p = f.poly_mul(&p, &self.pi);
        }
        if n >= 0 {
            self.poly(p)
        } else {
            self.frac(vec![f.one()], p)
        }
    }
    fn residue_field(&self) -> &FiniteField {
        &self.residue
    }
    fn reduce(&self, a: &RatFunc) -> Gf {
        let num = self.residue_of_poly(&a.num);
        let den = self.residue_of_poly(&a.den);
        self.residue.div(&num, &den)
    }
    fn lift(&self, c: &Gf) -> RatFunc {
        if self.pi.len() == 2 {
            self.poly(vec![c.clone()])
        } else {
            self.poly(self.residue.coords(c))
        }
    }
    fn characteristic(&self) -> u64 {
        self.fq.characteristic()
    }
    fn format(&self, a: &RatFunc) -> String {
        let num = self.fq.format_poly(&a.num, "t");
        if a.den.len() == 1 {
            return num;
        }
        format!("({num})/({})", self.fq.format_poly(&a.den, "t"))
    }
    fn describe(&self) -> String {
        format!("v_({}) on {}(t)", self.fq.format_poly(&self.pi, "t"), self.fq)
    }
}

// ---- polynomials over a valued field --------------------------------------

pub(crate) fn trim<K: ValuedField>(k: &K, mut a: Vec<K::Elem>) -> Vec<K::Elem> {
    while a.last().is_some_and(|c| k.is_zero(c)) {
        a.pop();
    }
    a
}

pub(crate) fn add<K: ValuedField>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    let z = k.zero();
    let n = a.len().max(b.len());
    let r = (0..n).map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
    trim(k, r)
}

pub(crate) fn mul<K: ValuedField>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = k.add(&r[i + j], &k.mul(x, y));
        }
    }
    trim(k, r)
}

pub(crate) fn pow<K: ValuedField>(k: &K, a: &[K::Elem], n: usize) -> Vec<K::Elem> {
    (0..n).fold(vec![k.one()], |acc, _| mul(k, &acc, a))
}

pub(crate) fn divrem<K: ValuedField>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> (Vec<K::Elem>, Vec<K::Elem>) {
    let b = trim(k, b.to_vec());
    let db = b.len().checked_sub(1).expect("division by zero polynomial");
    let mut r = trim(k, a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = k.inv(&b[db]);
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db {
        let s = r.len() - 1 - db;
        let c = k.mul(&r[r.len() - 1], &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            r[s + j] = k.sub(&r[s + j], &k.mul(&c, bj));
        }
        // the top coefficient cancels exactly
        r.pop();
        r = trim(k, r);
        q[s] = c;
    }
    (trim(k, q), r)
}

pub(crate) fn gcd<K: ValuedField>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Vec<K::Elem> {
    let mut x = trim(k, a.to_vec());
    let mut y = trim(k, b.to_vec());
    while !y.is_empty() {
        let r = divrem(k, &x, &y).1;
        x = y;
        y = r;
    }
    match x.last() {
        Some(l) => {
            let inv = k.inv(l);
            x.iter().map(|c| k.mul(c, &inv)).collect()
        }
        None => x,
    }
}

pub(crate) fn derivative<K: ValuedField>(k: &K, a: &[K::Elem]) -> Vec<K::Elem> {
    let r = a.iter().enumerate().skip(1).map(|(i, c)| k.mul(c, &k.from_int(i as i64))).collect();
    trim(k, r)
}

/// Coefficients of the `φ`-adic expansion `a = Σ a_i φ^i`, `deg a_i < deg φ`.
pub(crate) fn expand<K: ValuedField>(k: &K, a: &[K::Elem], phi: &[K::Elem]) -> Vec<Vec<K::Elem>> {
    let mut out = Vec::new();
    let mut rest = trim(k, a.to_vec());
    while !rest.is_empty() {
        let (q, r) = divrem(k, &rest, phi);
        out.push(r);
        rest = q;
    }
    out
}

pub fn format_poly<K: ValuedField>(k: &K, a: &[K::Elem], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in a.iter().enumerate().rev() {
        if k.is_zero(c) {
            continue;
        }
        let s = k.format(c);
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, s.clone()),
        };
        let body = if body.contains(['+', ' ']) && !body.starts_with('(') { format!("({body})") } else { body };
        let mono = match i {
            0 => body,
            _ if body == "1" && i == 1 => var.to_string(),
            _ if body == "1" => format!("{var}^{i}"),
            1 => format!("{body}*{var}"),
            _ => format!("{body}*{var}^{i}"),
        };
        if out.is_empty() {
            out = if neg { format!("-{mono}") } else { mono };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}
