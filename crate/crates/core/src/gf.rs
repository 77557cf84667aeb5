//! Finite fields as towers of simple extensions `F_p ⊂ F_p[y]/(m_1) ⊂ ...`
//! and polynomial arithmetic and factorization over them.
//!
//! Elements are plain values ([`Gf`]); every operation takes the field it
//! lives in. An element of an extension is its coefficient vector over the
//! base field, always padded to the degree of the modulus, so structural
//! equality is field equality.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

/// An element of some [`FiniteField`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gf {
    Prime(u64),
    Ext(Vec<Gf>),
}

/// Dense polynomial over a finite field, lowest coefficient first.
pub type GfPoly = Vec<Gf>;

#[derive(Debug, PartialEq, Eq, Hash)]
enum Repr {
    Prime(u64),
    Ext { base: FiniteField, modulus: GfPoly, degree: u32 },
}

/// A finite field: either `F_p` or `base[y]/(modulus)` with a monic
/// irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteField(Arc<Repr>);

impl FiniteField {
    /// `F_p`; `p` must be prime.
    pub fn prime(p: u64) -> Self {
        assert!(p >= 2, "characteristic must be at least 2");
        FiniteField(Arc::new(Repr::Prime(p)))
    }

    /// `base[y]/(modulus)`. The modulus is made monic; its irreducibility is
    /// the caller's responsibility (see [`FiniteField::extension_checked`]).
    pub fn extension(base: &FiniteField, modulus: &[Gf]) -> Self {
        let modulus = base.poly_monic(modulus);
        assert!(modulus.len() >= 2, "modulus must have positive degree");
        let degree = base.degree() * (modulus.len() as u32 - 1);
        FiniteField(Arc::new(Repr::Ext { base: base.clone(), modulus, degree }))
    }

    /// Like [`FiniteField::extension`] but returns `None` unless the modulus
    /// is irreducible.
    pub fn extension_checked(base: &FiniteField, modulus: &[Gf]) -> Option<Self> {
        base.is_irreducible(modulus).then(|| Self::extension(base, modulus))
    }

    /// `F_{p^k}` built over `F_p` with the least monic irreducible of degree `k`.
    pub fn galois(p: u64, k: u32) -> Self {
        let fp = FiniteField::prime(p);
        if k == 1 {
            return fp;
        }
        let m = fp.least_irreducible(k as usize);
        FiniteField::extension(&fp, &m)
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Repr::Prime(p) => *p,
            Repr::Ext { base, .. } => base.characteristic(),
        }
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        match &*self.0 {
            Repr::Prime(_) => 1,
            Repr::Ext { degree, .. } => *degree,
        }
    }

    /// Degree over the immediate base field.
    pub fn relative_degree(&self) -> usize {
        match &*self.0 {
            Repr::Prime(_) => 1,
            Repr::Ext { modulus, .. } => modulus.len() - 1,
        }
    }

    pub fn base(&self) -> Option<&FiniteField> {
        match &*self.0 {
            Repr::Prime(_) => None,
            Repr::Ext { base, .. } => Some(base),
        }
    }

    pub fn modulus(&self) -> Option<&[Gf]> {
        match &*self.0 {
            Repr::Prime(_) => None,
            Repr::Ext { modulus, .. } => Some(modulus),
        }
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree())
    }

    /// The order as a `u64`, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.characteristic().checked_pow(self.degree())
    }

    pub fn zero(&self) -> Gf {
        match &*self.0 {
            Repr::Prime(_) => Gf::Prime(0),
            Repr::Ext { base, modulus, .. } => Gf::Ext(vec![base.zero(); modulus.len() - 1]),
        }
    }

    pub fn one(&self) -> Gf {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Gf {
        match &*self.0 {
            Repr::Prime(p) => Gf::Prime(n.rem_euclid(*p as i64) as u64),
            Repr::Ext { base, .. } => self.embed(&base.from_i64(n)),
        }
    }

    /// The class of `y` in `base[y]/(modulus)`.
    pub fn generator(&self) -> Gf {
        match &*self.0 {
            Repr::Prime(_) => self.one(),
            Repr::Ext { base, modulus, .. } => {
                let n = modulus.len() - 1;
                let mut v = vec![base.zero(); n];
                if n == 1 {
                    v[0] = base.neg(&modulus[0]);
                } else {
                    v[1] = base.one();
                }
                Gf::Ext(v)
            }
        }
    }

    /// Embeds an element of the immediate base field.
    pub fn embed(&self, x: &Gf) -> Gf {
        match &*self.0 {
            Repr::Prime(_) => x.clone(),
            Repr::Ext { base, modulus, .. } => {
                let mut v = vec![base.zero(); modulus.len() - 1];
                v[0] = x.clone();
                Gf::Ext(v)
            }
        }
    }

    /// Embeds an element of any field below this one in the tower.
    pub fn embed_from(&self, from: &FiniteField, x: &Gf) -> Gf {
        if self == from {
            return x.clone();
        }
        let base = self.base().expect("source field is not below the target");
        self.embed(&base.embed_from(from, x))
    }

    /// Coordinates over the immediate base field.
    pub fn coords(&self, x: &Gf) -> Vec<Gf> {
        match x {
            Gf::Ext(v) => v.clone(),
            Gf::Prime(_) => vec![x.clone()],
        }
    }

    /// Element with the given coordinates over the immediate base field.
    pub fn from_coords(&self, coords: &[Gf]) -> Gf {
        match &*self.0 {
            Repr::Prime(_) => coords.first().cloned().unwrap_or(Gf::Prime(0)),
            Repr::Ext { base, modulus, .. } => {
                let reduced = base.poly_rem(coords, modulus);
                let mut v = vec![base.zero(); modulus.len() - 1];
                for (i, c) in reduced.into_iter().enumerate() {
                    v[i] = c;
                }
                Gf::Ext(v)
            }
        }
    }

    pub fn is_zero(&self, x: &Gf) -> bool {
        match x {
            Gf::Prime(v) => *v == 0,
            Gf::Ext(v) => {
                let base = self.base().expect("extension element in prime field");
                v.iter().all(|c| base.is_zero(c))
            }
        }
    }

    pub fn is_one(&self, x: &Gf) -> bool {
        *x == self.one()
    }

    pub fn add(&self, a: &Gf, b: &Gf) -> Gf {
        match (&*self.0, a, b) {
            (Repr::Prime(p), Gf::Prime(x), Gf::Prime(y)) => Gf::Prime((x + y) % p),
            (Repr::Ext { base, .. }, Gf::Ext(x), Gf::Ext(y)) => {
                Gf::Ext(x.iter().zip(y).map(|(u, v)| base.add(u, v)).collect())
            }
            _ => panic!("element does not belong to field"),
        }
    }

    pub fn neg(&self, a: &Gf) -> Gf {
        match (&*self.0, a) {
            (Repr::Prime(p), Gf::Prime(x)) => Gf::Prime((p - x) % p),
            (Repr::Ext { base, .. }, Gf::Ext(x)) => Gf::Ext(x.iter().map(|u| base.neg(u)).collect()),
            _ => panic!("element does not belong to field"),
        }
    }

    pub fn sub(&self, a: &Gf, b: &Gf) -> Gf {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        match (&*self.0, a, b) {
            (Repr::Prime(p), Gf::Prime(x), Gf::Prime(y)) => Gf::Prime(((*x as u128 * *y as u128) % *p as u128) as u64),
            (Repr::Ext { base, .. }, Gf::Ext(x), Gf::Ext(y)) => {
                let prod = base.poly_mul(x, y);
                self.from_coords(&prod)
            }
            _ => panic!("element does not belong to field"),
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: &Gf) -> Gf {
        assert!(!self.is_zero(a), "inverse of zero");
        match (&*self.0, a) {
            (Repr::Prime(p), Gf::Prime(x)) => {
                let (mut t, mut new_t) = (0i128, 1i128);
                let (mut r, mut new_r) = (*p as i128, *x as i128);
                while new_r != 0 {
                    let q = r / new_r;
                    (t, new_t) = (new_t, t - q * new_t);
                    (r, new_r) = (new_r, r - q * new_r);
                }
                Gf::Prime(t.rem_euclid(*p as i128) as u64)
            }
            (Repr::Ext { base, modulus, .. }, Gf::Ext(x)) => {
                let (g, s, _) = base.poly_xgcd(x, modulus);
                // g is a nonzero constant since the modulus is irreducible
                let c = base.inv(&g[0]);
                self.from_coords(&base.poly_scale(&s, &c))
            }
            _ => panic!("element does not belong to field"),
        }
    }

    pub fn div(&self, a: &Gf, b: &Gf) -> Gf {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Gf, e: &BigUint) -> Gf {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    /// `a^n` for a signed exponent; `a` must be nonzero when `n < 0`.
    pub fn powi(&self, a: &Gf, n: i64) -> Gf {
        let base = if n < 0 { self.inv(a) } else { a.clone() };
        self.pow(&base, &BigUint::from(n.unsigned_abs()))
    }

    /// Unique `p`-th root (Frobenius is bijective on a finite field).
    pub fn pth_root(&self, a: &Gf) -> Gf {
        let p = BigUint::from(self.characteristic());
        let e = p.pow(self.degree() - 1);
        self.pow(a, &e)
    }

    /// The `index`-th element in a fixed enumeration (base-`p` digits of the
    /// flattened coordinates). `index` is taken modulo the field order.
    pub fn element_from_index(&self, index: u64) -> Gf {
        match &*self.0 {
            Repr::Prime(p) => Gf::Prime(index % p),
            Repr::Ext { base, modulus, .. } => {
                let n = modulus.len() - 1;
                let radix = base.order_u64();
                let mut rest = index;
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    match radix {
                        Some(r) => {
                            v.push(base.element_from_index(rest % r));
                            rest /= r;
                        }
                        None => {
                            v.push(base.element_from_index(rest));
                            rest = 0;
                        }
                    }
                }
                Gf::Ext(v)
            }
        }
    }

    /// Every element, in enumeration order. Only for small fields.
    pub fn elements(&self) -> Vec<Gf> {
        let q = self.order_u64().expect("field too large to enumerate");
        (0..q).map(|i| self.element_from_index(i)).collect()
    }

    pub fn format(&self, x: &Gf) -> String {
        match x {
            Gf::Prime(v) => v.to_string(),
            Gf::Ext(v) => {
                let base = self.base().expect("extension element");
                if v[1..].iter().all(|c| base.is_zero(c)) {
                    return base.format(&v[0]);
                }
                let parts: Vec<String> = v.iter().map(|c| base.format(c)).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    // ---- polynomials -------------------------------------------------------

    pub fn poly_trim(&self, mut a: GfPoly) -> GfPoly {
        while a.last().is_some_and(|c| self.is_zero(c)) {
            a.pop();
        }
        a
    }

    /// Degree; `None` for the zero polynomial.
    pub fn poly_degree(&self, a: &[Gf]) -> Option<usize> {
        a.iter().rposition(|c| !self.is_zero(c))
    }

    pub fn poly_add(&self, a: &[Gf], b: &[Gf]) -> GfPoly {
        let n = a.len().max(b.len());
        let z = self.zero();
        let r = (0..n).map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.poly_trim(r)
    }

    pub fn poly_sub(&self, a: &[Gf], b: &[Gf]) -> GfPoly {
        let nb: GfPoly = b.iter().map(|c| self.neg(c)).collect();
        self.poly_add(a, &nb)
    }

    pub fn poly_scale(&self, a: &[Gf], c: &Gf) -> GfPoly {
        self.poly_trim(a.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &[Gf], b: &[Gf]) -> GfPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] = self.add(&r[i + j], &self.mul(x, y));
            }
        }
        self.poly_trim(r)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn poly_divrem(&self, a: &[Gf], b: &[Gf]) -> (GfPoly, GfPoly) {
        let b = self.poly_trim(b.to_vec());
        let db = b.len().checked_sub(1).expect("division by zero polynomial");
        let mut r = self.poly_trim(a.to_vec());
        if r.len() <= db {
            return (Vec::new(), r);
        }
        let lead_inv = self.inv(&b[db]);
        let mut q = vec![self.zero(); r.len() - db];
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = self.mul(&r[r.len() - 1], &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = self.sub(&r[k + j], &self.mul(&c, bj));
            }
            q[k] = c;
            r = self.poly_trim(r);
        }
        (self.poly_trim(q), r)
    }

    pub fn poly_rem(&self, a: &[Gf], b: &[Gf]) -> GfPoly {
        self.poly_divrem(a, b).1
    }

    pub fn poly_monic(&self, a: &[Gf]) -> GfPoly {
        let a = self.poly_trim(a.to_vec());
        match a.last() {
            None => a,
            Some(l) => {
                let inv = self.inv(l);
                self.poly_scale(&a, &inv)
            }
        }
    }

    /// Monic gcd.
    pub fn poly_gcd(&self, a: &[Gf], b: &[Gf]) -> GfPoly {
        let mut x = self.poly_trim(a.to_vec());
        let mut y = self.poly_trim(b.to_vec());
        while !y.is_empty() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` not normalized.
    pub fn poly_xgcd(&self, a: &[Gf], b: &[Gf]) -> (GfPoly, GfPoly, GfPoly) {
        let (mut r0, mut r1) = (self.poly_trim(a.to_vec()), self.poly_trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![self.one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![self.one()]);
        while !r1.is_empty() {
            let (q, r) = self.poly_divrem(&r0, &r1);
            let s = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            let t = self.poly_sub(&t0, &self.poly_mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        (r0, s0, t0)
    }

    pub fn poly_derivative(&self, a: &[Gf]) -> GfPoly {
        let r = a.iter().enumerate().skip(1).map(|(i, c)| self.mul(c, &self.from_i64(i as i64))).collect();
        self.poly_trim(r)
    }

    pub fn poly_eval(&self, a: &[Gf], x: &Gf) -> Gf {
        a.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn poly_powmod(&self, a: &[Gf], e: &BigUint, m: &[Gf]) -> GfPoly {
        let mut result = vec![self.one()];
        let base = self.poly_rem(a, m);
        for i in (0..e.bits()).rev() {
            result = self.poly_rem(&self.poly_mul(&result, &result), m);
            if e.bit(i) {
                result = self.poly_rem(&self.poly_mul(&result, &base), m);
            }
        }
        self.poly_rem(&result, m)
    }

    pub fn format_poly(&self, a: &[Gf], var: &str) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.is_zero(c))
            .map(|(i, c)| {
                let c = self.format(c);
                match i {
                    0 => c,
                    _ if c == "1" && i == 1 => var.to_string(),
                    _ if c == "1" => format!("{var}^{i}"),
                    1 => format!("{c}*{var}"),
                    _ => format!("{c}*{var}^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    // ---- factorization -----------------------------------------------------

    /// Monic irreducible factors with multiplicities, sorted by degree and then
    /// by coefficients. `a` must be nonzero.
    pub fn factor(&self, a: &[Gf]) -> Vec<(GfPoly, usize)> {
        let a = self.poly_monic(a);
        assert!(!a.is_empty(), "factoring the zero polynomial");
        let mut out = Vec::new();
        for (part, mult) in self.squarefree_decomposition(&a) {
            for (g, d) in self.distinct_degree(&part) {
                for h in self.equal_degree(&g, d) {
                    out.push((h, mult));
                }
            }
        }
        out.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0)));
        out
    }

    pub fn is_irreducible(&self, a: &[Gf]) -> bool {
        let a = self.poly_trim(a.to_vec());
        if a.len() < 2 {
            return false;
        }
        let f = self.factor(&a);
        f.len() == 1 && f[0].1 == 1
    }

    /// Least monic irreducible of the given degree in enumeration order.
    pub fn least_irreducible(&self, degree: usize) -> GfPoly {
        let mut idx = 0u64;
        loop {
            let mut coeffs = Vec::with_capacity(degree + 1);
            let mut rest = idx;
            let q = self.order_u64().unwrap_or(u64::MAX);
            for _ in 0..degree {
                coeffs.push(self.element_from_index(rest % q));
                rest /= q;
            }
            coeffs.push(self.one());
            if self.is_irreducible(&coeffs) {
                return coeffs;
            }
            idx += 1;
        }
    }

    fn squarefree_decomposition(&self, a: &[Gf]) -> Vec<(GfPoly, usize)> {
        let mut out = Vec::new();
        if a.len() <= 1 {
            return out;
        }
        let p = self.characteristic() as usize;
        let da = self.poly_derivative(a);
        let mut c = self.poly_gcd(a, &da);
        let mut w = self.poly_divrem(a, &c).0;
        let mut i = 1;
        while w.len() > 1 {
            let y = self.poly_gcd(&w, &c);
            let fac = self.poly_divrem(&w, &y).0;
            if fac.len() > 1 {
                out.push((self.poly_monic(&fac), i));
            }
            w = y;
            c = self.poly_divrem(&c, &w).0;
            i += 1;
        }
        if c.len() > 1 {
            let root: GfPoly = c.iter().step_by(p).map(|x| self.pth_root(x)).collect();
            for (g, j) in self.squarefree_decomposition(&root) {
                out.push((g, j * p));
            }
        }
        out
    }

    fn distinct_degree(&self, a: &[Gf]) -> Vec<(GfPoly, usize)> {
        let q = self.order();
        let x = vec![self.zero(), self.one()];
        let mut out = Vec::new();
        let mut f = self.poly_monic(a);
        let mut h = x.clone();
        let mut d = 1;
        while f.len() > 2 * d {
            h = self.poly_powmod(&h, &q, &f);
            let g = self.poly_gcd(&f, &self.poly_sub(&h, &x));
            if g.len() > 1 {
                f = self.poly_divrem(&f, &g).0;
                h = self.poly_rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    fn equal_degree(&self, a: &[Gf], d: usize) -> Vec<GfPoly> {
        let n = a.len() - 1;
        if n == d {
            return vec![self.poly_monic(a)];
        }
        let odd = self.characteristic() != 2;
        let qd = self.order().pow(d as u32);
        let exponent = (&qd - BigUint::one()) >> 1;
        let trace_len = self.degree() as usize * d;
        let q_small = self.order_u64().unwrap_or(u64::MAX);
        let mut state = 0x9E37_79B9_7F4A_7C15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        loop {
            let b: GfPoly = (0..n).map(|_| self.element_from_index(next() % q_small)).collect();
            let b = self.poly_trim(b);
            if b.len() < 2 {
                continue;
            }
            let candidate = if odd {
                let s = self.poly_powmod(&b, &exponent, a);
                self.poly_gcd(a, &self.poly_sub(&s, &[self.one()]))
            } else {
                let mut t = self.poly_rem(&b, a);
                let mut acc = t.clone();
                for _ in 1..trace_len {
                    t = self.poly_rem(&self.poly_mul(&t, &t), a);
                    acc = self.poly_add(&acc, &t);
                }
                self.poly_gcd(a, &acc)
            };
            if candidate.len() > 1 && candidate.len() < a.len() {
                let rest = self.poly_divrem(a, &candidate).0;
                let mut out = self.equal_degree(&candidate, d);
                out.extend(self.equal_degree(&rest, d));
                return out;
            }
        }
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Repr::Prime(p) => write!(f, "F_{p}"),
            Repr::Ext { degree, .. } => write!(f, "F_{}^{}", self.characteristic(), degree),
        }
    }
}
