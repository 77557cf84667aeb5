//! Rank-two monomial valuations on `k(x, y)` and the tame binomial
//! extensions `z^n = c x^a y^b`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::gf::{FiniteField, Gf};
use crate::ordgroup::{subgroup_index, GroupError, GroupIndex, LexGroup, RationalVector};
use crate::raminv::ExtensionInvariants;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("weights must be two vectors in Q^2")]
    BadWeights,
    #[error("weights {0} and {1} are linearly dependent")]
    DependentWeights(RationalVector, RationalVector),
    #[error("degree n must be positive")]
    ZeroDegree,
    #[error("coefficient c must be nonzero")]
    ZeroCoefficient,
    #[error("coefficient does not belong to the base field")]
    WrongField,
    #[error("wild binomial: characteristic {p} divides n = {n}")]
    Wild { n: u64, p: u64 },
    #[error("z^{n} - c*x^a*y^b is reducible: {reason}")]
    Reducible { n: u64, reason: String },
}

/// The constant field `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    Finite(FiniteField),
}

impl BaseField {
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Finite(f) => f.characteristic(),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Finite(k) => write!(f, "{k}"),
        }
    }
}

/// An element of `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Finite(Gf),
}

impl Scalar {
    fn is_zero_in(&self, field: &BaseField) -> bool {
        match (self, field) {
            (Scalar::Rational(q), _) => q.is_zero(),
            (Scalar::Finite(c), BaseField::Finite(f)) => f.is_zero(c),
            (Scalar::Finite(_), BaseField::Rationals) => false,
        }
    }
}

/// Polynomial in `x, y`; only the support matters for valuations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    pub terms: BTreeMap<(u64, u64), Scalar>,
}

impl BivariatePoly {
    pub fn from_terms(field: &BaseField, terms: impl IntoIterator<Item = ((u64, u64), Scalar)>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero_in(field)).collect();
        BivariatePoly { terms }
    }

    /// Sum of monomials with coefficient 1 in `Q`.
    pub fn monomials(exps: &[(u64, u64)]) -> Self {
        let one = Scalar::Rational(BigRational::from_integer(1.into()));
        BivariatePoly { terms: exps.iter().map(|&e| (e, one.clone())).collect() }
    }
}

/// `x^a y^b ↦ a w_x + b w_y`, extended by taking the lex-least value over
/// the monomials of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialValuation {
    field: BaseField,
    weight_x: RationalVector,
    weight_y: RationalVector,
    gamma: LexGroup,
}

impl MonomialValuation {
    pub fn new(field: BaseField, weight_x: RationalVector, weight_y: RationalVector) -> Result<Self, MonoError> {
        if weight_x.len() != 2 || weight_y.len() != 2 {
            return Err(MonoError::BadWeights);
        }
        let (u, v) = (weight_x.coords(), weight_y.coords());
        if (&u[0] * &v[1] - &u[1] * &v[0]).is_zero() {
            return Err(MonoError::DependentWeights(weight_x, weight_y));
        }
        let gamma = LexGroup::new(2, vec![weight_x.clone(), weight_y.clone()])?;
        Ok(MonomialValuation { field, weight_x, weight_y, gamma })
    }

    /// Standard lex weights `(1,0), (0,1)`.
    pub fn lex(field: BaseField) -> Self {
        Self::new(field, RationalVector::from_ints(&[1, 0]), RationalVector::from_ints(&[0, 1]))
            .expect("independent weights")
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn weight_x(&self) -> &RationalVector {
        &self.weight_x
    }

    pub fn weight_y(&self) -> &RationalVector {
        &self.weight_y
    }

    pub fn value_group(&self) -> &LexGroup {
        &self.gamma
    }

    fn monomial_value(&self, a: i64, b: i64) -> RationalVector {
        let a = BigRational::from_integer(a.into());
        let b = BigRational::from_integer(b.into());
        self.weight_x.scale(&a).add(&self.weight_y.scale(&b))
    }

    /// Same weights scaled by a positive rational.
    pub fn scaled(&self, q: &BigRational) -> Result<Self, MonoError> {
        Self::new(self.field.clone(), self.weight_x.scale(q), self.weight_y.scale(q))
    }
}

/// `None` stands for `+∞`.
pub fn mono_value(v: &MonomialValuation, poly: &BivariatePoly) -> Option<RationalVector> {
    poly.terms
        .iter()
        .filter(|(_, c)| !c.is_zero_in(&v.field))
        .map(|(&(a, b), _)| v.monomial_value(a as i64, b as i64))
        .min()
}

/// `z^n = c x^a y^b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialExtensionSpec {
    pub n: u64,
    pub a: i64,
    pub b: i64,
    pub c: Scalar,
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_int_power(n: &BigInt, l: u32) -> bool {
    if n.is_negative() {
        return l % 2 == 1 && is_int_power(&-n, l);
    }
    let r = n.nth_root(l);
    &num_traits::pow(r, l as usize) == n
}

/// Whether `c ∈ k^l`.
fn is_power(field: &BaseField, c: &Scalar, l: u64) -> Result<bool, MonoError> {
    match (field, c) {
        (BaseField::Rationals, Scalar::Rational(q)) => {
            let l = l as u32;
            Ok(is_int_power(q.numer(), l) && is_int_power(q.denom(), l))
        }
        (BaseField::Finite(f), Scalar::Finite(c)) => {
            let q1 = f.order() - 1u32;
            let g = q1.gcd(&l.into());
            Ok(f.is_one(&f.pow(c, &(q1 / g))))
        }
        _ => Err(MonoError::WrongField),
    }
}

fn minus_quarter(field: &BaseField, c: &Scalar) -> Scalar {
    match (field, c) {
        (BaseField::Finite(f), Scalar::Finite(c)) => Scalar::Finite(f.neg(&f.div(c, &f.from_i64(4)))),
        (_, Scalar::Rational(q)) => Scalar::Rational(-q / BigRational::from_integer(4.into())),
        (_, other) => other.clone(),
    }
}

/// The binomial irreducibility criterion for `z^n - c x^a y^b` over `k(x, y)`:
/// reducible exactly when the right side is an `l`-th power for a prime
/// `l | n`, or lies in `-4 K^4` when `4 | n`.
fn reducibility(field: &BaseField, spec: &BinomialExtensionSpec) -> Result<Option<String>, MonoError> {
    for l in prime_divisors(spec.n) {
        let li = l as i64;
        if spec.a % li == 0 && spec.b % li == 0 && is_power(field, &spec.c, l)? {
            return Ok(Some(format!("c*x^a*y^b is a {l}-th power")));
        }
    }
    if spec.n % 4 == 0 && spec.a % 4 == 0 && spec.b % 4 == 0 {
        let quarter = minus_quarter(field, &spec.c);
        if is_power(field, &quarter, 4)? {
            return Ok(Some("c*x^a*y^b lies in -4K^4".into()));
        }
    }
    Ok(None)
}

fn format_scalar(field: &BaseField, c: &Scalar) -> String {
    match (field, c) {
        (_, Scalar::Rational(q)) => q.to_string(),
        (BaseField::Finite(f), Scalar::Finite(c)) => f.format(c),
        (BaseField::Rationals, Scalar::Finite(c)) => format!("{c:?}"),
    }
}

/// The extensions of `v` to `k(x, y)(z)`, `z^n = c x^a y^b`, for tame
/// irreducible binomials.
///
/// With `w = (a w_x + b w_y)/n` the extension has value group
/// `Γ_ν + Z w`, `e = [Γ_ω : Γ_ν]`, and `θ = z^e / x^i y^j` (where
/// `e w = i w_x + j w_y`) has residual equation `θ^m = c`, `m = n/e`; the
/// monomial normalization contributes no further unit since `a = m i`,
/// `b = m j`.
pub fn extend_binomial(
    v: &MonomialValuation,
    spec: &BinomialExtensionSpec,
) -> Result<Vec<ExtensionInvariants>, MonoError> {
    if spec.n == 0 {
        return Err(MonoError::ZeroDegree);
    }
    if spec.c.is_zero_in(&v.field) {
        return Err(MonoError::ZeroCoefficient);
    }
    let p = v.field.characteristic();
    if p > 0 && spec.n % p == 0 {
        return Err(MonoError::Wild { n: spec.n, p });
    }
    if let Some(reason) = reducibility(&v.field, spec)? {
        return Err(MonoError::Reducible { n: spec.n, reason });
    }
    let n = BigRational::from_integer(spec.n.into());
    let w = v.monomial_value(spec.a, spec.b).scale(&n.recip());
    let gamma_omega = v.gamma.with_generator(&w)?;
    let e = match subgroup_index(&gamma_omega, &v.gamma)? {
        GroupIndex::Finite(e) => e,
        GroupIndex::Infinite => return Err(GroupError::InfiniteIndex.into()),
    };
    let m = spec.n / e;

    let residual_degrees: Vec<u64> = match (&v.field, &spec.c) {
        (BaseField::Finite(f), Scalar::Finite(c)) => {
            let mut t = vec![f.zero(); m as usize + 1];
            t[0] = f.neg(c);
            t[m as usize] = f.one();
            f.factor(&t).iter().map(|(g, _)| g.len() as u64 - 1).collect()
        }
        // irreducibility of the binomial forces T^m - c irreducible over k
        _ => vec![m],
    };

    let provenance = format!(
        "z^{} = {}*x^{}*y^{} over {}(x,y), weights {} {}",
        spec.n,
        format_scalar(&v.field, &spec.c),
        spec.a,
        spec.b,
        v.field,
        v.weight_x,
        v.weight_y
    );
    Ok(residual_degrees
        .into_iter()
        .map(|f| ExtensionInvariants {
            gamma_nu: v.gamma.clone(),
            gamma_omega: gamma_omega.clone(),
            residue_degree: f,
            local_degree: e * f,
            residue_char: p,
            total_degree: Some(spec.n),
            provenance: provenance.clone(),
        })
        .collect())
}
