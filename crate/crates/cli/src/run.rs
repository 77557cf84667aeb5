//! Dispatch of a parsed problem to the engines.

use knaf_core::gf::{FiniteField, Gf};
use knaf_core::localsplit::{
    split_extensions, to_extension_invariants, FunctionField, PadicRationals, RatFunc, SplitError, ValuedField,
};
use knaf_core::monoval::{extend_binomial, BaseField, BinomialExtensionSpec, MonoError, MonomialValuation, Scalar};
use knaf_core::ordgroup::{
    coset_representatives, initial_set, subgroup_index, GroupError, GroupIndex, LexGroup, RationalVector,
};
use knaf_core::raminv::{knaf_decide, ExtensionInvariants, RamError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::expr::{Expr, Ring};
use crate::fixtures;
use crate::problem::{ConstantField, DecideSource, ExtensionData, Problem, ProblemFile, SplitBase};
use crate::report::ReportRow;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;

/// A run that could not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    /// One diagnostic per line.
    pub messages: Vec<String>,
}

impl Failure {
    pub fn usage(m: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, messages: vec![m.into()] }
    }

    fn inconsistent(messages: Vec<String>) -> Self {
        Failure { code: EXIT_INCONSISTENT, messages }
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::inconsistent(vec![e.to_string()])
    }
}

impl From<RamError> for Failure {
    fn from(e: RamError) -> Self {
        match e {
            RamError::Group(g) => g.into(),
            RamError::Inconsistent(v) => Failure::inconsistent(v.iter().map(ToString::to_string).collect()),
        }
    }
}

impl From<SplitError> for Failure {
    fn from(e: SplitError) -> Self {
        let code = match e {
            SplitError::Unresolved { .. } => EXIT_UNRESOLVED,
            SplitError::Inconsistent(_) => EXIT_INCONSISTENT,
            SplitError::NotMonic | SplitError::NotSquarefree | SplitError::Inseparable(_) => EXIT_USAGE,
        };
        Failure { code, messages: vec![e.to_string()] }
    }
}

impl From<MonoError> for Failure {
    fn from(e: MonoError) -> Self {
        match e {
            MonoError::Group(g) => g.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

/// Group-mode result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSummary {
    pub index: GroupIndex,
    /// `None` when the index is infinite.
    pub eps: Option<u64>,
    pub cosets: Vec<RationalVector>,
    pub initial_set: Vec<RationalVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Group(GroupSummary),
    Rows(Vec<ReportRow>),
}

/// Runs a problem. Rows come out in engine order, which is deterministic.
pub fn run(problem: &ProblemFile, depth_limit: usize) -> Result<Outcome, Failure> {
    let label = problem.label.clone();
    match &problem.body {
        Problem::Group { gamma_nu, gamma_omega } => {
            let nu = group(gamma_nu)?;
            let omega = group(gamma_omega)?;
            group_summary(&omega, &nu).map(Outcome::Group)
        }
        Problem::Decide(DecideSource::Fixture(name)) => {
            let fx = fixtures::find(name).ok_or_else(|| Failure::usage(format!("unknown fixture '{name}'")))?;
            let ext = (fx.build)();
            let label = label.unwrap_or_else(|| fx.name.to_string());
            Ok(Outcome::Rows(vec![decide_row(label, &ext)?]))
        }
        Problem::Decide(DecideSource::Data(d)) => {
            let ext = extension_from_data(d)?;
            Ok(Outcome::Rows(vec![decide_row(label.unwrap_or_else(|| "extension".into()), &ext)?]))
        }
        Problem::Split { base, coeffs } => {
            let exts = split(base, coeffs, depth_limit)?;
            rows(label.unwrap_or_else(|| "split".into()), &exts).map(Outcome::Rows)
        }
        Problem::Binomial { field, weight_x, weight_y, n, a, b, c } => {
            let exts = binomial(field, weight_x, weight_y, *n, *a, *b, c)?;
            rows(label.unwrap_or_else(|| "binomial".into()), &exts).map(Outcome::Rows)
        }
    }
}

pub fn group(gens: &[RationalVector]) -> Result<LexGroup, Failure> {
    let rank = gens.first().map_or(0, RationalVector::len);
    Ok(LexGroup::new(rank, gens.to_vec())?)
}

pub fn group_summary(omega: &LexGroup, nu: &LexGroup) -> Result<GroupSummary, Failure> {
    let index = subgroup_index(omega, nu)?;
    if index == GroupIndex::Infinite {
        return Ok(GroupSummary { index, eps: None, cosets: Vec::new(), initial_set: Vec::new() });
    }
    let cosets = coset_representatives(omega, nu)?.representatives;
    let initial = initial_set(omega, nu)?;
    Ok(GroupSummary { index, eps: Some(initial.len() as u64), cosets, initial_set: initial })
}

pub fn extension_from_data(d: &ExtensionData) -> Result<ExtensionInvariants, Failure> {
    Ok(ExtensionInvariants {
        gamma_nu: group(&d.gamma_nu)?,
        gamma_omega: group(&d.gamma_omega)?,
        residue_degree: d.residue_degree,
        local_degree: d.local_degree,
        residue_char: d.residue_char,
        total_degree: d.total_degree,
        provenance: d.provenance.clone().unwrap_or_default(),
    })
}

pub fn decide_row(label: String, ext: &ExtensionInvariants) -> Result<ReportRow, Failure> {
    let verdict = knaf_decide(ext)?;
    Ok(ReportRow::new(label, verdict, ext.provenance.clone()))
}

fn rows(base: String, exts: &[ExtensionInvariants]) -> Result<Vec<ReportRow>, Failure> {
    let single = exts.len() == 1;
    exts.iter()
        .enumerate()
        .map(|(i, ext)| {
            let label = if single { base.clone() } else { format!("{base}#{}", i + 1) };
            decide_row(label, ext)
        })
        .collect()
}

// ---- evaluation of expressions ---------------------------------------------------

/// `(p, k)` with `q = p^k`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0 || d.saturating_mul(*d) > q).filter(|d| q % d == 0).unwrap_or(q);
    let (mut rest, mut k) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn finite_field(q: u64) -> Result<FiniteField, Failure> {
    let (p, k) = prime_power(q).ok_or_else(|| Failure::usage(format!("q = {q} is not a prime power")))?;
    Ok(FiniteField::galois(p, k))
}

struct Rationals;

impl Ring for Rationals {
    type V = BigRational;

    fn num(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn var(&self, c: char) -> Result<BigRational, String> {
        Err(format!("'{c}' is not defined over Q"))
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

    fn div(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, String> {
        if b.is_zero() {
            return Err("division by zero".into());
        }
        Ok(a / b)
    }
}

fn reduce_int(f: &FiniteField, n: &BigInt) -> Gf {
    let p = BigInt::from(f.characteristic());
    let r = ((n % &p) + &p) % &p;
    f.from_i64(r.to_i64().expect("residue fits"))
}

fn generator(f: &FiniteField) -> Result<Gf, String> {
    if f.degree() > 1 {
        Ok(f.generator())
    } else {
        Err(format!("'a' is only defined when q is a proper prime power (q = {})", f.characteristic()))
    }
}

struct Constants<'a>(&'a FiniteField);

impl Ring for Constants<'_> {
    type V = Gf;

    fn num(&self, n: &BigInt) -> Gf {
        reduce_int(self.0, n)
    }

    fn var(&self, c: char) -> Result<Gf, String> {
        match c {
            'a' => generator(self.0),
            _ => Err(format!("'{c}' is not a constant")),
        }
    }

    fn add(&self, a: &Gf, b: &Gf) -> Gf {
        self.0.add(a, b)
    }

    fn neg(&self, a: &Gf) -> Gf {
        self.0.neg(a)
    }

    fn mul(&self, a: &Gf, b: &Gf) -> Gf {
        self.0.mul(a, b)
    }

    fn div(&self, a: &Gf, b: &Gf) -> Result<Gf, String> {
        if self.0.is_zero(b) {
            return Err("division by zero".into());
        }
        Ok(self.0.div(a, b))
    }
}

/// Arithmetic in `F_q(t)`; the valuation of the wrapped field plays no role.
struct RationalFunctions<'a>(&'a FunctionField);

impl Ring for RationalFunctions<'_> {
    type V = RatFunc;

    fn num(&self, n: &BigInt) -> RatFunc {
        self.0.poly(vec![reduce_int(self.0.constants(), n)])
    }

    fn var(&self, c: char) -> Result<RatFunc, String> {
        let f = self.0.constants();
        match c {
            't' => Ok(self.0.poly(vec![f.zero(), f.one()])),
            _ => Ok(self.0.poly(vec![generator(f)?])),
        }
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.0.add(a, b)
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        self.0.neg(a)
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.0.mul(a, b)
    }

    fn div(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc, String> {
        if self.0.is_zero(b) {
            return Err("division by zero".into());
        }
        Ok(self.0.mul(a, &self.0.inv(b)))
    }
}

fn eval_all<R: Ring>(r: &R, exprs: &[Expr]) -> Result<Vec<R::V>, Failure> {
    exprs.iter().map(|e| e.eval(r).map_err(|m| Failure::usage(format!("{m} in '{e}'")))).collect()
}

pub fn split(base: &SplitBase, coeffs: &[Expr], depth_limit: usize) -> Result<Vec<ExtensionInvariants>, Failure> {
    match base {
        SplitBase::Rationals { p } => {
            let k = PadicRationals::new(*p).map_err(|e| Failure::usage(e.to_string()))?;
            let g = eval_all(&Rationals, coeffs)?;
            split_over(&k, &g, depth_limit)
        }
        SplitBase::Function { q: None, .. } => {
            Err(Failure::usage("function fields over Q(t) are not supported; give a prime power q"))
        }
        SplitBase::Function { q: Some(q), uniformizer } => {
            let fq = finite_field(*q)?;
            let t = FunctionField::new(fq.clone(), vec![fq.zero(), fq.one()]).expect("t is irreducible");
            let pi = eval_all(&RationalFunctions(&t), std::slice::from_ref(uniformizer))?.remove(0);
            if pi.den.len() != 1 {
                return Err(Failure::usage(format!("uniformizer '{uniformizer}' is not a polynomial")));
            }
            let k = FunctionField::new(fq.clone(), pi.num).map_err(|e| Failure::usage(e.to_string()))?;
            let g = eval_all(&RationalFunctions(&k), coeffs)?;
            split_over(&k, &g, depth_limit)
        }
    }
}

fn split_over<K: ValuedField>(k: &K, g: &[K::Elem], depth_limit: usize) -> Result<Vec<ExtensionInvariants>, Failure> {
    let factors = split_extensions(k, g, depth_limit)?;
    let n = g.len().saturating_sub(1) as u64;
    Ok(factors.iter().map(|lf| to_extension_invariants(k, lf, n)).collect())
}

pub fn binomial(
    field: &ConstantField,
    weight_x: &RationalVector,
    weight_y: &RationalVector,
    n: u64,
    a: i64,
    b: i64,
    c: &Expr,
) -> Result<Vec<ExtensionInvariants>, Failure> {
    let (base, c) = match field {
        ConstantField::Rationals => {
            (BaseField::Rationals, Scalar::Rational(eval_all(&Rationals, std::slice::from_ref(c))?.remove(0)))
        }
        ConstantField::Finite { q } => {
            let f = finite_field(*q)?;
            let c = eval_all(&Constants(&f), std::slice::from_ref(c))?.remove(0);
            (BaseField::Finite(f), Scalar::Finite(c))
        }
    };
    let v = MonomialValuation::new(base, weight_x.clone(), weight_y.clone())?;
    Ok(extend_binomial(&v, &BinomialExtensionSpec { n, a, b, c })?)
}
