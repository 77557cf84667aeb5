//! Ramification invariants of one extension of valuations and the
//! finite-type verdict.
//!
//! An extension is described by data only: the two value groups, the residue
//! degree `f`, the degree of the extension of Henselizations, the residue
//! characteristic and optionally the global degree. From these
//!
//! * `e = [Γω : Γν]`,
//! * `ε = #{x ∈ Γω : 0 <= x < Γν,>0}`,
//! * `d = [L^h : K^h] / (e f)`,
//!
//! and the valuation ring of `ω` is essentially of finite type over that of
//! `ν` exactly when `d = 1` and `ε = e`.

use std::fmt;

use thiserror::Error;

use crate::ordgroup::{initial_index, subgroup_index, GroupError, GroupIndex, LexGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("inconsistent extension data: {}", join_violations(.0))]
    Inconsistent(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One failed consistency rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Group(GroupError),
    InfiniteIndex,
    ZeroGroup,
    ZeroDegree(&'static str),
    ResidueCharNotPrime(u64),
    FundamentalInequality { e: u64, f: u64, total: u64 },
    LocalExceedsTotal { local: u64, total: u64 },
    NonIntegralDefect { e: u64, f: u64, local: u64 },
    DefectInCharZero { d: u64 },
    DefectNotPower { d: u64, p: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Group(g) => write!(f, "{g}"),
            Violation::InfiniteIndex => write!(f, "gamma_nu has infinite index in gamma_omega"),
            Violation::ZeroGroup => write!(f, "gamma_nu is the zero group"),
            Violation::ZeroDegree(what) => write!(f, "{what} must be positive"),
            Violation::ResidueCharNotPrime(p) => write!(f, "residue characteristic {p} is neither 0 nor prime"),
            Violation::FundamentalInequality { e, f: ff, total } => {
                write!(f, "e*f = {e}*{ff} = {} exceeds [L:K] = {total}", e * ff)
            }
            Violation::LocalExceedsTotal { local, total } => {
                write!(f, "local degree {local} exceeds [L:K] = {total}")
            }
            Violation::NonIntegralDefect { e, f: ff, local } => {
                write!(f, "e*f = {} does not divide local degree {local}", e * ff)
            }
            Violation::DefectInCharZero { d } => write!(f, "defect {d} != 1 in residue characteristic 0"),
            Violation::DefectNotPower { d, p } => write!(f, "defect {d} is not a power of {p}"),
        }
    }
}

/// Data describing one extension `ω/ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInvariants {
    pub gamma_nu: LexGroup,
    pub gamma_omega: LexGroup,
    /// `f = [κω : κν]`
    pub residue_degree: u64,
    /// `[L^h : K^h]`
    pub local_degree: u64,
    /// 0 or a prime.
    pub residue_char: u64,
    /// `[L : K]`, when known.
    pub total_degree: Option<u64>,
    pub provenance: String,
}

/// Outcome of [`knaf_decide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnafVerdict {
    pub e: u64,
    pub f: u64,
    pub eps: u64,
    pub d: u64,
    pub defectless: bool,
    pub initial_condition: bool,
    pub eft: bool,
}

impl KnafVerdict {
    /// Short reason for the verdict.
    pub fn reason(&self) -> String {
        match (self.defectless, self.initial_condition) {
            (true, true) => "defectless and ε=e".to_string(),
            (false, true) => format!("defect d={} != 1", self.d),
            (true, false) => format!("ε={} < e={}", self.eps, self.e),
            (false, false) => format!("defect d={} != 1 and ε={} < e={}", self.d, self.eps, self.e),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

pub(crate) fn is_power_of(mut d: u64, p: u64) -> bool {
    if d == 0 {
        return false;
    }
    while d % p == 0 {
        d /= p;
    }
    d == 1
}

/// `e = [Γω : Γν]`.
pub fn ramification_index(ext: &ExtensionInvariants) -> Result<u64, RamError> {
    match subgroup_index(&ext.gamma_omega, &ext.gamma_nu)? {
        GroupIndex::Finite(e) => Ok(e),
        GroupIndex::Infinite => Err(GroupError::InfiniteIndex.into()),
    }
}

fn defect_from(e: u64, f: u64, ext: &ExtensionInvariants) -> Result<u64, Violation> {
    let ef = e.checked_mul(f).filter(|&ef| ef > 0).ok_or(Violation::ZeroDegree("e*f"))?;
    if ext.local_degree % ef != 0 {
        return Err(Violation::NonIntegralDefect { e, f, local: ext.local_degree });
    }
    let d = ext.local_degree / ef;
    match ext.residue_char {
        0 if d != 1 => Err(Violation::DefectInCharZero { d }),
        p if p > 0 && is_prime(p) && !is_power_of(d, p) => Err(Violation::DefectNotPower { d, p }),
        _ => Ok(d),
    }
}

/// `d = [L^h : K^h] / (e f)`, checked against the residue characteristic.
pub fn defect(ext: &ExtensionInvariants) -> Result<u64, RamError> {
    let e = ramification_index(ext)?;
    defect_from(e, ext.residue_degree, ext).map_err(|v| RamError::Inconsistent(vec![v]))
}

/// Every consistency rule that fails; empty when the data is consistent.
pub fn validate(ext: &ExtensionInvariants) -> Vec<Violation> {
    let mut out = Vec::new();
    if ext.residue_degree == 0 {
        out.push(Violation::ZeroDegree("residue degree"));
    }
    if ext.local_degree == 0 {
        out.push(Violation::ZeroDegree("local degree"));
    }
    if ext.total_degree == Some(0) {
        out.push(Violation::ZeroDegree("total degree"));
    }
    if ext.residue_char != 0 && !is_prime(ext.residue_char) {
        out.push(Violation::ResidueCharNotPrime(ext.residue_char));
    }
    if let Some(total) = ext.total_degree {
        if total > 0 && ext.local_degree > total {
            out.push(Violation::LocalExceedsTotal { local: ext.local_degree, total });
        }
    }
    let e = match subgroup_index(&ext.gamma_omega, &ext.gamma_nu) {
        Ok(GroupIndex::Finite(e)) => e,
        Ok(GroupIndex::Infinite) => {
            out.push(Violation::InfiniteIndex);
            return out;
        }
        Err(g) => {
            out.push(Violation::Group(g));
            return out;
        }
    };
    if ext.gamma_nu.is_zero() {
        out.push(Violation::ZeroGroup);
    }
    let f = ext.residue_degree;
    if let Some(total) = ext.total_degree {
        if total > 0 && e.saturating_mul(f) > total {
            out.push(Violation::FundamentalInequality { e, f, total });
        }
    }
    if f > 0 && ext.local_degree > 0 {
        if let Err(v) = defect_from(e, f, ext) {
            out.push(v);
        }
    }
    out
}

/// Decide whether the valuation ring of `ω` is essentially of finite type
/// over that of `ν`.
pub fn knaf_decide(ext: &ExtensionInvariants) -> Result<KnafVerdict, RamError> {
    let violations = validate(ext);
    if !violations.is_empty() {
        return Err(RamError::Inconsistent(violations));
    }
    let e = ramification_index(ext)?;
    let f = ext.residue_degree;
    let d = defect_from(e, f, ext).map_err(|v| RamError::Inconsistent(vec![v]))?;
    let eps = initial_index(&ext.gamma_omega, &ext.gamma_nu)?;
    let defectless = d == 1;
    let initial_condition = eps == e;
    Ok(KnafVerdict { e, f, eps, d, defectless, initial_condition, eft: defectless && initial_condition })
}

/// The value group input of [`frobenius_defect`]: either an explicit group,
/// or the index `[Γ : pΓ]` declared directly for groups that are not finitely
/// generated (such as `Z[1/p]`, where it is 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrobeniusGroup {
    Lattice(LexGroup),
    DeclaredIndex(u64),
}

/// Defect of `ν/ν^p` for a valued field of characteristic `p`:
/// `[K:K^p] / ([Γ:pΓ] [κ:κ^p])`.
pub fn frobenius_defect(
    k_degree: u64,
    gamma: &FrobeniusGroup,
    kappa_insep_degree: u64,
    p: u64,
) -> Result<u64, RamError> {
    let bad = |v: Violation| RamError::Inconsistent(vec![v]);
    if !is_prime(p) {
        return Err(bad(Violation::ResidueCharNotPrime(p)));
    }
    if !is_power_of(k_degree, p) {
        return Err(bad(Violation::DefectNotPower { d: k_degree, p }));
    }
    if kappa_insep_degree == 0 {
        return Err(bad(Violation::ZeroDegree("[κ:κ^p]")));
    }
    let group_index = match gamma {
        FrobeniusGroup::DeclaredIndex(0) => return Err(bad(Violation::ZeroDegree("[Γ:pΓ]"))),
        FrobeniusGroup::DeclaredIndex(i) => *i,
        FrobeniusGroup::Lattice(g) => {
            let pg = g.scaled(&num_rational::BigRational::from_integer(p.into()));
            subgroup_index(g, &pg)?.finite().ok_or(GroupError::InfiniteIndex)?
        }
    };
    let denom = group_index.saturating_mul(kappa_insep_degree);
    if k_degree % denom != 0 {
        return Err(bad(Violation::NonIntegralDefect { e: group_index, f: kappa_insep_degree, local: k_degree }));
    }
    Ok(k_degree / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordgroup::RationalVector;

    fn ext(nu: LexGroup, omega: LexGroup, f: u64, ld: u64, p: u64, total: Option<u64>) -> ExtensionInvariants {
        ExtensionInvariants {
            gamma_nu: nu,
            gamma_omega: omega,
            residue_degree: f,
            local_degree: ld,
            residue_char: p,
            total_degree: total,
            provenance: "test".into(),
        }
    }

    fn z() -> LexGroup {
        LexGroup::integer_lattice(1)
    }

    fn half_x() -> LexGroup {
        LexGroup::new(2, vec![RationalVector::from_fracs(&[(1, 2), (0, 1)]), RationalVector::from_ints(&[0, 1])])
            .unwrap()
    }

    #[test]
    fn ramification_index_examples() {
        assert_eq!(ramification_index(&ext(z(), z(), 1, 1, 0, None)).unwrap(), 1);
        assert_eq!(ramification_index(&ext(z(), LexGroup::cyclic_fraction(2), 1, 2, 0, None)).unwrap(), 2);
        let omega = LexGroup::new(
            2,
            vec![RationalVector::from_fracs(&[(1, 2), (0, 1)]), RationalVector::from_fracs(&[(0, 1), (1, 3)])],
        )
        .unwrap();
        assert_eq!(ramification_index(&ext(LexGroup::integer_lattice(2), omega, 1, 6, 0, None)).unwrap(), 6);
    }

    #[test]
    fn defect_examples() {
        let half = LexGroup::cyclic_fraction(2);
        assert_eq!(defect(&ext(z(), half.clone(), 1, 2, 0, None)).unwrap(), 1);
        assert_eq!(defect(&ext(z(), z(), 1, 7, 7, None)).unwrap(), 7);
        assert!(matches!(
            defect(&ext(z(), half, 1, 3, 0, None)),
            Err(RamError::Inconsistent(v)) if matches!(v[0], Violation::NonIntegralDefect { .. })
        ));
    }

    #[test]
    fn validate_examples() {
        let half = LexGroup::cyclic_fraction(2);
        assert!(validate(&ext(z(), half.clone(), 1, 2, 0, Some(2))).is_empty());
        let v = validate(&ext(z(), half, 2, 2, 0, Some(2)));
        assert!(v.iter().any(|x| matches!(x, Violation::FundamentalInequality { e: 2, f: 2, total: 2 })));
        let v = validate(&ext(z(), z(), 1, 3, 5, Some(3)));
        assert_eq!(v, vec![Violation::DefectNotPower { d: 3, p: 5 }]);
    }

    #[test]
    fn validate_reports_everything_at_once() {
        let v = validate(&ext(z(), z(), 1, 5, 4, Some(3)));
        assert!(v.contains(&Violation::ResidueCharNotPrime(4)));
        assert!(v.contains(&Violation::LocalExceedsTotal { local: 5, total: 3 }));
        let not_sub = ext(LexGroup::cyclic_fraction(2), z(), 1, 1, 0, None);
        assert!(matches!(validate(&not_sub)[0], Violation::Group(GroupError::NotSubgroup(_))));
    }

    #[test]
    fn knaf_examples() {
        let v = knaf_decide(&ext(z(), LexGroup::cyclic_fraction(2), 1, 2, 0, None)).unwrap();
        assert_eq!((v.e, v.f, v.eps, v.d, v.eft), (2, 1, 2, 1, true));
        let v = knaf_decide(&ext(LexGroup::integer_lattice(2), half_x(), 1, 2, 0, None)).unwrap();
        assert_eq!((v.e, v.f, v.eps, v.d, v.eft), (2, 1, 1, 1, false));
        assert_eq!(v.reason(), "ε=1 < e=2");
        let v = knaf_decide(&ext(z(), z(), 1, 3, 3, None)).unwrap();
        assert_eq!((v.e, v.f, v.eps, v.d, v.eft), (1, 1, 1, 3, false));
        assert!(!v.defectless && v.initial_condition);
    }

    #[test]
    fn knaf_propagates_violations() {
        let err = knaf_decide(&ext(z(), z(), 1, 3, 0, None)).unwrap_err();
        assert_eq!(err, RamError::Inconsistent(vec![Violation::DefectInCharZero { d: 3 }]));
    }

    #[test]
    fn frobenius_examples() {
        for p in [2u64, 3, 5] {
            assert_eq!(frobenius_defect(p, &FrobeniusGroup::Lattice(z()), 1, p).unwrap(), 1);
            let z2 = FrobeniusGroup::Lattice(LexGroup::integer_lattice(2));
            assert_eq!(frobenius_defect(p * p, &z2, 1, p).unwrap(), 1);
            assert_eq!(frobenius_defect(p, &FrobeniusGroup::DeclaredIndex(1), 1, p).unwrap(), p);
        }
        assert!(frobenius_defect(6, &FrobeniusGroup::DeclaredIndex(1), 1, 3).is_err());
        assert!(frobenius_defect(3, &FrobeniusGroup::Lattice(LexGroup::integer_lattice(2)), 1, 3).is_err());
    }
}
