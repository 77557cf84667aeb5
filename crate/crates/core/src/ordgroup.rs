//! Finitely generated subgroups of `Q^r` under the lexicographic order.
//!
//! A [`LexGroup`] stores a canonical basis: the generators are scaled by the
//! smallest integer `D` making them integral, Hermite-reduced, and scaled
//! back. Because `D` is determined by the group itself, two generating sets
//! give the same basis exactly when they span the same group.
//!
//! Everything that depends on the order (minimal positive elements, the
//! initial set) works one coordinate at a time on that echelon basis: the
//! first basis row is the only one with a nonzero leading coordinate, and the
//! remaining rows span the intersection with the kernel of that coordinate.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::intmat::{hermite_rows, lcm_all, smith_invariants};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ambient rank must be positive")]
    ZeroAmbientRank,
    #[error("not a subgroup: {0} is not in the larger group")]
    NotSubgroup(RationalVector),
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("the smaller group is zero")]
    ZeroGroup,
    #[error("index does not fit in 64 bits")]
    IndexOverflow,
}

/// A vector of exact rationals; compares lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        RationalVector(vec![BigRational::zero(); rank])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVector(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// Build from `(numerator, denominator)` pairs.
    pub fn from_fracs(coords: &[(i64, i64)]) -> Self {
        RationalVector(coords.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Lex sign: the sign of the first nonzero coordinate.
    pub fn is_positive(&self) -> bool {
        self.0.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_positive())
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        RationalVector(self.0.iter().map(|a| a * q).collect())
    }

    fn tail(&self) -> RationalVector {
        RationalVector(self.0[1..].to_vec())
    }

    fn prepend_zero(mut self) -> RationalVector {
        self.0.insert(0, BigRational::zero());
        self
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Lexicographic comparison; the first differing coordinate decides.
pub fn lex_compare(u: &RationalVector, v: &RationalVector) -> Result<Ordering, GroupError> {
    if u.len() != v.len() {
        return Err(GroupError::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    Ok(u.cmp(v))
}

/// Index of a subgroup; `Infinite` when the ranks differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupIndex {
    Finite(u64),
    Infinite,
}

impl GroupIndex {
    pub fn finite(self) -> Option<u64> {
        match self {
            GroupIndex::Finite(n) => Some(n),
            GroupIndex::Infinite => None,
        }
    }
}

impl fmt::Display for GroupIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupIndex::Finite(n) => write!(f, "{n}"),
            GroupIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Finitely generated subgroup of `Q^r`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LexGroup {
    rank: usize,
    basis: Vec<RationalVector>,
}

impl LexGroup {
    pub fn new(ambient_rank: usize, generators: Vec<RationalVector>) -> Result<Self, GroupError> {
        if ambient_rank == 0 {
            return Err(GroupError::ZeroAmbientRank);
        }
        for g in &generators {
            if g.len() != ambient_rank {
                return Err(GroupError::DimensionMismatch { expected: ambient_rank, found: g.len() });
            }
        }
        Ok(Self::canonical(ambient_rank, &generators))
    }

    /// `Z^r`.
    pub fn integer_lattice(rank: usize) -> Self {
        let gens: Vec<RationalVector> = (0..rank)
            .map(|i| {
                let mut v = vec![0i64; rank];
                v[i] = 1;
                RationalVector::from_ints(&v)
            })
            .collect();
        Self::canonical(rank, &gens)
    }

    /// `(1/n) Z` in rank one.
    pub fn cyclic_fraction(n: u64) -> Self {
        let g = RationalVector(vec![BigRational::new(BigInt::one(), BigInt::from(n))]);
        Self::canonical(1, &[g])
    }

    fn canonical(rank: usize, generators: &[RationalVector]) -> Self {
        let denom = lcm_all(generators.iter().flat_map(|g| g.0.iter().map(|c| c.denom())));
        let rows = generators.iter().map(|g| g.0.iter().map(|c| (c * &denom).to_integer()).collect()).collect();
        let scale = BigRational::new(BigInt::one(), denom);
        let basis = hermite_rows(rows, rank)
            .into_iter()
            .map(|r| RationalVector(r.into_iter().map(|x| BigRational::from_integer(x) * &scale).collect()))
            .collect();
        LexGroup { rank, basis }
    }

    pub fn ambient_rank(&self) -> usize {
        self.rank
    }

    /// Canonical (Hermite-reduced) basis.
    pub fn basis(&self) -> &[RationalVector] {
        &self.basis
    }

    /// Rank of the group as an abelian group.
    pub fn group_rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn scaled(&self, q: &BigRational) -> Self {
        let gens: Vec<_> = self.basis.iter().map(|b| b.scale(q)).collect();
        Self::canonical(self.rank, &gens)
    }

    pub fn join(&self, other: &LexGroup) -> Result<Self, GroupError> {
        self.check_rank(other.rank)?;
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Ok(Self::canonical(self.rank, &gens))
    }

    pub fn with_generator(&self, v: &RationalVector) -> Result<Self, GroupError> {
        self.check_rank(v.len())?;
        let mut gens = self.basis.clone();
        gens.push(v.clone());
        Ok(Self::canonical(self.rank, &gens))
    }

    fn check_rank(&self, found: usize) -> Result<(), GroupError> {
        if found != self.rank {
            Err(GroupError::DimensionMismatch { expected: self.rank, found })
        } else {
            Ok(())
        }
    }

    fn pivot(row: &RationalVector) -> usize {
        row.0.iter().position(|c| !c.is_zero()).expect("basis rows are nonzero")
    }

    /// Integer coordinates of `v` in the canonical basis, if `v` lies in the group.
    pub fn coordinates(&self, v: &RationalVector) -> Result<Option<Vec<BigInt>>, GroupError> {
        self.check_rank(v.len())?;
        let mut residual = v.clone();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let p = Self::pivot(row);
            let c = &residual.0[p] / &row.0[p];
            if !c.is_integer() {
                return Ok(None);
            }
            residual = residual.sub(&row.scale(&c));
            coords.push(c.to_integer());
        }
        Ok(residual.is_zero().then_some(coords))
    }

    pub fn contains(&self, v: &RationalVector) -> Result<bool, GroupError> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn is_subgroup_of(&self, big: &LexGroup) -> Result<bool, GroupError> {
        big.check_rank(self.rank)?;
        for b in &self.basis {
            if !big.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Hermite-canonical representative of `v + self`.
    pub fn reduce(&self, v: &RationalVector) -> RationalVector {
        let mut x = v.clone();
        for row in &self.basis {
            let p = Self::pivot(row);
            let q = BigRational::from_integer((&x.0[p] / &row.0[p]).floor().to_integer());
            if !q.is_zero() {
                x = x.sub(&row.scale(&q));
            }
        }
        x
    }

    /// The lex-least positive element. `None` for the zero group.
    pub fn min_positive(&self) -> Option<RationalVector> {
        // Elements whose leading coordinate sits at or past the deepest pivot
        // are exactly the multiples of the last row; pivots are positive.
        self.basis.last().cloned()
    }

    /// Splits off the first coordinate: the row with nonzero leading
    /// coordinate (if any) and the kernel, as a group in rank `r - 1`.
    fn split_first(&self) -> (Option<RationalVector>, Vec<RationalVector>) {
        let mut rows = self.basis.iter();
        let top = match self.basis.first() {
            Some(b) if !b.0[0].is_zero() => {
                rows.next();
                Some(b.clone())
            }
            _ => None,
        };
        (top, rows.map(RationalVector::tail).collect())
    }

    fn from_echelon(rank: usize, rows: Vec<RationalVector>) -> Self {
        Self::canonical(rank, &rows)
    }
}

impl fmt::Display for LexGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, b) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ">")
    }
}

fn require_subgroup(big: &LexGroup, small: &LexGroup) -> Result<(), GroupError> {
    big.check_rank(small.rank)?;
    for b in &small.basis {
        if !big.contains(b)? {
            return Err(GroupError::NotSubgroup(b.clone()));
        }
    }
    Ok(())
}

/// `[big : small]` via the Smith form of the coordinate matrix of `small`'s
/// basis in `big`'s basis.
pub fn subgroup_index(big: &LexGroup, small: &LexGroup) -> Result<GroupIndex, GroupError> {
    require_subgroup(big, small)?;
    if small.group_rank() != big.group_rank() {
        return Ok(GroupIndex::Infinite);
    }
    if big.is_zero() {
        return Ok(GroupIndex::Finite(1));
    }
    let matrix = small
        .basis
        .iter()
        .map(|b| big.coordinates(b).map(|c| c.expect("checked membership")))
        .collect::<Result<Vec<_>, _>>()?;
    let invariants = smith_invariants(matrix);
    if invariants.len() < big.group_rank() {
        return Ok(GroupIndex::Infinite);
    }
    let product: BigInt = invariants.iter().product();
    product.to_u64().map(GroupIndex::Finite).ok_or(GroupError::IndexOverflow)
}

/// Coset representatives of `small` in `big`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetList {
    pub representatives: Vec<RationalVector>,
    pub subgroup: LexGroup,
    pub supergroup: LexGroup,
}

/// Lex-least nonnegative element of `x + span(rows)`, where `rows` is an
/// echelon basis. `None` when the coset has no least nonnegative element.
fn least_nonneg_in_coset(x: &RationalVector, rows: &[RationalVector]) -> Option<RationalVector> {
    if x.is_empty() {
        return Some(x.clone());
    }
    let (top, kernel): (Option<&RationalVector>, &[RationalVector]) = match rows.first() {
        Some(r) if !r.0[0].is_zero() => (Some(r), &rows[1..]),
        _ => (None, rows),
    };
    let kernel_tail: Vec<RationalVector> = kernel.iter().map(RationalVector::tail).collect();
    match top {
        None => {
            let lead = &x.0[0];
            if lead.is_negative() {
                None
            } else if lead.is_positive() {
                kernel.is_empty().then(|| x.clone())
            } else {
                least_nonneg_in_coset(&x.tail(), &kernel_tail).map(RationalVector::prepend_zero)
            }
        }
        Some(g) => {
            let a = &g.0[0];
            let q = BigRational::from_integer((&x.0[0] / a).floor().to_integer());
            let y0 = x.sub(&g.scale(&q));
            if y0.0[0].is_positive() {
                return kernel.is_empty().then_some(y0);
            }
            if let Some(t) = least_nonneg_in_coset(&y0.tail(), &kernel_tail) {
                return Some(t.prepend_zero());
            }
            kernel.is_empty().then(|| y0.add(g))
        }
    }
}

/// All cosets of `small` in `big`. Each coset is represented by its lex-least
/// nonnegative element when one exists and otherwise by its Hermite-reduced
/// form; the zero coset is represented by `0`.
pub fn coset_representatives(big: &LexGroup, small: &LexGroup) -> Result<CosetList, GroupError> {
    let index = subgroup_index(big, small)?.finite().ok_or(GroupError::InfiniteIndex)?;
    let zero = RationalVector::zero(big.rank);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(small.reduce(&zero));
    queue.push_back(small.reduce(&zero));
    while let Some(r) = queue.pop_front() {
        for g in &big.basis {
            let next = small.reduce(&r.add(g));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    debug_assert_eq!(seen.len() as u64, index);
    let mut representatives: Vec<RationalVector> =
        seen.into_iter().map(|r| least_nonneg_in_coset(&r, &small.basis).unwrap_or(r)).collect();
    representatives.sort();
    Ok(CosetList { representatives, subgroup: small.clone(), supergroup: big.clone() })
}

fn check_initial_pre(gamma_omega: &LexGroup, gamma_nu: &LexGroup) -> Result<(), GroupError> {
    if gamma_nu.is_zero() {
        // still report a missing inclusion first
        require_subgroup(gamma_omega, gamma_nu)?;
        return Err(GroupError::ZeroGroup);
    }
    match subgroup_index(gamma_omega, gamma_nu)? {
        GroupIndex::Infinite => Err(GroupError::InfiniteIndex),
        GroupIndex::Finite(_) => Ok(()),
    }
}

fn initial_set_rec(rank: usize, omega: &LexGroup, nu: &LexGroup) -> Vec<RationalVector> {
    if rank == 0 {
        return vec![RationalVector(Vec::new())];
    }
    let (nu_top, nu_kernel) = nu.split_first();
    let (omega_top, omega_kernel) = omega.split_first();
    match nu_top {
        Some(g) if nu_kernel.is_empty() => {
            // gamma_nu = Z g with g > 0; gamma_omega is then cyclic too.
            let h = omega_top.expect("finite index forces a leading generator");
            let n = (&g.0[0] / &h.0[0]).to_integer();
            let h = if h.is_positive() { h } else { h.scale(&-BigRational::one()) };
            let mut out = Vec::new();
            let mut k = BigInt::zero();
            while k < n {
                out.push(h.scale(&BigRational::from_integer(k.clone())));
                k += 1;
            }
            out
        }
        _ => {
            let omega_k = LexGroup::from_echelon(rank - 1, omega_kernel);
            let nu_k = LexGroup::from_echelon(rank - 1, nu_kernel);
            initial_set_rec(rank - 1, &omega_k, &nu_k).into_iter().map(RationalVector::prepend_zero).collect()
        }
    }
}

/// The set `{x in gamma_omega : 0 <= x < y for every positive y in gamma_nu}`
/// in ascending lex order.
pub fn initial_set(gamma_omega: &LexGroup, gamma_nu: &LexGroup) -> Result<Vec<RationalVector>, GroupError> {
    check_initial_pre(gamma_omega, gamma_nu)?;
    let mut set = initial_set_rec(gamma_omega.rank, gamma_omega, gamma_nu);
    set.sort();
    Ok(set)
}

/// Cardinality of [`initial_set`].
pub fn initial_index(gamma_omega: &LexGroup, gamma_nu: &LexGroup) -> Result<u64, GroupError> {
    Ok(initial_set(gamma_omega, gamma_nu)?.len() as u64)
}

/// `gcd` of the numerators of a rational list divided by the lcm of the
/// denominators, i.e. the positive generator of the subgroup of `Q` they span.
pub fn rational_gcd(values: &[BigRational]) -> BigRational {
    let d = lcm_all(values.iter().map(|v| v.denom()));
    let n = values.iter().map(|v| (v * &d).to_integer()).fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    BigRational::new(n, d)
}
