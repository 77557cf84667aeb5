//! Extensions of a discrete rank-one valuation `v` on `K` to `K[x]/(g)`.
//!
//! The extensions correspond to the irreducible factors of `g` over the
//! completion. They are separated by Newton polygons and residual
//! polynomials, lifting MacLane key polynomials for residual factors that
//! are not simple. Each branch ends with a certificate: the key polynomial
//! tower, its slopes and the simple residual factor.

mod field;
mod maclane;

use std::fmt;

use num_rational::BigRational;

pub use field::{format_poly, BaseError, FunctionField, PadicRationals, RatFunc, ValuedField};

use crate::gf::GfPoly;
use crate::ordgroup::LexGroup;
use crate::raminv::ExtensionInvariants;
use maclane::{lower_hull, one_level, Chain, Level};

pub const DEFAULT_DEPTH_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("polynomial must be monic of positive degree")]
    NotMonic,
    #[error("polynomial is not squarefree (shares a factor with its derivative)")]
    NotSquarefree,
    #[error("polynomial is inseparable: it is a polynomial in x^{0}")]
    Inseparable(u64),
    #[error("depth limit {limit} exceeded on branch {branch}")]
    Unresolved { limit: usize, branch: String },
    #[error("inconsistent engine data: {0}")]
    Inconsistent(String),
}

/// One side of a Newton polygon. A side of slope `s` and length `ℓ`
/// accounts for `ℓ` roots of valuation `-s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygonSegment {
    pub slope: BigRational,
    pub length: u64,
}

/// One extension of the base valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFactor {
    pub e: u64,
    pub f: u64,
    pub degree: u64,
    pub certificate: String,
}

impl fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e={} f={} degree={} [{}]", self.e, self.f, self.degree, self.certificate)
    }
}

/// `v(a)`, with `None` for `+∞`.
pub fn value_of<K: ValuedField>(k: &K, a: &K::Elem) -> Option<i64> {
    k.valuation(a)
}

fn finite_points<K: ValuedField>(k: &K, g: &[K::Elem]) -> Vec<(i64, BigRational)> {
    g.iter()
        .enumerate()
        .filter_map(|(i, c)| k.valuation(c).map(|v| (i as i64, BigRational::from_integer(v.into()))))
        .collect()
}

/// Newton polygon of `g` with respect to `x`, sides left to right (zero roots
/// are skipped).
pub fn newton_polygon<K: ValuedField>(k: &K, g: &[K::Elem]) -> Vec<NewtonPolygonSegment> {
    lower_hull(&finite_points(k, g))
        .into_iter()
        .map(|(a, b, slope)| NewtonPolygonSegment { slope, length: (b - a) as u64 })
        .collect()
}

/// Residual polynomial of `g` along one side of its Newton polygon, in the
/// variable `T = x^e / π^h` where the slope is `-h/e` in lowest terms.
pub fn residual_polynomial<K: ValuedField>(k: &K, g: &[K::Elem], seg: &NewtonPolygonSegment) -> GfPoly {
    let x = vec![k.zero(), k.one()];
    let levels = [one_level(x, -seg.slope.clone(), 1)];
    let chain = Chain { k, lv: &levels };
    let (_, r) = chain.residual(1, g);
    strip_low(k.residue_field(), r)
}

fn strip_low(f: &crate::gf::FiniteField, r: GfPoly) -> GfPoly {
    let low = r.iter().position(|c| !f.is_zero(c)).unwrap_or(0);
    r[low..].to_vec()
}

fn check_input<K: ValuedField>(k: &K, g: &[K::Elem]) -> Result<(), SplitError> {
    let g = field::trim(k, g.to_vec());
    if g.len() < 2 || g.last() != Some(&k.one()) {
        return Err(SplitError::NotMonic);
    }
    let dg = field::derivative(k, &g);
    if dg.is_empty() {
        return Err(SplitError::Inseparable(k.characteristic()));
    }
    if field::gcd(k, &g, &dg).len() > 1 {
        return Err(SplitError::NotSquarefree);
    }
    Ok(())
}

/// Every extension of `v` to `K[x]/(g)`, for monic squarefree `g`.
///
/// Factors come out sorted by the slope of the first Newton polygon and then
/// by the canonical order of residual factors, recursively.
pub fn split_extensions<K: ValuedField>(
    k: &K,
    g: &[K::Elem],
    depth_limit: usize,
) -> Result<Vec<LocalFactor>, SplitError> {
    check_input(k, g)?;
    let g = field::trim(k, g.to_vec());
    let n = (g.len() - 1) as u64;
    let search = Search { k, g: &g, limit: depth_limit };
    let mut out = Vec::new();
    let x = vec![k.zero(), k.one()];
    search.branch(&[], x, None, n as usize, 1, "", &mut out)?;
    let total: u64 = out.iter().map(|lf| lf.degree).sum();
    if total != n {
        return Err(SplitError::Inconsistent(format!("local degrees sum to {total}, expected {n}")));
    }
    Ok(out)
}

/// Invariants of one extension found by [`split_extensions`].
pub fn to_extension_invariants<K: ValuedField>(k: &K, lf: &LocalFactor, total_degree: u64) -> ExtensionInvariants {
    ExtensionInvariants {
        gamma_nu: LexGroup::integer_lattice(1),
        gamma_omega: LexGroup::cyclic_fraction(lf.e),
        residue_degree: lf.f,
        local_degree: lf.degree,
        residue_char: k.residue_field().characteristic(),
        total_degree: Some(total_degree),
        provenance: format!("{}: {}", k.describe(), lf.certificate),
    }
}

struct Search<'a, K: ValuedField> {
    k: &'a K,
    g: &'a [K::Elem],
    limit: usize,
}

impl<K: ValuedField> Search<'_, K> {
    fn describe_level(&self, phi: &[K::Elem], lambda: &BigRational) -> String {
        format!("phi={} lambda={}", format_poly(self.k, phi, "x"), lambda)
    }

    fn leaf(&self, e: i64, f: u64, degree: u64, certificate: String) -> Result<LocalFactor, SplitError> {
        let e = e as u64;
        if e * f != degree {
            return Err(SplitError::Inconsistent(format!(
                "branch {certificate}: e*f = {} but degree = {degree}",
                e * f
            )));
        }
        Ok(LocalFactor { e, f, degree, certificate })
    }

    /// Sides of the `φ`-Newton polygon of `g` over `μ_{j-1}` with slope
    /// steeper than `-τ`, which together must span `mult`.
    #[allow(clippy::too_many_arguments)]
    fn branch(
        &self,
        levels: &[Level<K::Elem>],
        phi: Vec<K::Elem>,
        tau: Option<BigRational>,
        mult: usize,
        depth: usize,
        trail: &str,
        out: &mut Vec<LocalFactor>,
    ) -> Result<(), SplitError> {
        let k = self.k;
        let j = levels.len() + 1;
        let prefix = if trail.is_empty() { String::new() } else { format!("{trail}; ") };
        if depth > self.limit {
            return Err(SplitError::Unresolved {
                limit: self.limit,
                branch: format!("{prefix}phi={}", format_poly(k, &phi, "x")),
            });
        }
        let chain = Chain { k, lv: levels };
        let kappa_degree = k.residue_field().degree() as u64;
        let fj = if j == 1 { k.residue_field().clone() } else { chain.field(j) };
        let f_here = fj.degree() as u64 / kappa_degree;
        let big_e = levels.last().map_or(1, |l| l.big_e);
        let deg_phi = (phi.len() - 1) as u64;

        let parts = field::expand(k, self.g, &phi);
        let exact = parts.first().is_none_or(|c| c.is_empty());
        if exact {
            let cert = format!("{prefix}phi={} exact", format_poly(k, &phi, "x"));
            out.push(self.leaf(big_e, f_here, deg_phi, cert)?);
        }
        let points: Vec<(i64, BigRational)> =
            parts.iter().enumerate().filter_map(|(i, c)| chain.value(j - 1, c).map(|w| (i as i64, w))).collect();
        let sides: Vec<_> =
            lower_hull(&points).into_iter().filter(|(_, _, s)| tau.as_ref().is_none_or(|t| -s > *t)).collect();
        let span: i64 = sides.iter().map(|(a, b, _)| b - a).sum::<i64>() + exact as i64;
        if span != mult as i64 {
            return Err(SplitError::Inconsistent(format!("{prefix}principal polygon spans {span}, expected {mult}")));
        }

        for (a, b, slope) in sides {
            let lambda = -slope;
            let mut lv: Vec<Level<K::Elem>> = levels.to_vec();
            lv.push(one_level(phi.clone(), lambda.clone(), big_e));
            let e = lv[j - 1].e;
            let chain = Chain { k, lv: &lv };
            let (_, r) = chain.residual(j, self.g);
            let r = strip_low(&fj, r);
            if (r.len() - 1) as i64 * e != b - a {
                return Err(SplitError::Inconsistent(format!(
                    "{prefix}residual degree {} does not match side length {}",
                    r.len() - 1,
                    b - a
                )));
            }
            let here = self.describe_level(&phi, &lambda);
            for (psi, m) in fj.factor(&r) {
                let fdeg = (psi.len() - 1) as u64;
                let psi_text = fj.format_poly(&psi, "y");
                let trail = format!("{prefix}{here} psi={psi_text}");
                if m == 1 {
                    let degree = deg_phi * e as u64 * fdeg;
                    out.push(self.leaf(big_e * e, f_here * fdeg, degree, trail)?);
                    continue;
                }
                let next_phi = chain.key_polynomial(j, &psi);
                let next_tau = &lambda * BigRational::from_integer((e * fdeg as i64).into());
                if e == 1 && fdeg == 1 {
                    self.branch(levels, next_phi, Some(next_tau), m, depth + 1, &trail, out)?;
                } else {
                    let mut stacked = lv.clone();
                    let top = stacked.last_mut().expect("pushed above");
                    top.above = Some(crate::gf::FiniteField::extension(&fj, &psi));
                    top.psi = Some(psi);
                    self.branch(&stacked, next_phi, Some(next_tau), m, depth + 1, &trail, out)?;
                }
            }
        }
        Ok(())
    }
}
