//! Named extension data, each computed by the engines on first use.

use knaf_core::gf::FiniteField;
use knaf_core::localsplit::{split_extensions, to_extension_invariants, PadicRationals};
use knaf_core::monoval::{extend_binomial, BaseField, BinomialExtensionSpec, MonomialValuation, Scalar};
use knaf_core::ordgroup::LexGroup;
use knaf_core::raminv::ExtensionInvariants;
use num_rational::BigRational;

use crate::problem::{DecideSource, ExtensionData, Problem, ProblemFile, FORMAT_VERSION};
use crate::report::ReportRow;
use crate::run::{decide_row, Failure};

pub struct Fixture {
    pub name: &'static str,
    pub citation: &'static str,
    pub build: fn() -> ExtensionInvariants,
}

fn padic_single(p: u64, coeffs: &[i64]) -> ExtensionInvariants {
    let k = PadicRationals::new(p).expect("prime");
    let g: Vec<BigRational> = coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    let factors = split_extensions(&k, &g, 16).expect("fixture polynomial splits");
    assert_eq!(factors.len(), 1, "fixture polynomial has one extension");
    to_extension_invariants(&k, &factors[0], (g.len() - 1) as u64)
}

fn monomial(a: i64, b: i64) -> ExtensionInvariants {
    let f5 = FiniteField::prime(5);
    let v = MonomialValuation::lex(BaseField::Finite(f5.clone()));
    let spec = BinomialExtensionSpec { n: 2, a, b, c: Scalar::Finite(f5.one()) };
    let mut exts = extend_binomial(&v, &spec).expect("tame irreducible binomial");
    assert_eq!(exts.len(), 1);
    exts.remove(0)
}

fn frobenius_abhyankar() -> ExtensionInvariants {
    // v_t restricted to F_3(t^3) has value group 3Z
    ExtensionInvariants {
        gamma_nu: LexGroup::integer_lattice(1).scaled(&BigRational::from_integer(3.into())),
        gamma_omega: LexGroup::integer_lattice(1),
        residue_degree: 1,
        local_degree: 3,
        residue_char: 3,
        total_degree: Some(3),
        provenance: "F_3(t) over F_3(t^3), t-adic valuation".into(),
    }
}

fn frobenius_defect_p() -> ExtensionInvariants {
    // [Γ : 3Γ] = 1 and a perfect residue field give e = f = 1; Z stands in
    // for a 3-divisible Γ since only the index enters
    ExtensionInvariants {
        gamma_nu: LexGroup::integer_lattice(1),
        gamma_omega: LexGroup::integer_lattice(1),
        residue_degree: 1,
        local_degree: 3,
        residue_char: 3,
        total_degree: Some(3),
        provenance: "K over K^3 with [K:K^3] = 3, [Γ:3Γ] = 1 declared, perfect residue field".into(),
    }
}

const CATALOG: [Fixture; 7] = [
    Fixture {
        name: "sqrt2-at-2",
        citation: "Q(sqrt 2)/Q at the 2-adic valuation: totally ramified quadratic",
        build: || padic_single(2, &[-2, 0, 1]),
    },
    Fixture {
        name: "gaussian-at-3",
        citation: "Q(i)/Q at the 3-adic valuation: inert quadratic",
        build: || padic_single(3, &[1, 0, 1]),
    },
    Fixture {
        name: "monomial-sqrt-x",
        citation: "z^2 = x over F_5(x,y), lex monomial valuation: ramified by half the top generator",
        build: || monomial(1, 0),
    },
    Fixture {
        name: "monomial-sqrt-y",
        citation: "z^2 = y over F_5(x,y), lex monomial valuation: ramified by half the bottom generator",
        build: || monomial(0, 1),
    },
    Fixture {
        name: "monomial-sqrt-xy",
        citation: "z^2 = xy over F_5(x,y), lex monomial valuation: ramified in the top coordinate",
        build: || monomial(1, 1),
    },
    Fixture {
        name: "frobenius-abhyankar",
        citation: "Frobenius extension of an Abhyankar valuation: defectless",
        build: frobenius_abhyankar,
    },
    Fixture {
        name: "frobenius-defect-p",
        citation: "Frobenius extension with a p-divisible value group and perfect residue field: defect p",
        build: frobenius_defect_p,
    },
];

pub fn catalog() -> &'static [Fixture] {
    &CATALOG
}

pub fn find(name: &str) -> Option<&'static Fixture> {
    CATALOG.iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn row(&self) -> Result<ReportRow, Failure> {
        decide_row(self.name.to_string(), &(self.build)())
    }

    /// A decide-mode problem carrying this fixture's data explicitly.
    pub fn problem_file(&self) -> ProblemFile {
        let ext = (self.build)();
        ProblemFile {
            format_version: FORMAT_VERSION,
            label: Some(self.name.to_string()),
            body: Problem::Decide(DecideSource::Data(ExtensionData {
                gamma_nu: ext.gamma_nu.basis().to_vec(),
                gamma_omega: ext.gamma_omega.basis().to_vec(),
                residue_degree: ext.residue_degree,
                local_degree: ext.local_degree,
                residue_char: ext.residue_char,
                total_degree: ext.total_degree,
                provenance: Some(ext.provenance),
            })),
        }
    }
}
