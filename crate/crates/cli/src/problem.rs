//! The versioned problem-file format.
//!
//! ```text
//! # x^2 + 1 at v_5
//! format_version = 1
//! mode = split
//! label = "gaussian-at-5"
//!
//! [base]
//! field = rationals
//! p = 5
//!
//! [polynomial]
//! coeffs = [1, 0, 1]
//! ```
//!
//! Lines are `key = value`, `[section]` headers or `#` comments. Unknown
//! keys, unknown sections, repeated keys and sections that do not belong to
//! the mode are rejected.

use std::collections::BTreeMap;
use std::fmt;

use knaf_core::ordgroup::RationalVector;
use num_rational::BigRational;

use crate::expr::{Cursor, Expr};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// 1-based line, when the error is tied to one.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Group,
    Decide,
    Split,
    Binomial,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Group => "group",
            Mode::Decide => "decide",
            Mode::Split => "split",
            Mode::Binomial => "binomial",
        }
    }

    fn parse(s: &str) -> Option<Mode> {
        Some(match s {
            "group" => Mode::Group,
            "decide" => Mode::Decide,
            "split" => Mode::Split,
            "binomial" => Mode::Binomial,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub format_version: u32,
    pub label: Option<String>,
    pub body: Problem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Group {
        gamma_nu: Vec<RationalVector>,
        gamma_omega: Vec<RationalVector>,
    },
    Decide(DecideSource),
    Split {
        base: SplitBase,
        coeffs: Vec<Expr>,
    },
    Binomial {
        field: ConstantField,
        weight_x: RationalVector,
        weight_y: RationalVector,
        n: u64,
        a: i64,
        b: i64,
        c: Expr,
    },
}

impl Problem {
    pub fn mode(&self) -> Mode {
        match self {
            Problem::Group { .. } => Mode::Group,
            Problem::Decide(_) => Mode::Decide,
            Problem::Split { .. } => Mode::Split,
            Problem::Binomial { .. } => Mode::Binomial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecideSource {
    Fixture(String),
    Data(ExtensionData),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionData {
    pub gamma_nu: Vec<RationalVector>,
    pub gamma_omega: Vec<RationalVector>,
    pub residue_degree: u64,
    pub local_degree: u64,
    pub residue_char: u64,
    pub total_degree: Option<u64>,
    pub provenance: Option<String>,
}

/// Valued base field of a split problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitBase {
    /// `Q` with the `p`-adic valuation.
    Rationals { p: u64 },
    /// `F_q(t)` (or `Q(t)` when `q` is `None`) with a polynomial uniformizer.
    Function { q: Option<u64>, uniformizer: Expr },
}

/// Constant field of a binomial problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstantField {
    Rationals,
    Finite { q: u64 },
}

// ---- lexing ----------------------------------------------------------------

struct Entry {
    line: usize,
    value: String,
}

#[derive(Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn require(&mut self, name: &str, key: &str) -> Result<Entry, ParseError> {
        match self.take(key) {
            Some(e) => Ok(e),
            None => err(Some(self.line), format!("section [{name}] is missing key '{key}'")),
        }
    }

    fn finish(self, name: &str) -> Result<(), ParseError> {
        match self.entries.into_iter().min_by_key(|(_, e)| e.line) {
            Some((k, e)) => err(Some(e.line), format!("unknown key '{k}' in {name}")),
            None => Ok(()),
        }
    }
}

const SECTIONS: [&str; 7] = ["gamma_nu", "gamma_omega", "extension", "base", "polynomial", "weights", "binomial"];

fn split_lines(text: &str) -> Result<(Section, BTreeMap<String, Section>), ParseError> {
    let mut top = Section { line: 1, ..Default::default() };
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw).trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(Some(line), "malformed section header");
            };
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return err(Some(line), format!("unknown section [{name}]"));
            }
            if sections.contains_key(name) {
                return err(Some(line), format!("repeated section [{name}]"));
            }
            sections.insert(name.to_string(), Section { line, ..Default::default() });
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return err(Some(line), "expected 'key = value'");
        };
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return err(Some(line), format!("malformed key '{key}'"));
        }
        let target = match &current {
            None => &mut top,
            Some(name) => sections.get_mut(name).expect("section exists"),
        };
        if target.entries.contains_key(key) {
            return err(Some(line), format!("repeated key '{key}'"));
        }
        target.entries.insert(key.to_string(), Entry { line, value: value.trim().to_string() });
    }
    Ok((top, sections))
}

/// Drops a `#` comment that is not inside a quoted string.
fn strip_comment(line: &str) -> &str {
    let mut in_str = false;
    let mut escaped = false;
    for (i, c) in line.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_str => escaped = true,
            '"' => in_str = !in_str,
            '#' if !in_str => return &line[..i],
            _ => {}
        }
    }
    line
}

// ---- values ----------------------------------------------------------------

fn with_cursor<T>(e: &Entry, f: impl FnOnce(&mut Cursor) -> Result<T, String>) -> Result<T, ParseError> {
    let run = || {
        let mut c = Cursor::new(&e.value)?;
        let v = f(&mut c)?;
        c.finish()?;
        Ok(v)
    };
    run().map_err(|m: String| ParseError { line: Some(e.line), message: m })
}

fn parse_u64(e: &Entry) -> Result<u64, ParseError> {
    e.value.parse().or_else(|_| err(Some(e.line), format!("expected a nonnegative integer, found '{}'", e.value)))
}

fn parse_i64(e: &Entry) -> Result<i64, ParseError> {
    e.value.parse().or_else(|_| err(Some(e.line), format!("expected an integer, found '{}'", e.value)))
}

fn parse_vector(e: &Entry) -> Result<RationalVector, ParseError> {
    with_cursor(e, |c| c.vector()).map(RationalVector::new)
}

fn parse_generators(e: &Entry) -> Result<Vec<RationalVector>, ParseError> {
    let gens = with_cursor(e, |c| c.list(|c| c.vector()))?;
    Ok(gens.into_iter().map(RationalVector::new).collect())
}

fn parse_expr(e: &Entry) -> Result<Expr, ParseError> {
    with_cursor(e, |c| c.expr())
}

fn parse_string(e: &Entry) -> Result<String, ParseError> {
    let v = &e.value;
    if let Some(body) = v.strip_prefix('"') {
        let mut out = String::new();
        let mut chars = body.chars();
        while let Some(c) = chars.next() {
            match c {
                '\\' => match chars.next() {
                    Some(c @ ('"' | '\\')) => out.push(c),
                    Some('n') => out.push('\n'),
                    _ => return err(Some(e.line), "bad escape in string"),
                },
                '"' => {
                    if chars.next().is_some() {
                        return err(Some(e.line), "text after closing quote");
                    }
                    return Ok(out);
                }
                c => out.push(c),
            }
        }
        return err(Some(e.line), "unterminated string");
    }
    if !v.is_empty() && v.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
        Ok(v.clone())
    } else {
        err(Some(e.line), format!("expected a quoted string or a bare name, found '{v}'"))
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

// ---- parsing ----------------------------------------------------------------

/// Parses a problem file.
pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let (mut top, mut sections) = split_lines(text)?;
    let version = match top.take("format_version") {
        Some(e) => {
            let v = parse_u64(&e)?;
            if v != FORMAT_VERSION as u64 {
                return err(Some(e.line), format!("unsupported format_version {v} (expected {FORMAT_VERSION})"));
            }
            v as u32
        }
        None => return err(None, "missing format_version"),
    };
    let mode_entry = top.take("mode").ok_or(ParseError { line: None, message: "missing mode".into() })?;
    let Some(mode) = Mode::parse(&mode_entry.value) else {
        return err(Some(mode_entry.line), format!("unknown mode '{}'", mode_entry.value));
    };
    let label = top.take("label").map(|e| parse_string(&e)).transpose()?;
    let fixture = top.take("fixture");
    if let (Some(e), false) = (&fixture, mode == Mode::Decide) {
        return err(Some(e.line), "'fixture' is only used in decide mode");
    }

    let allowed: &[&str] = match mode {
        Mode::Group => &["gamma_nu", "gamma_omega"],
        Mode::Decide if fixture.is_some() => &[],
        Mode::Decide => &["gamma_nu", "gamma_omega", "extension"],
        Mode::Split => &["base", "polynomial"],
        Mode::Binomial => &["base", "weights", "binomial"],
    };
    if let Some((name, s)) = sections.iter().find(|(n, _)| !allowed.contains(&n.as_str())) {
        return err(Some(s.line), format!("section [{name}] is not used in {} mode", mode.name()));
    }
    let mut section = |name: &str| {
        sections.remove(name).ok_or(ParseError { line: None, message: format!("missing section [{name}]") })
    };
    let generators = |s: &mut Section, name: &str| -> Result<Vec<RationalVector>, ParseError> {
        let e = s.require(name, "generators")?;
        let g = parse_generators(&e)?;
        if g.is_empty() {
            return err(Some(e.line), "generator list must not be empty");
        }
        Ok(g)
    };

    let body = match mode {
        Mode::Decide if fixture.is_some() => {
            let e = fixture.expect("fixture present");
            Problem::Decide(DecideSource::Fixture(parse_string(&e)?))
        }
        Mode::Group | Mode::Decide => {
            let mut nu = section("gamma_nu")?;
            let gamma_nu = generators(&mut nu, "gamma_nu")?;
            nu.finish("[gamma_nu]")?;
            let mut om = section("gamma_omega")?;
            let gamma_omega = generators(&mut om, "gamma_omega")?;
            om.finish("[gamma_omega]")?;
            if mode == Mode::Group {
                Problem::Group { gamma_nu, gamma_omega }
            } else {
                let mut ext = section("extension")?;
                let residue_degree = parse_u64(&ext.require("extension", "residue_degree")?)?;
                let local_degree = parse_u64(&ext.require("extension", "local_degree")?)?;
                let residue_char = parse_u64(&ext.require("extension", "residue_char")?)?;
                let total_degree = ext.take("total_degree").map(|e| parse_u64(&e)).transpose()?;
                let provenance = ext.take("provenance").map(|e| parse_string(&e)).transpose()?;
                ext.finish("[extension]")?;
                Problem::Decide(DecideSource::Data(ExtensionData {
                    gamma_nu,
                    gamma_omega,
                    residue_degree,
                    local_degree,
                    residue_char,
                    total_degree,
                    provenance,
                }))
            }
        }
        Mode::Split => {
            let mut base = section("base")?;
            let field = base.require("base", "field")?;
            let split_base = match field.value.as_str() {
                "rationals" => SplitBase::Rationals { p: parse_u64(&base.require("base", "p")?)? },
                "function" => {
                    let q = base.require("base", "q")?;
                    let q = if q.value == "rationals" { None } else { Some(parse_u64(&q)?) };
                    let uniformizer = parse_expr(&base.require("base", "uniformizer")?)?;
                    SplitBase::Function { q, uniformizer }
                }
                other => {
                    return err(Some(field.line), format!("unknown field '{other}' (expected rationals or function)"))
                }
            };
            base.finish("[base]")?;
            let mut poly = section("polynomial")?;
            let e = poly.require("polynomial", "coeffs")?;
            let coeffs = with_cursor(&e, |c| c.list(|c| c.expr()))?;
            poly.finish("[polynomial]")?;
            Problem::Split { base: split_base, coeffs }
        }
        Mode::Binomial => {
            let mut base = section("base")?;
            let field = base.require("base", "field")?;
            let constant = match field.value.as_str() {
                "rationals" => ConstantField::Rationals,
                "finite" => ConstantField::Finite { q: parse_u64(&base.require("base", "q")?)? },
                other => {
                    return err(Some(field.line), format!("unknown field '{other}' (expected rationals or finite)"))
                }
            };
            base.finish("[base]")?;
            let mut w = section("weights")?;
            let weight_x = parse_vector(&w.require("weights", "x")?)?;
            let weight_y = parse_vector(&w.require("weights", "y")?)?;
            w.finish("[weights]")?;
            let mut b = section("binomial")?;
            let n = parse_u64(&b.require("binomial", "n")?)?;
            let a = parse_i64(&b.require("binomial", "a")?)?;
            let bb = parse_i64(&b.require("binomial", "b")?)?;
            let c = parse_expr(&b.require("binomial", "c")?)?;
            b.finish("[binomial]")?;
            Problem::Binomial { field: constant, weight_x, weight_y, n, a, b: bb, c }
        }
    };
    top.finish("the preamble")?;
    Ok(ProblemFile { format_version: version, label, body })
}

// ---- serialization ------------------------------------------------------------

fn vector_text(v: &RationalVector) -> String {
    let parts: Vec<String> = v.coords().iter().map(BigRational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn generators_text(g: &[RationalVector]) -> String {
    let parts: Vec<String> = g.iter().map(vector_text).collect();
    format!("[{}]", parts.join(", "))
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format_version = {}", self.format_version)?;
        writeln!(f, "mode = {}", self.body.mode().name())?;
        if let Some(l) = &self.label {
            writeln!(f, "label = {}", quote(l))?;
        }
        let groups = |f: &mut fmt::Formatter<'_>, nu: &[RationalVector], om: &[RationalVector]| {
            writeln!(f, "\n[gamma_nu]\ngenerators = {}", generators_text(nu))?;
            writeln!(f, "\n[gamma_omega]\ngenerators = {}", generators_text(om))
        };
        match &self.body {
            Problem::Group { gamma_nu, gamma_omega } => groups(f, gamma_nu, gamma_omega),
            Problem::Decide(DecideSource::Fixture(name)) => writeln!(f, "fixture = {}", quote(name)),
            Problem::Decide(DecideSource::Data(d)) => {
                groups(f, &d.gamma_nu, &d.gamma_omega)?;
                writeln!(f, "\n[extension]")?;
                writeln!(f, "residue_degree = {}", d.residue_degree)?;
                writeln!(f, "local_degree = {}", d.local_degree)?;
                writeln!(f, "residue_char = {}", d.residue_char)?;
                if let Some(t) = d.total_degree {
                    writeln!(f, "total_degree = {t}")?;
                }
                if let Some(p) = &d.provenance {
                    writeln!(f, "provenance = {}", quote(p))?;
                }
                Ok(())
            }
            Problem::Split { base, coeffs } => {
                writeln!(f, "\n[base]")?;
                match base {
                    SplitBase::Rationals { p } => writeln!(f, "field = rationals\np = {p}")?,
                    SplitBase::Function { q, uniformizer } => {
                        let q = q.map_or("rationals".to_string(), |q| q.to_string());
                        writeln!(f, "field = function\nq = {q}\nuniformizer = {uniformizer}")?
                    }
                }
                let parts: Vec<String> = coeffs.iter().map(Expr::to_string).collect();
                writeln!(f, "\n[polynomial]\ncoeffs = [{}]", parts.join(", "))
            }
            Problem::Binomial { field, weight_x, weight_y, n, a, b, c } => {
                writeln!(f, "\n[base]")?;
                match field {
                    ConstantField::Rationals => writeln!(f, "field = rationals")?,
                    ConstantField::Finite { q } => writeln!(f, "field = finite\nq = {q}")?,
                }
                writeln!(f, "\n[weights]\nx = {}\ny = {}", vector_text(weight_x), vector_text(weight_y))?;
                writeln!(f, "\n[binomial]\nn = {n}\na = {a}\nb = {b}\nc = {c}")
            }
        }
    }
}
