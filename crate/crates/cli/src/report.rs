//! Human and machine renderings of results.

use std::fmt::Write as _;

use knaf_core::ordgroup::{GroupIndex, RationalVector};
use knaf_core::raminv::KnafVerdict;

use crate::run::GroupSummary;

/// One extension and its verdict, as printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub label: String,
    pub verdict: KnafVerdict,
    pub reason: String,
    pub certificate: String,
}

impl ReportRow {
    pub fn new(label: String, verdict: KnafVerdict, certificate: String) -> Self {
        ReportRow { label, reason: verdict.reason(), verdict, certificate }
    }

    /// `(key, value)` pairs in the porcelain order, values unquoted.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let v = &self.verdict;
        vec![
            ("label", self.label.clone()),
            ("e", v.e.to_string()),
            ("f", v.f.to_string()),
            ("eps", v.eps.to_string()),
            ("d", v.d.to_string()),
            ("defectless", v.defectless.to_string()),
            ("eps_eq_e", v.initial_condition.to_string()),
            ("eft", v.eft.to_string()),
            ("reason", self.reason.clone()),
            ("certificate", self.certificate.clone()),
        ]
    }
}

/// Keys whose values are always quoted in porcelain output.
const QUOTED: [&str; 5] = ["label", "reason", "certificate", "cosets", "initial_set"];

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

fn record(fields: &[(&str, String)]) -> String {
    let parts: Vec<String> = fields
        .iter()
        .map(|(k, v)| if QUOTED.contains(k) { format!("{k}={}", quote(v)) } else { format!("{k}={v}") })
        .collect();
    parts.join(" ")
}

/// One `key=value` line per row.
pub fn porcelain_rows(rows: &[ReportRow]) -> String {
    rows.iter().map(|r| record(&r.fields()) + "\n").collect()
}

/// Splits a porcelain record back into `(key, value)` pairs.
pub fn parse_record(line: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let mut chars = line.trim_end_matches('\n').chars().peekable();
    loop {
        while chars.peek() == Some(&' ') {
            chars.next();
        }
        if chars.peek().is_none() {
            return Ok(out);
        }
        let key: String = chars.by_ref().take_while(|&c| c != '=').collect();
        let mut value = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            loop {
                match chars.next() {
                    Some('\\') => match chars.next() {
                        Some('n') => value.push('\n'),
                        Some(c) => value.push(c),
                        None => return Err("dangling escape".into()),
                    },
                    Some('"') => break,
                    Some(c) => value.push(c),
                    None => return Err(format!("unterminated value for '{key}'")),
                }
            }
        } else {
            while let Some(&c) = chars.peek() {
                if c == ' ' {
                    break;
                }
                value.push(c);
                chars.next();
            }
        }
        out.push((key, value));
    }
}

const HEADERS: [&str; 9] = ["label", "e", "f", "ε", "d", "defectless", "ε=e", "EFT", "reason"];

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

/// Aligned table followed by the certificate of each row.
pub fn human_rows(rows: &[ReportRow]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let v = &r.verdict;
            vec![
                r.label.clone(),
                v.e.to_string(),
                v.f.to_string(),
                v.eps.to_string(),
                v.d.to_string(),
                yes_no(v.defectless),
                yes_no(v.initial_condition),
                yes_no(v.eft),
                r.reason.clone(),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = HEADERS.iter().map(|h| h.chars().count()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |row: Vec<String>| {
        let padded: Vec<String> =
            row.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(HEADERS.iter().map(ToString::to_string).collect());
    for row in cells {
        out += &line(row);
    }
    if rows.iter().any(|r| !r.certificate.is_empty()) {
        out += "\ncertificates:\n";
        for r in rows {
            let _ = writeln!(out, "  {}: {}", r.label, r.certificate);
        }
    }
    out
}

fn vectors(v: &[RationalVector]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn group_fields(s: &GroupSummary) -> Vec<(&'static str, String)> {
    let index = match s.index {
        GroupIndex::Finite(n) => n.to_string(),
        GroupIndex::Infinite => "infinite".into(),
    };
    vec![
        ("index", index),
        ("eps", s.eps.map_or("none".into(), |e| e.to_string())),
        ("cosets", vectors(&s.cosets)),
        ("initial_set", vectors(&s.initial_set)),
    ]
}

pub fn porcelain_group(s: &GroupSummary) -> String {
    record(&group_fields(s)) + "\n"
}

pub fn human_group(s: &GroupSummary) -> String {
    let f = group_fields(s);
    let mut out = format!("[Γω : Γν] = {}\nε = {}\n", f[0].1, f[1].1);
    if s.eps.is_some() {
        let _ = writeln!(out, "coset representatives: {}", f[2].1);
        let _ = writeln!(out, "initial set: {}", f[3].1);
    }
    out
}
