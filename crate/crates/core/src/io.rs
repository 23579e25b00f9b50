//! File formats: canonical JSON for patterns and reports, DOT for leaf
//! graphs, CSV for distance tables.
//!
//! Canonical JSON means object keys in sorted order, two-space indentation
//! and a trailing newline, so serializing a parsed file reproduces it byte
//! for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::graphs::LeafGraph;
use crate::pattern::{FinitePattern, Pattern, Sign};
use crate::periodic::PeriodicPattern;

/// Byte offset of a serde_json error (line and column are 1-based);
/// unexpected end of input is reported at the end.
fn byte_offset(text: &str, e: &serde_json::Error) -> usize {
    if e.is_eof() {
        return text.len();
    }
    let line = e.line().max(1);
    let before: usize = text.split_inclusive('\n').take(line - 1).map(str::len).sum();
    (before + e.column().saturating_sub(1)).min(text.len())
}

fn parse_error(text: &str, e: serde_json::Error) -> Error {
    Error::Parse { offset: byte_offset(text, &e), message: e.to_string() }
}

/// Deserializes `text`, reporting failures with their byte offset.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| parse_error(text, e))
}

/// Sorted keys, two-space indentation, trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // `serde_json::Value` keeps objects in a sorted map.
    let v = serde_json::to_value(value).map_err(|e| Error::Params(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Params(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses and validates a finite pattern.
pub fn parse_finite(text: &str) -> Result<FinitePattern> {
    let p: FinitePattern = from_json(text)?;
    Pattern::new(p.clone())?;
    Ok(p)
}

/// Parses and checks a periodic pattern.
pub fn parse_periodic(text: &str) -> Result<PeriodicPattern> {
    let p: PeriodicPattern = from_json(text)?;
    p.check()?;
    Ok(p)
}

/// Parses either kind of pattern; periodic files are recognized by their
/// `period` key.
pub fn parse_pattern(text: &str) -> Result<Fixture> {
    let v: serde_json::Value = from_json(text)?;
    if v.get("period").is_some() {
        parse_periodic(text).map(Fixture::Periodic)
    } else {
        parse_finite(text).map(Fixture::Finite)
    }
}

pub fn read_pattern(path: impl AsRef<Path>) -> Result<Fixture> {
    parse_pattern(&std::fs::read_to_string(path)?)
}

pub fn serialize_pattern(f: &Fixture) -> Result<String> {
    match f {
        Fixture::Finite(p) => to_canonical_json(p),
        Fixture::Periodic(p) => to_canonical_json(p),
    }
}

pub fn write_pattern(f: &Fixture, path: impl AsRef<Path>) -> Result<()> {
    Ok(std::fs::write(path, serialize_pattern(f)?)?)
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text of a leaf graph. Vertices follow leaf order, edges are sorted;
/// singular leaves are drawn as double circles.
pub fn export_dot(p: &Pattern, g: &LeafGraph) -> String {
    let mut out = format!("graph {} {{\n  node [shape=circle];\n", g.kind.name());
    for &l in &g.leaves {
        let id = p.leaf_id(l);
        let sign = match p.sign(l) {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        let extra = if p.is_singular(l) { ", shape=doublecircle, singular=true" } else { "" };
        let _ = writeln!(out, "  {} [label={}{}];", dot_quote(id), dot_quote(&format!("{id} ({sign})")), extra);
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", dot_quote(p.leaf_id(g.leaves[a])), dot_quote(p.leaf_id(g.leaves[b])));
    }
    out.push_str("}\n");
    out
}

/// Square matrix as CSV: a header row of labels, then one row per label.
/// Missing entries (infinite distances) are written as `inf`.
pub fn matrix_csv(corner: &str, labels: &[String], rows: &[Vec<Option<u32>>]) -> String {
    let mut out = String::from(corner);
    for l in labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for (l, row) in labels.iter().zip(rows) {
        out.push_str(l);
        for d in row {
            match d {
                Some(d) => {
                    let _ = write!(out, ",{d}");
                }
                None => out.push_str(",inf"),
            }
        }
        out.push('\n');
    }
    out
}

/// All-pairs graph distances as CSV, header `leaf,<ids>`.
pub fn distance_csv(p: &Pattern, g: &LeafGraph) -> String {
    let labels: Vec<String> = g.leaves.iter().map(|&l| p.leaf_id(l).to_string()).collect();
    let rows: Vec<Vec<Option<u32>>> =
        g.all_pairs().into_iter().map(|r| r.into_iter().map(|d| (d != u32::MAX).then_some(d)).collect()).collect();
    matrix_csv("leaf", &labels, &rows)
}
