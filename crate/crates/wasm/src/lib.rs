//! Browser bindings for the static demo page in `www/`: load a fixture,
//! validate a pattern, build a leaf graph, classify a periodic element.
//! Every function takes and returns strings (pattern JSON in, report JSON or
//! DOT out) so the page needs no bundler. The `*_impl` functions hold the
//! logic and are tested natively.

use bifol::dynamics::classify_isometry;
use bifol::fixtures::{self, Fixture};
use bifol::graphs::{build_graph, GraphKind};
use bifol::io;
use bifol::layout::with_all_crossings;
use bifol::{validate_pattern, FinitePattern, Pattern};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Shipped fixture as canonical JSON; `param` 0 means the kind's default.
pub fn fixture_impl(kind: &str, param: i64) -> Result<String, String> {
    let f = fixtures::generate(kind, (param != 0).then_some(param)).map_err(text)?;
    io::serialize_pattern(&f).map_err(text)
}

/// Validation report for a finite pattern, or the structural check of a
/// periodic one.
pub fn validate_impl(pattern_json: &str) -> Result<String, String> {
    let value: serde_json::Value = io::from_json(pattern_json).map_err(text)?;
    let report = if value.get("period").is_some() {
        let pp: bifol::periodic::PeriodicPattern = io::from_json(pattern_json).map_err(text)?;
        match pp.check() {
            Ok(()) => json!({ "kind": "periodic", "valid": true, "violations": [] }),
            Err(e) => json!({ "kind": "periodic", "valid": false, "violations": [e.to_string()] }),
        }
    } else {
        let fp: FinitePattern = io::from_json(pattern_json).map_err(text)?;
        let r = validate_pattern(&fp);
        json!({ "kind": "finite", "valid": r.is_valid(), "violations": r.violations })
    };
    io::to_canonical_json(&report).map_err(text)
}

/// Leaf graph summary and DOT text. Periodic patterns are materialized on
/// indices `0..=15`.
pub fn leaf_graph_impl(pattern_json: &str, kind: &str) -> Result<String, String> {
    let kind: GraphKind = kind.parse().map_err(text)?;
    let fp = match io::parse_pattern(pattern_json).map_err(text)? {
        Fixture::Finite(fp) => fp,
        Fixture::Periodic(pp) => with_all_crossings(pp.materialize_window(0, 15).map_err(text)?),
    };
    let p = Pattern::new(fp).map_err(text)?;
    let g = build_graph(&p, kind);
    let report = json!({
        "kind": kind.name(),
        "vertices": g.len(),
        "edges": g.edge_count(),
        "connected": g.is_connected(),
        "diameter": g.diameter(),
        "dot": io::export_dot(&p, &g),
    });
    io::to_canonical_json(&report).map_err(text)
}

/// Classification of a declared automorphism of a periodic pattern.
pub fn classify_impl(pattern_json: &str, element: &str, window: i64) -> Result<String, String> {
    let Fixture::Periodic(pp) = io::parse_pattern(pattern_json).map_err(text)? else {
        return Err("classification needs a periodic pattern".into());
    };
    let g = pp.automorphism(element).map_err(text)?;
    let c = classify_isometry(&pp, &g, window, 16).map_err(text)?;
    io::to_canonical_json(&c).map_err(text)
}

#[wasm_bindgen]
pub fn fixture(kind: &str, param: i64) -> Result<String, JsValue> {
    fixture_impl(kind, param).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn validate(pattern_json: &str) -> Result<String, JsValue> {
    validate_impl(pattern_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn leaf_graph(pattern_json: &str, kind: &str) -> Result<String, JsValue> {
    leaf_graph_impl(pattern_json, kind).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn classify(pattern_json: &str, element: &str, window: i64) -> Result<String, JsValue> {
    classify_impl(pattern_json, element, window).map_err(|e| JsValue::from_str(&e))
}
