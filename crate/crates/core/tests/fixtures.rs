//! Shipped fixture files: byte stability and the expected distance table.
//!
//! Run with `BIFOL_BLESS=1` to rewrite the files from the generators and the
//! oracle.

mod oracle;

use std::path::PathBuf;

use bifol::fixtures::{self, Fixture, SHIPPED};
use bifol::graphs::{build_graph, GraphKind};
use bifol::io;
use bifol::pattern::{FinitePattern, Sign};
use bifol::Pattern;
use serde_json::{json, Value};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn bless() -> bool {
    std::env::var_os("BIFOL_BLESS").is_some()
}

#[test]
fn shipped_files_match_generators() {
    for &(stem, kind, param) in SHIPPED {
        let text = io::serialize_pattern(&fixtures::generate(kind, param).unwrap()).unwrap();
        let path = dir().join(format!("{stem}.json"));
        if bless() {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{stem} differs from its generator");
    }
}

#[test]
fn parse_serialize_round_trip() {
    for &(stem, _, _) in SHIPPED {
        let text = std::fs::read_to_string(dir().join(format!("{stem}.json"))).unwrap();
        let parsed = io::parse_pattern(&text).unwrap();
        assert_eq!(io::serialize_pattern(&parsed).unwrap(), text, "{stem}");
    }
}

#[test]
fn grid3_file_is_grid3() {
    let f = io::read_pattern(dir().join("grid3.json")).unwrap();
    assert_eq!(f, Fixture::Finite(fixtures::grid3()));
}

fn finite(kind: &str, param: Option<i64>) -> FinitePattern {
    match fixtures::generate(kind, param).unwrap() {
        Fixture::Finite(fp) => fp,
        Fixture::Periodic(_) => unreachable!(),
    }
}

/// Rows `(fixture, param, from, to)` of the expected table.
fn table_rows() -> Vec<(&'static str, i64, String, String)> {
    let mut rows = Vec::new();
    for n in 1..=8 {
        rows.push(("ladder", n, "x0".to_string(), format!("y{}", n - 1)));
    }
    for n in 1..=4 {
        rows.push(("prongchain", n, "x".to_string(), "y".to_string()));
    }
    rows.push(("prongdiv", 0, "x".into(), "y".into()));
    rows.push(("prongnondiv", 0, "x".into(), "y".into()));
    rows
}

fn oracle_table() -> Value {
    let rows: Vec<Value> = table_rows()
        .into_iter()
        .map(|(kind, n, from, to)| {
            let fp = finite(kind, (n > 0).then_some(n));
            let d = oracle::xsign_distance(&fp, Sign::Plus, &from, &to);
            json!({"fixture": kind, "param": n, "from": from, "to": to, "graph": "xplus", "distance": d})
        })
        .collect();
    json!({ "rows": rows })
}

#[test]
fn expected_distances_from_oracle() {
    let text = io::to_canonical_json(&oracle_table()).unwrap();
    let path = dir().join("expected_distances.json");
    if bless() {
        std::fs::write(&path, &text).unwrap();
    }
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn library_bfs_matches_expected_table() {
    let table: Value = io::from_json(&std::fs::read_to_string(dir().join("expected_distances.json")).unwrap()).unwrap();
    for row in table["rows"].as_array().unwrap() {
        let kind = row["fixture"].as_str().unwrap();
        let n = row["param"].as_i64().unwrap();
        let p = Pattern::new(finite(kind, (n > 0).then_some(n))).unwrap();
        let g = build_graph(&p, GraphKind::XPlus);
        let (a, b) = (p.leaf(row["from"].as_str().unwrap()).unwrap(), p.leaf(row["to"].as_str().unwrap()).unwrap());
        let d = g.distance(&p, a, b).unwrap();
        assert_eq!(d.map(u64::from), row["distance"].as_u64(), "{kind} {n}");
    }
}

#[test]
fn ladder_and_prong_lower_bounds() {
    let table: Value = io::from_json(&std::fs::read_to_string(dir().join("expected_distances.json")).unwrap()).unwrap();
    for row in table["rows"].as_array().unwrap() {
        let d = row["distance"].as_i64().unwrap();
        let n = row["param"].as_i64().unwrap();
        match row["fixture"].as_str().unwrap() {
            "ladder" => assert!(d >= n - 1, "{row}"),
            "prongchain" => assert!(d >= n, "{row}"),
            "prongdiv" => assert!(d >= 2, "{row}"),
            _ => {}
        }
    }
}
