use std::path::PathBuf;
use std::process::{Command, Output};

use bifol::fixtures::SHIPPED;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

fn bifol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifol")).args(args).env_remove("BIFOL_BUDGET_MS").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bottleneck_on_all_fixtures_passes() {
    let files: Vec<PathBuf> = SHIPPED.iter().map(|(name, _, _)| fixture(name)).collect();
    let mut args = vec!["bottleneck", "--K", "3"];
    args.extend(files.iter().map(|f| path(f)));
    let o = bifol(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&o);
    assert_eq!(r["checks"][0]["tag"], "bottleneck-k3");
    assert_eq!(r["inputs"].as_array().unwrap().len(), SHIPPED.len());
    // Only the scalloped window has disconnected graphs.
    for row in r["results"].as_array().unwrap() {
        if row["status"] == "skipped" {
            assert!(row["input"].as_str().unwrap().ends_with("scalloped.json"), "{row}");
        }
    }
}

#[test]
fn bottleneck_fails_with_zero() {
    let o = bifol(&["bottleneck", "--K", "0", "--kinds", "x,xplus", path(&fixture("chain3"))]);
    assert_eq!(code(&o), 3);
    let r = report(&o);
    assert!(r["results"].as_array().unwrap().iter().any(|x| x["status"] == "fail" && x["witness"].is_array()));
}

#[test]
fn bottleneck_random_suite_is_seeded() {
    let run = |seed: &str| bifol(&["bottleneck", "--random", "10", "--seed", seed, "--max-leaves", "14"]);
    let (a, b, c) = (run("5"), run("5"), run("6"));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&c)["environment"]["seed"], 6);
}

#[test]
fn validate_good_and_corrupted() {
    let o = bifol(&["validate", path(&fixture("grid3"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["checks"][0]["pass"], true);

    let dir = tempfile::tempdir().unwrap();
    // A second leaf reusing an endpoint of the first, same sign.
    let mut fp: Value = serde_json::from_str(&std::fs::read_to_string(fixture("grid3")).unwrap()).unwrap();
    let first = fp["leaves"][0]["endpoints"][0].clone();
    fp["leaves"][1]["endpoints"][0] = first;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&fp).unwrap()).unwrap();
    let o = bifol(&["validate", path(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(!report(&o)["results"]["violations"].as_array().unwrap().is_empty());

    // Truncated file: parse error with a byte offset.
    let text = std::fs::read_to_string(fixture("grid3")).unwrap();
    let cut = dir.path().join("cut.json");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    let o = bifol(&["validate", path(&cut)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at byte"));
}

#[test]
fn census_over_budget() {
    let o = bifol(&["census", "--nmax", "99"]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    let o = Command::new(env!("CARGO_BIN_EXE_bifol"))
        .args(["census", "--model", "trivial", "--nmax", "10"])
        .env("BIFOL_BUDGET_MS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
}

#[test]
fn census_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("census.csv");
    let o = bifol(&["census", "--model", "skew", "--nmax", "8", "--h", "shift", "-o", path(&csv)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,ball,free,fixed,free_fraction,lambda_g,lambda_free");
    assert_eq!(lines.count(), 9);
    let r = report(&o);
    let tags: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["tag"].as_str().unwrap()).collect();
    assert_eq!(tags, ["genericity", "ball-growth-bound"]);
    assert_eq!(r["results"]["growth"]["rows"][8]["ball"], 265);
}

#[test]
fn census_with_generator_files() {
    let dir = tempfile::tempdir().unwrap();
    let gens = dir.path().join("gens.json");
    std::fs::write(&gens, r#"{"generators": [{"name": "s", "offsets": [1, 1]}, {"name": "t", "offsets": [1, -1]}]}"#)
        .unwrap();
    let o = bifol(&["census", "--model", "skew", "--gens", path(&gens), "--nmax", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["results"]["growth"]["generators"], serde_json::json!(["s", "t"]));

    std::fs::write(
        &gens,
        r#"{"generators": [{"name": "A", "k": 1, "v": [0, 0]}, {"name": "t1", "k": 0, "v": [1, 0]}]}"#,
    )
    .unwrap();
    let o = bifol(&["census", "--model", "trivial", "--gens", path(&gens), "--nmax", "4"]);
    assert_eq!(code(&o), 0);

    let o = bifol(&["census", "--model", "pattern", "--pattern", path(&fixture("ladder-periodic")), "--nmax", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_flags_are_errors() {
    let o = bifol(&["validate", "--strict", path(&fixture("grid3"))]);
    assert_eq!(code(&o), 1);
    assert!(bifol(&["frobnicate"]).status.code() == Some(1));
    assert_eq!(code(&bifol(&["census", "--model", "trivial", "--h", "shift"])), 1);
}

#[test]
fn graph_and_export_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let o = bifol(&["graph", path(&fixture("grid3")), "--kind", "xplus", "-o", path(&dot)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches(" -- ").count(), 3);
    assert_eq!(report(&o)["results"]["vertices"], 3);

    let o = bifol(&["export", path(&fixture("ladder3")), "--format", "dot", "--kind", "gammaplus", "-o", path(&dot)]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(text.matches("(+)").count(), 8);

    let json = dir.path().join("p.json");
    let o = bifol(&["export", path(&fixture("skew3")), "--format", "json", "-o", path(&json)]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&json).unwrap(), std::fs::read(fixture("skew3")).unwrap());
}

#[test]
fn distances() {
    let o = bifol(&["dist", path(&fixture("ladder8")), "--from", "x0", "--to", "y7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["results"]["distance"], 22);
    let o = bifol(&["dist", path(&fixture("grid3")), "--kind", "x"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("leaf,"));
    assert_eq!(code(&bifol(&["dist", path(&fixture("grid3")), "--from", "v0", "--to", "nope"])), 1);
}

#[test]
fn metric_and_lozenges() {
    let o = bifol(&["metric", path(&fixture("grid3"))]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(report(&o)["checks"].as_array().unwrap().len(), 6);
    let o = bifol(&["lozenges", path(&fixture("chain3"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["results"]["lozenges"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_and_wpd() {
    let o = bifol(&["classify", path(&fixture("ladder-periodic")), "--expect", "loxodromic"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["results"]["classification"]["verdict"], "loxodromic");
    let o = bifol(&["classify", path(&fixture("trivial-plane")), "--element", "drift", "--expect", "loxodromic"]);
    assert_eq!(code(&o), 3);
    let o = bifol(&["wpd", path(&fixture("ladder-periodic")), "--window", "24"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(bifol(&["classify", path(&fixture("grid3"))]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    let args = ["metric", "--kind", "d+", "--window", "0:9"];
    let f = fixture("skew2");
    let mut a = args.to_vec();
    a.push(path(&f));
    assert_eq!(bifol(&a).stdout, bifol(&a).stdout);
}
