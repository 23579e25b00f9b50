use bifol_wasm::{classify_impl, fixture_impl, leaf_graph_impl, validate_impl};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn validate_fixture_and_garbage() {
    let grid = fixture_impl("trivial", 3).unwrap();
    assert_eq!(parse(&validate_impl(&grid).unwrap())["valid"], true);
    let bad = fixture_impl("ladder", 2).unwrap().replace("\"y0\"", "\"x0\"");
    assert_eq!(parse(&validate_impl(&bad).unwrap())["valid"], false);
    assert!(validate_impl("{").unwrap_err().contains("byte"));
}

#[test]
fn leaf_graph_of_grid() {
    let grid = fixture_impl("trivial", 3).unwrap();
    let g = parse(&leaf_graph_impl(&grid, "xplus").unwrap());
    assert_eq!((g["vertices"].as_u64(), g["edges"].as_u64()), (Some(3), Some(3)));
    assert!(g["dot"].as_str().unwrap().starts_with("graph xplus {"));
    assert!(leaf_graph_impl(&grid, "xx").is_err());
    let skew = fixture_impl("skew", 2).unwrap();
    assert_eq!(parse(&leaf_graph_impl(&skew, "xplus").unwrap())["diameter"], 15);
}

#[test]
fn classify_periodic_elements() {
    let ladder = fixture_impl("ladder-periodic", 0).unwrap();
    assert_eq!(parse(&classify_impl(&ladder, "shift", 12).unwrap())["verdict"], "loxodromic");
    let plane = fixture_impl("trivial-plane", 0).unwrap();
    assert_eq!(parse(&classify_impl(&plane, "identity", 8).unwrap())["verdict"], "elliptic");
    assert!(classify_impl(&fixture_impl("trivial", 3).unwrap(), "shift", 8).is_err());
}
