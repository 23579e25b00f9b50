mod common;

use bifol::fixtures::{self, Fixture};
use bifol::pattern::{LeafId, Pattern, PointId, PointKind};
use bifol::walls::{self, check_metric_matrix, metric_axiom_check, qi_metric_report, WallContext, WallKind};
use bifol::Error;
use common::{brute_force, compatible_oracle, finite, witness_vs_brute_force};

fn point(p: &Pattern, id: &str) -> PointId {
    p.point(id).unwrap_or_else(|_| panic!("no point {id}"))
}

fn leaf(p: &Pattern, id: &str) -> LeafId {
    p.leaf(id).unwrap()
}

#[test]
fn grid3_has_no_aligned_plus_pair() {
    let p = finite("trivial", None);
    let plus: Vec<LeafId> = p.leaves_of(bifol::Sign::Plus);
    for (i, &a) in plus.iter().enumerate() {
        for &b in &plus[i + 1..] {
            assert!(!walls::aligned(&p, a, b).unwrap());
        }
    }
}

#[test]
fn aligned_rejects_repeated_leaf() {
    let p = finite("trivial", None);
    assert!(matches!(walls::aligned(&p, 0, 0), Err(Error::Precondition(_))));
    assert!(walls::reeb_separated(&p, 0, 0).is_err());
}

#[test]
fn ladder_endpoints_are_reeb_separated() {
    let p = finite("ladder", Some(2));
    assert!(walls::reeb_separated(&p, leaf(&p, "x0"), leaf(&p, "y1")).unwrap());
    assert!(!walls::reeb_separated(&p, leaf(&p, "x0"), leaf(&p, "y0")).unwrap());
    assert!(walls::aligned(&p, leaf(&p, "y0"), leaf(&p, "x1")).unwrap());
}

#[test]
fn grid3_corner_distance() {
    let p = finite("trivial", None);
    let x = point(&p, "v0/h0");
    let y = point(&p, "v2/h2");
    assert_eq!(walls::wall_distance(&p, x, y, WallKind::HPlus).unwrap(), 2);
    let fam = walls::longest_chain_witness(&p, x, y, WallKind::HPlus).unwrap();
    assert_eq!(fam.leaves.len(), 1);
    assert_eq!(p.leaf_id(fam.leaves[0]), "v0");
    assert_eq!(walls::wall_distance(&p, x, x, WallKind::HPlus).unwrap(), 0);
    assert!(walls::longest_chain_witness(&p, x, x, WallKind::H).unwrap().leaves.is_empty());
}

#[test]
fn ladder_reeb_distance_across_pair() {
    let p = finite("ladder", Some(2));
    let ctx = WallContext::new(&p);
    for (a, b) in [("x0/c0", "x1/c1"), ("y0/c0", "x1/c1")] {
        let d = ctx.wall_distance(point(&p, a), point(&p, b), WallKind::RPlus).unwrap();
        let bf = brute_force(&p, point(&p, a), point(&p, b), WallKind::RPlus);
        assert_eq!(d, 1 + bf as u32, "{a} {b}");
    }
}

#[test]
fn longest_chain_matches_brute_force_on_small_fixtures() {
    for (k, n) in [
        ("trivial", None),
        ("ladder", Some(2)),
        ("ladder", Some(3)),
        ("lozenge", None),
        ("prong", Some(3)),
        ("prongdiv", None),
        ("chain", Some(2)),
    ] {
        let (checked, bad) = witness_vs_brute_force(&finite(k, n));
        assert!(checked > 0 && bad.is_empty(), "{k}: {bad:?}");
    }
}

#[test]
fn nested_separators_are_linearly_ordered() {
    for (k, n) in [("trivial", None), ("ladder", Some(3)), ("chain", Some(2)), ("prongchain", Some(2))] {
        let p = finite(k, n);
        let pts = p.points().len();
        for x in 0..pts {
            for y in 0..pts {
                let seps: Vec<LeafId> = (0..p.leaf_count()).filter(|&l| p.separates_point(l, x, y)).collect();
                for &a in &seps {
                    for &b in &seps {
                        if a == b || p.intersects(a, b) {
                            continue;
                        }
                        let sx = &p.points()[x].sides;
                        let a_before_b = p.region_of(a, b).map(bifol::Side::Region) != Some(sx[a]);
                        let b_before_a = p.region_of(b, a).map(bifol::Side::Region) != Some(sx[b]);
                        assert!(a_before_b ^ b_before_a, "{k}: {} {}", p.leaf_id(a), p.leaf_id(b));
                    }
                }
            }
        }
    }
}

#[test]
fn chain_coherence_on_small_fixtures() {
    // For nested separators a < b < c of a pair of points, consecutive
    // admissibility forces admissibility of (a, c).
    for (k, n) in [("trivial", None), ("ladder", Some(2)), ("lozenge", None), ("prong", Some(3)), ("chain", Some(2))] {
        let p = finite(k, n);
        assert!(p.leaf_count() <= 12, "{k}");
        let ctx = WallContext::new(&p);
        let pts = p.points().len();
        let mut triples = 0;
        for kind in WallKind::ALL {
            for x in 0..pts {
                let sx = &p.points()[x].sides;
                let before = |a: LeafId, b: LeafId| {
                    !p.intersects(a, b) && p.region_of(a, b).map(bifol::Side::Region) != Some(sx[a])
                };
                for y in 0..pts {
                    let seps: Vec<LeafId> = (0..p.leaf_count())
                        .filter(|&l| kind.sign().is_none_or(|s| p.sign(l) == s) && p.separates_point(l, x, y))
                        .collect();
                    for &a in &seps {
                        for &b in &seps {
                            for &c in &seps {
                                if a == b || b == c || a == c || !before(a, b) || !before(b, c) {
                                    continue;
                                }
                                if compatible_oracle(&p, kind, a, b) && compatible_oracle(&p, kind, b, c) {
                                    triples += 1;
                                    assert!(compatible_oracle(&p, kind, a, c), "{k} {kind}");
                                    assert!(ctx.compatible(kind, a, c));
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(!matches!(k, "ladder" | "chain") || triples > 0, "{k}: no nested triples exercised");
    }
}

#[test]
fn metric_axioms_hold() {
    let g = finite("trivial", None);
    let ctx = WallContext::new(&g);
    for kind in WallKind::ALL {
        let r = metric_axiom_check(&ctx, kind).unwrap();
        assert!(r.pass(), "{kind}: {:?}", r.violations);
    }
    let l = finite("ladder", Some(3));
    assert!(metric_axiom_check(&WallContext::new(&l), WallKind::RPlus).unwrap().pass());
    for (k, n) in [("prong", Some(3)), ("prongchain", Some(2)), ("chain", Some(3))] {
        let p = finite(k, n);
        let ctx = WallContext::new(&p);
        for kind in WallKind::ALL {
            assert!(metric_axiom_check(&ctx, kind).unwrap().pass(), "{k} {kind}");
        }
    }
}

#[test]
fn corrupted_separation_breaks_triangle() {
    let p = finite("trivial", None);
    let a = point(&p, "v0/h0");
    let c = point(&p, "v2/h2");
    // Pretend every leaf separates the two corners and nothing else.
    let ctx = WallContext::new(&p).with_separation(move |_, x, y| (x, y) == (a, c) || (x, y) == (c, a));
    let r = metric_axiom_check(&ctx, WallKind::H);
    let r = r.unwrap();
    assert!(r.violations.iter().any(|v| v.starts_with("triangle")), "{:?}", r.violations);
}

#[test]
fn matrix_check_reports_each_axiom() {
    let ids: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let bad = vec![vec![0, 1, 5], vec![1, 0, 1], vec![5, 2, 0]];
    let r = check_metric_matrix("t", &ids, &bad);
    assert!(r.violations.iter().any(|v| v.starts_with("triangle")));
    assert!(r.violations.iter().any(|v| v.contains("but")));
    let zero = vec![vec![0, 0], vec![0, 0]];
    assert!(!check_metric_matrix("t", &ids[..2], &zero).pass());
}

#[test]
fn degenerate_points_rejected() {
    let mut f = match fixtures::generate("trivial", None).unwrap() {
        Fixture::Finite(f) => f,
        _ => unreachable!(),
    };
    let dup = f.points[0].clone();
    f.points.push(bifol::MarkedPoint { id: "dup".into(), ..dup });
    let p = Pattern::new(f).unwrap();
    let e = walls::wall_distance(&p, 0, p.points().len() - 1, WallKind::H).unwrap_err();
    assert!(matches!(e, Error::DegeneratePoints(..)));
}

#[test]
fn qi_bounds_hold_on_grid3() {
    let p = finite("trivial", None);
    let r = qi_metric_report(&WallContext::new(&p)).unwrap();
    assert!(r.pass());
    let row = r.rows.iter().find(|r| r.metric == "d+" && r.x == "v0/h0" && r.y == "v2/h2").unwrap();
    assert_eq!((row.d_wall, row.d_graph), (2, Some(1)));
}

#[test]
fn qi_bounds_hold_on_skew_window() {
    let pat = match fixtures::generate("skew", Some(2)).unwrap() {
        Fixture::Periodic(p) => p,
        _ => unreachable!(),
    };
    let f = pat.materialize_window(0, 10).unwrap();
    let p = Pattern::new(bifol::layout::with_all_crossings(f)).unwrap();
    let r = qi_metric_report(&WallContext::new(&p)).unwrap();
    assert!(r.pass(), "{:?}", r.rows.iter().filter(|r| !r.ok).take(5).collect::<Vec<_>>());
    assert!(r.min_lower_slack.unwrap() >= 0 && r.min_upper_slack.unwrap() >= 0);
    assert_eq!(r.skipped_region_points, 0);
}

#[test]
fn region_points_are_skipped() {
    let p = finite("prong", Some(3));
    let r = qi_metric_report(&WallContext::new(&p)).unwrap();
    let regions = p.points().iter().filter(|q| matches!(q.kind, PointKind::Region)).count();
    assert_eq!(r.skipped_region_points, regions);
}

#[test]
fn wall_kind_parses() {
    for k in WallKind::ALL {
        assert_eq!(k.name().parse::<WallKind>().unwrap(), k);
    }
    assert!("dx".parse::<WallKind>().is_err());
}
