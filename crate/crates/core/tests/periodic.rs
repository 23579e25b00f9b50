use bifol::dynamics::PeriodicWindow;
use bifol::fixtures;
use bifol::graphs::{build_graph, GraphKind};
use bifol::periodic::{leaf_name, parse_leaf_name, AffineElement, IndexAutomorphism, IntMap};
use bifol::{Error, Pattern, Sign};
use proptest::prelude::*;

#[test]
fn skew2_distance_grows_with_index() {
    let w = PeriodicWindow::new(&fixtures::skew(2), 0, 6).unwrap();
    let p = |i| w.leaf(Sign::Plus, i).unwrap();
    for i in 0..=6 {
        assert_eq!(w.dist(p(0), p(i)), Some(i as u32));
    }
}

#[test]
fn wider_skew_bands_shrink_distances() {
    for width in 2..=4 {
        let w = PeriodicWindow::new(&fixtures::skew(width), 0, 12).unwrap();
        let d = w.dist(w.leaf(Sign::Plus, 0).unwrap(), w.leaf(Sign::Plus, 12).unwrap()).unwrap();
        assert_eq!(d as usize, 12_usize.div_ceil(width - 1));
    }
}

#[test]
fn trivial_plane_window_is_complete() {
    let fp = fixtures::trivial_plane().materialize_window(0, 5).unwrap();
    let p = Pattern::new(fp).unwrap();
    assert_eq!(build_graph(&p, GraphKind::XPlus).diameter(), Some(1));
    assert_eq!(build_graph(&p, GraphKind::XMinus).diameter(), Some(1));
}

#[test]
fn window_leaf_counts() {
    let fp = fixtures::skew(2).materialize_window(0, 3).unwrap();
    assert_eq!(fp.leaves.iter().filter(|l| l.sign == Sign::Plus).count(), 4);
    assert_eq!(fp.leaves.iter().filter(|l| l.sign == Sign::Minus).count(), 4);
    let fp = fixtures::ladder_periodic().materialize_window(0, 8).unwrap();
    assert_eq!(fp.leaves.len(), 18);
    assert_eq!(fp.nonseparated.len(), 2);
}

#[test]
fn window_too_small() {
    assert!(matches!(
        fixtures::ladder_periodic().materialize_window(0, 1),
        Err(Error::WindowTooSmall { period: 3, .. })
    ));
    assert!(matches!(fixtures::skew(2).materialize_window(2, 2), Err(Error::Params(_))));
}

#[test]
fn windows_are_nested() {
    // A smaller window is the restriction of a larger one: same relations
    // on the shared leaves.
    let pp = fixtures::ladder_periodic();
    let small = Pattern::new(pp.materialize_window(3, 8).unwrap()).unwrap();
    let large = Pattern::new(pp.materialize_window(0, 11).unwrap()).unwrap();
    for a in 0..small.leaf_count() {
        for c in 0..small.leaf_count() {
            let (la, lc) = (large.leaf(small.leaf_id(a)).unwrap(), large.leaf(small.leaf_id(c)).unwrap());
            assert_eq!(small.intersects(a, c), large.intersects(la, lc));
            assert_eq!(small.is_nonseparated(a, c), large.is_nonseparated(la, lc));
        }
    }
}

#[test]
fn leaf_names_round_trip() {
    for i in [-7, 0, 12] {
        for s in [Sign::Plus, Sign::Minus] {
            assert_eq!(parse_leaf_name(&leaf_name(s, i)), Some((s, i)));
        }
    }
    assert_eq!(parse_leaf_name("q3"), None);
}

#[test]
fn shift_acts_on_leaves() {
    let g = fixtures::skew(2).automorphism("shift").unwrap();
    assert_eq!(g.act_leaf("p3").unwrap(), "p4");
    assert_eq!(g.inverse().act_leaf("m0").unwrap(), "m-1");
    assert!(g.compose(&g.inverse()).is_identity());
    assert_eq!(g.pow(3), IndexAutomorphism::shift(1, 3));
    assert!(matches!(g.act_leaf("x"), Err(Error::UnknownLeaf(_))));
}

#[test]
fn non_bijective_offsets_rejected() {
    assert!(matches!(IntMap::new(vec![1, 0]), Err(Error::NotBijective)));
    assert!(matches!(IndexAutomorphism::new(vec![0, 0], vec![1, 0]), Err(Error::NotBijective)));
    assert!(IntMap::new(vec![1, -1]).is_ok());
}

#[test]
fn non_preserving_map_rejected() {
    // Shifting only the minus family moves skew(2)'s band.
    let pp = fixtures::skew(2);
    assert!(matches!(IndexAutomorphism::for_pattern(&pp, vec![0], vec![1]), Err(Error::NotPreserved(_))));
    // The trivial plane accepts any shift of each family.
    let tp = fixtures::trivial_plane();
    assert!(IndexAutomorphism::for_pattern(&tp, vec![0, 0], vec![5, 5]).is_ok());
}

#[test]
fn every_declared_automorphism_checks() {
    for pp in [
        fixtures::skew(3),
        fixtures::trivial_plane(),
        fixtures::ladder_periodic(),
        fixtures::prongline(),
        fixtures::scalloped(4),
    ] {
        pp.check().unwrap();
        for name in pp.automorphisms.keys() {
            pp.automorphism(name).unwrap();
        }
    }
}

#[test]
fn scalloped_invariance() {
    let pp = fixtures::scalloped(2);
    let shift = pp.automorphism("shift").unwrap();
    assert!(pp.scalloped_invariant(&shift).unwrap());
    assert!(pp.scalloped_invariant(&IndexAutomorphism::shift(2, 4)).unwrap());
    // An odd shift carries each lozenge onto its neighbour.
    assert!(pp.scalloped_invariant(&IndexAutomorphism::shift(2, 1)).unwrap());
    // Moving only the plus sides tears the lozenges apart.
    assert!(!pp.scalloped_invariant(&IndexAutomorphism::new(vec![2, 2], vec![0, 0]).unwrap()).unwrap());
    assert!(matches!(fixtures::skew(2).scalloped_invariant(&IndexAutomorphism::shift(1, 1)), Err(Error::NoMarker)));
}

#[test]
fn affine_basics() {
    let g = AffineElement::new(1, [0, 0]);
    let t = AffineElement::new(0, [1, 0]);
    assert!(!g.is_free());
    assert!(t.is_free());
    assert!(!AffineElement::IDENTITY.is_free());
    let gt = g.checked_mul(&t).unwrap();
    assert_eq!(gt, AffineElement::new(1, [2, 1]));
    assert_eq!(gt.checked_mul(&gt.checked_inverse().unwrap()).unwrap(), AffineElement::IDENTITY);
}

fn offsets(n: usize) -> impl Strategy<Value = Vec<i64>> {
    // A permutation of residues plus arbitrary multiples of n.
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(-3i64..=3, n))
        .prop_map(move |(perm, q)| (0..n).map(|r| perm[r] as i64 - r as i64 + q[r] * n as i64).collect())
}

proptest! {
    #[test]
    fn intmaps_form_a_group(a in offsets(4), b in offsets(4), c in offsets(4), i in -40i64..40) {
        let (a, b, c) = (IntMap::new(a).unwrap(), IntMap::new(b).unwrap(), IntMap::new(c).unwrap());
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).apply(i), a.apply(b.apply(i)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
        prop_assert_eq!(a.compose(&IntMap::identity(4)), a.clone());
        prop_assert_eq!(a.inverse().apply(a.apply(i)), i);
    }

    #[test]
    fn affine_group_laws(k in -3i64..=3, v in prop::array::uniform2(-20i64..20),
                         l in -3i64..=3, w in prop::array::uniform2(-20i64..20),
                         m in -3i64..=3, u in prop::array::uniform2(-20i64..20)) {
        let (x, y, z) = (AffineElement::new(k, v), AffineElement::new(l, w), AffineElement::new(m, u));
        let left = x.checked_mul(&y).unwrap().checked_mul(&z).unwrap();
        let right = x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(x.checked_mul(&x.checked_inverse().unwrap()).unwrap(), AffineElement::IDENTITY);
    }
}
