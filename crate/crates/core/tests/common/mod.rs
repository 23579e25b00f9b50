//! Fixture suites and exhaustive harnesses shared by several test targets.
//! Harnesses count checks and violations instead of panicking so the
//! acceptance target can report them.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bifol::dynamics::{
    axis, centred_window, induced_blocks, overlap_interval, project_to_pseudoline, AxisData, PeriodicWindow,
};
use bifol::fixtures::{self, Fixture, SHIPPED};
use bifol::layout::with_all_crossings;
use bifol::pattern::{BlockMode, FinitePattern, LeafId, Pattern, PointId, Sign};
use bifol::periodic::PeriodicPattern;
use bifol::random::random_pattern;
use bifol::walls::{WallContext, WallKind};
use bifol::Error;

/// Indices per periodic window in the fixture suites.
pub const WINDOW: i64 = 16;
pub const RANDOM_SEEDS: u64 = 200;
pub const RANDOM_MAX_LEAVES: usize = 20;

pub fn finite(kind: &str, n: Option<i64>) -> Pattern {
    match fixtures::generate(kind, n).unwrap() {
        Fixture::Finite(f) => Pattern::new(f).unwrap(),
        Fixture::Periodic(_) => panic!("{kind} is periodic"),
    }
}

/// Every shipped fixture as a finite pattern with a crossing point at every
/// crossing; periodic ones as the window `[0, WINDOW)`.
pub fn shipped_patterns() -> Vec<(String, Pattern)> {
    SHIPPED
        .iter()
        .map(|&(stem, kind, param)| {
            let fp = match fixtures::generate(kind, param).unwrap() {
                Fixture::Finite(f) => f,
                Fixture::Periodic(pp) => with_all_crossings(pp.materialize_window(0, WINDOW - 1).unwrap()),
            };
            (stem.to_string(), Pattern::new(fp).unwrap())
        })
        .collect()
}

/// Shipped fixtures plus the ladders of every size up to 8 and smaller skew
/// windows. The scalloped window is left out: it carries only the lozenge
/// sides, so every minus leaf meets a single plus leaf and its leaf graphs
/// have no edges.
pub fn fixture_suite() -> Vec<(String, Pattern)> {
    let mut out = shipped_patterns();
    out.retain(|(name, _)| name != "scalloped");
    for n in 1..=8 {
        out.push((format!("ladder{n}"), finite("ladder", Some(n))));
    }
    for w in 2..=4 {
        for size in [4, 8, 12] {
            let fp = fixtures::skew(w).materialize_window(0, size - 1).unwrap();
            out.push((format!("skew{w}[0,{size})"), Pattern::new(with_all_crossings(fp)).unwrap()));
        }
    }
    for m in 1..=6 {
        out.push((format!("sinestrip{m}"), finite("sinestrip", Some(m))));
    }
    out
}

/// Patterns with at most 12 leaves: small fixtures and random draws.
pub fn small_patterns() -> Vec<(String, FinitePattern)> {
    let mut out = Vec::new();
    for (k, n) in [
        ("trivial", Some(3)),
        ("ladder", Some(1)),
        ("ladder", Some(2)),
        ("lozenge", None),
        ("chain", Some(2)),
        ("prong", Some(3)),
        ("prong", Some(4)),
        ("prongdiv", None),
        ("prongnondiv", None),
        ("prongchain", Some(1)),
        ("partlink", None),
    ] {
        if let Fixture::Finite(fp) = fixtures::generate(k, n).unwrap() {
            out.push((format!("{k}{}", n.map(|v| v.to_string()).unwrap_or_default()), fp));
        }
    }
    for seed in 0..120 {
        out.push((format!("random{seed}"), random_pattern(seed, 12).unwrap()));
    }
    out.retain(|(_, fp)| fp.leaves.len() <= 12);
    out
}

pub fn random_suite() -> Vec<(String, Pattern)> {
    (0..RANDOM_SEEDS)
        .map(|s| (format!("random{s}"), Pattern::new(random_pattern(s, RANDOM_MAX_LEAVES).unwrap()).unwrap()))
        .collect()
}

// ---- pseudo-intervals ----

/// Compares every same-sign pseudo-interval with `paths`, the set of leaves
/// lying on every leaf path between its ends, and checks that the blocks
/// partition the chain, splitting exactly at declared nonseparated pairs.
pub fn interval_harness(fp: &FinitePattern, paths: fn(&FinitePattern, usize, usize) -> BTreeSet<usize>) -> Tally {
    let p = Pattern::new(fp.clone()).unwrap();
    let n = fp.leaves.len();
    let mut t = Tally::default();
    for x in 0..n {
        for y in 0..n {
            if x == y || fp.leaves[x].sign != fp.leaves[y].sign {
                continue;
            }
            let (lx, ly) = (p.leaf(&fp.leaves[x].id).unwrap(), p.leaf(&fp.leaves[y].id).unwrap());
            let iv = p.pseudo_interval(lx, ly, BlockMode::NonsepBlocks).unwrap();
            let want: BTreeSet<&str> = paths(fp, x, y).into_iter().map(|i| fp.leaves[i].id.as_str()).collect();
            let got: BTreeSet<&str> = iv.chain.iter().map(|&l| p.leaf_id(l)).collect();
            let partition = iv.blocks.concat() == iv.chain;
            let splits = iv.blocks.windows(2).all(|w| p.is_nonseparated(*w[0].last().unwrap(), w[1][0]));
            let inside = iv.blocks.iter().all(|b| b.windows(2).all(|w| !p.is_nonseparated(w[0], w[1])));
            let count = iv.blocks.len() == p.block_count(lx, ly);
            t.check(got == want && partition && splits && inside && count, || {
                format!("{} {}: chain {got:?}, paths {want:?}", fp.leaves[x].id, fp.leaves[y].id)
            });
        }
    }
    t
}

// ---- wall families ----

/// Pairwise admissibility of two walls, from the definitions.
pub fn compatible_oracle(p: &Pattern, kind: WallKind, a: LeafId, b: LeafId) -> bool {
    if matches!(kind, WallKind::RPlus | WallKind::RMinus) {
        p.pseudo_interval(a, b, BlockMode::NonsepBlocks).map(|pi| pi.blocks.len() >= 2).unwrap_or(false)
    } else {
        let disjoint = |u: LeafId, v: LeafId| {
            !p.crossings().iter().any(|&(s, t)| (s, t) == (u, v) || (s, t) == (v, u)) && !p.intersects(u, v)
        };
        disjoint(a, b) && (0..p.leaf_count()).all(|c| c == a || c == b || !(p.intersects(c, a) && p.intersects(c, b)))
    }
}

/// Largest subset of separating leaves whose members are pairwise
/// admissible, by enumerating all subsets.
pub fn brute_force(p: &Pattern, x: PointId, y: PointId, kind: WallKind) -> usize {
    let pool: Vec<LeafId> = (0..p.leaf_count())
        .filter(|&l| kind.sign().is_none_or(|s| p.sign(l) == s) && p.separates_point(l, x, y))
        .collect();
    assert!(pool.len() <= 20, "pool too large for brute force");
    let mut best = 0;
    for mask in 0u32..(1 << pool.len()) {
        let set: Vec<LeafId> = (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
        if set.len() <= best {
            continue;
        }
        if set.iter().enumerate().all(|(i, &a)| set[i + 1..].iter().all(|&b| compatible_oracle(p, kind, a, b))) {
            best = set.len();
        }
    }
    best
}

/// Wall distance implied by a largest family of `size` walls.
pub fn expected_distance(kind: WallKind, x: PointId, y: PointId, size: usize) -> u32 {
    if x == y {
        0
    } else if kind == WallKind::H {
        size as u32
    } else {
        1 + size as u32
    }
}

/// Compares witnesses and distances with the subset oracle over all point
/// pairs and wall kinds; returns `(checked, mismatches)`.
pub fn witness_vs_brute_force(p: &Pattern) -> (usize, Vec<String>) {
    let ctx = WallContext::new(p);
    let n = p.points().len();
    let mut checked = 0;
    let mut bad = Vec::new();
    for kind in WallKind::ALL {
        for x in 0..n {
            for y in 0..n {
                let fam = ctx.longest_chain_witness(x, y, kind).unwrap();
                let size = if x == y { 0 } else { brute_force(p, x, y, kind) };
                let admissible = fam.leaves.iter().all(|&l| p.separates_point(l, x, y))
                    && fam
                        .leaves
                        .iter()
                        .enumerate()
                        .all(|(i, &a)| fam.leaves[i + 1..].iter().all(|&b| compatible_oracle(p, kind, a, b)));
                let d = ctx.wall_distance(x, y, kind).unwrap();
                checked += 1;
                if fam.leaves.len() != size || !admissible || d != expected_distance(kind, x, y, size) {
                    bad.push(format!(
                        "{kind} {} {}: witness {} oracle {size}",
                        p.points()[x].id,
                        p.points()[y].id,
                        fam.leaves.len()
                    ));
                }
            }
        }
    }
    (checked, bad)
}

// ---- periodic windows ----

pub fn window(pp: &PeriodicPattern, periods: i64) -> PeriodicWindow {
    let (lo, hi) = centred_window(periods * pp.period as i64);
    PeriodicWindow::new(pp, lo, hi).unwrap()
}

/// Axis leaves at least `margin` indices from the window edges.
pub fn interior(w: &PeriodicWindow, a: &AxisData, margin: i64) -> Vec<LeafId> {
    a.leaves
        .iter()
        .copied()
        .filter(|&l| {
            let (_, i) = w.index(l);
            i >= w.lo + margin && i <= w.hi - margin
        })
        .collect()
}

/// Harness tally: checks made and descriptions of failures.
#[derive(Debug, Default)]
pub struct Tally {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.checked > 0 && self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

/// Induced blocks of axis subintervals: the index shift is at most one and
/// interior induced blocks are axis blocks.
pub fn induced_harness(pp: &PeriodicPattern, periods: i64) -> Tally {
    let g = pp.automorphism("shift").unwrap();
    let w = window(pp, periods);
    let a = axis(&w, &g, Sign::Plus).unwrap();
    let mut t = Tally::default();
    for (i, &x) in a.leaves.iter().enumerate() {
        for &y in &a.leaves[i + 1..] {
            let ib = induced_blocks(&w, &a, x, y).unwrap();
            if ib.n >= ib.i + 2 {
                let inner = ib.blocks[1..ib.blocks.len() - 1].iter().all(|b| a.blocks.contains(b));
                t.check(ib.within_bounds() && inner, || format!("{} {}: {ib:?}", w.name(x), w.name(y)));
            }
        }
    }
    t
}

/// The projection to the axis realizes the distance to the axis.
pub fn projection_harness(pp: &PeriodicPattern, periods: i64) -> Tally {
    let g = pp.automorphism("shift").unwrap();
    let w = window(pp, periods);
    let a = axis(&w, &g, Sign::Plus).unwrap();
    let margin = 2 * pp.period as i64;
    let mut t = Tally::default();
    for x in w.pattern.leaves_of(Sign::Plus) {
        let (_, i) = w.index(x);
        if i < w.lo + margin || i > w.hi - margin {
            continue;
        }
        let proj = project_to_pseudoline(&w.pattern, &a.leaves, x).unwrap();
        let dp = w.dist_to_set(x, &proj).unwrap();
        for &y in &a.leaves {
            t.check(dp <= w.dist(x, y).unwrap(), || format!("{} -> {}", w.name(x), w.name(y)));
        }
    }
    t
}

/// Large-overlap intervals for powers `g^k`, `|k| ≤ powers`, of the shift.
pub fn overlap_harness(pp: &PeriodicPattern, periods: i64, eps: u32, powers: i64) -> Tally {
    let g = pp.automorphism("shift").unwrap();
    let w = window(pp, periods);
    let a = axis(&w, &g, Sign::Plus).unwrap();
    let inner = interior(&w, &a, (powers + 1) * pp.period as i64);
    let mut t = Tally::default();
    for k in -powers..=powers {
        let h = g.pow(k);
        for (i, &x) in inner.iter().enumerate() {
            for &y in &inner[i + 1..] {
                match overlap_interval(&w, x, y, &h, eps) {
                    Ok(r) => t.check(r.pass(), || format!("{r:?}")),
                    Err(Error::Precondition(_)) => {}
                    Err(e) => t.check(false, || e.to_string()),
                }
            }
        }
    }
    t
}
