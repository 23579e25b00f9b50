//! Wall metrics on marked points: the size of the largest admissible family
//! of leaves all separating two points.
//!
//! Five families are supported. `H` uses all leaves, `H±` the leaves of one
//! sign, all requiring pairwise hyperbolic alignment (disjoint, and no third
//! leaf crosses both). `R±` uses the leaves of one sign, pairwise
//! Reeb-separated (their pseudo-interval has at least two blocks).
//!
//! Separating leaves of a fixed pair of points that are pairwise disjoint are
//! nested, so admissible families are chains in a partial order and the
//! supremum is a longest path in a DAG.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphKind};
use crate::pattern::{LeafId, Pattern, PointId, PointKind, Side, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WallKind {
    H,
    HPlus,
    HMinus,
    RPlus,
    RMinus,
}

impl WallKind {
    pub const ALL: [WallKind; 5] = [WallKind::H, WallKind::HPlus, WallKind::HMinus, WallKind::RPlus, WallKind::RMinus];

    pub fn name(self) -> &'static str {
        match self {
            WallKind::H => "dH",
            WallKind::HPlus => "d+",
            WallKind::HMinus => "d-",
            WallKind::RPlus => "dR+",
            WallKind::RMinus => "dR-",
        }
    }

    pub fn sign(self) -> Option<Sign> {
        match self {
            WallKind::H => None,
            WallKind::HPlus | WallKind::RPlus => Some(Sign::Plus),
            WallKind::HMinus | WallKind::RMinus => Some(Sign::Minus),
        }
    }

    fn reeb(self) -> bool {
        matches!(self, WallKind::RPlus | WallKind::RMinus)
    }
}

impl fmt::Display for WallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WallKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<WallKind> {
        WallKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Params(format!("unknown metric `{s}` (dH, d+, d-, dR+, dR-)")))
    }
}

/// A family of leaves all separating two points, ordered from the first
/// point to the second.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedFamily {
    pub kind: WallKind,
    pub leaves: Vec<LeafId>,
}

/// Disjoint, and no third leaf of the pattern intersects both.
pub fn aligned(p: &Pattern, a: LeafId, b: LeafId) -> Result<bool> {
    if a == b {
        return Err(Error::Precondition(format!("leaf `{}` given twice", p.leaf_id(a))));
    }
    Ok(aligned_unchecked(p, a, b))
}

fn aligned_unchecked(p: &Pattern, a: LeafId, b: LeafId) -> bool {
    !p.intersects(a, b) && (0..p.leaf_count()).all(|c| c == a || c == b || !(p.intersects(c, a) && p.intersects(c, b)))
}

/// Same sign and the pseudo-interval has at least two blocks.
pub fn reeb_separated(p: &Pattern, a: LeafId, b: LeafId) -> Result<bool> {
    if a == b {
        return Err(Error::Precondition(format!("leaf `{}` given twice", p.leaf_id(a))));
    }
    if p.sign(a) != p.sign(b) {
        return Err(Error::MixedSigns(p.leaf_id(a).into(), p.leaf_id(b).into()));
    }
    Ok(p.block_count(a, b) >= 2)
}

type SeparationHook<'a> = Box<dyn Fn(LeafId, PointId, PointId) -> bool + 'a>;

/// Precomputed pairwise admissibility for every kind; build once per pattern.
pub struct WallContext<'a> {
    p: &'a Pattern,
    aligned: Vec<Vec<bool>>,
    reeb: Vec<Vec<bool>>,
    /// Test hook: a replacement for the point separation predicate.
    separation_override: Option<SeparationHook<'a>>,
}

impl<'a> WallContext<'a> {
    pub fn new(p: &'a Pattern) -> WallContext<'a> {
        let n = p.leaf_count();
        let mut aligned = vec![vec![false; n]; n];
        let mut reeb = vec![vec![false; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let al = aligned_unchecked(p, a, b);
                aligned[a][b] = al;
                aligned[b][a] = al;
                if p.sign(a) == p.sign(b) {
                    let r = p.block_count(a, b) >= 2;
                    reeb[a][b] = r;
                    reeb[b][a] = r;
                }
            }
        }
        WallContext { p, aligned, reeb, separation_override: None }
    }

    /// Replaces the separation predicate (fault-injection harness).
    pub fn with_separation(mut self, f: impl Fn(LeafId, PointId, PointId) -> bool + 'a) -> WallContext<'a> {
        self.separation_override = Some(Box::new(f));
        self
    }

    pub fn pattern(&self) -> &Pattern {
        self.p
    }

    fn separates(&self, l: LeafId, x: PointId, y: PointId) -> bool {
        match &self.separation_override {
            Some(f) => f(l, x, y),
            None => self.p.separates_point(l, x, y),
        }
    }

    pub fn compatible(&self, kind: WallKind, a: LeafId, b: LeafId) -> bool {
        if kind.reeb() {
            self.reeb[a][b]
        } else {
            self.aligned[a][b]
        }
    }

    fn pool(&self, kind: WallKind, x: PointId, y: PointId) -> Vec<LeafId> {
        (0..self.p.leaf_count())
            .filter(|&l| kind.sign().is_none_or(|s| self.p.sign(l) == s) && self.separates(l, x, y))
            .collect()
    }

    fn check_points(&self, x: PointId, y: PointId) -> Result<()> {
        let pts = self.p.points();
        if x >= pts.len() || y >= pts.len() {
            return Err(Error::UnknownPoint(format!("#{}", x.max(y))));
        }
        if x != y && pts[x].sides == pts[y].sides {
            return Err(Error::DegeneratePoints(pts[x].id.clone(), pts[y].id.clone()));
        }
        Ok(())
    }

    /// Largest admissible family separating `x` and `y`, ordered from `x`.
    /// Ties are broken towards lower leaf indices.
    pub fn longest_chain_witness(&self, x: PointId, y: PointId, kind: WallKind) -> Result<AlignedFamily> {
        self.check_points(x, y)?;
        if x == y {
            return Ok(AlignedFamily { kind, leaves: Vec::new() });
        }
        let pool = self.pool(kind, x, y);
        let sx = &self.p.points()[x].sides;
        // `a` precedes `b` when `b` lies beyond `a` as seen from `x`.
        let before = |a: LeafId, b: LeafId| {
            let side = self.p.region_of(a, b).map(Side::Region);
            side.is_some_and(|s| s != sx[a])
        };
        let k = pool.len();
        let succ: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && self.compatible(kind, pool[i], pool[j]) && before(pool[i], pool[j]))
                    .collect()
            })
            .collect();
        let mut best = vec![0usize; k];
        let mut next = vec![usize::MAX; k];
        let mut state = vec![0u8; k];
        fn visit(i: usize, succ: &[Vec<usize>], best: &mut [usize], next: &mut [usize], state: &mut [u8]) {
            if state[i] == 2 {
                return;
            }
            assert!(state[i] == 0, "separator order has a cycle");
            state[i] = 1;
            let mut b = 1;
            for &j in &succ[i] {
                visit(j, succ, best, next, state);
                if best[j] + 1 > b {
                    b = best[j] + 1;
                    next[i] = j;
                }
            }
            best[i] = b;
            state[i] = 2;
        }
        let mut start = None;
        for i in 0..k {
            visit(i, &succ, &mut best, &mut next, &mut state);
            if start.is_none_or(|s: usize| best[i] > best[s]) {
                start = Some(i);
            }
        }
        let mut leaves = Vec::new();
        let mut cur = start;
        while let Some(i) = cur {
            leaves.push(pool[i]);
            cur = (next[i] != usize::MAX).then_some(next[i]);
        }
        Ok(AlignedFamily { kind, leaves })
    }

    pub fn wall_distance(&self, x: PointId, y: PointId, kind: WallKind) -> Result<u32> {
        let fam = self.longest_chain_witness(x, y, kind)?;
        Ok(match (kind, x == y) {
            (_, true) => 0,
            (WallKind::H, false) => fam.leaves.len() as u32,
            (_, false) => 1 + fam.leaves.len() as u32,
        })
    }

    /// Full distance matrix over all marked points.
    pub fn matrix(&self, kind: WallKind) -> Result<Vec<Vec<u32>>> {
        let n = self.p.points().len();
        (0..n).map(|a| (0..n).map(|b| if a == b { Ok(0) } else { self.wall_distance(a, b, kind) }).collect()).collect()
    }
}

pub fn wall_distance(p: &Pattern, x: PointId, y: PointId, kind: WallKind) -> Result<u32> {
    WallContext::new(p).wall_distance(x, y, kind)
}

pub fn longest_chain_witness(p: &Pattern, x: PointId, y: PointId, kind: WallKind) -> Result<AlignedFamily> {
    WallContext::new(p).longest_chain_witness(x, y, kind)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricReport {
    pub kind: String,
    pub points: usize,
    pub triples: usize,
    pub violations: Vec<String>,
}

impl MetricReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Identity of indiscernibles, symmetry and the triangle inequality over a
/// distance matrix.
pub fn check_metric_matrix(label: &str, ids: &[String], d: &[Vec<u32>]) -> MetricReport {
    let n = d.len();
    let mut v = Vec::new();
    for a in 0..n {
        if d[a][a] != 0 {
            v.push(format!("d({0},{0}) = {1}", ids[a], d[a][a]));
        }
        for b in 0..n {
            if a != b && d[a][b] == 0 {
                v.push(format!("d({},{}) = 0 for distinct points", ids[a], ids[b]));
            }
            if d[a][b] != d[b][a] {
                v.push(format!("d({0},{1}) = {2} but d({1},{0}) = {3}", ids[a], ids[b], d[a][b], d[b][a]));
            }
            for c in 0..n {
                if d[a][c] > d[a][b] + d[b][c] {
                    v.push(format!("triangle: d({},{}) = {} > {} + {}", ids[a], ids[c], d[a][c], d[a][b], d[b][c]));
                }
            }
        }
    }
    MetricReport { kind: label.into(), points: n, triples: n * n * n, violations: v }
}

pub fn metric_axiom_check(ctx: &WallContext, kind: WallKind) -> Result<MetricReport> {
    let ids: Vec<String> = ctx.pattern().points().iter().map(|p| p.id.clone()).collect();
    Ok(check_metric_matrix(kind.name(), &ids, &ctx.matrix(kind)?))
}

/// One comparison of a wall metric with a leaf graph distance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiMetricRow {
    pub metric: String,
    pub x: String,
    pub y: String,
    pub d_wall: u32,
    pub d_graph: Option<u32>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiMetricReport {
    pub rows: Vec<QiMetricRow>,
    pub skipped_region_points: usize,
    /// Smallest `d_graph − (d_wall − 2)` and `5·d_wall − d_graph`.
    pub min_lower_slack: Option<i64>,
    pub min_upper_slack: Option<i64>,
}

impl QiMetricReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

/// `d(x, y) − 2 ≤ d_G(f(x), f(y)) ≤ 5·d(x, y)` over all crossing pairs, where
/// `f` picks the leaf of the metric's sign through the point and `G` is
/// `X±` for `d±` and `Γ±` for `dR±`.
pub fn qi_metric_report(ctx: &WallContext) -> Result<QiMetricReport> {
    let p = ctx.pattern();
    let crossing: Vec<PointId> =
        (0..p.points().len()).filter(|&i| matches!(p.points()[i].kind, PointKind::Crossing(..))).collect();
    let mut rep = QiMetricReport {
        rows: Vec::new(),
        skipped_region_points: p.points().len() - crossing.len(),
        min_lower_slack: None,
        min_upper_slack: None,
    };
    let pairs = [
        (WallKind::HPlus, GraphKind::XPlus),
        (WallKind::HMinus, GraphKind::XMinus),
        (WallKind::RPlus, GraphKind::GammaPlus),
        (WallKind::RMinus, GraphKind::GammaMinus),
    ];
    for (kind, gk) in pairs {
        let g = build_graph(p, gk);
        let apsp = g.all_pairs();
        let leaf_of = |x: PointId| match p.points()[x].kind {
            PointKind::Crossing(a, b) => {
                if gk.sign() == Some(Sign::Plus) {
                    a
                } else {
                    b
                }
            }
            PointKind::Region => unreachable!(),
        };
        for (i, &x) in crossing.iter().enumerate() {
            for &y in &crossing[i + 1..] {
                let d = ctx.wall_distance(x, y, kind)?;
                let dg = apsp[g.vertex(leaf_of(x)).unwrap()][g.vertex(leaf_of(y)).unwrap()];
                let dg = (dg != u32::MAX).then_some(dg);
                let ok = match dg {
                    Some(v) => (d as i64 - 2) <= v as i64 && v as i64 <= 5 * d as i64,
                    None => false,
                };
                if let Some(v) = dg {
                    let lo = v as i64 - (d as i64 - 2);
                    let hi = 5 * d as i64 - v as i64;
                    rep.min_lower_slack = Some(rep.min_lower_slack.map_or(lo, |s| s.min(lo)));
                    rep.min_upper_slack = Some(rep.min_upper_slack.map_or(hi, |s| s.min(hi)));
                }
                rep.rows.push(QiMetricRow {
                    metric: kind.name().into(),
                    x: p.points()[x].id.clone(),
                    y: p.points()[y].id.clone(),
                    d_wall: d,
                    d_graph: dg,
                    ok,
                });
            }
        }
    }
    Ok(rep)
}
