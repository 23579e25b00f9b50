//! Finite chord-diagram truncations of a bifoliated plane.
//!
//! A [`FinitePattern`] is plain data: boundary labels in counterclockwise
//! order, signed leaves given by their endpoints on the boundary circle,
//! singularity records, declared nonseparated pairs and marked points.
//! [`Pattern`] is the validated, indexed form every query runs against.
//!
//! The model is combinatorial throughout. A leaf with endpoints
//! `e_0, …, e_{k-1}` (in ccw order) cuts the disk into `k` regions; region `j`
//! is the one meeting the open boundary arc from `e_j` to `e_{j+1}`. Two
//! leaves intersect iff one of them has endpoints in two different open arcs of
//! the other, and a shared endpoint encodes a perfect fit.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type LeafId = usize;
pub type PointId = usize;

const NONE: u16 = u16::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Leaf {
    pub id: String,
    pub sign: Sign,
    pub endpoints: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Singularity {
    pub plus: String,
    pub minus: String,
}

/// Where a marked point sits: on the crossing of a plus and a minus leaf, or
/// in a complementary region given by its region index for every leaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locator {
    Crossing([String; 2]),
    Region(BTreeMap<String, usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub id: String,
    #[serde(flatten)]
    pub locator: Locator,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinitePattern {
    pub boundary: Vec<String>,
    pub leaves: Vec<Leaf>,
    #[serde(default)]
    pub singularities: Vec<Singularity>,
    #[serde(default)]
    pub nonseparated: Vec<[String; 2]>,
    #[serde(default)]
    pub points: Vec<MarkedPoint>,
}

/// One failed invariant, naming the offending leaves and labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    pub leaves: Vec<String>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, invariant: &str) -> bool {
        self.violations.iter().any(|v| v.invariant == invariant)
    }

    fn push(&mut self, invariant: &str, leaves: &[&str], labels: &[&str]) {
        self.violations.push(Violation {
            invariant: invariant.to_string(),
            leaves: leaves.iter().map(|s| s.to_string()).collect(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> =
            self.violations.iter().map(|v| format!("{} [{}]", v.invariant, v.leaves.join(","))).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub mod invariant {
    pub const DUPLICATE_LABEL: &str = "duplicate boundary label";
    pub const DUPLICATE_LEAF: &str = "duplicate leaf id";
    pub const UNKNOWN_LABEL: &str = "endpoint is not a boundary label";
    pub const TOO_FEW_ENDPOINTS: &str = "leaf has fewer than two endpoints";
    pub const REPEATED_ENDPOINT: &str = "leaf repeats an endpoint";
    pub const NOT_CYCLIC: &str = "endpoints not in cyclic boundary order";
    pub const UNKNOWN_LEAF: &str = "unknown leaf id";
    pub const SINGULARITY_SIGNS: &str = "singularity leaves have wrong signs";
    pub const SINGULARITY_ARITY: &str = "singularity leaves differ in prong count";
    pub const DEGENERATE_SINGULARITY: &str = "singularity with fewer than three prongs";
    pub const NOT_ALTERNATING: &str = "singularity endpoints do not alternate";
    pub const ORPHAN_SINGULAR: &str = "singular leaf not in exactly one singularity";
    pub const SAME_SIGN_CROSSING: &str = "same-sign crossing";
    pub const SHARED_ENDPOINTS: &str = "leaves share more than one endpoint";
    pub const SAME_SIGN_SHARED: &str = "same-sign leaves share an endpoint";
    pub const DOUBLE_CROSSING: &str = "opposite-sign leaves cross more than once";
    pub const NONSEP_SIGN: &str = "nonseparated pair has mixed signs";
    pub const NONSEP_SELF: &str = "nonseparated pair repeats a leaf";
    pub const NONSEP_SEPARATED: &str = "nonseparated pair is separated by a leaf";
    pub const NONSEP_TRANSVERSAL: &str = "nonseparated pair has common transversal";
    pub const DUPLICATE_POINT: &str = "duplicate point id";
    pub const CROSSING_INVALID: &str = "crossing point on non-intersecting leaves";
    pub const REGION_INVALID: &str = "region point selects no complementary region";
}

/// Position of a point relative to one leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    On,
    Region(u16),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointKind {
    Crossing(LeafId, LeafId),
    Region,
}

/// A validated marked point with its side for every leaf.
#[derive(Clone, Debug)]
pub struct Point {
    pub id: String,
    pub kind: PointKind,
    pub sides: Vec<Side>,
}

/// How a pseudo-interval is cut into blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockMode {
    /// Split between consecutive leaves forming a declared nonseparated pair.
    NonsepBlocks,
    /// Split at separators that are dividing prongs; consecutive blocks share
    /// the prong leaf.
    ProngBlocks,
}

/// The separators between two same-sign leaves in their linear order, with
/// the canonical block decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoInterval {
    pub source: LeafId,
    pub target: LeafId,
    /// `source`, the separators from source to target, `target`.
    pub chain: Vec<LeafId>,
    pub blocks: Vec<Vec<LeafId>>,
}

impl PseudoInterval {
    pub fn separators(&self) -> &[LeafId] {
        if self.chain.len() <= 2 {
            &[]
        } else {
            &self.chain[1..self.chain.len() - 1]
        }
    }

    pub fn contains(&self, l: LeafId) -> bool {
        self.chain.contains(&l)
    }
}

/// A perfect fit: a plus and a minus leaf sharing a boundary endpoint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PerfectFit {
    pub plus: LeafId,
    pub minus: LeafId,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct Relations {
    pub intersects: Vec<Vec<bool>>,
    pub perfect_fits: Vec<PerfectFit>,
}

/// Validated, indexed pattern. Immutable; all queries are pure.
#[derive(Clone, Debug)]
pub struct Pattern {
    data: FinitePattern,
    label_pos: HashMap<String, usize>,
    leaf_ix: HashMap<String, LeafId>,
    point_ix: HashMap<String, PointId>,
    ends: Vec<Vec<usize>>,
    signs: Vec<Sign>,
    /// `arcs[l][q]`: index of the open arc of `l` containing boundary position `q`.
    arcs: Vec<Vec<u16>>,
    partner: Vec<Option<LeafId>>,
    meets: Vec<Vec<bool>>,
    /// `rel[m][l]`: region of `m` containing `l` when they are disjoint.
    rel: Vec<Vec<u16>>,
    nonsep: Vec<(LeafId, LeafId)>,
    nonsep_set: HashSet<(LeafId, LeafId)>,
    points: Vec<Point>,
}

fn key(a: LeafId, b: LeafId) -> (LeafId, LeafId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Open-arc index of every boundary position for a leaf with the given
/// endpoint positions (listed in cyclic order).
fn arc_table(ends: &[usize], n: usize) -> Vec<u16> {
    let mut arcs = vec![NONE; n];
    let k = ends.len();
    for j in 0..k {
        let a = ends[j];
        let b = ends[(j + 1) % k];
        let mut q = (a + 1) % n;
        while q != b {
            arcs[q] = j as u16;
            q = (q + 1) % n;
        }
    }
    arcs
}

fn touched(arcs: &[u16], other: &[usize]) -> BTreeSet<u16> {
    other.iter().map(|&q| arcs[q]).filter(|&a| a != NONE).collect()
}

fn cyclic_adjacent(a: u16, b: u16, k: usize) -> bool {
    let (a, b) = (a as usize, b as usize);
    (a + 1) % k == b || (b + 1) % k == a
}

/// Checks every invariant of the data model and reports all violations.
pub fn validate_pattern(p: &FinitePattern) -> ValidationReport {
    match Pattern::build(p.clone()) {
        Ok(_) => ValidationReport::default(),
        Err(r) => r,
    }
}

impl Pattern {
    pub fn new(data: FinitePattern) -> Result<Pattern> {
        Pattern::build(data).map_err(Error::Invalid)
    }

    fn build(data: FinitePattern) -> std::result::Result<Pattern, ValidationReport> {
        use invariant::*;
        let mut rep = ValidationReport::default();
        let n = data.boundary.len();

        let mut label_pos = HashMap::new();
        for (i, l) in data.boundary.iter().enumerate() {
            if label_pos.insert(l.clone(), i).is_some() {
                rep.push(DUPLICATE_LABEL, &[], &[l]);
            }
        }
        let mut leaf_ix = HashMap::new();
        let mut ends = Vec::with_capacity(data.leaves.len());
        for (i, leaf) in data.leaves.iter().enumerate() {
            if leaf_ix.insert(leaf.id.clone(), i).is_some() {
                rep.push(DUPLICATE_LEAF, &[&leaf.id], &[]);
            }
            if leaf.endpoints.len() < 2 {
                rep.push(TOO_FEW_ENDPOINTS, &[&leaf.id], &[]);
            }
            let mut pos = Vec::new();
            for e in &leaf.endpoints {
                match label_pos.get(e) {
                    Some(&q) => pos.push(q),
                    None => rep.push(UNKNOWN_LABEL, &[&leaf.id], &[e]),
                }
            }
            let distinct: HashSet<usize> = pos.iter().copied().collect();
            if distinct.len() != pos.len() {
                rep.push(REPEATED_ENDPOINT, &[&leaf.id], &[]);
            } else if !pos.is_empty() {
                let descents = (0..pos.len()).filter(|&j| pos[(j + 1) % pos.len()] <= pos[j]).count();
                if descents > 1 {
                    rep.push(NOT_CYCLIC, &[&leaf.id], &[]);
                }
            }
            ends.push(pos);
        }
        if !rep.is_valid() {
            return Err(rep);
        }

        let nl = data.leaves.len();
        let signs: Vec<Sign> = data.leaves.iter().map(|l| l.sign).collect();
        let id = |l: LeafId| data.leaves[l].id.as_str();

        let mut partner: Vec<Option<LeafId>> = vec![None; nl];
        let mut records = vec![0usize; nl];
        for s in &data.singularities {
            let (Some(&a), Some(&b)) = (leaf_ix.get(&s.plus), leaf_ix.get(&s.minus)) else {
                rep.push(UNKNOWN_LEAF, &[&s.plus, &s.minus], &[]);
                continue;
            };
            records[a] += 1;
            records[b] += 1;
            if signs[a] != Sign::Plus || signs[b] != Sign::Minus {
                rep.push(SINGULARITY_SIGNS, &[&s.plus, &s.minus], &[]);
                continue;
            }
            let k = ends[a].len();
            if ends[b].len() != k {
                rep.push(SINGULARITY_ARITY, &[&s.plus, &s.minus], &[]);
                continue;
            }
            if k < 3 {
                rep.push(DEGENERATE_SINGULARITY, &[&s.plus, &s.minus], &[]);
                continue;
            }
            let mut all: Vec<(usize, Sign)> = ends[a].iter().map(|&q| (q, Sign::Plus)).collect();
            all.extend(ends[b].iter().map(|&q| (q, Sign::Minus)));
            all.sort();
            let alternating = all.len() == 2 * k && (0..all.len()).all(|i| all[i].1 != all[(i + 1) % all.len()].1);
            if !alternating {
                rep.push(NOT_ALTERNATING, &[&s.plus, &s.minus], &[]);
                continue;
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        for l in 0..nl {
            if (ends[l].len() >= 3 && records[l] != 1) || records[l] > 1 {
                rep.push(ORPHAN_SINGULAR, &[id(l)], &[]);
            }
        }

        let mut nonsep = Vec::new();
        let mut nonsep_set = HashSet::new();
        for [a, b] in &data.nonseparated {
            let (Some(&x), Some(&y)) = (leaf_ix.get(a), leaf_ix.get(b)) else {
                rep.push(UNKNOWN_LEAF, &[a, b], &[]);
                continue;
            };
            if x == y {
                rep.push(NONSEP_SELF, &[a], &[]);
                continue;
            }
            if signs[x] != signs[y] {
                rep.push(NONSEP_SIGN, &[a, b], &[]);
                continue;
            }
            if nonsep_set.insert(key(x, y)) {
                nonsep.push(key(x, y));
            }
        }

        let arcs: Vec<Vec<u16>> = ends.iter().map(|e| arc_table(e, n)).collect();
        let mut meets = vec![vec![false; nl]; nl];
        let mut rel = vec![vec![NONE; nl]; nl];
        for a in 0..nl {
            for b in 0..nl {
                if a == b {
                    continue;
                }
                let t = touched(&arcs[a], &ends[b]);
                if t.len() >= 2 {
                    meets[a][b] = true;
                } else if let Some(&r) = t.iter().next() {
                    rel[a][b] = r;
                }
            }
        }
        for a in 0..nl {
            for b in (a + 1)..nl {
                let shared: Vec<usize> = ends[a].iter().copied().filter(|q| ends[b].contains(q)).collect();
                if shared.len() > 1 {
                    let labels: Vec<&str> = shared.iter().map(|&q| data.boundary[q].as_str()).collect();
                    rep.push(SHARED_ENDPOINTS, &[id(a), id(b)], &labels);
                } else if shared.len() == 1 && signs[a] == signs[b] && !nonsep_set.contains(&key(a, b)) {
                    rep.push(SAME_SIGN_SHARED, &[id(a), id(b)], &[&data.boundary[shared[0]]]);
                }
                let crosses = meets[a][b] || meets[b][a];
                if signs[a] == signs[b] {
                    if crosses {
                        rep.push(SAME_SIGN_CROSSING, &[id(a), id(b)], &[]);
                    }
                    continue;
                }
                if meets[a][b] != meets[b][a] {
                    rep.push(DOUBLE_CROSSING, &[id(a), id(b)], &[]);
                    continue;
                }
                if !crosses || partner[a] == Some(b) {
                    continue;
                }
                let ta = touched(&arcs[a], &ends[b]);
                let tb = touched(&arcs[b], &ends[a]);
                let ok = |t: &BTreeSet<u16>, k: usize| {
                    let v: Vec<u16> = t.iter().copied().collect();
                    v.len() == 2 && cyclic_adjacent(v[0], v[1], k)
                };
                if !ok(&ta, ends[a].len()) || !ok(&tb, ends[b].len()) {
                    rep.push(DOUBLE_CROSSING, &[id(a), id(b)], &[]);
                }
            }
        }
        for &(x, y) in &nonsep {
            if meets[x][y] {
                continue;
            }
            for m in 0..nl {
                if m == x || m == y {
                    continue;
                }
                if signs[m] == signs[x] {
                    if rel[m][x] != rel[m][y] {
                        rep.push(NONSEP_SEPARATED, &[id(x), id(y), id(m)], &[]);
                    }
                } else if meets[m][x] && meets[m][y] {
                    rep.push(NONSEP_TRANSVERSAL, &[id(x), id(y), id(m)], &[]);
                }
            }
        }
        if !rep.is_valid() {
            return Err(rep);
        }

        let mut pat = Pattern {
            label_pos,
            leaf_ix,
            point_ix: HashMap::new(),
            ends,
            signs,
            arcs,
            partner,
            meets,
            rel,
            nonsep,
            nonsep_set,
            points: Vec::new(),
            data,
        };
        pat.build_points(&mut rep);
        if rep.is_valid() {
            Ok(pat)
        } else {
            Err(rep)
        }
    }

    fn build_points(&mut self, rep: &mut ValidationReport) {
        use invariant::*;
        let mut candidates: Option<HashSet<Vec<Side>>> = None;
        let specs = self.data.points.clone();
        for mp in &specs {
            if self.point_ix.contains_key(&mp.id) {
                rep.push(DUPLICATE_POINT, &[], &[&mp.id]);
                continue;
            }
            let point = match &mp.locator {
                Locator::Crossing([a, b]) => {
                    let (Some(&x), Some(&y)) = (self.leaf_ix.get(a), self.leaf_ix.get(b)) else {
                        rep.push(UNKNOWN_LEAF, &[a, b], &[]);
                        continue;
                    };
                    let (p, m) = if self.signs[x] == Sign::Plus { (x, y) } else { (y, x) };
                    if self.signs[p] != Sign::Plus || self.signs[m] != Sign::Minus || !self.meets[p][m] {
                        rep.push(CROSSING_INVALID, &[a, b], &[]);
                        continue;
                    }
                    Point { id: mp.id.clone(), kind: PointKind::Crossing(p, m), sides: self.crossing_sides(p, m) }
                }
                Locator::Region(map) => {
                    let mut sides = Vec::with_capacity(self.leaf_count());
                    let mut ok = map.len() == self.leaf_count();
                    for (l, leaf) in self.data.leaves.iter().enumerate() {
                        match map.get(&leaf.id) {
                            Some(&r) if r < self.ends[l].len() => sides.push(Side::Region(r as u16)),
                            _ => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    let cands = candidates.get_or_insert_with(|| self.region_candidates());
                    if !ok || !cands.contains(&sides) {
                        rep.push(REGION_INVALID, &[], &[&mp.id]);
                        continue;
                    }
                    Point { id: mp.id.clone(), kind: PointKind::Region, sides }
                }
            };
            self.point_ix.insert(mp.id.clone(), self.points.len());
            self.points.push(point);
        }
    }

    /// Side vector of the crossing of plus leaf `p` and minus leaf `m`.
    pub fn crossing_sides(&self, p: LeafId, m: LeafId) -> Vec<Side> {
        (0..self.leaf_count())
            .map(|l| {
                if l == p || l == m {
                    Side::On
                } else if self.signs[l] == Sign::Plus {
                    Side::Region(self.rel[l][p])
                } else {
                    Side::Region(self.rel[l][m])
                }
            })
            .collect()
    }

    /// Side vectors of all complementary regions: every region touches the
    /// boundary or has a crossing on its frontier.
    pub fn region_candidates(&self) -> HashSet<Vec<Side>> {
        let nl = self.leaf_count();
        let n = self.data.boundary.len();
        let mut out = HashSet::new();
        for g in 0..n {
            let sides = (0..nl)
                .map(|l| {
                    let a = self.arcs[l][g];
                    if a != NONE {
                        Side::Region(a)
                    } else {
                        Side::Region(self.ends[l].iter().position(|&q| q == g).unwrap() as u16)
                    }
                })
                .collect();
            out.insert(sides);
        }
        for p in 0..nl {
            if self.signs[p] != Sign::Plus {
                continue;
            }
            for m in 0..nl {
                if self.signs[m] != Sign::Minus || !self.meets[p][m] {
                    continue;
                }
                let base = self.crossing_sides(p, m);
                let mut combos = Vec::new();
                if self.partner[p] == Some(m) {
                    let mut star: Vec<usize> = self.ends[p].iter().chain(self.ends[m].iter()).copied().collect();
                    star.sort();
                    for &u in &star {
                        combos.push((self.arc_after(p, u), self.arc_after(m, u)));
                    }
                } else {
                    for a in self.adjacent_regions(p, m) {
                        for b in self.adjacent_regions(m, p) {
                            combos.push((a, b));
                        }
                    }
                }
                for (a, b) in combos {
                    let mut s = base.clone();
                    s[p] = Side::Region(a);
                    s[m] = Side::Region(b);
                    out.insert(s);
                }
            }
        }
        out
    }

    fn arc_after(&self, l: LeafId, q: usize) -> u16 {
        match self.ends[l].iter().position(|&e| e == q) {
            Some(j) => j as u16,
            None => self.arcs[l][q],
        }
    }

    /// Regions of `l` adjacent to its crossing with `o`.
    fn adjacent_regions(&self, l: LeafId, o: LeafId) -> Vec<u16> {
        if self.ends[l].len() == 2 {
            return vec![0, 1];
        }
        touched(&self.arcs[l], &self.ends[o]).into_iter().collect()
    }

    pub fn data(&self) -> &FinitePattern {
        &self.data
    }

    pub fn leaf_count(&self) -> usize {
        self.signs.len()
    }

    pub fn boundary_len(&self) -> usize {
        self.data.boundary.len()
    }

    pub fn leaf(&self, id: &str) -> Result<LeafId> {
        self.leaf_ix.get(id).copied().ok_or_else(|| Error::UnknownLeaf(id.to_string()))
    }

    pub fn leaf_id(&self, l: LeafId) -> &str {
        &self.data.leaves[l].id
    }

    pub fn sign(&self, l: LeafId) -> Sign {
        self.signs[l]
    }

    pub fn leaves_of(&self, s: Sign) -> Vec<LeafId> {
        (0..self.leaf_count()).filter(|&l| self.signs[l] == s).collect()
    }

    pub fn endpoints(&self, l: LeafId) -> &[usize] {
        &self.ends[l]
    }

    pub fn label(&self, q: usize) -> &str {
        &self.data.boundary[q]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.label_pos.get(label).copied()
    }

    pub fn is_singular(&self, l: LeafId) -> bool {
        self.partner[l].is_some()
    }

    pub fn partner(&self, l: LeafId) -> Option<LeafId> {
        self.partner[l]
    }

    pub fn singularity_count(&self) -> usize {
        self.data.singularities.len()
    }

    /// Plus and minus leaf of singularity `s` (in file order).
    pub fn singularity(&self, s: usize) -> Result<(LeafId, LeafId)> {
        let rec = self.data.singularities.get(s).ok_or_else(|| Error::Precondition(format!("no singularity #{s}")))?;
        Ok((self.leaf(&rec.plus)?, self.leaf(&rec.minus)?))
    }

    pub fn intersects(&self, a: LeafId, b: LeafId) -> bool {
        self.meets[a][b]
    }

    /// Region of `m` containing leaf `l`, for disjoint leaves.
    pub fn region_of(&self, m: LeafId, l: LeafId) -> Option<u16> {
        let r = self.rel[m][l];
        (r != NONE).then_some(r)
    }

    /// Open arc of `l` containing boundary position `q`, if `q` is not an
    /// endpoint of `l`.
    pub fn arc_of(&self, l: LeafId, q: usize) -> Option<u16> {
        let a = self.arcs[l][q];
        (a != NONE).then_some(a)
    }

    pub fn nonseparated_pairs(&self) -> &[(LeafId, LeafId)] {
        &self.nonsep
    }

    pub fn is_nonseparated(&self, a: LeafId, b: LeafId) -> bool {
        self.nonsep_set.contains(&key(a, b))
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: &str) -> Result<PointId> {
        self.point_ix.get(id).copied().ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    /// All crossings of a plus and a minus leaf, plus first.
    pub fn crossings(&self) -> Vec<(LeafId, LeafId)> {
        let mut out = Vec::new();
        for p in self.leaves_of(Sign::Plus) {
            for m in self.leaves_of(Sign::Minus) {
                if self.meets[p][m] {
                    out.push((p, m));
                }
            }
        }
        out
    }

    /// Leaf intersection table and perfect fits (shared endpoints).
    pub fn relations(&self) -> Relations {
        let mut fits = Vec::new();
        for p in self.leaves_of(Sign::Plus) {
            for m in self.leaves_of(Sign::Minus) {
                for &q in &self.ends[p] {
                    if self.ends[m].contains(&q) {
                        fits.push(PerfectFit { plus: p, minus: m, label: self.data.boundary[q].clone() });
                    }
                }
            }
        }
        fits.sort();
        Relations { intersects: self.meets.clone(), perfect_fits: fits }
    }

    pub fn shares_endpoint(&self, a: LeafId, b: LeafId) -> bool {
        self.ends[a].iter().any(|q| self.ends[b].contains(q))
    }

    fn check_same_sign_disjoint(&self, ls: &[LeafId]) -> Result<()> {
        for (i, &a) in ls.iter().enumerate() {
            for &b in &ls[i + 1..] {
                if self.signs[a] != self.signs[b] {
                    return Err(Error::MixedSigns(self.leaf_id(a).into(), self.leaf_id(b).into()));
                }
                if a == b {
                    return Err(Error::Precondition(format!("leaf `{}` given twice", self.leaf_id(a))));
                }
            }
        }
        Ok(())
    }

    /// Does `m` separate `l` from `l2` (all three same sign)?
    pub fn separates_leaves(&self, m: LeafId, l: LeafId, l2: LeafId) -> Result<bool> {
        self.check_same_sign_disjoint(&[m, l, l2])?;
        Ok(self.rel[m][l] != self.rel[m][l2])
    }

    /// Point separation with the on-leaf convention: true unless both points
    /// are on `l` or both lie in the same region of `l`.
    pub fn separates_point(&self, l: LeafId, x: PointId, y: PointId) -> bool {
        self.points[x].sides[l] != self.points[y].sides[l]
    }

    /// Is `c` one of `x`, `y` or a same-sign leaf separating them?
    pub fn in_interval(&self, x: LeafId, y: LeafId, c: LeafId) -> bool {
        c == x || c == y || (self.signs[c] == self.signs[x] && self.rel[c][x] != self.rel[c][y])
    }

    /// Same-sign leaves separating `x` from `y`, unordered.
    pub fn separators(&self, x: LeafId, y: LeafId) -> Vec<LeafId> {
        if x == y {
            return Vec::new();
        }
        (0..self.leaf_count())
            .filter(|&m| m != x && m != y && self.signs[m] == self.signs[x] && self.rel[m][x] != self.rel[m][y])
            .collect()
    }

    /// Linearly ordered chain `x, separators…, y`.
    pub fn chain(&self, x: LeafId, y: LeafId) -> Result<Vec<LeafId>> {
        if self.signs[x] != self.signs[y] {
            return Err(Error::MixedSigns(self.leaf_id(x).into(), self.leaf_id(y).into()));
        }
        if x == y {
            return Ok(vec![x]);
        }
        let seps = self.separators(x, y);
        let mut ranked: Vec<(usize, LeafId)> = seps
            .iter()
            .map(|&s| (seps.iter().filter(|&&t| t != s && self.rel[t][x] != self.rel[t][s]).count(), s))
            .collect();
        ranked.sort();
        if ranked.iter().enumerate().any(|(i, &(r, _))| r != i) {
            return Err(Error::NonPlanar(self.leaf_id(x).into(), self.leaf_id(y).into()));
        }
        let mut chain = Vec::with_capacity(seps.len() + 2);
        chain.push(x);
        chain.extend(ranked.into_iter().map(|(_, s)| s));
        chain.push(y);
        Ok(chain)
    }

    pub fn pseudo_interval(&self, x: LeafId, y: LeafId, mode: BlockMode) -> Result<PseudoInterval> {
        let chain = self.chain(x, y)?;
        let blocks = match mode {
            BlockMode::NonsepBlocks => {
                let mut blocks = vec![vec![chain[0]]];
                for w in chain.windows(2) {
                    if self.is_nonseparated(w[0], w[1]) {
                        blocks.push(vec![w[1]]);
                    } else {
                        blocks.last_mut().unwrap().push(w[1]);
                    }
                }
                blocks
            }
            BlockMode::ProngBlocks => {
                let mut blocks = vec![vec![chain[0]]];
                let last = chain.len() - 1;
                for (i, &c) in chain.iter().enumerate().skip(1) {
                    blocks.last_mut().unwrap().push(c);
                    if i < last && self.divides(c, x, y) {
                        blocks.push(vec![c]);
                    }
                }
                blocks
            }
        };
        Ok(PseudoInterval { source: x, target: y, chain, blocks })
    }

    /// Number of NonsepBlocks blocks of ⟦x, y⟧ without materializing the
    /// chain: a declared pair splits the interval iff both its leaves lie in it.
    pub fn block_count(&self, x: LeafId, y: LeafId) -> usize {
        1 + self
            .nonsep
            .iter()
            .filter(|&&(a, b)| self.signs[a] == self.signs[x] && self.in_interval(x, y, a) && self.in_interval(x, y, b))
            .count()
    }

    fn divides(&self, c: LeafId, x: LeafId, y: LeafId) -> bool {
        let Some(q) = self.partner[c] else { return false };
        let s = self.singularity_index(c, q);
        matches!(s.and_then(|s| self.is_dividing_prong(s, x, y).ok()), Some(true))
    }

    fn singularity_index(&self, a: LeafId, b: LeafId) -> Option<usize> {
        self.data.singularities.iter().position(|s| {
            let (Ok(p), Ok(m)) = (self.leaf(&s.plus), self.leaf(&s.minus)) else { return false };
            (p == a && m == b) || (p == b && m == a)
        })
    }

    /// The `2k` quadrants of singularity `s` in cyclic order (starting after
    /// the first plus endpoint) and, for every other leaf, the set of
    /// quadrants it meets.
    pub fn faces_and_quadrants(&self, s: usize) -> Result<Quadrants> {
        let (p, m) = self.singularity(s)?;
        let mut star: Vec<usize> = self.ends[p].iter().chain(self.ends[m].iter()).copied().collect();
        star.sort();
        let start = star.iter().position(|&q| q == self.ends[p][0]).unwrap();
        star.rotate_left(start);
        Ok(self.quadrants_from(star, &[p, m]))
    }

    /// Four quadrants at the regular crossing of `p` and `m`.
    pub fn crossing_quadrants(&self, p: LeafId, m: LeafId) -> Result<Quadrants> {
        if self.ends[p].len() != 2 || self.ends[m].len() != 2 || !self.meets[p][m] {
            return Err(Error::Precondition("crossing quadrants need two regular crossing leaves".into()));
        }
        let mut star: Vec<usize> = self.ends[p].iter().chain(self.ends[m].iter()).copied().collect();
        star.sort();
        Ok(self.quadrants_from(star, &[p, m]))
    }

    fn quadrants_from(&self, star: Vec<usize>, own: &[LeafId]) -> Quadrants {
        let n = self.boundary_len();
        let k = star.len();
        let mut quad_of = vec![usize::MAX; n];
        for i in 0..k {
            let mut q = (star[i] + 1) % n;
            while q != star[(i + 1) % k] {
                quad_of[q] = i;
                q = (q + 1) % n;
            }
        }
        let incidence = (0..self.leaf_count())
            .map(|l| {
                if own.contains(&l) {
                    BTreeSet::new()
                } else {
                    self.ends[l].iter().map(|&q| quad_of[q]).filter(|&i| i != usize::MAX).collect()
                }
            })
            .collect();
        Quadrants { arcs: (0..k).map(|i| (star[i], star[(i + 1) % k])).collect(), incidence }
    }

    /// Dividing-prong predicate: `x` lies in a single quadrant `Q1` of the
    /// singularity and `y` avoids the five quadrants centred on `Q1`.
    pub fn is_dividing_prong(&self, s: usize, x: LeafId, y: LeafId) -> Result<bool> {
        let (p, m) = self.singularity(s)?;
        let star = if self.signs[x] == Sign::Plus { p } else { m };
        if self.signs[x] != self.signs[y] {
            return Err(Error::MixedSigns(self.leaf_id(x).into(), self.leaf_id(y).into()));
        }
        if x == star || y == star || x == y {
            return Err(Error::Precondition("x, y must be distinct and differ from the prong leaf".into()));
        }
        if self.rel[star][x] == self.rel[star][y] {
            return Err(Error::Precondition(format!(
                "prong leaf `{}` does not separate `{}` from `{}`",
                self.leaf_id(star),
                self.leaf_id(x),
                self.leaf_id(y)
            )));
        }
        let quads = self.faces_and_quadrants(s)?;
        let qx = &quads.incidence[x];
        if qx.len() != 1 {
            return Ok(false);
        }
        let q1 = *qx.iter().next().unwrap() as i64;
        let k = quads.arcs.len() as i64;
        let forbidden: HashSet<usize> = (-2..=2).map(|d| (q1 + d).rem_euclid(k) as usize).collect();
        Ok(quads.incidence[y].iter().all(|q| !forbidden.contains(q)))
    }

    /// Exactly one of `F+(a) ∩ F-(b)` and `F-(a) ∩ F+(b)` is nonempty.
    pub fn partially_linked(&self, a: PointId, b: PointId) -> Result<bool> {
        let (PointKind::Crossing(pa, ma), PointKind::Crossing(pb, mb)) = (&self.points[a].kind, &self.points[b].kind)
        else {
            return Err(Error::Precondition("partially_linked needs crossing points".into()));
        };
        if pa == pb || ma == mb {
            return Err(Error::Precondition("points must lie on disjoint leaf sets".into()));
        }
        Ok(self.meets[*pa][*mb] != self.meets[*ma][*pb])
    }
}

#[derive(Clone, Debug)]
pub struct Quadrants {
    /// Boundary arcs `(from, to)` (open, ccw) of the quadrants in cyclic order.
    pub arcs: Vec<(usize, usize)>,
    /// For every leaf, the quadrants it meets (empty for the defining leaves).
    pub incidence: Vec<BTreeSet<usize>>,
}
