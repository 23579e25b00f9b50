//! Automorphisms of periodic patterns acting on the plus leaf graph: axes and
//! their block decompositions, projections to pseudo-lines, large-overlap
//! intervals, isometry classification and finite-scale WPD witness scans.
//!
//! Everything is computed on a finite window of the periodic pattern. Leaves
//! near the window edges see truncated neighbourhoods, so the harnesses keep
//! a margin of whole periods between the leaves they test and the edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphKind, LeafGraph};
use crate::pattern::{BlockMode, LeafId, Pattern, Sign};
use crate::periodic::{leaf_name, parse_leaf_name, IndexAutomorphism, PeriodicPattern};

/// A materialized window `[lo, hi]` of a periodic pattern with its plus leaf
/// graph and all-pairs distances.
pub struct PeriodicWindow {
    pub lo: i64,
    pub hi: i64,
    pub pattern: Pattern,
    graph: LeafGraph,
    apsp: Vec<Vec<u32>>,
    index: Vec<(Sign, i64)>,
}

impl PeriodicWindow {
    pub fn new(pp: &PeriodicPattern, lo: i64, hi: i64) -> Result<PeriodicWindow> {
        let pattern = Pattern::new(pp.materialize_window(lo, hi)?)?;
        let graph = build_graph(&pattern, GraphKind::XPlus);
        let apsp = graph.all_pairs();
        let index = (0..pattern.leaf_count())
            .map(|l| parse_leaf_name(pattern.leaf_id(l)).expect("periodic leaf names"))
            .collect();
        Ok(PeriodicWindow { lo, hi, pattern, graph, apsp, index })
    }

    pub fn contains(&self, i: i64) -> bool {
        (self.lo..=self.hi).contains(&i)
    }

    pub fn leaf(&self, s: Sign, i: i64) -> Option<LeafId> {
        if !self.contains(i) {
            return None;
        }
        self.pattern.leaf(&leaf_name(s, i)).ok()
    }

    pub fn index(&self, l: LeafId) -> (Sign, i64) {
        self.index[l]
    }

    pub fn name(&self, l: LeafId) -> &str {
        self.pattern.leaf_id(l)
    }

    /// Image of a window leaf, if it stays in the window.
    pub fn image(&self, g: &IndexAutomorphism, l: LeafId) -> Option<LeafId> {
        let (s, i) = self.index[l];
        self.leaf(s, g.act(s, i))
    }

    /// `X⁺` distance between plus leaves; `None` if disconnected.
    pub fn dist(&self, a: LeafId, b: LeafId) -> Option<u32> {
        let (va, vb) = (self.graph.vertex(a)?, self.graph.vertex(b)?);
        let d = self.apsp[va][vb];
        (d != u32::MAX).then_some(d)
    }

    /// Distance from a leaf to the nearest leaf of a set.
    pub fn dist_to_set(&self, a: LeafId, set: &[LeafId]) -> Option<u32> {
        set.iter().filter_map(|&b| self.dist(a, b)).min()
    }

    pub fn diameter(&self) -> Option<u32> {
        self.graph.diameter()
    }

    fn block_mode(&self) -> BlockMode {
        if self.pattern.singularity_count() > 0 {
            BlockMode::ProngBlocks
        } else {
            BlockMode::NonsepBlocks
        }
    }
}

/// Axis of an automorphism in one leaf family, restricted to a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisData {
    pub sign: Sign,
    /// Axis leaves in order, oriented so that the element moves forwards.
    pub leaves: Vec<LeafId>,
    /// Blocks restricted to the axis; the first and last are truncated by
    /// the window. With prong blocks a dividing prong ends one block and
    /// starts the next.
    pub blocks: Vec<Vec<LeafId>>,
    /// Blocks per fundamental domain of the element (0 when the axis is a
    /// single block).
    pub period_blocks: usize,
}

impl AxisData {
    /// Index of the block containing `l`; a prong shared by two blocks
    /// belongs to the later one.
    pub fn block_of(&self, l: LeafId) -> Option<usize> {
        self.blocks.iter().rposition(|b| b.contains(&l))
    }

    pub fn position(&self, l: LeafId) -> Option<usize> {
        self.leaves.iter().position(|&x| x == l)
    }

    pub fn to_json(&self, w: &PeriodicWindow) -> serde_json::Value {
        serde_json::json!({
            "sign": self.sign,
            "leaves": self.leaves.iter().map(|&l| w.name(l)).collect::<Vec<_>>(),
            "blocks": self.blocks.iter().map(|b| b.iter().map(|&l| w.name(l)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "period_blocks": self.period_blocks,
        })
    }
}

/// Leaves `x` of the window with `x` separating `g⁻¹(x)` from `g(x)`.
pub fn axis(w: &PeriodicWindow, g: &IndexAutomorphism, sign: Sign) -> Result<AxisData> {
    if let Some(i) = g.family(sign).fixed_index() {
        return Err(Error::Precondition(format!("element fixes leaf {}; axis undefined", leaf_name(sign, i))));
    }
    let p = &w.pattern;
    let ginv = g.inverse();
    let members: Vec<LeafId> = p
        .leaves_of(sign)
        .into_iter()
        .filter(|&x| match (w.image(&ginv, x), w.image(g, x)) {
            (Some(a), Some(b)) => p.in_interval(a, b, x),
            _ => false,
        })
        .collect();
    if members.is_empty() {
        return Err(Error::Undefined("no axis leaf inside the window".into()));
    }
    // The two axis leaves farthest apart span all the others.
    let (mut first, mut last, mut best) = (members[0], members[0], 0);
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let n = p.separators(a, b).len() + 1;
            if n > best {
                (first, last, best) = (a, b, n);
            }
        }
    }
    let pi = p.pseudo_interval(first, last, w.block_mode())?;
    let set: BTreeSet<LeafId> = members.iter().copied().collect();
    if members.iter().any(|m| !pi.contains(*m)) {
        return Err(Error::Undefined("axis leaves are not linearly ordered".into()));
    }
    let mut leaves: Vec<LeafId> = pi.chain.iter().copied().filter(|l| set.contains(l)).collect();
    let mut blocks: Vec<Vec<LeafId>> = pi
        .blocks
        .iter()
        .map(|b| b.iter().copied().filter(|l| set.contains(l)).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    // Orient along g.
    let pos = |ls: &[LeafId], l: LeafId| ls.iter().position(|&x| x == l);
    let forward = leaves.iter().find_map(|&l| Some(pos(&leaves, w.image(g, l)?)? > pos(&leaves, l)?));
    if forward == Some(false) {
        leaves.reverse();
        blocks.reverse();
        for b in &mut blocks {
            b.reverse();
        }
    }
    let mut a = AxisData { sign, leaves, blocks, period_blocks: 0 };
    // Blocks per period, read off a leaf in the middle of the axis.
    let mid = a.leaves.len() / 2;
    let shifts: Vec<usize> =
        a.leaves[mid..].iter().filter_map(|&l| Some(a.block_of(w.image(g, l)?)? - a.block_of(l)?)).collect();
    a.period_blocks = shifts.first().copied().unwrap_or(0);
    Ok(a)
}

/// `g` maps axis leaves to axis leaves and shifts block indices by the
/// period, wherever the image stays in the window's interior blocks.
pub fn axis_invariant(w: &PeriodicWindow, a: &AxisData, g: &IndexAutomorphism) -> bool {
    let last = a.blocks.len().saturating_sub(1);
    a.leaves.iter().all(|&l| {
        let Some(gl) = w.image(g, l) else { return true };
        let (Some(bl), Some(bg)) = (a.block_of(l), a.block_of(gl)) else {
            // The image of an axis leaf must be an axis leaf unless it left
            // the part of the window where the axis test can be made.
            return w.image(g, gl).is_none();
        };
        bl == 0 || bg == last || bg == bl + a.period_blocks
    })
}

/// Blocks of a sub-interval `⟦x', y'⟧` of the axis and how they sit against
/// the axis blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedBlocks {
    pub blocks: Vec<Vec<LeafId>>,
    /// Axis blocks of `x'` and `y'`.
    pub i: usize,
    pub n: usize,
    /// Axis blocks holding the end of the first induced block and the start
    /// of the last.
    pub j: usize,
    pub k: usize,
}

impl InducedBlocks {
    /// `|j − i| ≤ 1` and `|n − k| ≤ 1`.
    pub fn within_bounds(&self) -> bool {
        self.j.abs_diff(self.i) <= 1 && self.n.abs_diff(self.k) <= 1
    }
}

pub fn block_decomposition(a: &AxisData) -> &[Vec<LeafId>] {
    &a.blocks
}

pub fn induced_blocks(w: &PeriodicWindow, a: &AxisData, x: LeafId, y: LeafId) -> Result<InducedBlocks> {
    let (Some(px), Some(py)) = (a.position(x), a.position(y)) else {
        return Err(Error::Precondition("induced blocks need two axis leaves".into()));
    };
    if px > py {
        return Err(Error::Precondition("induced blocks need x' before y' on the axis".into()));
    }
    let pi = w.pattern.pseudo_interval(x, y, w.block_mode())?;
    let axis_set: BTreeSet<LeafId> = a.leaves.iter().copied().collect();
    let blocks: Vec<Vec<LeafId>> = pi
        .blocks
        .iter()
        .map(|b| b.iter().copied().filter(|l| axis_set.contains(l)).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect();
    let first_block = |l: LeafId| a.blocks.iter().position(|b| b.contains(&l));
    let i = a.block_of(x).expect("axis leaf");
    let n = first_block(y).expect("axis leaf");
    let j = first_block(*blocks[0].last().expect("non-empty block")).expect("axis leaf");
    let k = a.block_of(blocks[blocks.len() - 1][0]).expect("axis leaf");
    Ok(InducedBlocks { blocks, i, n, j, k })
}

/// The leaf of the pseudo-line `line` (or nonseparated pair of its leaves)
/// met by every `⟦x, y⟧` with `y` on the line.
pub fn project_to_pseudoline(p: &Pattern, line: &[LeafId], x: LeafId) -> Result<Vec<LeafId>> {
    if line.contains(&x) {
        return Ok(vec![x]);
    }
    if line.iter().any(|&c| p.sign(c) != p.sign(x)) {
        return Err(Error::Precondition("projection needs a leaf of the pseudo-line's sign".into()));
    }
    let meets_all = |set: &[LeafId]| line.iter().all(|&y| set.iter().any(|&c| p.in_interval(x, y, c)));
    let singles: Vec<LeafId> = line.iter().copied().filter(|&c| meets_all(&[c])).collect();
    match singles.len() {
        1 => return Ok(singles),
        0 => {}
        _ => return Err(Error::Undefined(format!("projection of `{}` is not unique inside the window", p.leaf_id(x)))),
    }
    let mut pairs = Vec::new();
    for (i, &c) in line.iter().enumerate() {
        for &d in &line[i + 1..] {
            if p.is_nonseparated(c, d) && meets_all(&[c, d]) {
                pairs.push(vec![c.min(d), c.max(d)]);
            }
        }
    }
    if pairs.len() == 1 {
        Ok(pairs.pop().unwrap())
    } else {
        Err(Error::Undefined(format!("no well-defined projection of `{}` inside the window", p.leaf_id(x))))
    }
}

/// The overlap `J = ⟦a, b⟧ ∩ ⟦h⁻¹a, h⁻¹b⟧` and the four measured distances
/// `d(j₁, a)`, `d(j₂, b)`, `d(h j₁, a)`, `d(h j₂, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub a: String,
    pub b: String,
    pub epsilon: u32,
    pub d_ab: u32,
    pub d_a_ha: u32,
    pub d_b_hb: u32,
    pub j1: String,
    pub j2: String,
    pub interval: Vec<String>,
    pub distances: [u32; 4],
    /// `2ε + 2`.
    pub limit: u32,
    /// `h(J) ⊂ ⟦a, b⟧`.
    pub image_inside: bool,
}

impl OverlapReport {
    pub fn pass(&self) -> bool {
        self.image_inside && self.distances.iter().all(|&d| d <= self.limit)
    }
}

pub fn overlap_interval(
    w: &PeriodicWindow,
    a: LeafId,
    b: LeafId,
    h: &IndexAutomorphism,
    eps: u32,
) -> Result<OverlapReport> {
    let p = &w.pattern;
    let dist = |x: LeafId, y: LeafId| {
        w.dist(x, y)
            .ok_or_else(|| Error::Undefined(format!("{} and {} are disconnected in the window", w.name(x), w.name(y))))
    };
    let outside = || Error::Undefined("images leave the window".into());
    let d_ab = dist(a, b)?;
    if d_ab <= 4 * eps + 5 {
        return Err(Error::Precondition(format!("d(a, b) = {d_ab} is not above 4ε + 5 = {}", 4 * eps + 5)));
    }
    let (ha, hb) = (w.image(h, a).ok_or_else(outside)?, w.image(h, b).ok_or_else(outside)?);
    let (d_a_ha, d_b_hb) = (dist(a, ha)?, dist(b, hb)?);
    if d_a_ha >= eps || d_b_hb >= eps {
        return Err(Error::Precondition(format!(
            "displacements d(a, ha) = {d_a_ha}, d(b, hb) = {d_b_hb} are not below ε = {eps}"
        )));
    }
    let hinv = h.inverse();
    let (ia, ib) = (w.image(&hinv, a).ok_or_else(outside)?, w.image(&hinv, b).ok_or_else(outside)?);
    let outer = p.chain(a, b)?;
    let inner: BTreeSet<LeafId> = p.chain(ia, ib)?.into_iter().collect();
    let j: Vec<LeafId> = outer.iter().copied().filter(|l| inner.contains(l)).collect();
    let (Some(&j1), Some(&j2)) = (j.first(), j.last()) else {
        return Err(Error::Undefined("empty overlap".into()));
    };
    let outer_set: BTreeSet<LeafId> = outer.iter().copied().collect();
    let image_inside = j.iter().all(|&l| w.image(h, l).is_some_and(|x| outer_set.contains(&x)));
    let (hj1, hj2) = (w.image(h, j1).ok_or_else(outside)?, w.image(h, j2).ok_or_else(outside)?);
    Ok(OverlapReport {
        a: w.name(a).into(),
        b: w.name(b).into(),
        epsilon: eps,
        d_ab,
        d_a_ha,
        d_b_hb,
        j1: w.name(j1).into(),
        j2: w.name(j2).into(),
        interval: j.iter().map(|&l| w.name(l).to_string()).collect(),
        distances: [dist(j1, a)?, dist(j2, b)?, dist(hj1, a)?, dist(hj2, b)?],
        limit: 2 * eps + 2,
        image_inside,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "certificate", rename_all = "snake_case")]
pub enum Elliptic {
    /// Fixes the crossing of `p{plus}` and `m{minus}`.
    FixedPoint {
        plus: i64,
        minus: i64,
    },
    FixedLeaf {
        sign: Sign,
        index: i64,
    },
    Scalloped,
    /// `X⁺` has the same finite diameter on a window and on its double.
    BoundedOrbit {
        diameter: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Classification {
    Elliptic(Elliptic),
    /// `τ ∈ [(a_n − D)/n, a_n/n]` with `a_n = d(v, gⁿv)` and `D = d(v, gv)`,
    /// measured on a window of `window` indices.
    Loxodromic {
        tau_lower: f64,
        tau_upper: f64,
        n: u32,
        a_n: u32,
        correction: u32,
        base: String,
        window: i64,
    },
    Inconclusive {
        reason: String,
    },
}

impl Classification {
    pub fn is_loxodromic(&self) -> bool {
        matches!(self, Classification::Loxodromic { .. })
    }

    pub fn is_elliptic(&self) -> bool {
        matches!(self, Classification::Elliptic(_))
    }
}

/// Window `[lo, hi]` with `size` indices centred on 0.
pub fn centred_window(size: i64) -> (i64, i64) {
    let lo = -(size / 2);
    (lo, lo + size - 1)
}

/// Elliptic certificates in order (fixed crossing, fixed leaf, scalloped
/// invariance, bounded orbit), otherwise a translation-length bracket from
/// the orbit of the plus leaf nearest the window centre.
pub fn classify_isometry(
    pp: &PeriodicPattern,
    g: &IndexAutomorphism,
    window: i64,
    nmax: u32,
) -> Result<Classification> {
    if g.period() != pp.period {
        return Err(Error::Params(format!("element has period {}, pattern {}", g.period(), pp.period)));
    }
    IndexAutomorphism::for_pattern(pp, g.plus.offsets().to_vec(), g.minus.offsets().to_vec())?;
    let (lo, hi) = centred_window(window);
    let w = PeriodicWindow::new(pp, lo, hi)?;
    let n = pp.period as i64;
    let fixed = |s: Sign| -> Vec<usize> { (0..pp.period).filter(|&r| g.family(s).offsets()[r] == 0).collect() };
    let (fp, fm) = (fixed(Sign::Plus), fixed(Sign::Minus));
    for &rp in &fp {
        for &rm in &fm {
            let hit = (lo..=hi).filter(|i| i.rem_euclid(n) as usize == rp).find_map(|i| {
                let a = w.leaf(Sign::Plus, i)?;
                (lo..=hi).filter(|j| j.rem_euclid(n) as usize == rm).find_map(|j| {
                    let b = w.leaf(Sign::Minus, j)?;
                    (w.pattern.intersects(a, b) || w.pattern.partner(a) == Some(b)).then_some((i, j))
                })
            });
            if let Some((plus, minus)) = hit {
                return Ok(Classification::Elliptic(Elliptic::FixedPoint { plus, minus }));
            }
        }
    }
    for s in [Sign::Plus, Sign::Minus] {
        if let Some(index) = g.family(s).fixed_index() {
            return Ok(Classification::Elliptic(Elliptic::FixedLeaf { sign: s, index }));
        }
    }
    if pp.scalloped.is_some() && pp.scalloped_invariant(g)? {
        return Ok(Classification::Elliptic(Elliptic::Scalloped));
    }
    let (dlo, dhi) = centred_window(2 * window);
    let wide = PeriodicWindow::new(pp, dlo, dhi)?;
    if let (Some(d), Some(d2)) = (w.diameter(), wide.diameter()) {
        if d == d2 {
            return Ok(Classification::Elliptic(Elliptic::BoundedOrbit { diameter: d }));
        }
    }
    // Orbit bracket, starting on the doubled window and doubling again while
    // the orbit inside it is shorter than `nmax` steps.
    let mut size = 2 * window;
    let mut w = wide;
    loop {
        let bracket = orbit_bracket(&w, g, n, nmax);
        let steps = match &bracket {
            Some(b) => b.1,
            None => 0,
        };
        if let Some((v, steps, a_n, d1)) = bracket {
            let upper = a_n as f64 / steps as f64;
            let lower = (a_n as f64 - d1 as f64) / steps as f64;
            if lower > 0.0 {
                return Ok(Classification::Loxodromic {
                    tau_lower: lower,
                    tau_upper: upper,
                    n: steps,
                    a_n,
                    correction: d1,
                    base: leaf_name(Sign::Plus, v),
                    window: size,
                });
            }
            if steps >= nmax {
                return Ok(Classification::Inconclusive {
                    reason: format!("bracket [{lower}, {upper}] after {steps} steps"),
                });
            }
        }
        if size >= MAX_WINDOW_GROWTH * window.max(1) {
            return Ok(Classification::Inconclusive {
                reason: format!("window too small: {steps} orbit steps at size {size}"),
            });
        }
        size *= 2;
        let (lo, hi) = centred_window(size);
        w = PeriodicWindow::new(pp, lo, hi)?;
    }
}

/// How far the orbit window may grow beyond the requested size.
const MAX_WINDOW_GROWTH: i64 = 64;

/// Orbit of the plus leaf nearest the window centre, kept `margin` indices
/// from the edges: `(v, n, d(v, gⁿv), d(v, gv))`.
fn orbit_bracket(w: &PeriodicWindow, g: &IndexAutomorphism, margin: i64, nmax: u32) -> Option<(i64, u32, u32, u32)> {
    let inner = |i: i64| i >= w.lo + margin && i <= w.hi - margin;
    let v = (0..=w.hi.max(-w.lo)).flat_map(|d| [d, -d]).find(|&i| inner(i) && w.leaf(Sign::Plus, i).is_some())?;
    // Walk the orbit in the direction that stays inside longest.
    let walk = |h: &IndexAutomorphism| {
        let mut orbit = vec![v];
        while orbit.len() <= nmax as usize {
            let next = h.act(Sign::Plus, *orbit.last().unwrap());
            if !inner(next) {
                break;
            }
            orbit.push(next);
        }
        orbit
    };
    let (fwd, bwd) = (walk(g), walk(&g.inverse()));
    let orbit = if fwd.len() >= bwd.len() { fwd } else { bwd };
    let steps = orbit.len() as u32 - 1;
    if steps == 0 {
        return None;
    }
    let leaf = |i: i64| w.leaf(Sign::Plus, i).expect("orbit inside window");
    let dv = |i: i64| w.dist(leaf(v), leaf(i));
    Some((v, steps, dv(orbit[steps as usize])?, dv(orbit[1])?))
}

/// `(m + 2)(k − 1) + 2 ≥ d(B₀, B_k) ≥ k − 1` for consecutive axis blocks,
/// `m` the largest block diameter; returns `(k, d, lower, upper)` rows.
pub fn block_sandwich(w: &PeriodicWindow, a: &AxisData, kmax: usize) -> Result<Vec<(usize, u32, u32, u32)>> {
    if a.blocks.len() < kmax + 3 {
        return Err(Error::Undefined(format!("{} blocks in the window; need {}", a.blocks.len(), kmax + 3)));
    }
    let full = &a.blocks[1..a.blocks.len() - 1];
    if full.len() < kmax + 1 {
        return Err(Error::Undefined(format!("{} full blocks; need {}", full.len(), kmax + 1)));
    }
    let dset = |x: &[LeafId], y: &[LeafId]| -> Option<u32> {
        x.iter().flat_map(|&u| y.iter().filter_map(move |&v| w.dist(u, v))).min()
    };
    let diam = |x: &[LeafId]| -> u32 {
        x.iter().flat_map(|&u| x.iter().filter_map(move |&v| w.dist(u, v))).max().unwrap_or(0)
    };
    let m = full.iter().map(|b| diam(b)).max().unwrap_or(0);
    let mut rows = Vec::new();
    for k in 1..=kmax {
        let d = dset(&full[0], &full[k])
            .ok_or_else(|| Error::Undefined("axis blocks are disconnected in the window".into()))?;
        rows.push((k, d, k as u32 - 1, (m + 2) * (k as u32 - 1) + 2));
    }
    Ok(rows)
}

/// Elements of a word ball, each with its shortest word.
pub fn word_ball(gens: &[(String, IndexAutomorphism)], radius: u32) -> Vec<(String, IndexAutomorphism)> {
    let period = gens.first().map_or(1, |(_, g)| g.period());
    let mut letters: Vec<(String, IndexAutomorphism)> = Vec::new();
    for (name, g) in gens {
        letters.push((name.clone(), g.clone()));
        letters.push((format!("{name}^-1"), g.inverse()));
    }
    let id = IndexAutomorphism::identity(period);
    let mut seen: BTreeMap<IndexAutomorphism, String> = BTreeMap::new();
    seen.insert(id.clone(), "e".into());
    let mut order = vec![(String::from("e"), id.clone())];
    let mut queue = VecDeque::from([(id, 0u32)]);
    while let Some((x, r)) = queue.pop_front() {
        if r == radius {
            continue;
        }
        let word = seen[&x].clone();
        for (name, l) in &letters {
            let y = x.compose(l);
            if !seen.contains_key(&y) {
                let w = if word == "e" { name.clone() } else { format!("{word} {name}") };
                seen.insert(y.clone(), w.clone());
                order.push((w, y.clone()));
                queue.push_back((y, r + 1));
            }
        }
    }
    order
}

/// Fixed axis leaves of `f` lying in blocks `B_i`, `B_j` with `|j − i| ≥ t`.
pub fn far_fixed_blocks(w: &PeriodicWindow, a: &AxisData, f: &IndexAutomorphism) -> Option<(String, String)> {
    if f.is_identity() || a.period_blocks == 0 {
        return None;
    }
    let fixed: Vec<(LeafId, usize)> =
        a.leaves.iter().filter(|&&l| w.image(f, l) == Some(l)).filter_map(|&l| Some((l, a.block_of(l)?))).collect();
    for &(z, i) in &fixed {
        for &(y, j) in &fixed {
            if j >= i + a.period_blocks {
                return Some((w.name(z).into(), w.name(y).into()));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WpdWitness {
    pub word: String,
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
    pub d_p: u32,
    pub d_gnp: u32,
}

/// Two witness words and the axis leaves, in far blocks, fixed by their
/// quotient.
pub type FarFixed = (String, String, String, String);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WpdReport {
    pub base: String,
    pub epsilon: u32,
    pub n: u32,
    pub radius: u32,
    pub candidates: usize,
    pub witnesses: Vec<WpdWitness>,
    /// Witness set unchanged with radius + 2 and a doubled window margin.
    pub stable: bool,
    /// Pairs of witnesses whose quotient fixes axis leaves in far blocks.
    pub far_fixed: Vec<FarFixed>,
}

fn wpd_pass(
    pp: &PeriodicPattern,
    g: &IndexAutomorphism,
    p: i64,
    eps: u32,
    n: u32,
    ball: &[(String, IndexAutomorphism)],
    margin: i64,
) -> Result<(Vec<WpdWitness>, Vec<FarFixed>)> {
    let gn = g.pow(n as i64);
    let q = gn.act(Sign::Plus, p);
    let mut idx = vec![p, q];
    for (_, h) in ball {
        idx.push(h.act(Sign::Plus, p));
        idx.push(h.act(Sign::Plus, q));
    }
    let lo = idx.iter().min().unwrap() - margin;
    let hi = idx.iter().max().unwrap() + margin;
    let w = PeriodicWindow::new(pp, lo, hi)?;
    let leaf = |i: i64| w.leaf(Sign::Plus, i).ok_or_else(|| Error::UnknownLeaf(leaf_name(Sign::Plus, i)));
    let (vp, vq) = (leaf(p)?, leaf(q)?);
    let mut out = Vec::new();
    let mut elems = Vec::new();
    for (word, h) in ball {
        let hp = leaf(h.act(Sign::Plus, p))?;
        let hq = leaf(h.act(Sign::Plus, q))?;
        let (Some(d1), Some(d2)) = (w.dist(vp, hp), w.dist(vq, hq)) else { continue };
        if d1 < eps && d2 < eps {
            out.push(WpdWitness {
                word: word.clone(),
                plus: h.plus.offsets().to_vec(),
                minus: h.minus.offsets().to_vec(),
                d_p: d1,
                d_gnp: d2,
            });
            elems.push((word.clone(), h.clone()));
        }
    }
    let mut far = Vec::new();
    if elems.len() > 1 {
        let ax = axis(&w, g, Sign::Plus)?;
        for (w1, h1) in &elems {
            for (w2, h2) in &elems {
                if w1 == w2 {
                    continue;
                }
                if let Some((z, y)) = far_fixed_blocks(&w, &ax, &h1.compose(&h2.inverse())) {
                    far.push((w1.clone(), w2.clone(), z, y));
                }
            }
        }
    }
    Ok((out, far))
}

/// Elements `h` of the word ball with `d(p, hp) < ε` and `d(gⁿp, hgⁿp) < ε`.
#[allow(clippy::too_many_arguments)]
pub fn wpd_scan(
    pp: &PeriodicPattern,
    g: &IndexAutomorphism,
    p: i64,
    eps: u32,
    n: u32,
    gens: &[(String, IndexAutomorphism)],
    radius: u32,
    window: i64,
) -> Result<WpdReport> {
    let class = classify_isometry(pp, g, window, n.max(1))?;
    if !class.is_loxodromic() {
        return Err(Error::Precondition(format!("element is not loxodromic: {class:?}")));
    }
    let margin = window.max(pp.period as i64);
    let ball = word_ball(gens, radius);
    let (witnesses, far_fixed) = wpd_pass(pp, g, p, eps, n, &ball, margin)?;
    let bigger = word_ball(gens, radius + 2);
    let (again, _) = wpd_pass(pp, g, p, eps, n, &bigger, 2 * margin)?;
    let key = |ws: &[WpdWitness]| ws.iter().map(|x| (x.plus.clone(), x.minus.clone())).collect::<BTreeSet<_>>();
    Ok(WpdReport {
        base: leaf_name(Sign::Plus, p),
        epsilon: eps,
        n,
        radius,
        candidates: ball.len(),
        stable: key(&witnesses) == key(&again),
        witnesses,
        far_fixed,
    })
}
