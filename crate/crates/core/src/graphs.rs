//! Leaf graphs `X`, `X±`, `Γ±` with BFS distances, path projection, the
//! bottleneck (quasi-tree) certificate and the inclusion inequalities.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{LeafId, Pattern, Sign};

/// BFS distance; `None` means different components.
pub type Dist = Option<u32>;

const INF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphKind {
    /// All leaves; adjacent iff they intersect.
    X,
    /// Plus leaves; adjacent iff a common non-singular minus leaf meets both.
    XPlus,
    XMinus,
    /// Plus leaves; adjacent iff their pseudo-interval is a single block.
    GammaPlus,
    GammaMinus,
}

impl GraphKind {
    pub const ALL: [GraphKind; 5] =
        [GraphKind::X, GraphKind::XPlus, GraphKind::XMinus, GraphKind::GammaPlus, GraphKind::GammaMinus];

    pub fn sign(self) -> Option<Sign> {
        match self {
            GraphKind::X => None,
            GraphKind::XPlus | GraphKind::GammaPlus => Some(Sign::Plus),
            GraphKind::XMinus | GraphKind::GammaMinus => Some(Sign::Minus),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::X => "x",
            GraphKind::XPlus => "xplus",
            GraphKind::XMinus => "xminus",
            GraphKind::GammaPlus => "gammaplus",
            GraphKind::GammaMinus => "gammaminus",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GraphKind> {
        GraphKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Params(format!("unknown graph kind `{s}` (x, xplus, xminus, gammaplus, gammaminus)")))
    }
}

/// An undirected simple graph whose vertices are leaves of a pattern.
#[derive(Clone, Debug)]
pub struct LeafGraph {
    pub kind: GraphKind,
    /// Leaf of each vertex, in increasing leaf order.
    pub leaves: Vec<LeafId>,
    slot: Vec<Option<usize>>,
    adj: Vec<Vec<usize>>,
}

impl LeafGraph {
    /// A graph not tied to a pattern (vertex `i` is "leaf" `i`).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> LeafGraph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort();
        }
        LeafGraph { kind: GraphKind::X, leaves: (0..n).collect(), slot: (0..n).map(Some).collect(), adj }
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn vertex(&self, leaf: LeafId) -> Option<usize> {
        self.slot.get(leaf).copied().flatten()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.iter().filter(|&&b| b > a).map(|&b| (a, b)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Distances from `src` (`u32::MAX` = unreachable).
    pub fn bfs_raw(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![INF; self.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, src: usize) -> Vec<Dist> {
        self.bfs_raw(src).into_iter().map(|d| (d != INF).then_some(d)).collect()
    }

    /// Distance between vertices (not leaves).
    pub fn dist(&self, a: usize, b: usize) -> Dist {
        self.bfs(a)[b]
    }

    /// Distance between two leaves of the pattern.
    pub fn distance(&self, p: &Pattern, a: LeafId, b: LeafId) -> Result<Dist> {
        let va = self.vertex(a).ok_or_else(|| Error::UnknownVertex(p.leaf_id(a).to_string()))?;
        let vb = self.vertex(b).ok_or_else(|| Error::UnknownVertex(p.leaf_id(b).to_string()))?;
        Ok(self.dist(va, vb))
    }

    pub fn all_pairs(&self) -> Vec<Vec<u32>> {
        (0..self.len()).map(|v| self.bfs_raw(v)).collect()
    }

    /// Largest finite-or-infinite distance; `None` if disconnected.
    pub fn diameter(&self) -> Dist {
        let mut best = 0;
        for v in 0..self.len() {
            for d in self.bfs_raw(v) {
                if d == INF {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.bfs_raw(0).iter().all(|&d| d != INF)
    }

    /// Component label of every vertex outside `removed`.
    fn components_without(&self, removed: &[bool]) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut next = 0;
        for s in 0..self.len() {
            if removed[s] || comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !removed[w] && comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Vertices lying on some geodesic from `a` to `b`.
    pub fn geodesic_hull(&self, apsp: &[Vec<u32>], a: usize, b: usize) -> Vec<usize> {
        let d = apsp[a][b];
        if d == INF {
            return Vec::new();
        }
        (0..self.len()).filter(|&v| apsp[a][v] != INF && apsp[a][v] + apsp[v][b] == d).collect()
    }
}

pub fn build_graph(p: &Pattern, kind: GraphKind) -> LeafGraph {
    let leaves: Vec<LeafId> = match kind.sign() {
        None => (0..p.leaf_count()).collect(),
        Some(s) => p.leaves_of(s),
    };
    let mut slot = vec![None; p.leaf_count()];
    for (i, &l) in leaves.iter().enumerate() {
        slot[l] = Some(i);
    }
    let n = leaves.len();
    let mut adj = vec![Vec::new(); n];
    let add = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        if a != b && !adj[a].contains(&b) {
            adj[a].push(b);
            adj[b].push(a);
        }
    };
    match kind {
        GraphKind::X => {
            for a in 0..n {
                for b in (a + 1)..n {
                    if p.intersects(leaves[a], leaves[b]) {
                        add(a, b, &mut adj);
                    }
                }
            }
        }
        GraphKind::XPlus | GraphKind::XMinus => {
            let s = kind.sign().unwrap();
            for m in p.leaves_of(s.flip()) {
                if p.is_singular(m) {
                    continue;
                }
                let hit: Vec<usize> =
                    leaves.iter().enumerate().filter(|&(_, &l)| p.intersects(m, l)).map(|(i, _)| i).collect();
                for (i, &a) in hit.iter().enumerate() {
                    for &b in &hit[i + 1..] {
                        add(a, b, &mut adj);
                    }
                }
            }
        }
        GraphKind::GammaPlus | GraphKind::GammaMinus => {
            for a in 0..n {
                for b in (a + 1)..n {
                    if p.block_count(leaves[a], leaves[b]) == 1 {
                        add(a, b, &mut adj);
                    }
                }
            }
        }
    }
    for l in &mut adj {
        l.sort();
    }
    LeafGraph { kind, leaves, slot, adj }
}

/// Union of the pseudo-intervals of consecutive path vertices, in order of
/// first appearance along the path.
pub fn project_path(p: &Pattern, g: &LeafGraph, path: &[LeafId]) -> Result<Vec<LeafId>> {
    let mut out: Vec<LeafId> = Vec::new();
    let mut seen = vec![false; p.leaf_count()];
    let mut push = |l: LeafId, out: &mut Vec<LeafId>| {
        if !seen[l] {
            seen[l] = true;
            out.push(l);
        }
    };
    for &l in path {
        if g.vertex(l).is_none() {
            return Err(Error::UnknownVertex(p.leaf_id(l).to_string()));
        }
    }
    if let Some(&first) = path.first() {
        push(first, &mut out);
    }
    for w in path.windows(2) {
        let (a, b) = (g.vertex(w[0]).unwrap(), g.vertex(w[1]).unwrap());
        if !g.has_edge(a, b) {
            return Err(Error::Precondition(format!(
                "`{}` and `{}` are not adjacent",
                p.leaf_id(w[0]),
                p.leaf_id(w[1])
            )));
        }
        for l in p.chain(w[0], w[1])? {
            push(l, &mut out);
        }
    }
    Ok(out)
}

/// Result of the bottleneck certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bottleneck {
    pub k: u32,
    pub pass: bool,
    /// `(x, y, v)`: `v` is a midpoint of a geodesic from `x` to `y`, yet `x`
    /// and `y` are connected outside the closed ball `B(v, k)`.
    pub witness: Option<(usize, usize, usize)>,
}

/// Checks that for every pair `x, y` and every midpoint `v` of a geodesic
/// between them, every path from `x` to `y` meets `B(v, k)`.
pub fn bottleneck_certify(g: &LeafGraph, k: u32) -> Result<Bottleneck> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let apsp = g.all_pairs();
    let n = g.len();
    for v in 0..n {
        let dv = &apsp[v];
        let removed: Vec<bool> = dv.iter().map(|&d| d <= k).collect();
        let comp = g.components_without(&removed);
        let mut by_radius: Vec<Vec<usize>> = Vec::new();
        for (x, &d) in dv.iter().enumerate() {
            if d > k {
                let r = d as usize;
                if by_radius.len() <= r {
                    by_radius.resize(r + 1, Vec::new());
                }
                by_radius[r].push(x);
            }
        }
        for (r, ring) in by_radius.iter().enumerate() {
            for (i, &x) in ring.iter().enumerate() {
                for &y in &ring[i + 1..] {
                    if apsp[x][y] as usize == 2 * r && comp[x] == comp[y] {
                        return Ok(Bottleneck { k, pass: false, witness: Some((x, y, v)) });
                    }
                }
            }
        }
    }
    Ok(Bottleneck { k, pass: true, witness: None })
}

/// Smallest `k ≤ kmax` passing the bottleneck certificate.
pub fn bottleneck_constant(g: &LeafGraph, kmax: u32) -> Result<Option<u32>> {
    for k in 0..=kmax {
        if bottleneck_certify(g, k)?.pass {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// One failed inclusion inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiViolation {
    pub a: String,
    pub b: String,
    pub d_sign: Dist,
    pub d_x: Dist,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QiInclusionReport {
    pub pairs: usize,
    pub violations: Vec<QiViolation>,
    /// Largest observed `d_X / d_{X±}` over finite pairs.
    pub max_upper_ratio: f64,
    /// Largest observed `d_{X±} / d_X` over finite pairs.
    pub max_lower_ratio: f64,
}

impl QiInclusionReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d_{X±}(v, w) ≤ d_X(v, w) ≤ 2 d_{X±}(v, w)` for all same-sign pairs.
pub fn qi_inclusion_report(p: &Pattern) -> QiInclusionReport {
    let x = build_graph(p, GraphKind::X);
    let xd = x.all_pairs();
    let mut rep = QiInclusionReport { pairs: 0, violations: Vec::new(), max_upper_ratio: 0.0, max_lower_ratio: 0.0 };
    for kind in [GraphKind::XPlus, GraphKind::XMinus] {
        let g = build_graph(p, kind);
        let gd = g.all_pairs();
        for a in 0..g.len() {
            for b in (a + 1)..g.len() {
                rep.pairs += 1;
                let ds = gd[a][b];
                let dx = xd[x.vertex(g.leaves[a]).unwrap()][x.vertex(g.leaves[b]).unwrap()];
                let lower_ok = ds <= dx || (ds == INF && dx == INF);
                let upper_ok = ds == INF || (dx != INF && dx as u64 <= 2 * ds as u64);
                if !(lower_ok && upper_ok) {
                    rep.violations.push(QiViolation {
                        a: p.leaf_id(g.leaves[a]).into(),
                        b: p.leaf_id(g.leaves[b]).into(),
                        d_sign: (ds != INF).then_some(ds),
                        d_x: (dx != INF).then_some(dx),
                    });
                }
                if ds != INF && dx != INF && ds > 0 {
                    rep.max_upper_ratio = rep.max_upper_ratio.max(dx as f64 / ds as f64);
                    rep.max_lower_ratio = rep.max_lower_ratio.max(ds as f64 / dx as f64);
                }
            }
        }
    }
    rep
}
