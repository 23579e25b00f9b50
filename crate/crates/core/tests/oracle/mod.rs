//! Independent reference computations used by several test targets. They
//! work on raw pattern data (labels and endpoint lists) and never call the
//! library's relation tables.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use bifol::pattern::{FinitePattern, Sign};

/// Do leaves `a` and `b` meet? Shared labels are dropped; the rest of `b`
/// must reach two different arcs cut out by `a`. Declared singularities
/// meet at the singular point.
pub fn meets(fp: &FinitePattern, a: usize, b: usize) -> bool {
    let (la, lb) = (&fp.leaves[a], &fp.leaves[b]);
    if fp.singularities.iter().any(|s| (s.plus == la.id && s.minus == lb.id) || (s.plus == lb.id && s.minus == la.id)) {
        return true;
    }
    let pos = |l: &str| fp.boundary.iter().position(|x| x == l).unwrap();
    let ea: Vec<usize> = la.endpoints.iter().map(|e| pos(e)).collect();
    let shared: BTreeSet<&String> = la.endpoints.iter().filter(|e| lb.endpoints.contains(e)).collect();
    let arc = |q: usize| ea.iter().filter(|&&e| e < q).count() % ea.len();
    let arcs: BTreeSet<usize> = lb.endpoints.iter().filter(|e| !shared.contains(e)).map(|e| arc(pos(e))).collect();
    arcs.len() >= 2
}

fn index(fp: &FinitePattern, id: &str) -> usize {
    fp.leaves.iter().position(|l| l.id == id).unwrap_or_else(|| panic!("no leaf {id}"))
}

fn singular(fp: &FinitePattern, i: usize) -> bool {
    let id = &fp.leaves[i].id;
    fp.singularities.iter().any(|s| &s.plus == id || &s.minus == id)
}

/// Adjacency of `X±`: two leaves of `sign` met by a common non-singular
/// leaf of the other sign.
pub fn xsign_adjacent(fp: &FinitePattern, sign: Sign, a: usize, b: usize) -> bool {
    a != b
        && fp.leaves[a].sign == sign
        && fp.leaves[b].sign == sign
        && (0..fp.leaves.len())
            .any(|m| fp.leaves[m].sign != sign && !singular(fp, m) && meets(fp, m, a) && meets(fp, m, b))
}

/// BFS distance in `X±` between two leaf ids.
pub fn xsign_distance(fp: &FinitePattern, sign: Sign, from: &str, to: &str) -> Option<u32> {
    let n = fp.leaves.len();
    let (s, t) = (index(fp, from), index(fp, to));
    let mut dist = vec![None; n];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in 0..n {
            if dist[v].is_none() && xsign_adjacent(fp, sign, u, v) {
                dist[v] = Some(dist[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    dist[t]
}

/// Adjacency matrix of `X±` over all leaf indices, computing every
/// intersection once.
pub fn xsign_matrix(fp: &FinitePattern, sign: Sign) -> Vec<Vec<bool>> {
    let n = fp.leaves.len();
    let meet: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| a != b && meets(fp, a, b)).collect()).collect();
    let transversals: Vec<usize> = (0..n).filter(|&m| fp.leaves[m].sign != sign && !singular(fp, m)).collect();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    a != b
                        && fp.leaves[a].sign == sign
                        && fp.leaves[b].sign == sign
                        && transversals.iter().any(|&m| meet[m][a] && meet[m][b])
                })
                .collect()
        })
        .collect()
}

/// Arc of the boundary cut by `m` containing label `q`, from raw data.
fn arc(fp: &FinitePattern, m: usize, q: &str) -> usize {
    let pos = |l: &str| fp.boundary.iter().position(|x| x == l).unwrap();
    let ends: Vec<usize> = fp.leaves[m].endpoints.iter().map(|e| pos(e)).collect();
    let x = pos(q);
    ends.iter().filter(|&&e| e < x).count() % ends.len()
}

/// Does `m` separate same-sign `l` from `l2`? Same-sign leaves are disjoint,
/// so one endpoint places each leaf.
pub fn separates(fp: &FinitePattern, m: usize, l: usize, l2: usize) -> bool {
    arc(fp, m, &fp.leaves[l].endpoints[0]) != arc(fp, m, &fp.leaves[l2].endpoints[0])
}

/// All simple paths from `x` to `y` in the graph where two same-sign leaves
/// are adjacent when no same-sign leaf separates them; returns the leaves on
/// every such path.
pub fn on_every_path(fp: &FinitePattern, x: usize, y: usize) -> BTreeSet<usize> {
    let sign = fp.leaves[x].sign;
    let same: Vec<usize> = (0..fp.leaves.len()).filter(|&i| fp.leaves[i].sign == sign).collect();
    let adjacent = |a: usize, c: usize| a != c && same.iter().all(|&m| m == a || m == c || !separates(fp, m, a, c));
    let mut common: Option<BTreeSet<usize>> = None;
    let mut path = vec![x];
    fn walk(
        path: &mut Vec<usize>,
        y: usize,
        same: &[usize],
        adjacent: &dyn Fn(usize, usize) -> bool,
        common: &mut Option<BTreeSet<usize>>,
    ) {
        let u = *path.last().unwrap();
        if u == y {
            let s: BTreeSet<usize> = path.iter().copied().collect();
            *common = Some(match common.take() {
                None => s,
                Some(c) => c.intersection(&s).copied().collect(),
            });
            return;
        }
        for &v in same {
            if !path.contains(&v) && adjacent(u, v) {
                path.push(v);
                walk(path, y, same, adjacent, common);
                path.pop();
            }
        }
    }
    walk(&mut path, y, &same, &adjacent, &mut common);
    common.expect("some path exists")
}

// ---- word balls ----

pub type M3 = [[i64; 3]; 3];

fn mul3(x: &M3, y: &M3) -> M3 {
    let mut o = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            o[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    o
}

/// Layered BFS over homogeneous 3×3 matrices, independent of the library's
/// normal form.
pub fn matrix_ball(n: u32) -> (Vec<usize>, Vec<usize>) {
    let gens: Vec<M3> = vec![
        [[2, 1, 0], [1, 1, 0], [0, 0, 1]],
        [[1, -1, 0], [-1, 2, 0], [0, 0, 1]],
        [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
        [[1, 0, -1], [0, 1, 0], [0, 0, 1]],
        [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
        [[1, 0, 0], [0, 1, -1], [0, 0, 1]],
    ];
    let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let free = |m: &M3| m[0][0] == 1 && m[0][1] == 0 && m[1][0] == 0 && m[1][1] == 1 && (m[0][2], m[1][2]) != (0, 0);
    let mut seen = BTreeSet::from([id]);
    let mut layer = BTreeSet::from([id]);
    let (mut sizes, mut frees) = (vec![1], vec![0]);
    for _ in 0..n {
        let next: BTreeSet<M3> =
            layer.iter().flat_map(|x| gens.iter().map(move |a| mul3(x, a))).filter(|y| !seen.contains(y)).collect();
        seen.extend(next.iter().copied());
        frees.push(frees.last().unwrap() + next.iter().filter(|m| free(m)).count());
        sizes.push(seen.len());
        layer = next;
    }
    (sizes, frees)
}

/// Skew maps represented by the images of `0..4`, which determine a
/// period-2 map.
pub fn skew_ball(n: u32) -> Vec<usize> {
    let gens: Vec<[i64; 2]> = vec![[1, 1], [-1, -1], [1, -1], [2, 0], [-2, 0]];
    let apply = |o: &[i64; 2], i: i64| i + o[i.rem_euclid(2) as usize];
    let mut seen = BTreeSet::from([[0i64, 0]]);
    let mut layer = seen.clone();
    let mut sizes = vec![1];
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for f in &layer {
            for g in &gens {
                let c = [apply(g, apply(f, 0)), apply(g, apply(f, 1)) - 1];
                if !seen.contains(&c) {
                    next.insert(c);
                }
            }
        }
        seen.extend(next.iter().copied());
        sizes.push(seen.len());
        layer = next;
    }
    sizes
}
