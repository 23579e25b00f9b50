//! Seeded random valid patterns for property suites.
//!
//! Two families of draws are mixed. *Circle* draws interleave two independent
//! non-crossing chord families on a circle; they are rarely connected beyond
//! a handful of leaves. *Staircase* draws work in a square: plus leaves leave
//! the bottom edge and end on the top edge or, for a prefix and a suffix, on
//! the left and right edges; minus leaves are full-width horizontals plus
//! nested caps cutting off the top corners. Signs are swapped at random so
//! both families get the corner structure. A draw is kept only if it
//! validates and every leaf graph is connected; afterwards a few random
//! same-sign pairs are tried as nonseparated pairs and kept when the result
//! still validates with connected graphs. Every crossing becomes a marked
//! point.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphKind};
use crate::layout::{b, left, right, t, with_all_crossings, Builder};
use crate::pattern::{FinitePattern, Leaf, Pattern, Sign};

pub const MAX_ATTEMPTS: usize = 10_000;

/// A random non-crossing perfect matching of `0..2k`.
fn noncrossing_matching(rng: &mut ChaCha8Rng, lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    if lo >= hi {
        return;
    }
    let pairs = (hi - lo) / 2;
    let k = rng.gen_range(0..pairs);
    let partner = lo + 2 * k + 1;
    out.push((lo, partner));
    noncrossing_matching(rng, lo + 1, partner, out);
    noncrossing_matching(rng, partner + 1, hi, out);
}

fn all_connected(p: &Pattern) -> bool {
    GraphKind::ALL.iter().all(|&k| {
        let g = build_graph(p, k);
        !g.is_empty() && g.is_connected()
    })
}

fn draw_circle(rng: &mut ChaCha8Rng, max_leaves: usize) -> FinitePattern {
    let plus = rng.gen_range(1..max_leaves);
    let minus = rng.gen_range(1..=max_leaves - plus);
    let total = 2 * (plus + minus);
    let mut slots: Vec<usize> = sample(rng, total, 2 * plus).into_vec();
    slots.sort_unstable();
    let others: Vec<usize> = (0..total).filter(|i| slots.binary_search(i).is_err()).collect();
    let mut leaves = Vec::new();
    for (sign, count, pos) in [(Sign::Plus, plus, &slots), (Sign::Minus, minus, &others)] {
        let mut m = Vec::new();
        noncrossing_matching(rng, 0, 2 * count, &mut m);
        m.sort_unstable();
        let prefix = if sign == Sign::Plus { "p" } else { "m" };
        for (i, (a, b)) in m.into_iter().enumerate() {
            leaves.push(Leaf {
                id: format!("{prefix}{i}"),
                sign,
                endpoints: vec![format!("e{}", pos[a]), format!("e{}", pos[b])],
            });
        }
    }
    FinitePattern { boundary: (0..total).map(|i| format!("e{i}")).collect(), leaves, ..Default::default() }
}

/// `k` distinct sorted values in `(lo, lo + 10)`.
fn heights(rng: &mut ChaCha8Rng, lo: f64, k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = sample(rng, 79, k).into_iter().map(|i| lo + (i + 1) as f64 / 8.0).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn draw_staircase(rng: &mut ChaCha8Rng, max_leaves: usize) -> FinitePattern {
    let total = rng.gen_range(2..=max_leaves);
    let plus = rng.gen_range(1..total);
    let minus = total - plus;
    let horizontals = rng.gen_range(1..=minus.div_ceil(2));
    let caps = minus - horizontals;
    let lo = rng.gen_range(0..=plus);
    let hi = rng.gen_range(lo..=plus);
    let mut bld = Builder::new();
    let up = heights(rng, 0.0, lo);
    let down = heights(rng, 0.0, plus - hi);
    for i in 0..plus {
        let x = i as f64 + 1.0;
        let end = if i < lo {
            left(up[i])
        } else if i >= hi {
            right(down[plus - 1 - i])
        } else {
            t(x)
        };
        bld.plus(format!("p{i}"), b(x), end);
    }
    for (j, h) in heights(rng, 0.0, horizontals).into_iter().enumerate() {
        bld.minus(format!("m{j}"), left(h), right(h));
    }
    // Caps: the first `split` cut off the top-left corner, the rest the
    // top-right one; nested caps get farther from their corner. A cap is
    // crossed only by verticals on its corner side, so caps sit strictly
    // between verticals (at `x + 0.5` for verticals `x` and `x + 1`).
    let slots = (hi - lo).saturating_sub(1);
    let mut xs: Vec<f64> = sample(rng, slots, caps.min(slots)).into_iter().map(|i| (lo + i) as f64 + 1.5).collect();
    xs.sort_by(f64::total_cmp);
    let split = if xs.len() >= 2 { rng.gen_range(1..xs.len()) } else { rng.gen_range(0..=xs.len()) };
    for (c, &x) in xs.iter().enumerate() {
        let id = format!("m{}", horizontals + c);
        if c < split {
            bld.minus(id, t(x), left(20.0 - c as f64));
        } else {
            bld.minus(id, t(x), right(11.0 + (c - split) as f64));
        }
    }
    // The outermost caps of the two corners: no minus leaf separates them
    // and no plus leaf reaches both.
    if split > 0 && split < xs.len() && rng.gen_bool(0.75) {
        bld.nonseparated(&format!("m{}", horizontals + split - 1), &format!("m{}", horizontals + split));
    }
    let mut fp = bld.build();
    if rng.gen_bool(0.5) {
        let swap = |id: &mut String| {
            let (head, tail) = id.split_at(1);
            *id = format!("{}{tail}", if head == "p" { "m" } else { "p" });
        };
        for l in &mut fp.leaves {
            l.sign = match l.sign {
                Sign::Plus => Sign::Minus,
                Sign::Minus => Sign::Plus,
            };
            swap(&mut l.id);
        }
        fp.nonseparated.iter_mut().flatten().for_each(swap);
    }
    fp.leaves.sort_by(|x, y| (x.sign, &x.id).cmp(&(y.sign, &y.id)));
    fp
}

/// A valid pattern with at most `max_leaves` leaves (at least 2) whose five
/// leaf graphs are all connected. Deterministic in `seed`.
pub fn random_pattern(seed: u64, max_leaves: usize) -> Result<FinitePattern> {
    if max_leaves < 2 {
        return Err(Error::Params("random patterns need at least two leaves".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut fp =
            if rng.gen_bool(0.25) { draw_circle(&mut rng, max_leaves) } else { draw_staircase(&mut rng, max_leaves) };
        if !Pattern::new(fp.clone()).is_ok_and(|p| all_connected(&p)) {
            continue;
        }
        for _ in 0..rng.gen_range(0..4) {
            let a = rng.gen_range(0..fp.leaves.len());
            let b = rng.gen_range(0..fp.leaves.len());
            if a == b || fp.leaves[a].sign != fp.leaves[b].sign {
                continue;
            }
            let mut next = fp.clone();
            next.nonseparated.push([fp.leaves[a].id.clone(), fp.leaves[b].id.clone()]);
            if Pattern::new(next.clone()).is_ok_and(|p| all_connected(&p)) {
                fp = next;
            }
        }
        return Ok(with_all_crossings(fp));
    }
    Err(Error::Undefined(format!("no valid connected pattern after {MAX_ATTEMPTS} draws")))
}
