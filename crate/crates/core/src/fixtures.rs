//! Named example planes: finite truncations and periodic planes.
//!
//! Every generator is deterministic and returns data that passes
//! validation. Finite fixtures carry crossing points where they are used by
//! the metric code; larger ones carry none.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{b, crossing_point, deg, left, right, t, with_all_crossings, Builder, Spot};
use crate::pattern::{FinitePattern, Pattern, Sign};
use crate::periodic::{leaf_name, Band, Geometry, NonsepRule, Offsets, PeriodicPattern, ScallopedMarker};

/// Output of [`generate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fixture {
    Finite(FinitePattern),
    Periodic(PeriodicPattern),
}

pub const KINDS: &[&str] = &[
    "trivial",
    "skew",
    "ladder",
    "scalloped",
    "prong",
    "sinestrip",
    "lozenge",
    "chain",
    "prongdiv",
    "prongnondiv",
    "partlink",
    "trivial-plane",
    "ladder-periodic",
    "prongline",
    "prongchain",
];

/// Fixtures shipped as JSON files: file stem, kind and parameter.
pub const SHIPPED: &[(&str, &str, Option<i64>)] = &[
    ("grid3", "trivial", Some(3)),
    ("ladder2", "ladder", Some(2)),
    ("ladder3", "ladder", Some(3)),
    ("ladder8", "ladder", Some(8)),
    ("loz1", "lozenge", None),
    ("chain3", "chain", Some(3)),
    ("prong3", "prong", Some(3)),
    ("prongdiv", "prongdiv", None),
    ("prongnondiv", "prongnondiv", None),
    ("prongchain3", "prongchain", Some(3)),
    ("partlink", "partlink", None),
    ("sinestrip4", "sinestrip", Some(4)),
    ("sinestrip6", "sinestrip", Some(6)),
    ("skew2", "skew", Some(2)),
    ("skew3", "skew", Some(3)),
    ("skew4", "skew", Some(4)),
    ("scalloped", "scalloped", Some(2)),
    ("trivial-plane", "trivial-plane", None),
    ("ladder-periodic", "ladder-periodic", None),
    ("prongline", "prongline", None),
];

/// Builds a named fixture. `param` is the size parameter of the kind
/// (`n`, `W`, `k`, `m` or the period); kinds without one ignore it.
pub fn generate(kind: &str, param: Option<i64>) -> Result<Fixture> {
    let need = |min: i64, default: i64, what: &str| -> Result<usize> {
        let v = param.unwrap_or(default);
        if v < min {
            Err(Error::Params(format!("{kind}: {what} must be at least {min}, got {v}")))
        } else {
            Ok(v as usize)
        }
    };
    Ok(match kind {
        "trivial" => Fixture::Finite(grid(need(1, 3, "n")?)),
        "skew" => Fixture::Periodic(skew(need(2, 2, "W")?)),
        "ladder" => Fixture::Finite(ladder(need(1, 2, "n")?)),
        "scalloped" => {
            let n = need(2, 2, "period")?;
            if n % 2 != 0 {
                return Err(Error::Params("scalloped: period must be even".into()));
            }
            Fixture::Periodic(scalloped(n))
        }
        "prong" => Fixture::Finite(prong(need(3, 3, "k")?)),
        "sinestrip" => Fixture::Finite(sinestrip(need(1, 4, "m")?)),
        "lozenge" => Fixture::Finite(chain(1)),
        "chain" => Fixture::Finite(chain(need(1, 3, "n")?)),
        "prongdiv" => Fixture::Finite(prongdiv(true)),
        "prongnondiv" => Fixture::Finite(prongdiv(false)),
        "partlink" => Fixture::Finite(partlink()),
        "trivial-plane" => Fixture::Periodic(trivial_plane()),
        "ladder-periodic" => Fixture::Periodic(ladder_periodic()),
        "prongline" => Fixture::Periodic(prongline()),
        "prongchain" => Fixture::Finite(prongchain(need(1, 2, "n")?)),
        _ => return Err(Error::Params(format!("unknown fixture kind `{kind}` (known: {})", KINDS.join(", ")))),
    })
}

/// `n` vertical and `n` horizontal chords, all crossing (the trivial plane).
pub fn grid(n: usize) -> FinitePattern {
    let mut bld = Builder::new();
    for i in 0..n {
        bld.plus(format!("v{i}"), b(i as f64), t(i as f64));
    }
    for j in 0..n {
        bld.minus(format!("h{j}"), left(j as f64), right(j as f64));
    }
    with_all_crossings(bld.build())
}

/// The 3×3 grid.
pub fn grid3() -> FinitePattern {
    grid(3)
}

/// A plus pseudo-interval `⟦x0, y_{n-1}⟧` with blocks `[x_i, y_i]` split by
/// the nonseparated pairs `(y_i, x_{i+1})`. Cups `c_i` tie each block together;
/// the plus cap `u_i` sits in the gap of a nonseparated pair, joined to both
/// sides by the minus leaves `a_i`, `b_i`. The minus line `w_i` runs across
/// the strip through that gap, meeting only `u_i`, so distant blocks are
/// separated by minus leaves as well as plus ones.
pub fn ladder(n: usize) -> FinitePattern {
    let mut bld = Builder::new();
    for i in 0..n {
        let o = 3.0 * i as f64;
        bld.plus(format!("x{i}"), b(o), t(o));
        bld.plus(format!("y{i}"), b(o + 1.0), t(o + 1.0));
        bld.minus(format!("c{i}"), b(o - 0.5), b(o + 1.5));
        if i + 1 < n {
            bld.plus(format!("u{i}"), t(o + 1.5), t(o + 2.5));
            bld.minus(format!("a{i}"), t(o + 0.5), t(o + 2.0));
            bld.minus(format!("b{i}"), t(o + 2.1), t(o + 3.4));
            bld.minus(format!("w{i}"), b(o + 2.0), t(o + 2.05));
            bld.nonseparated(&format!("y{i}"), &format!("x{}", i + 1));
        }
    }
    with_all_crossings(bld.build())
}

/// `ladder(2)` plus a minus chord crossing both leaves of its nonseparated
/// pair; fails validation.
pub fn ladder_with_transversal() -> FinitePattern {
    let base = ladder(2);
    let mut bld = Builder::new();
    for i in 0..2 {
        let o = 3.0 * i as f64;
        bld.plus(format!("x{i}"), b(o), t(o));
        bld.plus(format!("y{i}"), b(o + 1.0), t(o + 1.0));
        bld.minus(format!("c{i}"), b(o - 0.5), b(o + 1.5));
    }
    bld.plus("u0", t(1.5), t(2.5));
    bld.minus("a0", t(0.5), t(2.0));
    bld.minus("b0", t(2.1), t(3.4));
    bld.minus("w", b(-1.0), b(5.0));
    bld.nonseparated("y0", "x1");
    let mut fp = bld.build();
    // Any chord meeting both y0 and x1 also meets the rung line w0, so
    // leave it out; only the nonseparated-pair violation remains.
    fp.points = base.points.into_iter().filter(|q| !q.id.split('/').any(|l| l == "w0")).collect();
    fp
}

/// Chain of `n` lozenges, adjacent ones sharing a corner. Interior leaves
/// `E_i` (plus) and `F_i` (minus) cross each lozenge and keep `X±` connected.
pub fn chain(n: usize) -> FinitePattern {
    let mut seq: Vec<String> = vec!["d0".into()];
    for i in 1..=n {
        seq.push(format!("e{i}"));
        seq.push(format!("D{i}"));
        seq.push(format!("f{i}"));
    }
    seq.push(format!("R{n}"));
    seq.push(format!("U{n}"));
    for i in (1..=n).rev() {
        seq.push(format!("e'{i}"));
        seq.push(format!("U{}", i - 1));
        seq.push(format!("f'{i}"));
    }
    seq.push("L0".into());
    let at = |name: &str| deg(seq.iter().position(|s| s == name).expect("chain label") as f64);

    let mut bld = Builder::new();
    for i in 0..=n {
        let a = if i == 0 { "d0".to_string() } else { format!("D{i}") };
        bld.plus(format!("p{i}"), at(&a), at(&format!("U{i}")));
    }
    for i in 0..=n {
        let a = if i == 0 { "L0".to_string() } else { format!("U{}", i - 1) };
        let z = if i == n { format!("R{n}") } else { format!("D{}", i + 1) };
        bld.minus(format!("m{i}"), at(&a), at(&z));
    }
    for i in 1..=n {
        bld.plus(format!("E{i}"), at(&format!("e{i}")), at(&format!("e'{i}")));
        bld.minus(format!("F{i}"), at(&format!("f{i}")), at(&format!("f'{i}")));
    }
    with_all_crossings(bld.build())
}

/// Circle angles of a `k`-prong: plus star, minus star, and the chords
/// around each ray.
fn prong_builder(k: usize) -> Builder {
    let step = 360.0 / k as f64;
    let half = step / 2.0;
    let w = half * 2.0 / 3.0;
    let mut bld = Builder::new();
    let plus: Vec<Spot> = (0..k).map(|i| deg(i as f64 * step)).collect();
    let minus: Vec<Spot> = (0..k).map(|i| deg(i as f64 * step + half)).collect();
    bld.leaf("sp", Sign::Plus, &plus);
    bld.leaf("sm", Sign::Minus, &minus);
    bld.singularity("sp", "sm");
    let wrap = |a: f64| deg(a.rem_euclid(360.0));
    for i in 0..k {
        let c = i as f64 * step + half;
        bld.plus(format!("p{i}"), wrap(c - w), wrap(c + w));
        let c = i as f64 * step;
        bld.minus(format!("m{i}"), wrap(c - w), wrap(c + w));
    }
    bld
}

pub fn prong(k: usize) -> FinitePattern {
    with_all_crossings(prong_builder(k).build())
}

/// `prong(3)` with a small plus chord inside the first quadrant.
pub fn prong_with_satellite() -> FinitePattern {
    let mut bld = prong_builder(3);
    bld.plus("z", deg(5.0), deg(15.0));
    with_all_crossings(bld.build())
}

/// `prong(3)` with plus leaves `x` (first quadrant) and `y` (dividing case:
/// three quadrants away; otherwise: two quadrants away), each tied to the
/// singular leaf by a minus connector `w`.
pub fn prongdiv(dividing: bool) -> FinitePattern {
    let mut bld = prong_builder(3);
    bld.plus("x", deg(25.0), deg(55.0));
    if dividing {
        bld.plus("y", deg(225.0), deg(235.0));
        bld.minus("w", deg(230.0), deg(265.0));
    } else {
        bld.plus("y", deg(145.0), deg(175.0));
        bld.minus("w", deg(110.0), deg(150.0));
    }
    with_all_crossings(bld.build())
}

/// `n` three-prongs in a row in a rectangle, each dividing `x` from `y`.
pub fn prongchain(n: usize) -> FinitePattern {
    let mut bld = Builder::new();
    bld.plus("x", b(5.0), t(5.0));
    let yx = 10.0 * n as f64 + 5.0;
    bld.plus("y", b(yx), t(yx));
    for i in 1..=n {
        let c = 10.0 * i as f64;
        bld.leaf(format!("P{i}"), Sign::Plus, &[b(c - 1.0), b(c + 1.0), t(c)]);
        bld.leaf(format!("M{i}"), Sign::Minus, &[b(c), t(c + 1.0), t(c - 1.0)]);
        bld.singularity(&format!("P{i}"), &format!("M{i}"));
        bld.plus(format!("z{i}"), b(c - 0.3), b(c + 0.3));
        if i < n {
            bld.plus(format!("a{i}"), b(c + 4.0), t(c + 4.0));
            bld.plus(format!("b{i}"), b(c + 6.0), t(c + 6.0));
            bld.minus(format!("c{i}"), b(c + 0.1), b(c + 4.5));
            bld.minus(format!("d{i}"), t(c + 3.5), t(c + 6.5));
            bld.minus(format!("e{i}"), b(c + 5.5), b(c + 9.9));
        }
    }
    bld.minus("w0", b(4.5), b(9.9));
    let last = 10.0 * n as f64;
    bld.minus(format!("w{n}"), b(last + 0.1), b(last + 5.5));
    with_all_crossings(bld.build())
}

/// A window of `skew(2)` with two crossing points `a`, `b` such that exactly
/// one cross-intersection of their leaves is nonempty.
pub fn partlink() -> FinitePattern {
    let mut fp = skew(2).materialize_window(0, 3).expect("skew window");
    let mut a = crossing_point("p1", "m1");
    a.id = "a".into();
    let mut z = crossing_point("p2", "m2");
    z.id = "b".into();
    fp.points = vec![a, z];
    fp
}

/// Discretized skew plane: `p_i` meets `m_j` iff `i ≤ j < i + W`.
pub fn skew(w: usize) -> PeriodicPattern {
    let mut pp = PeriodicPattern {
        name: format!("skew{w}"),
        period: 1,
        band: Some(vec![Band { lo: Some(0), hi: Some(w as i64 - 1) }]),
        geometry: None,
        nonsep: Vec::new(),
        scalloped: None,
        automorphisms: Default::default(),
    };
    pp.automorphisms.insert("shift".into(), Offsets { plus: vec![1], minus: vec![1] });
    pp
}

/// Trivial plane as a period-2 pattern: every plus leaf meets every minus leaf.
pub fn trivial_plane() -> PeriodicPattern {
    let mut pp = PeriodicPattern {
        name: "trivial-plane".into(),
        period: 2,
        band: Some(vec![Band { lo: None, hi: None }; 2]),
        geometry: None,
        nonsep: Vec::new(),
        scalloped: None,
        automorphisms: Default::default(),
    };
    pp.automorphisms.insert("shift".into(), Offsets { plus: vec![1, 1], minus: vec![1, 1] });
    pp.automorphisms.insert("drift".into(), Offsets { plus: vec![0, 0], minus: vec![2, 2] });
    pp.automorphisms.insert("identity".into(), Offsets { plus: vec![0, 0], minus: vec![0, 0] });
    pp
}

/// Periodic ladder: period 3 with families `x, y, u` (plus) and `c, a, b`
/// (minus); `y_i` is nonseparated from `x_{i+1}`.
pub fn ladder_periodic() -> PeriodicPattern {
    let mut pp = PeriodicPattern {
        name: "ladder-periodic".into(),
        period: 3,
        band: None,
        geometry: Some(Geometry {
            shift: 3.0,
            plus: vec![vec![b(0.0), t(0.0)], vec![b(1.0), t(1.0)], vec![t(1.5), t(2.5)]],
            minus: vec![vec![b(-0.5), b(1.5)], vec![t(0.5), t(2.0)], vec![t(2.1), t(3.4)]],
            singular: Vec::new(),
        }),
        nonsep: vec![NonsepRule { sign: Sign::Plus, residue: 1, offset: 2 }],
        scalloped: None,
        automorphisms: Default::default(),
    };
    pp.automorphisms.insert("shift".into(), Offsets { plus: vec![3; 3], minus: vec![3; 3] });
    pp
}

/// Periodic row of three-prongs, one per period of 4; every prong divides
/// leaves on its two sides.
pub fn prongline() -> PeriodicPattern {
    let c = 0.0;
    let mut pp = PeriodicPattern {
        name: "prongline".into(),
        period: 4,
        band: None,
        geometry: Some(Geometry {
            shift: 10.0,
            plus: vec![
                vec![b(c - 1.0), b(c + 1.0), t(c)],
                vec![b(c - 0.3), b(c + 0.3)],
                vec![b(c + 4.0), t(c + 4.0)],
                vec![b(c + 6.0), t(c + 6.0)],
            ],
            minus: vec![
                vec![b(c), t(c + 1.0), t(c - 1.0)],
                vec![b(c + 0.1), b(c + 4.5)],
                vec![t(c + 3.5), t(c + 6.5)],
                vec![b(c + 5.5), b(c + 9.9)],
            ],
            singular: vec![0],
        }),
        nonsep: Vec::new(),
        scalloped: None,
        automorphisms: Default::default(),
    };
    pp.automorphisms.insert("shift".into(), Offsets { plus: vec![4; 4], minus: vec![4; 4] });
    pp
}

/// Bi-infinite chain of lozenges sharing plus sides: verticals `α_i`,
/// top minus arcs `τ_{2k}` and bottom minus arcs `β_{2k+1}` whose ends sit
/// on the ends of the verticals (perfect fits).
pub fn scalloped(period: usize) -> PeriodicPattern {
    let plus = (0..period).map(|r| vec![b(r as f64), t(r as f64)]).collect();
    let minus = (0..period)
        .map(|r| {
            let x = r as f64;
            if r % 2 == 0 {
                vec![t(x - 1.0), t(x + 1.0)]
            } else {
                vec![b(x - 1.0), b(x + 1.0)]
            }
        })
        .collect();
    let lozenges = (0..period as i64)
        .map(|i| {
            let (odd, even) = if i % 2 == 0 { (i + 1, i) } else { (i, i + 1) };
            [i, i + 1, odd, even]
        })
        .collect();
    let mut pp = PeriodicPattern {
        name: format!("scalloped{period}"),
        period,
        band: None,
        geometry: Some(Geometry { shift: period as f64, plus, minus, singular: Vec::new() }),
        nonsep: (0..period).map(|r| NonsepRule { sign: Sign::Minus, residue: r, offset: 2 }).collect(),
        scalloped: Some(ScallopedMarker { lozenges }),
        automorphisms: Default::default(),
    };
    let p = period as i64;
    pp.automorphisms.insert("shift".into(), Offsets { plus: vec![p; period], minus: vec![p; period] });
    pp
}

/// Strip between `y = sin x` and `y = sin x + 1/2` over `m` periods. Plus
/// leaves are verticals; minus leaves are the horizontal segments at levels
/// `c = -3/4, -1/2, …, 5/4`. The level through a peak (`c = 1`) and through a
/// trough (`c = -1/2`) touches the boundary there and splits into a
/// nonseparated pair.
pub fn sinestrip(m: usize) -> FinitePattern {
    const ETA: f64 = 0.01;
    let len = 2.0 * PI * m as f64;
    let mut bld = Builder::new();
    let mut minus: Vec<(f64, f64)> = Vec::new();
    let mut count = 0usize;
    for k in 0..19 {
        let c = -0.875 + 0.125 * k as f64;
        let (lo, hi) = (c - 0.5, c);
        // Roots of sin x = v inside the window, tagged with the edge they lie on.
        let mut roots: Vec<(f64, Spot)> = Vec::new();
        let mut tangents: Vec<f64> = Vec::new();
        for (v, on_bottom) in [(hi, true), (lo, false)] {
            let edge = |x: f64| if on_bottom { b(x) } else { t(x) };
            if (v.abs() - 1.0).abs() < 1e-12 {
                let x0 = if v > 0.0 { PI / 2.0 } else { 1.5 * PI };
                for q in 0..=m {
                    let x = x0 + 2.0 * PI * q as f64;
                    if x > 0.0 && x < len {
                        tangents.push(x);
                    }
                }
            } else if v.abs() < 1.0 {
                let a = v.asin();
                for q in -1..=(m as i64) {
                    for x in [a + 2.0 * PI * q as f64, PI - a + 2.0 * PI * q as f64] {
                        if x > 1e-9 && x < len - 1e-9 {
                            roots.push((x, edge(x)));
                        }
                    }
                }
            }
            for &x in &tangents {
                roots.push((x - ETA, edge(x - ETA)));
                roots.push((x + ETA, edge(x + ETA)));
            }
            tangents.clear();
        }
        roots.sort_by(|a, z| a.0.total_cmp(&z.0));
        for w in roots.windows(2) {
            let (x0, x1) = (w[0].0, w[1].0);
            let mid = ((x0 + x1) / 2.0).sin();
            if x1 - x0 > 3.0 * ETA && mid > lo && mid < hi {
                let id = format!("h{count}");
                count += 1;
                bld.minus(&id, w[0].1, w[1].1);
                minus.push((x0, x1));
            }
        }
    }
    // Nonseparated pairs: two leaves of one level meeting at a tangency.
    let n = minus.len();
    for i in 0..n {
        for j in 0..n {
            if (minus[j].0 - minus[i].1 - 2.0 * ETA).abs() < 1e-9 {
                bld.nonseparated(&format!("h{i}"), &format!("h{j}"));
            }
        }
    }
    let mut v = 0usize;
    for k in 0..16 * m {
        let x = PI * (2 * k + 1) as f64 / 16.0;
        if minus.iter().any(|&(x0, x1)| x0 < x && x < x1) {
            bld.plus(format!("v{v}"), b(x), t(x));
            v += 1;
        }
    }
    bld.build()
}

/// Leaves of `pat` with the given sign whose ids are the window names
/// `p{i}` / `m{i}`, in index order.
pub fn window_leaves(pat: &Pattern, sign: Sign, lo: i64, hi: i64) -> Vec<usize> {
    (lo..=hi).filter_map(|i| pat.leaf(&leaf_name(sign, i)).ok()).collect()
}
