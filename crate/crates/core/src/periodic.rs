//! ℤ-periodic planes and their exact automorphisms.
//!
//! A [`PeriodicPattern`] describes infinitely many leaves `p_i`, `m_j`
//! (`i, j ∈ ℤ`) by data attached to residues modulo the period `N`: either an
//! intersection band (`p_i` meets `m_j` iff `j − i ∈ D_{i mod N}`), realized
//! as chords in a strip, or an explicit geometry template whose endpoints
//! translate by a fixed shift per period. Finite windows are ordinary
//! [`FinitePattern`]s.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{b, t, Builder, Spot};
use crate::pattern::{FinitePattern, Pattern, Sign};

/// Offset set `D_r` as an integer interval; a missing bound is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<i64>,
}

impl Band {
    pub fn contains(&self, d: i64) -> bool {
        self.lo.is_none_or(|lo| d >= lo) && self.hi.is_none_or(|hi| d <= hi)
    }
}

/// Endpoint template for one period; period `q` is shifted by `q · shift`
/// along the strip.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub shift: f64,
    pub plus: Vec<Vec<Spot>>,
    pub minus: Vec<Vec<Spot>>,
    /// Residues `r` for which `p_i` and `m_i` (`i ≡ r`) form a singularity.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub singular: Vec<usize>,
}

/// Leaves `(sign, i)` and `(sign, i + offset)` are nonseparated for every
/// `i ≡ residue (mod N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonsepRule {
    pub sign: Sign,
    pub residue: usize,
    pub offset: i64,
}

/// Lozenges of one period of a periodic chain, each as
/// `[plus, plus, minus, minus]` leaf indices; translates by multiples of the
/// period are implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScallopedMarker {
    pub lozenges: Vec<[i64; 4]>,
}

/// Per-residue offsets of both families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Offsets {
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicPattern {
    pub name: String,
    pub period: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<Vec<Band>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nonsep: Vec<NonsepRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalloped: Option<ScallopedMarker>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub automorphisms: BTreeMap<String, Offsets>,
}

pub fn leaf_name(sign: Sign, i: i64) -> String {
    match sign {
        Sign::Plus => format!("p{i}"),
        Sign::Minus => format!("m{i}"),
    }
}

/// Inverse of [`leaf_name`].
pub fn parse_leaf_name(id: &str) -> Option<(Sign, i64)> {
    let sign = match id.chars().next()? {
        'p' => Sign::Plus,
        'm' => Sign::Minus,
        _ => return None,
    };
    id[1..].parse().ok().map(|i| (sign, i))
}

fn residue(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

impl PeriodicPattern {
    /// Structural checks plus validation of a three-period window.
    pub fn check(&self) -> Result<()> {
        let n = self.period;
        if n == 0 {
            return Err(Error::Params("period must be at least 1".into()));
        }
        match (&self.band, &self.geometry) {
            (Some(band), None) if band.len() == n => {}
            (None, Some(g)) if g.plus.len() == n && g.minus.len() == n => {
                if g.singular.iter().any(|&r| r >= n) {
                    return Err(Error::Params("singular residue out of range".into()));
                }
            }
            _ => return Err(Error::Params("exactly one of band or geometry, with one entry per residue".into())),
        }
        if self.nonsep.iter().any(|r| r.residue >= n || r.offset == 0) {
            return Err(Error::Params("nonseparation rule out of range".into()));
        }
        for (name, o) in &self.automorphisms {
            IndexAutomorphism::for_pattern(self, o.plus.clone(), o.minus.clone())
                .map_err(|e| Error::Params(format!("automorphism `{name}`: {e}")))?;
        }
        let n = n as i64;
        self.materialize_window(0, 3 * n - 1).map(|_| ())
    }

    /// Finite pattern with leaves `p_i`, `m_j` for `i, j ∈ [lo, hi]`.
    pub fn materialize_window(&self, lo: i64, hi: i64) -> Result<FinitePattern> {
        if lo >= hi {
            return Err(Error::Params(format!("empty window [{lo}, {hi}]")));
        }
        if hi - lo + 1 < self.period as i64 {
            return Err(Error::WindowTooSmall { lo, hi, period: self.period });
        }
        let mut bld = Builder::new();
        if let Some(band) = &self.band {
            self.band_leaves(band, lo, hi, &mut bld)?;
        } else if let Some(g) = &self.geometry {
            let n = self.period as i64;
            for i in lo..=hi {
                let (r, q) = (residue(i, self.period), i.div_euclid(n));
                let shift = |s: &Spot| s.shifted(q as f64 * g.shift);
                let ps: Vec<Spot> = g.plus[r].iter().map(shift).collect();
                let ms: Vec<Spot> = g.minus[r].iter().map(shift).collect();
                bld.leaf(leaf_name(Sign::Plus, i), Sign::Plus, &ps);
                bld.leaf(leaf_name(Sign::Minus, i), Sign::Minus, &ms);
                if g.singular.contains(&r) {
                    bld.singularity(&leaf_name(Sign::Plus, i), &leaf_name(Sign::Minus, i));
                }
            }
        }
        for rule in &self.nonsep {
            for i in lo..=hi {
                let j = i + rule.offset;
                if residue(i, self.period) == rule.residue && (lo..=hi).contains(&j) {
                    bld.nonseparated(&leaf_name(rule.sign, i), &leaf_name(rule.sign, j));
                }
            }
        }
        let fp = bld.build();
        Pattern::new(fp.clone())?;
        Ok(fp)
    }

    /// Strip realization of a band: `p_i` is the vertical at `x = i`, `m_j`
    /// runs from just right of the last vertical it meets (bottom) to just
    /// left of the first (top).
    fn band_leaves(&self, band: &[Band], lo: i64, hi: i64, bld: &mut Builder) -> Result<()> {
        let meets = |i: i64, j: i64| band[residue(i, self.period)].contains(j - i);
        let mut prev: Option<(i64, i64)> = None;
        for i in lo..=hi {
            bld.plus(leaf_name(Sign::Plus, i), b(i as f64), t(i as f64));
        }
        for j in lo..=hi {
            let hits: Vec<i64> = (lo..=hi).filter(|&i| meets(i, j)).collect();
            let (Some(&imin), Some(&imax)) = (hits.first(), hits.last()) else {
                return Err(Error::Params(format!("m{j} meets no plus leaf of the window")));
            };
            if hits.len() as i64 != imax - imin + 1 {
                return Err(Error::Params(format!("m{j} meets a non-contiguous set of plus leaves")));
            }
            if let Some((pmin, pmax)) = prev {
                if imin < pmin || imax < pmax {
                    return Err(Error::Params("band is not monotone; minus leaves would cross".into()));
                }
            }
            prev = Some((imin, imax));
            bld.minus(leaf_name(Sign::Minus, j), b(imax as f64 + 0.5).tie(j), t(imin as f64 - 0.5).tie(j));
        }
        Ok(())
    }

    pub fn automorphism(&self, name: &str) -> Result<IndexAutomorphism> {
        let o = self.automorphisms.get(name).ok_or_else(|| Error::Params(format!("no automorphism named `{name}`")))?;
        IndexAutomorphism::for_pattern(self, o.plus.clone(), o.minus.clone())
    }

    /// Does `g` map the marked periodic chain to itself?
    pub fn scalloped_invariant(&self, g: &IndexAutomorphism) -> Result<bool> {
        let marker = self.scalloped.as_ref().ok_or(Error::NoMarker)?;
        let n = self.period as i64;
        let canon = |l: [i64; 4]| -> ([i64; 2], [i64; 2]) {
            let mut p = [l[0], l[1]];
            let mut m = [l[2], l[3]];
            p.sort();
            m.sort();
            (p, m)
        };
        let marked: Vec<_> = marker.lozenges.iter().map(|&l| canon(l)).collect();
        let is_marked = |(p, m): ([i64; 2], [i64; 2])| {
            marked.iter().any(|&(mp, mm)| {
                let d = p[0] - mp[0];
                d.rem_euclid(n) == 0 && p[1] - mp[1] == d && m[0] - mm[0] == d && m[1] - mm[1] == d
            })
        };
        Ok(marker.lozenges.iter().all(|l| {
            let img =
                [g.act(Sign::Plus, l[0]), g.act(Sign::Plus, l[1]), g.act(Sign::Minus, l[2]), g.act(Sign::Minus, l[3])];
            is_marked(canon(img))
        }))
    }
}

/// A map of ℤ commuting with translation by `N`: `g(r + Nq) = r + o_r + Nq`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMap {
    offsets: Vec<i64>,
}

impl IntMap {
    pub fn new(offsets: Vec<i64>) -> Result<IntMap> {
        let n = offsets.len();
        if n == 0 {
            return Err(Error::Params("offset vector is empty".into()));
        }
        let image: BTreeSet<usize> = offsets.iter().enumerate().map(|(r, &o)| residue(r as i64 + o, n)).collect();
        if image.len() != n {
            return Err(Error::NotBijective);
        }
        Ok(IntMap { offsets })
    }

    pub fn identity(n: usize) -> IntMap {
        IntMap { offsets: vec![0; n] }
    }

    pub fn shift(n: usize, by: i64) -> IntMap {
        IntMap { offsets: vec![by; n] }
    }

    pub fn period(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn apply(&self, i: i64) -> i64 {
        i + self.offsets[residue(i, self.period())]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &IntMap) -> IntMap {
        let n = self.period();
        assert_eq!(n, other.period(), "composing maps of different periods");
        let offsets = (0..n)
            .map(|r| {
                let h = other.offsets[r];
                h + self.offsets[residue(r as i64 + h, n)]
            })
            .collect();
        IntMap { offsets }
    }

    pub fn inverse(&self) -> IntMap {
        let n = self.period();
        let mut offsets = vec![0; n];
        for (r, &o) in self.offsets.iter().enumerate() {
            offsets[residue(r as i64 + o, n)] = -o;
        }
        IntMap { offsets }
    }

    pub fn is_identity(&self) -> bool {
        self.offsets.iter().all(|&o| o == 0)
    }

    /// Smallest non-negative fixed index, if any residue has offset zero.
    pub fn fixed_index(&self) -> Option<i64> {
        self.offsets.iter().position(|&o| o == 0).map(|r| r as i64)
    }

    /// Minimal displacement `min_i (g(i) − i)` and maximal one.
    pub fn displacement_range(&self) -> (i64, i64) {
        (*self.offsets.iter().min().unwrap(), *self.offsets.iter().max().unwrap())
    }
}

/// Automorphism of a periodic pattern: one [`IntMap`] per leaf family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexAutomorphism {
    pub plus: IntMap,
    pub minus: IntMap,
}

impl IndexAutomorphism {
    /// Checks bijectivity only.
    pub fn new(plus: Vec<i64>, minus: Vec<i64>) -> Result<IndexAutomorphism> {
        if plus.len() != minus.len() {
            return Err(Error::Params("plus and minus offsets differ in length".into()));
        }
        Ok(IndexAutomorphism { plus: IntMap::new(plus)?, minus: IntMap::new(minus)? })
    }

    /// Checks bijectivity and that the map preserves the pattern: leaf
    /// intersections, perfect fits, separation, singularities and declared
    /// nonseparated pairs, over three periods.
    pub fn for_pattern(pp: &PeriodicPattern, plus: Vec<i64>, minus: Vec<i64>) -> Result<IndexAutomorphism> {
        if plus.len() != pp.period || minus.len() != pp.period {
            return Err(Error::Params(format!("expected {} offsets per family", pp.period)));
        }
        let g = IndexAutomorphism::new(plus, minus)?;
        g.check_preserves(pp)?;
        Ok(g)
    }

    pub fn identity(n: usize) -> IndexAutomorphism {
        IndexAutomorphism { plus: IntMap::identity(n), minus: IntMap::identity(n) }
    }

    pub fn shift(n: usize, by: i64) -> IndexAutomorphism {
        IndexAutomorphism { plus: IntMap::shift(n, by), minus: IntMap::shift(n, by) }
    }

    pub fn period(&self) -> usize {
        self.plus.period()
    }

    pub fn family(&self, s: Sign) -> &IntMap {
        match s {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn act(&self, s: Sign, i: i64) -> i64 {
        self.family(s).apply(i)
    }

    /// Image of a window leaf id `p{i}` / `m{j}`.
    pub fn act_leaf(&self, id: &str) -> Result<String> {
        let (s, i) = parse_leaf_name(id).ok_or_else(|| Error::UnknownLeaf(id.to_string()))?;
        Ok(leaf_name(s, self.act(s, i)))
    }

    pub fn compose(&self, h: &IndexAutomorphism) -> IndexAutomorphism {
        IndexAutomorphism { plus: self.plus.compose(&h.plus), minus: self.minus.compose(&h.minus) }
    }

    pub fn inverse(&self) -> IndexAutomorphism {
        IndexAutomorphism { plus: self.plus.inverse(), minus: self.minus.inverse() }
    }

    pub fn pow(&self, k: i64) -> IndexAutomorphism {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = IndexAutomorphism::identity(self.period());
        for _ in 0..k.unsigned_abs() {
            acc = base.compose(&acc);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.plus.is_identity() && self.minus.is_identity()
    }

    fn check_preserves(&self, pp: &PeriodicPattern) -> Result<()> {
        let n = pp.period as i64;
        let base: Vec<(Sign, i64)> =
            [Sign::Plus, Sign::Minus].iter().flat_map(|&s| (0..3 * n).map(move |i| (s, i))).collect();
        let mut lo = 0;
        let mut hi = 3 * n - 1;
        for &(s, i) in &base {
            let j = self.act(s, i);
            lo = lo.min(j);
            hi = hi.max(j);
        }
        let fp = pp.materialize_window(lo - n, hi + n)?;
        let pat = Pattern::new(fp)?;
        let ix = |s: Sign, i: i64| pat.leaf(&leaf_name(s, i));
        let src: Vec<usize> = base.iter().map(|&(s, i)| ix(s, i)).collect::<Result<_>>()?;
        let dst: Vec<usize> = base.iter().map(|&(s, i)| ix(s, self.act(s, i))).collect::<Result<_>>()?;
        let bad = |what: &str, a: usize| Err(Error::NotPreserved(format!("{what} at `{}`", pat.leaf_id(src[a]))));
        for a in 0..src.len() {
            if pat.partner(src[a]).is_some() != pat.partner(dst[a]).is_some() {
                return bad("singularity", a);
            }
            for c in 0..src.len() {
                if a == c {
                    continue;
                }
                let (x, y) = (src[a], src[c]);
                let (gx, gy) = (dst[a], dst[c]);
                if pat.intersects(x, y) != pat.intersects(gx, gy) {
                    return bad("intersection", a);
                }
                if pat.shares_endpoint(x, y) != pat.shares_endpoint(gx, gy) {
                    return bad("perfect fit", a);
                }
                if pat.is_nonseparated(x, y) != pat.is_nonseparated(gx, gy) {
                    return bad("nonseparation", a);
                }
                if (pat.partner(x) == Some(y)) != (pat.partner(gx) == Some(gy)) {
                    return bad("singularity", a);
                }
                if pat.sign(x) != pat.sign(y) {
                    continue;
                }
                for e in (c + 1)..src.len() {
                    let z = src[e];
                    if e == a || pat.sign(z) != pat.sign(x) {
                        continue;
                    }
                    if pat.in_interval(y, z, x) != pat.in_interval(gy, dst[e], gx) {
                        return bad("separation", a);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Element `(k, v)` of ℤ² ⋊ ⟨A⟩ with `A = [[2,1],[1,1]]`, acting by
/// `x ↦ A^k x + v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineElement {
    pub k: i64,
    pub v: [i64; 2],
}

pub type Mat2 = [[i64; 2]; 2];

pub const A: Mat2 = [[2, 1], [1, 1]];
pub const A_INV: Mat2 = [[1, -1], [-1, 2]];

fn mat_mul(x: &Mat2, y: &Mat2) -> Option<Mat2> {
    let mut out = [[0i64; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = x[i][0].checked_mul(y[0][j])?.checked_add(x[i][1].checked_mul(y[1][j])?)?;
        }
    }
    Some(out)
}

fn mat_vec(m: &Mat2, v: [i64; 2]) -> Option<[i64; 2]> {
    Some([
        m[0][0].checked_mul(v[0])?.checked_add(m[0][1].checked_mul(v[1])?)?,
        m[1][0].checked_mul(v[0])?.checked_add(m[1][1].checked_mul(v[1])?)?,
    ])
}

/// `A^k`, `None` on overflow.
pub fn a_pow(k: i64) -> Option<Mat2> {
    let base = if k < 0 { A_INV } else { A };
    let mut acc = [[1, 0], [0, 1]];
    for _ in 0..k.unsigned_abs() {
        acc = mat_mul(&base, &acc)?;
    }
    Some(acc)
}

impl AffineElement {
    pub const IDENTITY: AffineElement = AffineElement { k: 0, v: [0, 0] };

    pub fn new(k: i64, v: [i64; 2]) -> AffineElement {
        AffineElement { k, v }
    }

    /// `self · other`; `None` on overflow.
    pub fn checked_mul(&self, other: &AffineElement) -> Option<AffineElement> {
        let w = mat_vec(&a_pow(self.k)?, other.v)?;
        Some(AffineElement {
            k: self.k.checked_add(other.k)?,
            v: [self.v[0].checked_add(w[0])?, self.v[1].checked_add(w[1])?],
        })
    }

    pub fn checked_inverse(&self) -> Option<AffineElement> {
        let w = mat_vec(&a_pow(-self.k)?, self.v)?;
        Some(AffineElement { k: -self.k, v: [w[0].checked_neg()?, w[1].checked_neg()?] })
    }

    /// Free iff it is a nonzero translation; otherwise it fixes a point of
    /// the plane (hyperbolic elements have a unique fixed point).
    pub fn is_free(&self) -> bool {
        self.k == 0 && self.v != [0, 0]
    }
}
