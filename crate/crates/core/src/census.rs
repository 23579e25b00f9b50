//! Word balls in exactly represented automorphism groups, split into
//! elements with a fixed point and elements acting freely.
//!
//! Three models are supported: the affine group `ℤ² ⋊ ⟨A⟩` acting on the
//! trivial plane, maps of `ℤ` commuting with a period (the skew plane's leaf
//! line), and index automorphisms of a periodic pattern. Elements are kept in
//! normal form, so equality is exact.

use std::collections::HashSet;
use std::fmt::{self, Debug};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{Pattern, Sign};
use crate::periodic::{leaf_name, AffineElement, IndexAutomorphism, IntMap, PeriodicPattern};

/// A group element with exact composition.
pub trait GroupElement: Clone + Eq + Hash + Ord + Debug {
    /// `self ∘ other`.
    fn compose(&self, other: &Self) -> Result<Self>;
    fn inverse(&self) -> Result<Self>;
    fn identity_of(&self) -> Self;
    fn is_identity(&self) -> bool {
        *self == self.identity_of()
    }
}

impl GroupElement for AffineElement {
    fn compose(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other).ok_or_else(|| Error::Params("affine arithmetic overflow".into()))
    }

    fn inverse(&self) -> Result<Self> {
        self.checked_inverse().ok_or_else(|| Error::Params("affine arithmetic overflow".into()))
    }

    fn identity_of(&self) -> Self {
        AffineElement::IDENTITY
    }
}

impl GroupElement for IntMap {
    fn compose(&self, other: &Self) -> Result<Self> {
        Ok(IntMap::compose(self, other))
    }

    fn inverse(&self) -> Result<Self> {
        Ok(IntMap::inverse(self))
    }

    fn identity_of(&self) -> Self {
        IntMap::identity(self.period())
    }
}

impl GroupElement for IndexAutomorphism {
    fn compose(&self, other: &Self) -> Result<Self> {
        Ok(IndexAutomorphism::compose(self, other))
    }

    fn inverse(&self) -> Result<Self> {
        Ok(IndexAutomorphism::inverse(self))
    }

    fn identity_of(&self) -> Self {
        IndexAutomorphism::identity(self.period())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    TrivialAffine,
    SkewIntmap,
    PeriodicPattern,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::TrivialAffine => "trivial_affine",
            Model::SkewIntmap => "skew_intmap",
            Model::PeriodicPattern => "periodic_pattern",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Fixed,
    Free,
}

/// Named generators; inverses are added when the set is symmetrized.
#[derive(Clone, Debug)]
pub struct GeneratingSet<E> {
    pub model: Model,
    pub generators: Vec<(String, E)>,
}

impl<E: GroupElement> GeneratingSet<E> {
    pub fn new(model: Model, generators: Vec<(String, E)>) -> Result<GeneratingSet<E>> {
        if generators.is_empty() {
            return Err(Error::Params("empty generating set".into()));
        }
        if let Some((name, _)) = generators.iter().find(|(_, g)| g.is_identity()) {
            return Err(Error::Params(format!("generator `{name}` is the identity")));
        }
        Ok(GeneratingSet { model, generators })
    }

    /// `|S|` for the symmetric set: distinct generators and inverses.
    pub fn size(&self) -> Result<usize> {
        Ok(self.letters()?.len())
    }

    /// Generators and their inverses, without repeats, in a fixed order.
    pub fn letters(&self) -> Result<Vec<(String, E)>> {
        let mut out: Vec<(String, E)> = Vec::new();
        for (name, g) in &self.generators {
            for (n, e) in [(name.clone(), g.clone()), (format!("{name}^-1"), g.inverse()?)] {
                if !out.iter().any(|(_, x)| *x == e) {
                    out.push((n, e));
                }
            }
        }
        Ok(out)
    }

    pub fn identity(&self) -> E {
        self.generators[0].1.identity_of()
    }
}

/// Elements of `B(n)` in breadth-first discovery order with word lengths,
/// and `|B(r)|` for every radius.
#[derive(Clone, Debug)]
pub struct Ball<E> {
    pub elements: Vec<(E, u32)>,
    pub sizes: Vec<usize>,
}

impl<E: GroupElement> Ball<E> {
    pub fn radius(&self) -> u32 {
        self.sizes.len() as u32 - 1
    }

    /// Elements of word length at most `r`.
    pub fn within(&self, r: u32) -> &[(E, u32)] {
        &self.elements[..self.sizes[r as usize]]
    }

    pub fn word_length(&self, g: &E) -> Option<u32> {
        self.elements.iter().find(|(e, _)| e == g).map(|&(_, l)| l)
    }
}

/// Cost model for budgeting: one composition plus one hash probe per letter
/// per element.
pub const NANOS_PER_STEP: u64 = 400;

/// Environment variable holding the census time budget in milliseconds.
pub const BUDGET_ENV: &str = "BIFOL_BUDGET_MS";
pub const DEFAULT_BUDGET_MS: u64 = 60_000;

pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET_MS)
}

/// Projected milliseconds to reach radius `nmax` given the cumulative ball
/// sizes so far. Only the newest shell is expanded at each radius, so the
/// remaining work is the sum of the shells from the current one to radius
/// `nmax − 1`, extrapolated by the last shell-growth ratio. With fewer than
/// two shells known there is no ratio yet, and only the next radius is
/// projected; that radius costs at most `letters²` steps.
pub fn projected_ms(sizes: &[usize], letters: usize, nmax: u32) -> u64 {
    let done = sizes.len() as u32 - 1;
    let shell = |r: usize| sizes[r] - if r == 0 { 0 } else { sizes[r - 1] };
    let mut cur = shell(done as usize) as f64;
    let steps = if done < 2 {
        if done < nmax {
            cur
        } else {
            0.0
        }
    } else {
        let prev = shell(done as usize - 1) as f64;
        let ratio = if prev > 0.0 { (cur / prev).max(1.0) } else { letters as f64 };
        let mut total = 0.0;
        for _ in done..nmax {
            total += cur;
            cur *= ratio;
        }
        total
    };
    (steps * letters as f64 * NANOS_PER_STEP as f64 / 1e6).ceil().min(u64::MAX as f64) as u64
}

/// Breadth-first enumeration of `B(nmax)`; aborts when the projected cost
/// exceeds `budget_ms`.
pub fn enumerate_ball<E: GroupElement>(s: &GeneratingSet<E>, nmax: u32, budget_ms: Option<u64>) -> Result<Ball<E>> {
    let letters = s.letters()?;
    let id = s.identity();
    let mut seen: HashSet<E> = HashSet::from([id.clone()]);
    let mut elements = vec![(id, 0)];
    let mut sizes = vec![1];
    let mut frontier = 0..1;
    for n in 1..=nmax {
        if let Some(budget) = budget_ms {
            let projected = projected_ms(&sizes, letters.len(), nmax);
            if projected > budget {
                return Err(Error::Budget { projected_ms: projected as u128, budget_ms: budget as u128 });
            }
        }
        let start = elements.len();
        for i in frontier.clone() {
            for (_, a) in &letters {
                let y = elements[i].0.compose(a)?;
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    elements.push((y, n));
                }
            }
        }
        frontier = start..elements.len();
        sizes.push(elements.len());
    }
    Ok(Ball { elements, sizes })
}

/// Trivial plane: free exactly for nonzero translations.
pub fn affine_class(g: &AffineElement) -> Class {
    if g.is_free() {
        Class::Free
    } else {
        Class::Fixed
    }
}

/// Leaf line: fixed exactly when some residue has offset 0.
pub fn intmap_class(g: &IntMap) -> Class {
    if g.fixed_index().is_some() {
        Class::Fixed
    } else {
        Class::Free
    }
}

/// Periodic pattern: fixed exactly when a fixed plus leaf meets (or is the
/// singular partner of) a fixed minus leaf.
pub struct PatternClassifier {
    period: usize,
    window: Pattern,
    lo: i64,
    hi: i64,
}

impl PatternClassifier {
    pub fn new(pp: &PeriodicPattern) -> Result<PatternClassifier> {
        let n = pp.period as i64;
        let (lo, hi) = (0, 3 * n - 1);
        Ok(PatternClassifier { period: pp.period, window: Pattern::new(pp.materialize_window(lo, hi)?)?, lo, hi })
    }

    pub fn class(&self, g: &IndexAutomorphism) -> Result<Class> {
        if g.period() != self.period {
            return Err(Error::Params("element and pattern periods differ".into()));
        }
        let fixed = |s: Sign| -> Vec<i64> {
            (self.lo..=self.hi)
                .filter(|&i| g.family(s).offsets()[i.rem_euclid(self.period as i64) as usize] == 0)
                .collect()
        };
        let p = &self.window;
        for i in fixed(Sign::Plus) {
            for j in fixed(Sign::Minus) {
                let (a, b) = (p.leaf(&leaf_name(Sign::Plus, i))?, p.leaf(&leaf_name(Sign::Minus, j))?);
                if p.intersects(a, b) || p.partner(a) == Some(b) {
                    return Ok(Class::Fixed);
                }
            }
        }
        Ok(Class::Free)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallRow {
    pub n: u32,
    pub ball: usize,
    pub free: usize,
    pub fixed: usize,
    pub free_fraction: f64,
    /// `ln|B(n)|/n` and `ln|Free ∩ B(n)|/n` (absent at `n = 0` or for an
    /// empty set).
    pub lambda_g: Option<f64>,
    pub lambda_free: Option<f64>,
}

pub fn ball_rows<E: GroupElement>(ball: &Ball<E>, class: impl Fn(&E) -> Result<Class>) -> Result<Vec<BallRow>> {
    let mut rows = Vec::new();
    let mut free = 0;
    let mut counted = 0;
    for n in 0..=ball.radius() {
        let upto = ball.sizes[n as usize];
        for (e, _) in &ball.elements[counted..upto] {
            if class(e)? == Class::Free {
                free += 1;
            }
        }
        counted = upto;
        let lam = |x: usize| (n > 0 && x > 0).then(|| (x as f64).ln() / n as f64);
        rows.push(BallRow {
            n,
            ball: upto,
            free,
            fixed: upto - free,
            free_fraction: free as f64 / upto as f64,
            lambda_g: lam(upto),
            lambda_free: lam(free),
        });
    }
    Ok(rows)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub model: Model,
    pub generators: Vec<String>,
    pub nmax: u32,
    pub rows: Vec<BallRow>,
    /// `|B(n+1)| ≤ 2|S|·|B(n)|` at every radius.
    pub ball_growth_bound: bool,
    /// Free fraction strictly decreasing from radius 3 on.
    pub free_fraction_decreasing: bool,
    /// Log-log slope of `|Free ∩ B(n)|` over the top half of radii.
    pub free_slope: Option<f64>,
    pub notes: Vec<String>,
}

pub fn growth_report<E: GroupElement>(
    s: &GeneratingSet<E>,
    nmax: u32,
    budget_ms: Option<u64>,
    class: impl Fn(&E) -> Result<Class>,
) -> Result<GrowthReport> {
    let ball = enumerate_ball(s, nmax, budget_ms)?;
    let rows = ball_rows(&ball, class)?;
    let bound = 2 * s.size()?;
    let ball_growth_bound = rows.windows(2).all(|w| w[1].ball <= bound * w[0].ball);
    let free_fraction_decreasing =
        rows.iter().skip(3).collect::<Vec<_>>().windows(2).all(|w| w[1].free_fraction < w[0].free_fraction);
    let top: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n >= nmax.div_ceil(2) && r.n > 0 && r.free > 0)
        .map(|r| (r.n as f64, r.free as f64))
        .collect();
    let free_slope = (top.len() >= 2).then(|| log_log_slope(&top));
    Ok(GrowthReport {
        model: s.model,
        generators: s.generators.iter().map(|(n, _)| n.clone()).collect(),
        nmax,
        rows,
        ball_growth_bound,
        free_fraction_decreasing,
        free_slope,
        notes: vec!["finite-radius trends only; no limit is certified".into()],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub nmax: u32,
    /// `R = |h|_S`, `K = |B(R)|`, `L = (2|S|)^R`.
    pub h_length: u32,
    pub k: usize,
    pub l: u64,
    pub checked: usize,
    /// Elements `g` with neither `g` nor `hg` free.
    pub failures: Vec<String>,
    /// `(n + R, fraction, 1/(LK))` rows.
    pub fraction_bounds: Vec<(u32, f64, f64)>,
    pub bound_holds: bool,
    /// `|λ̂(Free, n) − λ̂(G, n)|` over the top three radii.
    pub lambda_gaps: Vec<f64>,
    pub gap_decreasing: bool,
    pub rows: Vec<BallRow>,
}

impl GenericityReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.bound_holds
    }
}

/// Skew model: every `g ∈ B(nmax)` has `g` or `hg` free, and the free
/// fraction stays above `1/(LK)`.
pub fn genericity_report(
    s: &GeneratingSet<IntMap>,
    h: &IntMap,
    nmax: u32,
    budget_ms: Option<u64>,
) -> Result<GenericityReport> {
    let n = h.period() as i64;
    if h.offsets().iter().any(|&o| o < n + 1) {
        return Err(Error::Params(format!("h must move every index by at least N + 1 = {}", n + 1)));
    }
    // Word length of h, searched in growing balls.
    let mut h_length = None;
    let mut search = enumerate_ball(s, 0, None)?;
    for r in 0..=nmax.max(8) {
        search = enumerate_ball(s, r, budget_ms)?;
        if let Some(l) = search.word_length(h) {
            h_length = Some(l);
            break;
        }
    }
    let r = h_length.ok_or_else(|| Error::Params("h is not in the searched ball".into()))?;
    let k = search.sizes[r as usize];
    let l = (2 * s.size()? as u64).pow(r);
    let ball = enumerate_ball(s, nmax, budget_ms)?;
    let rows = ball_rows(&ball, |g| Ok(intmap_class(g)))?;
    let mut failures = Vec::new();
    for (g, _) in &ball.elements {
        if intmap_class(g) == Class::Fixed && intmap_class(&h.compose(g)) == Class::Fixed {
            failures.push(format!("{:?}", g.offsets()));
        }
    }
    let floor = 1.0 / (l as f64 * k as f64);
    let fraction_bounds: Vec<(u32, f64, f64)> =
        (0..=nmax.saturating_sub(r)).map(|m| (m + r, rows[(m + r) as usize].free_fraction, floor)).collect();
    let bound_holds = fraction_bounds.iter().all(|&(_, f, b)| f >= b);
    let lambda_gaps: Vec<f64> =
        rows.iter().rev().take(3).rev().filter_map(|row| Some((row.lambda_free? - row.lambda_g?).abs())).collect();
    let gap_decreasing = lambda_gaps.windows(2).all(|w| w[1] < w[0]);
    Ok(GenericityReport {
        nmax,
        h_length: r,
        k,
        l,
        checked: ball.elements.len(),
        failures,
        fraction_bounds,
        bound_holds,
        lambda_gaps,
        gap_decreasing,
        rows,
    })
}

/// `A`, `t₁`, `t₂` acting on the trivial plane.
pub fn trivial_affine_generators() -> GeneratingSet<AffineElement> {
    GeneratingSet {
        model: Model::TrivialAffine,
        generators: vec![
            ("A".into(), AffineElement::new(1, [0, 0])),
            ("t1".into(), AffineElement::new(0, [1, 0])),
            ("t2".into(), AffineElement::new(0, [0, 1])),
        ],
    }
}

/// Period-2 maps of the skew leaf line: the unit shift `s`, the residue swap
/// `t` and the map `u` moving even indices by 2 and fixing odd ones.
pub fn skew_generators() -> GeneratingSet<IntMap> {
    let m = |o: [i64; 2]| IntMap::new(o.to_vec()).expect("bijective offsets");
    GeneratingSet {
        model: Model::SkewIntmap,
        generators: vec![("s".into(), m([1, 1])), ("t".into(), m([1, -1])), ("u".into(), m([2, 0]))],
    }
}

/// The global shift by `N + 1` for the skew generators.
pub fn skew_h() -> IntMap {
    IntMap::new(vec![3, 3]).expect("shift")
}

pub fn rows_csv(rows: &[BallRow]) -> String {
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6}"));
    let mut out = String::from("n,ball,free,fixed,free_fraction,lambda_g,lambda_free\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{},{}\n",
            r.n,
            r.ball,
            r.free,
            r.fixed,
            r.free_fraction,
            opt(r.lambda_g),
            opt(r.lambda_free)
        ));
    }
    out
}
