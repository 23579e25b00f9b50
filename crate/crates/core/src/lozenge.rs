//! Lozenges and chains of lozenges read from perfect fits.
//!
//! A lozenge is a quadruple `(l₁⁺, l₂⁺, l₁⁻, l₂⁻)` where `l₁⁺, l₁⁻` and
//! `l₂⁺, l₂⁻` are perfect fits (shared boundary endpoint) while `l₁⁺` meets
//! `l₂⁻` and `l₂⁺` meets `l₁⁻`. Those two crossings are its corners. A chain
//! is a class of lozenges under "shares a corner".

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::pattern::{LeafId, Pattern, PointKind, Sign};

/// A corner is the crossing of a plus leaf with a minus leaf.
pub type Corner = (LeafId, LeafId);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Lozenge {
    /// Perfect-fit sides `[(l₁⁺, l₁⁻), (l₂⁺, l₂⁻)]`, the lower plus leaf first.
    pub sides: [(LeafId, LeafId); 2],
    /// `(l₁⁺, l₂⁻)` and `(l₂⁺, l₁⁻)`.
    pub corners: [Corner; 2],
}

/// A singularity whose quadrants a chain spreads over beyond three
/// adjacent ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadrantViolation {
    pub chain: usize,
    pub singularity: usize,
    pub quadrants: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LozengeReport {
    pub lozenges: Vec<Lozenge>,
    /// Indices into `lozenges`, one entry per maximal chain.
    pub chains: Vec<Vec<usize>>,
    /// For every marked point: is it a corner of some lozenge.
    pub corner_points: Vec<bool>,
    pub quadrant_violations: Vec<QuadrantViolation>,
}

impl LozengeReport {
    pub fn corner_count(&self) -> usize {
        self.corner_points.iter().filter(|&&c| c).count()
    }

    /// Every chain sits in at most three adjacent quadrants of each
    /// singularity that is not one of its corners.
    pub fn quadrant_claim_holds(&self) -> bool {
        self.quadrant_violations.is_empty()
    }

    pub fn to_json(&self, p: &Pattern) -> serde_json::Value {
        let id = |l: LeafId| p.leaf_id(l).to_string();
        let corner = |(a, b): Corner| format!("{}/{}", id(a), id(b));
        serde_json::json!({
            "lozenges": self.lozenges.iter().map(|z| serde_json::json!({
                "sides": z.sides.iter().map(|&(a, b)| [id(a), id(b)]).collect::<Vec<_>>(),
                "corners": z.corners.iter().map(|&c| corner(c)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "chains": self.chains,
            "corner_points": p.points().iter().zip(&self.corner_points)
                .filter(|(_, &c)| c).map(|(pt, _)| pt.id.clone()).collect::<Vec<_>>(),
            "quadrant_claim": self.quadrant_claim_holds(),
            "quadrant_violations": self.quadrant_violations,
        })
    }
}

pub fn detect_lozenges(p: &Pattern) -> LozengeReport {
    let plus = p.leaves_of(Sign::Plus);
    let minus = p.leaves_of(Sign::Minus);
    let fits: Vec<(LeafId, LeafId)> = plus
        .iter()
        .flat_map(|&a| minus.iter().map(move |&b| (a, b)))
        .filter(|&(a, b)| !p.intersects(a, b) && p.shares_endpoint(a, b))
        .collect();
    let mut lozenges = BTreeSet::new();
    for (i, &(p1, m1)) in fits.iter().enumerate() {
        for &(p2, m2) in &fits[i + 1..] {
            if p1 == p2 || m1 == m2 || !p.intersects(p1, m2) || !p.intersects(p2, m1) {
                continue;
            }
            let (s1, s2) = if p1 < p2 { ((p1, m1), (p2, m2)) } else { ((p2, m2), (p1, m1)) };
            lozenges.insert(Lozenge { sides: [s1, s2], corners: [(s1.0, s2.1), (s2.0, s1.1)] });
        }
    }
    let lozenges: Vec<Lozenge> = lozenges.into_iter().collect();

    // Union lozenges sharing a corner.
    let mut parent: Vec<usize> = (0..lozenges.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    let mut by_corner: BTreeMap<Corner, usize> = BTreeMap::new();
    for (i, z) in lozenges.iter().enumerate() {
        for c in z.corners {
            if let Some(&j) = by_corner.get(&c) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            } else {
                by_corner.insert(c, i);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..lozenges.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let chains: Vec<Vec<usize>> = groups.into_values().collect();

    let corner_points = p
        .points()
        .iter()
        .map(|pt| matches!(pt.kind, PointKind::Crossing(a, b) if by_corner.contains_key(&(a, b))))
        .collect();

    let mut quadrant_violations = Vec::new();
    for s in 0..p.singularity_count() {
        let Ok(q) = p.faces_and_quadrants(s) else { continue };
        let (sp, sm) = p.singularity(s).expect("singularity index in range");
        let k = q.arcs.len();
        for (ci, chain) in chains.iter().enumerate() {
            if chain.iter().any(|&z| lozenges[z].corners.contains(&(sp, sm))) {
                continue;
            }
            let met: BTreeSet<usize> = chain
                .iter()
                .flat_map(|&z| lozenges[z].sides.iter().flat_map(|&(a, b)| [a, b]))
                .flat_map(|l| q.incidence[l].iter().copied())
                .collect();
            let fits_in_three =
                met.len() <= 3 && (0..k).any(|start| met.iter().all(|&x| (x + k - start) % k < 3.min(k)));
            if !fits_in_three {
                quadrant_violations.push(QuadrantViolation {
                    chain: ci,
                    singularity: s,
                    quadrants: met.into_iter().collect(),
                });
            }
        }
    }

    LozengeReport { lozenges, chains, corner_points, quadrant_violations }
}
