//! Building patterns from geometric sketches.
//!
//! Fixtures are easiest to describe as chords in a rectangle (or on a
//! circle). A [`Spot`] is a boundary position given by edge and coordinate;
//! [`Builder`] collects leaves by their spots, sorts all spots into the
//! counterclockwise boundary order and names them. Spots with equal keys
//! become one shared label, which is how perfect fits are drawn.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::pattern::{FinitePattern, Leaf, Locator, MarkedPoint, Pattern, Sign, Singularity};

const SCALE: f64 = 1e6;

/// Edge of the rectangle, in counterclockwise order starting at the bottom.
/// `Circle` places a spot by angle on a round boundary; mixing it with the
/// rectangle edges is allowed but rarely useful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Bottom,
    Right,
    Top,
    Left,
    Circle,
}

/// A boundary position. `tie` orders spots with equal coordinates from left
/// to right (bottom to top on the vertical edges).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spot {
    pub edge: Edge,
    pub at: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub tie: i64,
}

fn is_zero(t: &i64) -> bool {
    *t == 0
}

pub fn b(at: f64) -> Spot {
    Spot { edge: Edge::Bottom, at, tie: 0 }
}

pub fn t(at: f64) -> Spot {
    Spot { edge: Edge::Top, at, tie: 0 }
}

pub fn left(at: f64) -> Spot {
    Spot { edge: Edge::Left, at, tie: 0 }
}

pub fn right(at: f64) -> Spot {
    Spot { edge: Edge::Right, at, tie: 0 }
}

pub fn deg(at: f64) -> Spot {
    Spot { edge: Edge::Circle, at, tie: 0 }
}

impl Spot {
    pub fn tie(mut self, tie: i64) -> Spot {
        self.tie = tie;
        self
    }

    pub fn shifted(mut self, dx: f64) -> Spot {
        if matches!(self.edge, Edge::Bottom | Edge::Top) {
            self.at += dx;
        }
        self
    }

    /// Sort key realizing the counterclockwise order.
    pub fn key(&self) -> (u8, i64, i64) {
        let c = (self.at * SCALE).round() as i64;
        match self.edge {
            Edge::Bottom => (0, c, self.tie),
            Edge::Right => (1, c, self.tie),
            Edge::Top => (2, -c, -self.tie),
            Edge::Left => (3, -c, -self.tie),
            Edge::Circle => (4, c, self.tie),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Builder {
    leaves: Vec<(String, Sign, Vec<Spot>)>,
    singularities: Vec<Singularity>,
    nonseparated: Vec<[String; 2]>,
    points: Vec<MarkedPoint>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder::default()
    }

    pub fn leaf(&mut self, id: impl Into<String>, sign: Sign, spots: &[Spot]) -> &mut Self {
        self.leaves.push((id.into(), sign, spots.to_vec()));
        self
    }

    pub fn plus(&mut self, id: impl Into<String>, a: Spot, z: Spot) -> &mut Self {
        self.leaf(id, Sign::Plus, &[a, z])
    }

    pub fn minus(&mut self, id: impl Into<String>, a: Spot, z: Spot) -> &mut Self {
        self.leaf(id, Sign::Minus, &[a, z])
    }

    pub fn singularity(&mut self, plus: &str, minus: &str) -> &mut Self {
        self.singularities.push(Singularity { plus: plus.into(), minus: minus.into() });
        self
    }

    pub fn nonseparated(&mut self, a: &str, z: &str) -> &mut Self {
        self.nonseparated.push([a.into(), z.into()]);
        self
    }

    pub fn crossing_point(&mut self, id: impl Into<String>, plus: &str, minus: &str) -> &mut Self {
        self.points.push(MarkedPoint { id: id.into(), locator: Locator::Crossing([plus.into(), minus.into()]) });
        self
    }

    pub fn has_leaf(&self, id: &str) -> bool {
        self.leaves.iter().any(|l| l.0 == id)
    }

    /// Boundary labels `q0, q1, …` in ccw order; endpoints of each leaf listed
    /// in that order.
    pub fn build(&self) -> FinitePattern {
        let mut keys: BTreeMap<(u8, i64, i64), usize> = BTreeMap::new();
        for (_, _, spots) in &self.leaves {
            for s in spots {
                keys.insert(s.key(), 0);
            }
        }
        let width = keys.len().saturating_sub(1).to_string().len();
        for (i, v) in keys.values_mut().enumerate() {
            *v = i;
        }
        let name = |i: usize| format!("q{i:0width$}");
        let leaves = self
            .leaves
            .iter()
            .map(|(id, sign, spots)| {
                let mut pos: Vec<usize> = spots.iter().map(|s| keys[&s.key()]).collect();
                pos.sort();
                pos.dedup();
                Leaf { id: id.clone(), sign: *sign, endpoints: pos.into_iter().map(name).collect() }
            })
            .collect();
        FinitePattern {
            boundary: (0..keys.len()).map(name).collect(),
            leaves,
            singularities: self.singularities.clone(),
            nonseparated: self.nonseparated.clone(),
            points: self.points.clone(),
        }
    }
}

/// Adds a crossing point `plus/minus` for every crossing of the pattern.
pub fn with_all_crossings(mut fp: FinitePattern) -> FinitePattern {
    let pat = Pattern::new(FinitePattern { points: Vec::new(), ..fp.clone() }).expect("pattern must be valid");
    fp.points = pat.crossings().into_iter().map(|(p, m)| crossing_point(pat.leaf_id(p), pat.leaf_id(m))).collect();
    fp
}

pub fn crossing_point(plus: &str, minus: &str) -> MarkedPoint {
    MarkedPoint { id: format!("{plus}/{minus}"), locator: Locator::Crossing([plus.into(), minus.into()]) }
}
