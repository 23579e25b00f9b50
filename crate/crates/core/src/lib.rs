//! Combinatorial models of bifoliated planes: finite chord-diagram patterns,
//! periodic planes with exact automorphisms, leaf graphs and their
//! quasi-tree certification, wall metrics, isometry classification and
//! word-ball censuses.

pub mod census;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod graphs;
pub mod io;
pub mod layout;
pub mod lozenge;
pub mod pattern;
pub mod periodic;
pub mod random;
pub mod walls;

pub use error::{Error, Result};
pub use pattern::{
    validate_pattern, BlockMode, FinitePattern, Leaf, LeafId, Locator, MarkedPoint, Pattern, PointId, PointKind,
    PseudoInterval, Side, Sign, Singularity, ValidationReport, Violation,
};
