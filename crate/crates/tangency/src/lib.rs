//! Tangencies among pairwise 1-intersecting x-monotone polylines, with exact
//! rational predicates, a structural verifier, generators and a brute-force oracle.

pub mod curve;
pub mod gen;
pub mod geom;
pub mod graph;
pub mod io;
pub mod order;
pub mod scan;
pub mod search;
pub mod svg;
pub mod verify;

pub use curve::{validate_family, Curve, Family, ValidFamily, ValidationReport};
pub use geom::{Point, Q};
pub use verify::{analyze, Report};
