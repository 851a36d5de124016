//! Crossingless matchings, planar unlinks and the arc category built from them.

pub mod category;
pub mod hom;
pub mod matching;
pub mod nesting;
pub mod tqft;
pub mod unlink;

pub use category::{build_arc_category, check_structural_properties, ArcCategory, StructuralReport};
pub use hom::{generators, hom_space, ArcGenerator, Label};
pub use matching::{catalan, enumerate_matchings, Matching};
pub use nesting::{has_nesting, nesting_depths, remove_nesting, FlatPair, Slide};
pub use tqft::multiply;
pub use unlink::{unlink, Component, UnlinkDiagram};
