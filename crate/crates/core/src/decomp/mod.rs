//! Tree-decompositions, pebble forest covers and construction trees, with
//! validators and conversions between them.

mod ct;
mod nice;
pub mod oracle;
mod pfc;
mod td;
mod tree;

pub use ct::{ct_to_td, elimination_depth, td_to_ct, validate_ct, ConstructionTree};
pub use nice::{is_nice, make_nice, nice_kind, NiceKind};
pub use pfc::{pfc_depth, pfc_to_td, td_to_pfc, validate_pfc, PebbleForestCover};
pub use td::{td_depth, td_width, tighten, validate_td, TreeDecomposition, Violation};
pub use tree::RootedTree;
