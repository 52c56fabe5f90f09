//! Pre-tree-decompositions, strategy trees of edge-game strategies on
//! `G°`, and the exactification that turns a strategy tree into a
//! tree-decomposition.

mod convert;
mod exactify;
pub mod example;
mod ptd;
mod strategy_tree;

pub use crate::decomp::tighten;
pub use convert::{cop_win_to_td, drop_empty_bags, exact_ptd_to_td, td_to_exact_ptd};
pub use exactify::{audit_jsonl, exactify, exactify_with_audit, select_extensions, AuditStep};
pub use ptd::{
    f_extension, is_exact, is_ordered_partition, partition_width, ptd_depth, ptd_width,
    validate_ptd, EdgeIndex, PreTreeDecomposition,
};
pub use strategy_tree::{strategy_tree, StrategyTree};
