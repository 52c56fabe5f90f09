//! Tree-decompositions of bounded width and depth, Cops-and-Robber games and counting
//! logic on small graphs.
//!
//! The class `T^k_q` consists of graphs with a tree-decomposition of width
//! at most `k - 1` and depth at most `q`. This crate decides membership,
//! converts between the equivalent witnesses, monotonises cop strategies via
//! exact pre-tree-decompositions, and relates the class to homomorphism
//! counts and the counting logic `C^k_q`.

pub mod bits;
pub mod cfi;
pub mod decomp;
pub mod enumerate;
pub mod equiv;
pub mod error;
pub mod game;
pub mod graph;
pub mod hom;
pub mod io;
pub mod iso;
pub mod logic;
pub mod membership;
pub mod pretree;
pub mod quantum;

pub use error::{Error, Result};
pub use graph::LabelledGraph;
