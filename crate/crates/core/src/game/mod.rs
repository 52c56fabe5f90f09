//! Cops-and-Robber games with a bounded number of cops and rounds.
//!
//! Positions are pairs `(X, C)` of a cop set and the robber's escape space.
//! In the edge game on `G°` escape spaces are edge sets, but each non-caught
//! escape space is the set of edges touching one component of `G - X`, so
//! both games are solved on vertex components.

mod grid;
mod solver;
mod strategy;

pub use grid::{grid_cop_strategy, grid_lower_bound, grid_upper_bound};
pub use solver::{solve, solve_on, Outcome, RobberCertificate, Solver};
pub use strategy::{
    cop_strategy_from_pfc, verify_strategy, CopStrategy, LosingLine, StrategyEntry, VerifyError,
};

use serde::{Deserialize, Serialize};

use crate::bits::{self, ESet, VSet};
use crate::graph::LabelledGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "CR")]
    Cr,
    #[serde(rename = "monCR")]
    MonCr,
    #[serde(rename = "eCR")]
    ECr,
    #[serde(rename = "moneCR")]
    MonECr,
}

impl Variant {
    pub fn monotone(self) -> bool {
        matches!(self, Variant::MonCr | Variant::MonECr)
    }

    pub fn edge(self) -> bool {
        matches!(self, Variant::ECr | Variant::MonECr)
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "CR" | "cr" => Ok(Variant::Cr),
            "monCR" | "moncr" => Ok(Variant::MonCr),
            "eCR" | "ecr" => Ok(Variant::ECr),
            "moneCR" | "monecr" => Ok(Variant::MonECr),
            _ => Err(format!("unknown variant {s:?}")),
        }
    }
}

/// Whether the game is played on `G` or on `G°`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Board {
    Plain,
    Looped,
}

/// `escape(X, v)`.
pub fn escape(g: &LabelledGraph, x: VSet, v: usize) -> VSet {
    if x & bits::bit(v) != 0 {
        return bits::bit(v);
    }
    let adj = g.adjacency();
    bits::reach(&adj, bits::full(g.n()) & !x, bits::bit(v))
}

/// Edges of `g` (as indices into `g.edges()`) with an endpoint in `c`.
pub fn edges_touching(g: &LabelledGraph, c: VSet) -> ESet {
    let mut out = 0;
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if c & (bits::bit(u) | bits::bit(v)) != 0 {
            out |= bits::ebit(i);
        }
    }
    out
}

/// `escapeE(X, e)` where `e` indexes `g.edges()`.
pub fn escape_e(g: &LabelledGraph, x: VSet, e: usize) -> ESet {
    let (u, v) = g.edges()[e];
    let ends = bits::bit(u) | bits::bit(v);
    if ends & !x == 0 {
        return bits::ebit(e);
    }
    let adj = g.adjacency();
    let c = bits::reach(&adj, bits::full(g.n()) & !x, ends & !x);
    edges_touching(g, c)
}
