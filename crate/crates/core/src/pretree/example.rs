//! The worked example: a `2 × 5` grid with its middle rung contracted, and a
//! five-cop strategy that wins the edge game on it in nine rounds but is
//! not monotone.
//!
//! Vertex ids follow [`LabelledGraph::contract_edge`] on the grid:
//! `0..=4` are `(1,1), (1,2), 3, (1,4), (1,5)` and `5..=8` are
//! `(2,1), (2,2), (2,4), (2,5)`.

use crate::bits::{self, VSet};
use crate::game::{CopStrategy, StrategyEntry, Variant};
use crate::graph::{grid_vertex, LabelledGraph};

pub fn contracted_grid() -> LabelledGraph {
    LabelledGraph::grid(2, 5)
        .contract_edge(grid_vertex(5, 1, 3), grid_vertex(5, 2, 3))
        .expect("rung exists")
}

/// Vertex names in the order of the ids.
pub const NAMES: [&str; 9] = [
    "(1,1)", "(1,2)", "3", "(1,4)", "(1,5)", "(2,1)", "(2,2)", "(2,4)", "(2,5)",
];

pub fn example_strategy() -> CopStrategy {
    let [a, b, m, c, d, aa, bb, cc, dd] = [0usize, 1, 2, 3, 4, 5, 6, 7, 8];
    let s = |vs: &[usize]| -> VSet { bits::from_iter(vs.iter().copied()) };
    let all = bits::full(9);
    let rules: Vec<(VSet, VSet, VSet)> = vec![
        (0, all, s(&[b])),
        (s(&[b]), all & !s(&[b]), s(&[b, c])),
        (s(&[b, c]), all & !s(&[b, c]), s(&[b, bb, c])),
        (s(&[b, bb, c]), s(&[a, aa]), s(&[b, bb, c, cc])),
        (s(&[b, bb, c]), s(&[m, cc, d, dd]), s(&[b, bb, c, cc])),
        // the robber on the left: a wasted cop, then a sweep back
        (s(&[b, bb, c, cc]), s(&[a, aa]), s(&[c, cc, a])),
        (s(&[c, cc, a]), s(&[aa, b, bb, m]), s(&[c, cc, a, aa])),
        (s(&[c, cc, a, aa]), s(&[b, bb, m]), s(&[a, aa, c, cc, m])),
        (s(&[a, aa, c, cc, m]), s(&[b, bb]), s(&[a, aa, b, c, m])),
        (s(&[a, aa, b, c, m]), s(&[bb]), s(&[a, aa, b, bb, m])),
        // the robber on the contracted vertex
        (s(&[b, bb, c, cc]), s(&[m]), s(&[b, bb, m])),
        (s(&[b, bb, m]), s(&[c, cc, d, dd]), s(&[c, m])),
        (s(&[c, m]), s(&[cc, d, dd]), s(&[c, cc, m])),
        (s(&[c, cc, m]), s(&[d, dd]), s(&[c, cc, d])),
        (s(&[c, cc, d]), s(&[dd]), s(&[cc, d, dd])),
        // the robber on the right: the mirror image of the left
        (s(&[b, bb, c, cc]), s(&[d, dd]), s(&[b, bb, d])),
        (s(&[b, bb, d]), s(&[dd, c, cc, m]), s(&[b, bb, d, dd])),
        (s(&[b, bb, d, dd]), s(&[c, cc, m]), s(&[b, bb, d, dd, m])),
        (s(&[b, bb, d, dd, m]), s(&[c, cc]), s(&[d, dd, c, b, m])),
        (s(&[d, dd, c, b, m]), s(&[cc]), s(&[d, dd, c, cc, m])),
    ];
    let entries = rules
        .into_iter()
        .map(|(cops, region, next)| StrategyEntry { cops, region, next })
        .collect();
    CopStrategy::new(Variant::ECr, 5, entries)
}
