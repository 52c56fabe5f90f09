//! Exhaustive search for tree-decompositions of bounded width and depth,
//! used as an independent cross-check of the game solver.
//!
//! For a component `C` of `G - S` with `S = N(C)`, let `f(C)` be the least
//! number of levels needed below it: pick `w ∈ C`, open a node with bag
//! `N(C) ∪ {w}` and recurse into the components of `C - w`. Every path from
//! the root then gathers exactly the chosen `w`s, so `f ≤ q` everywhere means
//! depth at most `q`.

use std::collections::HashMap;

use crate::bits::{self, VSet};
use crate::decomp::{RootedTree, TreeDecomposition};
use crate::error::{check_cap, Result};
use crate::graph::LabelledGraph;

const INF: usize = usize::MAX;

struct Search<'a> {
    adj: &'a [VSet],
    k: usize,
    memo: HashMap<VSet, (usize, usize)>,
}

impl Search<'_> {
    /// `(f(C), best w)`.
    fn f(&mut self, c: VSet) -> (usize, usize) {
        if let Some(&r) = self.memo.get(&c) {
            return r;
        }
        let sep = bits::neighbourhood(self.adj, c);
        let mut best = (INF, usize::MAX);
        if bits::count(sep) < self.k {
            for w in bits::iter(c) {
                let mut worst = 0;
                for sub in bits::components(self.adj, c & !bits::bit(w)) {
                    worst = worst.max(self.f(sub).0);
                    if worst >= best.0 {
                        break;
                    }
                }
                let val = worst.saturating_add(1);
                if val < best.0 {
                    best = (val, w);
                }
            }
        }
        self.memo.insert(c, best);
        best
    }

    fn build(
        &mut self,
        c: VSet,
        parent: usize,
        tree: &mut Vec<Option<usize>>,
        bags: &mut Vec<VSet>,
    ) {
        let (_, w) = self.f(c);
        let node = tree.len();
        tree.push(Some(parent));
        bags.push(bits::neighbourhood(self.adj, c) | bits::bit(w));
        for sub in bits::components(self.adj, c & !bits::bit(w)) {
            self.build(sub, node, tree, bags);
        }
    }
}

/// A rooted tree-decomposition of width at most `k - 1` and depth at most
/// `q`, if one exists. The root bag is empty.
pub fn td_exists(g: &LabelledGraph, k: usize, q: usize) -> Result<Option<TreeDecomposition>> {
    check_cap(g.n(), bits::MAX_BITS)?;
    let adj = g.adjacency();
    let mut s = Search {
        adj: &adj,
        k,
        memo: HashMap::new(),
    };
    let comps = bits::components(&adj, bits::full(g.n()));
    if comps.iter().any(|&c| s.f(c).0 > q) {
        return Ok(None);
    }
    let mut tree = vec![None];
    let mut bags = vec![0];
    for c in comps {
        s.build(c, 0, &mut tree, &mut bags);
    }
    Ok(Some(TreeDecomposition {
        tree: RootedTree::from_parents(tree)?,
        bags,
    }))
}

/// Least `q` with a decomposition of width at most `k - 1`, if any.
pub fn min_depth(g: &LabelledGraph, k: usize) -> Result<Option<usize>> {
    check_cap(g.n(), bits::MAX_BITS)?;
    let adj = g.adjacency();
    let mut s = Search {
        adj: &adj,
        k,
        memo: HashMap::new(),
    };
    let mut best = 0;
    for c in bits::components(&adj, bits::full(g.n())) {
        let v = s.f(c).0;
        if v == INF {
            return Ok(None);
        }
        best = best.max(v);
    }
    Ok(Some(best))
}

/// Treedepth.
pub fn treedepth(g: &LabelledGraph) -> Result<usize> {
    Ok(min_depth(g, g.n().max(1))?.unwrap_or(0))
}

/// Treewidth (`-1` for the graph without vertices).
pub fn treewidth(g: &LabelledGraph) -> Result<isize> {
    for k in 0..=g.n() {
        if min_depth(g, k)?.is_some() {
            return Ok(k as isize - 1);
        }
    }
    unreachable!("k = n always succeeds")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate_td;

    #[test]
    fn path_thresholds() {
        for l in 2..=9 {
            let p = LabelledGraph::path(l);
            let thr = (l - 1).div_ceil(2);
            assert!(td_exists(&p, 2, thr).unwrap().is_none(), "P_{l} q={thr}");
            let td = td_exists(&p, 2, thr + 1).unwrap().unwrap();
            assert!(validate_td(&p, &td).is_ok());
            assert!(td.max_bag() <= 2 && td.depth() <= thr + 1);
        }
    }

    #[test]
    fn classic_parameters() {
        assert_eq!(treedepth(&LabelledGraph::path(7)).unwrap(), 3);
        assert_eq!(treewidth(&LabelledGraph::cycle(5)).unwrap(), 2);
        assert_eq!(treewidth(&LabelledGraph::grid(3, 3)).unwrap(), 3);
        assert_eq!(treedepth(&LabelledGraph::complete(4)).unwrap(), 4);
        assert_eq!(treewidth(&LabelledGraph::empty(0)).unwrap(), -1);
    }

    #[test]
    fn edgeless_needs_one_pebble() {
        let g = LabelledGraph::empty(3);
        assert!(td_exists(&g, 1, 1).unwrap().is_some());
        assert!(td_exists(&LabelledGraph::path(2), 1, 5).unwrap().is_none());
    }
}
