use std::collections::HashSet;

use super::ptd::{EdgeIndex, PreTreeDecomposition};
use crate::bits::{self, ESet, VSet};
use crate::decomp::RootedTree;
use crate::error::{Error, Result};
use crate::game::CopStrategy;
use crate::graph::LabelledGraph;

/// Strategy tree together with the nodes at which Cop placed a new cop
/// inside the robber's escape space.
#[derive(Clone, Debug)]
pub struct StrategyTree {
    pub ptd: PreTreeDecomposition,
    pub branching: Vec<bool>,
}

struct Builder<'a> {
    adj: Vec<VSet>,
    all: VSet,
    ix: &'a EdgeIndex,
    sigma: &'a CopStrategy,
    ptd: PreTreeDecomposition,
    branching: Vec<bool>,
    path: HashSet<(VSet, VSet)>,
}

impl Builder<'_> {
    fn node(&mut self, p: usize, down: ESet, bag: VSet) -> usize {
        let t = self.ptd.tree.add_child(p);
        self.ptd.bags.push(bag);
        self.ptd.down.push(down);
        self.ptd.up.push(self.ix.all & !down);
        self.branching.push(false);
        t
    }

    /// Expands node `t`, reached with cops on `x` and the robber in `c`.
    fn expand(&mut self, t: usize, x: VSet, c: VSet) -> Result<()> {
        if !self.path.insert((x, c)) {
            return Err(Error::Invalid(format!(
                "strategy does not win: position ({:?}, {:?}) repeats",
                bits::to_vec(x),
                bits::to_vec(c)
            )));
        }
        let next = self.sigma.next(x, c).ok_or_else(|| {
            Error::Invalid(format!(
                "strategy has no move for ({:?}, {:?})",
                bits::to_vec(x),
                bits::to_vec(c)
            ))
        })?;
        self.ptd.bags[t] = next;
        let d = bits::reach(&self.adj, self.all & !(x & next), c);
        self.branching[t] = next & !x & d != 0;

        let mut kids: Vec<(ESet, Option<VSet>)> = Vec::new();
        for sub in bits::components(&self.adj, d & !next) {
            kids.push((self.ix.touching(sub), Some(sub)));
        }
        for e in bits::eiter(self.ix.touching(d)) {
            let (u, v) = self.ix.edges[e];
            if next & bits::bit(u) != 0 && next & bits::bit(v) != 0 {
                kids.push((bits::ebit(e), None));
            }
        }
        kids.sort_by_key(|k| k.0.trailing_zeros());
        let mut covered = 0;
        for (cone, sub) in kids {
            covered |= cone;
            match sub {
                Some(sub) => {
                    let s = self.node(t, cone, 0);
                    self.expand(s, next, sub)?;
                }
                None => {
                    self.node(t, cone, self.ix.ends(cone));
                }
            }
        }
        self.ptd.up[t] = self.ix.all & !covered;
        self.path.remove(&(x, c));
        Ok(())
    }
}

/// Strategy tree of `sigma` on `g`, which must carry a loop at every vertex.
pub fn strategy_tree(g: &LabelledGraph, sigma: &CopStrategy) -> Result<StrategyTree> {
    if (0..g.n()).any(|v| !g.has_loop(v)) {
        return Err(Error::Precondition(
            "strategy trees are built on a graph with a loop at every vertex".into(),
        ));
    }
    let ix = EdgeIndex::new(g)?;
    let adj = g.adjacency();
    let all = bits::full(g.n());
    let mut b = Builder {
        adj,
        all,
        ix: &ix,
        sigma,
        ptd: PreTreeDecomposition {
            tree: RootedTree::single(),
            bags: vec![0],
            down: vec![0],
            up: vec![0],
        },
        branching: vec![false],
        path: HashSet::new(),
    };
    let mut comps: Vec<VSet> = bits::components(&b.adj, all);
    comps.sort_by_key(|&c| ix.touching(c).trailing_zeros());
    for c in comps {
        let t = b.node(0, ix.touching(c), 0);
        b.expand(t, 0, c)?;
    }
    Ok(StrategyTree {
        ptd: b.ptd,
        branching: b.branching,
    })
}
