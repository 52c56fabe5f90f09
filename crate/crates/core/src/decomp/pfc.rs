use serde::{Deserialize, Serialize};

use crate::bits;
use crate::decomp::{make_nice, RootedTree, TreeDecomposition, Violation};
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

/// A `k`-pebble forest cover: a rooted forest on `V(G)` and pebbles `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PebbleForestCover {
    pub parent: Vec<Option<usize>>,
    pub pebble: Vec<usize>,
}

impl PebbleForestCover {
    fn is_below(&self, a: usize, b: usize) -> bool {
        // a ⪯ b
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    /// Vertices of the chain from a forest root down to `v`.
    fn chain(&self, v: usize) -> Vec<usize> {
        let mut c = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            c.push(p);
            cur = p;
            if c.len() > self.parent.len() {
                break;
            }
        }
        c.reverse();
        c
    }

    pub fn depth(&self) -> usize {
        (0..self.parent.len())
            .map(|v| self.chain(v).len())
            .max()
            .unwrap_or(0)
    }

    pub fn pebbles_used(&self) -> usize {
        self.pebble.iter().copied().max().unwrap_or(0)
    }
}

pub fn pfc_depth(pfc: &PebbleForestCover) -> usize {
    pfc.depth()
}

pub fn validate_pfc(
    g: &LabelledGraph,
    pfc: &PebbleForestCover,
) -> std::result::Result<(), Violation> {
    let n = g.n();
    if pfc.parent.len() != n || pfc.pebble.len() != n {
        return Err(Violation::new("shape", "cover does not list every vertex"));
    }
    for v in 0..n {
        if pfc.pebble[v] == 0 {
            return Err(Violation::new("shape", format!("vertex {v} has pebble 0")));
        }
        if let Some(p) = pfc.parent[v] {
            if p >= n {
                return Err(Violation::new(
                    "shape",
                    format!("vertex {v} has unknown parent {p}"),
                ));
            }
        }
        if pfc.chain(v).len() > n {
            return Err(Violation::new("shape", "parent relation has a cycle"));
        }
    }
    for &(a, b) in g.edges() {
        if a == b {
            continue;
        }
        let (u, v) = if pfc.is_below(a, b) {
            (a, b)
        } else if pfc.is_below(b, a) {
            (b, a)
        } else {
            return Err(Violation::new(
                "FC.1",
                format!("endpoints of {a}-{b} are incomparable"),
            ));
        };
        let mut w = v;
        while w != u {
            if pfc.pebble[w] == pfc.pebble[u] {
                return Err(Violation::new(
                    "FC.2",
                    format!("edge {u}-{v}: vertex {w} reuses pebble {}", pfc.pebble[u]),
                ));
            }
            w = pfc.parent[w].unwrap();
        }
    }
    Ok(())
}

/// Cover from a rooted tree-decomposition. The decomposition is made nice
/// first so that the topmost-node map is injective.
pub fn td_to_pfc(g: &LabelledGraph, td: &TreeDecomposition) -> Result<PebbleForestCover> {
    crate::decomp::validate_td(g, td).map_err(|v| Error::Invalid(v.to_string()))?;
    let nice = make_nice(td);
    let n = g.n();
    let mut tau = vec![usize::MAX; n];
    let order = nice.tree.preorder();
    for &t in &order {
        for v in bits::iter(nice.bags[t]) {
            if tau[v] == usize::MAX {
                tau[v] = t;
            }
        }
    }
    let mut owner = vec![None; nice.tree.len()];
    for v in 0..n {
        owner[tau[v]] = Some(v);
    }
    let mut parent = vec![None; n];
    for v in 0..n {
        let mut cur = nice.tree.parent(tau[v]);
        while let Some(t) = cur {
            if let Some(u) = owner[t] {
                parent[v] = Some(u);
                break;
            }
            cur = nice.tree.parent(t);
        }
    }
    let mut pebble = vec![0; n];
    for &t in &order {
        if let Some(v) = owner[t] {
            let used: Vec<usize> = bits::iter(nice.bags[t] & !bits::bit(v))
                .map(|u| pebble[u])
                .collect();
            pebble[v] = (1..).find(|p| !used.contains(p)).unwrap();
        }
    }
    Ok(PebbleForestCover { parent, pebble })
}

/// Decomposition with one node per vertex plus an empty root; the bag of `t`
/// holds the ancestors of `t` whose pebble has not been reused on the way down.
pub fn pfc_to_td(g: &LabelledGraph, pfc: &PebbleForestCover) -> Result<TreeDecomposition> {
    validate_pfc(g, pfc).map_err(|v| Error::Invalid(v.to_string()))?;
    let n = g.n();
    let mut parent = vec![None];
    let mut bags = vec![0u64];
    for v in 0..n {
        parent.push(Some(pfc.parent[v].map_or(0, |p| p + 1)));
        let chain = pfc.chain(v);
        let mut bag = 0;
        for (i, &u) in chain.iter().enumerate() {
            if chain[i + 1..]
                .iter()
                .all(|&w| pfc.pebble[w] != pfc.pebble[u])
            {
                bag |= bits::bit(u);
            }
        }
        bags.push(bag);
    }
    Ok(TreeDecomposition {
        tree: RootedTree::from_parents(parent)?,
        bags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate_td;

    fn chain_cover(n: usize) -> PebbleForestCover {
        PebbleForestCover {
            parent: (0..n).map(|v| v.checked_sub(1)).collect(),
            pebble: (0..n).map(|v| 1 + v % 2).collect(),
        }
    }

    #[test]
    fn alternating_chain_on_path() {
        let g = LabelledGraph::path(6);
        let pfc = chain_cover(6);
        assert!(validate_pfc(&g, &pfc).is_ok());
        assert_eq!(pfc.depth(), 6);
        let td = pfc_to_td(&g, &pfc).unwrap();
        assert!(validate_td(&g, &td).is_ok());
        assert_eq!(td.max_bag(), 2);
        assert_eq!(td.depth(), 6);
    }

    #[test]
    fn pebble_clash_is_reported() {
        let g = LabelledGraph::path(3);
        let bad = PebbleForestCover {
            parent: vec![None, Some(0), Some(1)],
            pebble: vec![1, 1, 2],
        };
        assert_eq!(validate_pfc(&g, &bad).unwrap_err().axiom, "FC.2");
        let flat = PebbleForestCover {
            parent: vec![None, None, None],
            pebble: vec![1, 1, 1],
        };
        assert_eq!(validate_pfc(&g, &flat).unwrap_err().axiom, "FC.1");
    }

    #[test]
    fn empty_and_single() {
        let e = LabelledGraph::empty(0);
        let pfc = PebbleForestCover {
            parent: vec![],
            pebble: vec![],
        };
        assert_eq!(pfc.depth(), 0);
        assert!(validate_pfc(&e, &pfc).is_ok());
        let k1 = LabelledGraph::empty(1);
        let td = TreeDecomposition::single_bag(1);
        let c = td_to_pfc(&k1, &td).unwrap();
        assert_eq!(
            c,
            PebbleForestCover {
                parent: vec![None],
                pebble: vec![1]
            }
        );
    }

    #[test]
    fn td_round_trip_keeps_bounds() {
        let g = LabelledGraph::grid(2, 4);
        let td = TreeDecomposition {
            tree: RootedTree::from_parents(vec![None, Some(0), Some(0)]).unwrap(),
            bags: vec![0b0110_0110, 0b0011_0011, 0b1100_1100],
        };
        assert!(validate_td(&g, &td).is_ok());
        let pfc = td_to_pfc(&g, &td).unwrap();
        assert!(validate_pfc(&g, &pfc).is_ok());
        assert!(pfc.pebbles_used() <= td.max_bag());
        assert!(pfc.depth() <= td.depth());
    }
}
