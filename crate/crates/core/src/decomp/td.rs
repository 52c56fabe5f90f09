use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, VSet};
use crate::decomp::RootedTree;
use crate::graph::LabelledGraph;

/// A failed axiom together with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(axiom: &'static str, detail: impl Into<String>) -> Self {
        Violation {
            axiom,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.axiom, self.detail)
    }
}

impl std::error::Error for Violation {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: RootedTree,
    pub bags: Vec<VSet>,
}

#[derive(Serialize, Deserialize)]
struct TdJson {
    parent: Vec<Option<usize>>,
    bags: Vec<Vec<usize>>,
}

impl Serialize for TreeDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TdJson {
            parent: self.tree.parents().to_vec(),
            bags: self.bags.iter().map(|&b| bits::to_vec(b)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = TdJson::deserialize(d)?;
        let tree = RootedTree::from_parents(j.parent).map_err(serde::de::Error::custom)?;
        if j.bags.len() != tree.len() || j.bags.iter().flatten().any(|&v| v >= bits::MAX_BITS) {
            return Err(serde::de::Error::custom("bag list does not match the tree"));
        }
        Ok(TreeDecomposition {
            tree,
            bags: j.bags.into_iter().map(bits::from_iter).collect(),
        })
    }
}

impl TreeDecomposition {
    pub fn single_bag(bag: VSet) -> Self {
        TreeDecomposition {
            tree: RootedTree::single(),
            bags: vec![bag],
        }
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(|&b| bits::count(b)).max().unwrap_or(0)
    }

    /// Largest bag size minus one (`-1` when every bag is empty).
    pub fn width(&self) -> isize {
        self.max_bag() as isize - 1
    }

    /// `max_t |⋃_{s ⪯ t} β(s)|` for the stored root.
    pub fn depth(&self) -> usize {
        let mut acc = vec![0u64; self.tree.len()];
        let mut best = 0;
        for t in self.tree.preorder() {
            acc[t] = self.bags[t] | self.tree.parent(t).map_or(0, |p| acc[p]);
            best = best.max(bits::count(acc[t]));
        }
        best
    }

    /// Minimum depth over all choices of root.
    pub fn unrooted_depth(&self) -> usize {
        (0..self.tree.len())
            .map(|r| self.rerooted(r).depth())
            .min()
            .unwrap_or(0)
    }

    pub fn rerooted(&self, r: usize) -> Self {
        TreeDecomposition {
            tree: self.tree.rerooted(r),
            bags: self.bags.clone(),
        }
    }

    pub fn to_dot(&self) -> String {
        let caps: Vec<String> = self
            .bags
            .iter()
            .map(|&b| format!("{:?}", bits::to_vec(b)))
            .collect();
        crate::io::tree_to_dot(self.tree.parents(), &caps)
    }
}

pub fn td_width(td: &TreeDecomposition) -> isize {
    td.width()
}

pub fn td_depth(td: &TreeDecomposition) -> usize {
    td.depth()
}

/// Checks (TD.1) and (TD.2). Self-loops are covered by any bag containing
/// their vertex.
pub fn validate_td(g: &LabelledGraph, td: &TreeDecomposition) -> Result<(), Violation> {
    if td.bags.len() != td.tree.len() {
        return Err(Violation::new("shape", "bag count differs from node count"));
    }
    if g.n() > bits::MAX_BITS {
        return Err(Violation::new("shape", "graph exceeds 64 vertices"));
    }
    let all = bits::full(g.n());
    for (t, &b) in td.bags.iter().enumerate() {
        if b & !all != 0 {
            return Err(Violation::new(
                "shape",
                format!("bag of node {t} names a vertex outside the graph"),
            ));
        }
    }
    let covered = td.bags.iter().fold(0, |a, &b| a | b);
    if covered != all {
        let v = bits::first(all & !covered).unwrap();
        return Err(Violation::new("TD.1", format!("vertex {v} is in no bag")));
    }
    for &(u, v) in g.edges() {
        let e = bits::bit(u) | bits::bit(v);
        if !td.bags.iter().any(|&b| b & e == e) {
            return Err(Violation::new("TD.1", format!("edge {u}-{v} is in no bag")));
        }
    }
    for v in 0..g.n() {
        let holders: Vec<usize> = (0..td.tree.len())
            .filter(|&t| td.bags[t] & bits::bit(v) != 0)
            .collect();
        // Connected iff exactly one holder has its parent outside the holder set.
        let tops = holders
            .iter()
            .filter(|&&t| {
                td.tree
                    .parent(t)
                    .map_or(true, |p| td.bags[p] & bits::bit(v) == 0)
            })
            .count();
        if tops != 1 {
            return Err(Violation::new(
                "TD.2",
                format!("nodes holding vertex {v} are not connected"),
            ));
        }
    }
    Ok(())
}

/// Drops bag vertices one at a time while the result still validates.
pub fn tighten(g: &LabelledGraph, td: &TreeDecomposition) -> TreeDecomposition {
    let mut out = td.clone();
    loop {
        let mut changed = false;
        for t in 0..out.tree.len() {
            for v in bits::iter(out.bags[t]) {
                out.bags[t] &= !bits::bit(v);
                if validate_td(g, &out).is_ok() {
                    changed = true;
                } else {
                    out.bags[t] |= bits::bit(v);
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_one_bag() {
        let g = LabelledGraph::complete(4);
        let td = TreeDecomposition::single_bag(bits::full(4));
        assert!(validate_td(&g, &td).is_ok());
        assert_eq!((td.width(), td.depth()), (3, 4));
    }

    #[test]
    fn path_decomposition_depth() {
        let g = LabelledGraph::path(3);
        let td = TreeDecomposition {
            tree: RootedTree::from_parents(vec![None, Some(0)]).unwrap(),
            bags: vec![0b011, 0b110],
        };
        assert!(validate_td(&g, &td).is_ok());
        assert_eq!(td.depth(), 3);
        assert_eq!(td.unrooted_depth(), 3);
    }

    #[test]
    fn violations_are_named() {
        let g = LabelledGraph::path(3);
        let gap = TreeDecomposition {
            tree: RootedTree::from_parents(vec![None, Some(0), Some(1)]).unwrap(),
            bags: vec![0b011, 0b110, 0b101],
        };
        assert_eq!(validate_td(&g, &gap).unwrap_err().axiom, "TD.2");
        let missing = TreeDecomposition::single_bag(0b011);
        assert_eq!(validate_td(&g, &missing).unwrap_err().axiom, "TD.1");
    }

    #[test]
    fn tighten_drops_padding() {
        let g = LabelledGraph::complete(2)
            .disjoint_union(&LabelledGraph::empty(1))
            .unwrap();
        let td = TreeDecomposition {
            tree: RootedTree::from_parents(vec![None, Some(0)]).unwrap(),
            bags: vec![0b111, 0b100],
        };
        let t = tighten(&g, &td);
        assert_eq!(t.bags, vec![0b011, 0b100]);
    }
}
