use serde::{Deserialize, Serialize};

use crate::bits::{self, ESet, VSet};
use crate::decomp::{RootedTree, Violation};
use crate::error::{check_cap, Result};
use crate::graph::LabelledGraph;

/// Edge indexing of a graph: `g.edges()[i]` is edge `i`.
#[derive(Clone, Debug)]
pub struct EdgeIndex {
    pub edges: Vec<(usize, usize)>,
    /// Incident edges of each vertex.
    pub inc: Vec<ESet>,
    pub all: ESet,
}

impl EdgeIndex {
    pub fn new(g: &LabelledGraph) -> Result<Self> {
        check_cap(g.m(), bits::MAX_EDGES)?;
        let mut inc = vec![0; g.n()];
        for (i, &(u, v)) in g.edges().iter().enumerate() {
            inc[u] |= bits::ebit(i);
            inc[v] |= bits::ebit(i);
        }
        Ok(EdgeIndex {
            edges: g.edges().to_vec(),
            inc,
            all: bits::efull(g.m()),
        })
    }

    /// `Δ(X)`: vertices with edges both in `x` and outside it.
    pub fn boundary(&self, x: ESet) -> VSet {
        let mut out = 0;
        for (v, &e) in self.inc.iter().enumerate() {
            if e & x != 0 && e & !x & self.all != 0 {
                out |= bits::bit(v);
            }
        }
        out
    }

    /// `Δ(π)` for a partition given by its parts.
    pub fn partition_boundary(&self, parts: &[ESet]) -> VSet {
        parts.iter().fold(0, |acc, &p| acc | self.boundary(p))
    }

    /// Vertices touched by the edges of `x`.
    pub fn ends(&self, x: ESet) -> VSet {
        bits::eiter(x).fold(0, |acc, i| {
            acc | bits::bit(self.edges[i].0) | bits::bit(self.edges[i].1)
        })
    }

    /// Edges with an endpoint in `c`.
    pub fn touching(&self, c: VSet) -> ESet {
        bits::iter(c).fold(0, |acc, v| acc | self.inc[v])
    }

    pub fn edge_of(&self, u: usize, v: usize) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.iter().position(|&x| x == e)
    }
}

/// `wid(π) = |Δ(π)|`.
pub fn partition_width(ix: &EdgeIndex, parts: &[ESet]) -> usize {
    bits::count(ix.partition_boundary(parts))
}

/// `π_{X → F}`: adds `f` to part `i` and removes it from all other parts.
pub fn f_extension(parts: &[ESet], i: usize, f: ESet) -> Vec<ESet> {
    parts
        .iter()
        .enumerate()
        .map(|(j, &p)| if j == i { p | f } else { p & !f })
        .collect()
}

/// Whether `parts` are pairwise disjoint and cover `all`.
pub fn is_ordered_partition(parts: &[ESet], all: ESet) -> bool {
    let mut seen: ESet = 0;
    for &p in parts {
        if p & seen != 0 || p & !all != 0 {
            return false;
        }
        seen |= p;
    }
    seen == all
}

/// Rooted pre-tree-decomposition. For a non-root node `t` with parent `p`,
/// `down[t] = γ(p, t)` and `up[t] = γ(t, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreTreeDecomposition {
    pub tree: RootedTree,
    pub bags: Vec<VSet>,
    pub down: Vec<ESet>,
    pub up: Vec<ESet>,
}

impl PreTreeDecomposition {
    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    /// `π_t`: cone to the parent first (if any), then cones to the children.
    /// For a leaf it is the cone to the parent and its complement.
    pub fn partition(&self, ix: &EdgeIndex, t: usize) -> Vec<ESet> {
        if self.tree.is_leaf(t) {
            return vec![self.up[t], ix.all & !self.up[t]];
        }
        let mut parts = Vec::with_capacity(self.tree.children(t).len() + 1);
        if self.tree.parent(t).is_some() {
            parts.push(self.up[t]);
        }
        parts.extend(self.tree.children(t).iter().map(|&c| self.down[c]));
        parts
    }

    pub fn boundary_at(&self, ix: &EdgeIndex, t: usize) -> VSet {
        ix.partition_boundary(&self.partition(ix, t))
    }

    /// `max |β(t)| - 1`.
    pub fn width(&self) -> isize {
        self.bags.iter().map(|&b| bits::count(b)).max().unwrap_or(0) as isize - 1
    }

    /// `max_t Σ_{r ≺ s ⪯ t} |β(s) \ β(p_s)|`.
    pub fn depth(&self) -> usize {
        let mut acc = vec![0usize; self.len()];
        let mut best = 0;
        for t in self.tree.preorder() {
            if let Some(p) = self.tree.parent(t) {
                acc[t] = acc[p] + bits::count(self.bags[t] & !self.bags[p]);
                best = best.max(acc[t]);
            }
        }
        best
    }

    /// Copy with `β(t) = Δ(π_t)` everywhere.
    pub fn with_boundary_bags(&self, ix: &EdgeIndex) -> Self {
        let mut out = self.clone();
        for t in 0..self.len() {
            out.bags[t] = self.boundary_at(ix, t);
        }
        out
    }

    /// Whether `γ(p,t) ∪ γ(t,p) = E` for the edge from `t` to its parent.
    pub fn is_exact_edge(&self, ix: &EdgeIndex, t: usize) -> bool {
        self.tree.parent(t).is_none() || (self.down[t] | self.up[t]) == ix.all
    }

    /// Tree edges (named by their lower node) that are not exact.
    pub fn inexact_edges(&self, ix: &EdgeIndex) -> Vec<usize> {
        (0..self.len())
            .filter(|&t| !self.is_exact_edge(ix, t))
            .collect()
    }

    pub fn is_exact(&self, ix: &EdgeIndex) -> bool {
        (0..self.len())
            .all(|t| self.is_exact_edge(ix, t) && self.bags[t] == self.boundary_at(ix, t))
    }

    pub fn to_json(&self, ix: &EdgeIndex) -> serde_json::Value {
        let set =
            |x: ESet| -> Vec<(usize, usize)> { bits::eiter(x).map(|i| ix.edges[i]).collect() };
        let cones: Vec<serde_json::Value> = (0..self.len())
            .filter_map(|t| {
                let p = self.tree.parent(t)?;
                Some(serde_json::json!({ "from": p, "to": t, "down": set(self.down[t]), "up": set(self.up[t]) }))
            })
            .collect();
        serde_json::json!({
            "parent": self.tree.parents(),
            "bags": self.bags.iter().map(|&b| bits::to_vec(b)).collect::<Vec<_>>(),
            "cones": cones,
        })
    }

    pub fn from_json(ix: &EdgeIndex, v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize, Serialize)]
        struct Cone {
            from: usize,
            to: usize,
            down: Vec<(usize, usize)>,
            up: Vec<(usize, usize)>,
        }
        #[derive(Deserialize)]
        struct Doc {
            parent: Vec<Option<usize>>,
            bags: Vec<Vec<usize>>,
            cones: Vec<Cone>,
        }
        let bad = |m: &str| crate::Error::Invalid(m.to_string());
        let doc: Doc = serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?;
        let tree = RootedTree::from_parents(doc.parent)?;
        if doc.bags.len() != tree.len() {
            return Err(bad("bag list does not match the tree"));
        }
        let n = ix.inc.len();
        if doc.bags.iter().flatten().any(|&v| v >= n) {
            return Err(bad("bag names an unknown vertex"));
        }
        let mut down = vec![0; tree.len()];
        let mut up = vec![0; tree.len()];
        let to_set = |list: &[(usize, usize)]| -> Result<ESet> {
            list.iter().try_fold(0, |acc, &(a, b)| {
                ix.edge_of(a, b)
                    .map(|i| acc | bits::ebit(i))
                    .ok_or_else(|| bad("cone names an unknown edge"))
            })
        };
        for c in &doc.cones {
            if c.to >= tree.len() || tree.parent(c.to) != Some(c.from) {
                return Err(bad("cone on a non-edge"));
            }
            down[c.to] = to_set(&c.down)?;
            up[c.to] = to_set(&c.up)?;
        }
        Ok(PreTreeDecomposition {
            tree,
            bags: doc.bags.into_iter().map(bits::from_iter).collect(),
            down,
            up,
        })
    }

    pub fn to_dot(&self, ix: &EdgeIndex) -> String {
        let caps: Vec<String> = (0..self.len())
            .map(|t| {
                let mark = if self.is_exact_edge(ix, t) { "" } else { " *" };
                format!("{:?}{mark}", bits::to_vec(self.bags[t]))
            })
            .collect();
        crate::io::tree_to_dot(self.tree.parents(), &caps)
    }
}

pub fn ptd_width(ptd: &PreTreeDecomposition) -> isize {
    ptd.width()
}

pub fn ptd_depth(ptd: &PreTreeDecomposition) -> usize {
    ptd.depth()
}

pub fn is_exact(g: &LabelledGraph, ptd: &PreTreeDecomposition) -> Result<bool> {
    Ok(ptd.is_exact(&EdgeIndex::new(g)?))
}

/// Checks PD.1 to PD.4 against `g` (usually a graph with all loops).
pub fn validate_ptd(
    g: &LabelledGraph,
    ptd: &PreTreeDecomposition,
) -> std::result::Result<(), Violation> {
    let ix = EdgeIndex::new(g).map_err(|e| Violation::new("size", e.to_string()))?;
    let n = ptd.len();
    if ptd.bags.len() != n || ptd.down.len() != n || ptd.up.len() != n {
        return Err(Violation::new(
            "shape",
            "bag or cone list does not match the tree",
        ));
    }
    if ptd.bags.iter().any(|&b| b & !bits::full(g.n()) != 0) {
        return Err(Violation::new("shape", "bag names an unknown vertex"));
    }
    let r = ptd.tree.root();
    if ptd.bags[r] != 0 {
        return Err(Violation::new("PD.1", "root bag is not empty"));
    }
    let adj = g.adjacency();
    for c in bits::components(&adj, bits::full(g.n())) {
        let ec = ix.touching(c);
        if !ptd.tree.children(r).iter().any(|&t| ptd.down[t] == ec) {
            return Err(Violation::new(
                "PD.1",
                format!("no root child for the component {:?}", bits::to_vec(c)),
            ));
        }
    }
    for t in 0..n {
        if ptd.tree.is_leaf(t) && bits::ecount(ptd.down[t]) > 1 {
            return Err(Violation::new(
                "PD.2",
                format!("leaf {t} has a cone of {} edges", bits::ecount(ptd.down[t])),
            ));
        }
    }
    for t in 0..n {
        let parts = ptd.partition(&ix, t);
        if !is_ordered_partition(&parts, ix.all) {
            return Err(Violation::new(
                "PD.3",
                format!("cones at node {t} do not partition the edges"),
            ));
        }
        let d = ix.partition_boundary(&parts);
        if d & !ptd.bags[t] != 0 {
            return Err(Violation::new(
                "PD.3",
                format!(
                    "boundary {:?} at node {t} is not inside the bag",
                    bits::to_vec(d & !ptd.bags[t])
                ),
            ));
        }
    }
    for t in 0..n {
        if ptd.tree.parent(t).is_some() && ptd.down[t] & ptd.up[t] != 0 {
            return Err(Violation::new(
                "PD.4",
                format!("cones on the edge above node {t} overlap"),
            ));
        }
    }
    Ok(())
}
