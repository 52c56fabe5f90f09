use serde::{Deserialize, Serialize};

use crate::bits::{self, VSet};
use crate::decomp::{make_nice, nice_kind, NiceKind, RootedTree, TreeDecomposition, Violation};
use crate::error::{Error, Result};
use crate::graph::{product_with_maps, LabelledGraph};

/// A construction tree. `to_parent[t]` sends each vertex of `graphs[t]` to
/// its image in the parent's graph (the product may glue child vertices
/// together, so the map need not be injective).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTree {
    pub tree: RootedTree,
    pub graphs: Vec<LabelledGraph>,
    pub to_parent: Vec<Option<Vec<usize>>>,
}

impl ConstructionTree {
    pub fn leaf(g: LabelledGraph) -> Self {
        ConstructionTree {
            tree: RootedTree::single(),
            graphs: vec![g],
            to_parent: vec![None],
        }
    }

    pub fn root_graph(&self) -> &LabelledGraph {
        &self.graphs[self.tree.root()]
    }

    pub fn is_elimination(&self, t: usize) -> bool {
        self.tree.children(t).len() == 1
    }

    /// Largest label index in use.
    pub fn label_bound(&self) -> usize {
        self.graphs
            .iter()
            .filter_map(|g| g.labels().keys().next_back().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn elimination_depth(&self) -> usize {
        let mut d = vec![0usize; self.tree.len()];
        let mut best = 0;
        for t in self.tree.preorder() {
            let up = self.tree.parent(t).map_or(0, |p| d[p]);
            d[t] = up + usize::from(self.is_elimination(t));
            best = best.max(d[t]);
        }
        best
    }

    /// Map from the vertices of node `t`'s graph into the root graph.
    pub fn to_root(&self, t: usize) -> Vec<usize> {
        let mut map: Vec<usize> = (0..self.graphs[t].n()).collect();
        let mut cur = t;
        while let Some(p) = self.tree.parent(cur) {
            let step = self.to_parent[cur]
                .as_ref()
                .expect("non-root nodes carry a parent map");
            for x in &mut map {
                *x = step[*x];
            }
            cur = p;
        }
        map
    }

    /// True when every elimination removes a label whose vertex has another
    /// labelled neighbour.
    pub fn is_guarded(&self) -> bool {
        (0..self.tree.len())
            .filter(|&t| self.is_elimination(t))
            .all(|t| {
                let c = self.tree.children(t)[0];
                let cg = &self.graphs[c];
                match removed_label(cg, &self.graphs[t]) {
                    Some(l) => {
                        let v = cg.label(l).unwrap();
                        cg.neighbours(v)
                            .iter()
                            .any(|&w| !cg.labels_of(w).is_empty())
                    }
                    None => false,
                }
            })
    }

    /// Construction tree of the product of the two root graphs: a new
    /// product node above both trees.
    pub fn product(&self, other: &Self) -> Self {
        let (g, fm, gm) = product_with_maps(self.root_graph(), other.root_graph());
        let off = 1 + self.tree.len();
        let mut parent = vec![None];
        let mut graphs = vec![g];
        let mut to_parent = vec![None];
        for (shift, ct, top) in [(1, self, fm), (off, other, gm)] {
            for t in 0..ct.tree.len() {
                match ct.tree.parent(t) {
                    Some(p) => {
                        parent.push(Some(p + shift));
                        to_parent.push(ct.to_parent[t].clone());
                    }
                    None => {
                        parent.push(Some(0));
                        to_parent.push(Some(top.clone()));
                    }
                }
                graphs.push(ct.graphs[t].clone());
            }
        }
        ConstructionTree {
            tree: RootedTree::from_parents(parent).expect("two trees under a new root"),
            graphs,
            to_parent,
        }
    }

    /// Adds an elimination node removing label `l` above the root.
    pub fn eliminate(&self, l: usize) -> Result<Self> {
        let top = self.root_graph();
        if top.label(l).is_none() {
            return Err(Error::Precondition(format!(
                "label {l} is not set at the root"
            )));
        }
        let mut parent = vec![None];
        parent.extend(
            self.tree
                .parents()
                .iter()
                .map(|p| Some(p.map_or(0, |p| p + 1))),
        );
        let mut graphs = vec![top.remove_label(l)?];
        graphs.extend(self.graphs.iter().cloned());
        let mut to_parent = vec![None];
        for (t, m) in self.to_parent.iter().enumerate() {
            to_parent.push(if t == self.tree.root() {
                Some((0..top.n()).collect())
            } else {
                m.clone()
            });
        }
        Ok(ConstructionTree {
            tree: RootedTree::from_parents(parent)?,
            graphs,
            to_parent,
        })
    }

    pub fn to_dot(&self) -> String {
        let caps: Vec<String> = self
            .graphs
            .iter()
            .map(|g| {
                format!(
                    "n={} m={} labels={:?}",
                    g.n(),
                    g.m(),
                    g.labels().iter().collect::<Vec<_>>()
                )
            })
            .collect();
        crate::io::tree_to_dot(self.tree.parents(), &caps)
    }
}

fn removed_label(child: &LabelledGraph, parent: &LabelledGraph) -> Option<usize> {
    let gone: Vec<usize> = child
        .labels()
        .keys()
        .filter(|l| parent.label(**l).is_none())
        .copied()
        .collect();
    (gone.len() == 1).then(|| gone[0])
}

pub fn elimination_depth(ct: &ConstructionTree) -> usize {
    ct.elimination_depth()
}

/// Checks the four construction-tree axioms. When `target` is given the
/// root graph must equal it.
pub fn validate_ct(
    ct: &ConstructionTree,
    target: Option<&LabelledGraph>,
) -> std::result::Result<(), Violation> {
    let n = ct.tree.len();
    if ct.graphs.len() != n || ct.to_parent.len() != n {
        return Err(Violation::new(
            "shape",
            "per-node data does not match the tree",
        ));
    }
    if let Some(g) = target {
        if ct.root_graph() != g {
            return Err(Violation::new("CT.1", "root graph differs from the target"));
        }
    }
    for t in 0..n {
        let g = &ct.graphs[t];
        if g.has_loops() {
            return Err(Violation::new(
                "shape",
                format!("node {t} carries a self-loop"),
            ));
        }
        match (t == ct.tree.root(), &ct.to_parent[t]) {
            (false, Some(m))
                if m.len() == g.n()
                    && m.iter()
                        .all(|&x| x < ct.graphs[ct.tree.parent(t).unwrap()].n()) => {}
            (true, None) => {}
            _ => {
                return Err(Violation::new(
                    "shape",
                    format!("node {t} has a malformed parent map"),
                ))
            }
        }
        let ch = ct.tree.children(t);
        match ch.len() {
            0 => {
                if !g.is_fully_labelled() {
                    return Err(Violation::new(
                        "CT.2",
                        format!("leaf {t} is not fully labelled"),
                    ));
                }
            }
            1 => check_elimination(ct, t, ch[0])?,
            _ => check_product(ct, t)?,
        }
    }
    Ok(())
}

fn check_elimination(
    ct: &ConstructionTree,
    t: usize,
    c: usize,
) -> std::result::Result<(), Violation> {
    let (pg, cg) = (&ct.graphs[t], &ct.graphs[c]);
    let map = ct.to_parent[c].as_ref().unwrap();
    let bad = |why: &str| Err(Violation::new("CT.3", format!("node {t}: {why}")));
    let Some(l) = removed_label(cg, pg) else {
        return bad("child does not lose exactly one label");
    };
    if pg.n() != cg.n() || pg.m() != cg.m() {
        return bad("sizes change");
    }
    let mut seen = vec![false; pg.n()];
    for &x in map {
        if std::mem::replace(&mut seen[x], true) {
            return bad("vertex map is not a bijection");
        }
    }
    if !cg.edges().iter().all(|&(u, v)| pg.has_edge(map[u], map[v])) {
        return bad("edges differ");
    }
    let expect: Vec<(usize, usize)> = cg
        .labels()
        .iter()
        .filter(|(&k, _)| k != l)
        .map(|(&k, &v)| (k, map[v]))
        .collect();
    if pg.labels().iter().map(|(&k, &v)| (k, v)).ne(expect) {
        return bad("labels differ");
    }
    Ok(())
}

fn check_product(ct: &ConstructionTree, t: usize) -> std::result::Result<(), Violation> {
    let ch = ct.tree.children(t);
    let bad = |why: &str| Err(Violation::new("CT.4", format!("node {t}: {why}")));
    let mut prod = ct.graphs[ch[0]].clone();
    let mut maps: Vec<Vec<usize>> = vec![(0..prod.n()).collect()];
    for &c in &ch[1..] {
        let (p, fm, gm) = product_with_maps(&prod, &ct.graphs[c]);
        for m in &mut maps {
            for x in m.iter_mut() {
                *x = fm[*x];
            }
        }
        maps.push(gm);
        prod = p;
    }
    if prod.has_loops() {
        return bad("product creates a self-loop");
    }
    let pg = &ct.graphs[t];
    if prod.n() != pg.n() {
        return bad("vertex count differs from the product");
    }
    let mut phi = vec![usize::MAX; prod.n()];
    for (i, &c) in ch.iter().enumerate() {
        let tp = ct.to_parent[c].as_ref().unwrap();
        for (y, &x) in maps[i].iter().enumerate() {
            if phi[x] == usize::MAX {
                phi[x] = tp[y];
            } else if phi[x] != tp[y] {
                return bad("parent maps disagree with the product gluing");
            }
        }
    }
    if !crate::iso::is_isomorphism(&prod, pg, &phi) {
        return bad("graph is not the product of its children");
    }
    Ok(())
}

/// Reads a tree-decomposition off a construction tree: bags are the labelled
/// vertices, mapped into the root graph.
pub fn ct_to_td(ct: &ConstructionTree) -> Result<TreeDecomposition> {
    validate_ct(ct, None).map_err(|v| Error::Invalid(v.to_string()))?;
    if ct.root_graph().n() > bits::MAX_BITS {
        return Err(Error::CapExceeded {
            size: ct.root_graph().n(),
            cap: bits::MAX_BITS,
        });
    }
    let bags = (0..ct.tree.len())
        .map(|t| {
            let m = ct.to_root(t);
            bits::from_iter(ct.graphs[t].labelled_vertices().into_iter().map(|v| m[v]))
        })
        .collect();
    Ok(TreeDecomposition {
        tree: ct.tree.clone(),
        bags,
    })
}

/// Builds a `k`-construction tree of elimination depth at most `q` from a
/// rooted tree-decomposition of width at most `k - 1` and depth at most `q`.
pub fn td_to_ct(
    g: &LabelledGraph,
    td: &TreeDecomposition,
    k: usize,
    q: usize,
) -> Result<ConstructionTree> {
    crate::decomp::validate_td(g, td).map_err(|v| Error::Invalid(v.to_string()))?;
    if td.max_bag() > k {
        return Err(Error::Precondition(format!(
            "width {} exceeds {}",
            td.width(),
            k as isize - 1
        )));
    }
    if td.depth() > q {
        return Err(Error::Precondition(format!(
            "depth {} exceeds {q}",
            td.depth()
        )));
    }
    if g.has_loops() {
        return Err(Error::Precondition(
            "construction trees build loopless graphs".into(),
        ));
    }
    let g = g.without_labels();
    let nice = make_nice(td);
    let order = nice.tree.preorder();

    let mut colour = vec![0usize; g.n()];
    for &t in &order {
        if let Some(NiceKind::Forget(v)) = nice_kind(&nice, t) {
            let used: Vec<usize> = bits::iter(nice.bags[t]).map(|u| colour[u]).collect();
            colour[v] = (1..).find(|c| !used.contains(c)).unwrap();
        }
    }

    // Vertices in the subtree of each nice node.
    let mut below = nice.bags.clone();
    for &t in order.iter().rev() {
        if let Some(p) = nice.tree.parent(t) {
            below[p] |= below[t];
        }
    }

    let labelled = |set: VSet, bag: VSet| -> (LabelledGraph, Vec<usize>) {
        let vs = bits::to_vec(set);
        let mut h = g.induced(&vs);
        for (i, &v) in vs.iter().enumerate() {
            if bag & bits::bit(v) != 0 {
                h = h.set_label(colour[v], i).unwrap();
            }
        }
        (h, vs)
    };

    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut graphs = Vec::new();
    let mut verts: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![(nice.tree.root(), None::<usize>)];
    while let Some((t, up)) = stack.pop() {
        let ch = nice.tree.children(t);
        // An introduce node sitting on an empty leaf collapses into a leaf.
        let leafy = ch.len() == 1 && nice.tree.children(ch[0]).is_empty() && nice.bags[ch[0]] == 0;
        let (h, vs) = labelled(below[t], nice.bags[t]);
        let id = graphs.len();
        parent.push(up);
        graphs.push(h);
        verts.push(vs);
        if leafy || ch.is_empty() {
            continue;
        }
        if let Some(NiceKind::Introduce(_)) = nice_kind(&nice, t) {
            let (h, vs) = labelled(nice.bags[t], nice.bags[t]);
            parent.push(Some(id));
            graphs.push(h);
            verts.push(vs);
        }
        for &c in ch.iter().rev() {
            stack.push((c, Some(id)));
        }
    }
    let to_parent = (0..graphs.len())
        .map(|s| {
            parent[s].map(|p| {
                verts[s]
                    .iter()
                    .map(|v| verts[p].binary_search(v).unwrap())
                    .collect()
            })
        })
        .collect();
    let ct = ConstructionTree {
        tree: RootedTree::from_parents(parent)?,
        graphs,
        to_parent,
    };
    debug_assert!(validate_ct(&ct, Some(&g)).is_ok());
    Ok(ct)
}
