//! Finite labelled graphs.
//!
//! Vertices are `0..n`. Edges are unordered pairs stored as `(min, max)` in
//! sorted order, so two graphs are equal exactly when they are structurally
//! identical. A label map sends label indices `1..` to vertices; one vertex
//! may carry several labels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{self, VSet};
use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Label = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabelledGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    labels: BTreeMap<Label, Vertex>,
    loops: bool,
}

fn canon(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl LabelledGraph {
    /// Edgeless, unlabelled graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        LabelledGraph {
            n,
            edges: Vec::new(),
            labels: BTreeMap::new(),
            loops: false,
        }
    }

    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Self::empty(n);
        if edges.iter().any(|&(u, v)| u == v) {
            g.loops = true;
        }
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Like [`from_edges`](Self::from_edges) but the loops flag is set even
    /// when no loop is present.
    pub fn from_edges_looped(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut g = Self::empty(n);
        g.loops = true;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Self::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).unwrap()
    }

    /// The `h × l` grid. Vertex `(i, j)` (1-based) is [`grid_vertex`]`(l, i, j)`.
    pub fn grid(h: usize, l: usize) -> Self {
        let mut edges = Vec::new();
        for i in 1..=h {
            for j in 1..=l {
                if j < l {
                    edges.push((grid_vertex(l, i, j), grid_vertex(l, i, j + 1)));
                }
                if i < h {
                    edges.push((grid_vertex(l, i, j), grid_vertex(l, i + 1, j)));
                }
            }
        }
        Self::from_edges(h * l, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn labels(&self) -> &BTreeMap<Label, Vertex> {
        &self.labels
    }

    pub fn loops_allowed(&self) -> bool {
        self.loops
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.binary_search(&canon(u, v)).is_ok()
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::UnknownVertex(w));
            }
        }
        if u == v && !self.loops {
            return Err(Error::LoopNotAllowed(u));
        }
        let e = canon(u, v);
        if let Err(pos) = self.edges.binary_search(&e) {
            self.edges.insert(pos, e);
        }
        Ok(())
    }

    /// Adds a fresh isolated vertex and returns it.
    pub fn add_vertex(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v && b != v {
                out.push(b);
            } else if b == v && a != v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    /// Degree ignoring loops.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a != b && (a == v || b == v))
            .count()
    }

    pub fn has_loop(&self, v: Vertex) -> bool {
        self.has_edge(v, v)
    }

    /// Indices (into [`edges`](Self::edges)) of the edges incident to `v`, in order.
    pub fn incident_edges(&self, v: Vertex) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].0 == v || self.edges[i].1 == v)
            .collect()
    }

    /// Adjacency bitsets (loops excluded). Needs at most 64 vertices.
    pub fn adjacency(&self) -> Vec<VSet> {
        assert!(
            self.n <= bits::MAX_BITS,
            "adjacency bitsets need at most 64 vertices"
        );
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            if u != v {
                adj[u] |= bits::bit(v);
                adj[v] |= bits::bit(u);
            }
        }
        adj
    }

    pub fn label(&self, l: Label) -> Option<Vertex> {
        self.labels.get(&l).copied()
    }

    pub fn labels_of(&self, v: Vertex) -> Vec<Label> {
        self.labels
            .iter()
            .filter(|&(_, &w)| w == v)
            .map(|(&l, _)| l)
            .collect()
    }

    pub fn labelled_vertices(&self) -> Vec<Vertex> {
        let mut vs: Vec<_> = self.labels.values().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn is_fully_labelled(&self) -> bool {
        self.labelled_vertices().len() == self.n
    }

    /// `G(l → v)`.
    pub fn set_label(&self, l: Label, v: Vertex) -> Result<Self> {
        if l == 0 {
            return Err(Error::LabelOutOfRange(l));
        }
        if v >= self.n {
            return Err(Error::UnknownVertex(v));
        }
        let mut g = self.clone();
        g.labels.insert(l, v);
        Ok(g)
    }

    pub fn remove_label(&self, l: Label) -> Result<Self> {
        if l == 0 {
            return Err(Error::LabelOutOfRange(l));
        }
        let mut g = self.clone();
        g.labels.remove(&l);
        Ok(g)
    }

    pub fn without_labels(&self) -> Self {
        let mut g = self.clone();
        g.labels.clear();
        g
    }

    /// `G°`: every vertex gains a self-loop.
    pub fn with_loops(&self) -> Result<Self> {
        if self.has_loops() {
            return Err(Error::AlreadyLooped);
        }
        let mut g = self.clone();
        g.loops = true;
        for v in 0..self.n {
            g.add_edge(v, v)?;
        }
        Ok(g)
    }

    /// Removes every self-loop and clears the loops flag.
    pub fn without_loops(&self) -> Self {
        let mut g = self.clone();
        g.edges.retain(|&(u, v)| u != v);
        g.loops = false;
        g
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn permute(&self, perm: &[Vertex]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| canon(perm[u], perm[v]))
            .collect();
        edges.sort_unstable();
        let labels = self.labels.iter().map(|(&l, &v)| (l, perm[v])).collect();
        LabelledGraph {
            n: self.n,
            edges,
            labels,
            loops: self.loops,
        }
    }

    /// Induced subgraph on `vs` (in the given order); labels on removed
    /// vertices are dropped.
    pub fn induced(&self, vs: &[Vertex]) -> Self {
        let mut idx = vec![usize::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            idx[v] = i;
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| idx[u] != usize::MAX && idx[v] != usize::MAX)
            .map(|&(u, v)| canon(idx[u], idx[v]))
            .collect();
        edges.sort_unstable();
        let labels = self
            .labels
            .iter()
            .filter(|&(_, &v)| idx[v] != usize::MAX)
            .map(|(&l, &v)| (l, idx[v]))
            .collect();
        LabelledGraph {
            n: vs.len(),
            edges,
            labels,
            loops: self.loops,
        }
    }

    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for v in 0..self.n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Disjoint union; labels of `other` must not clash with labels of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let mut g = self.clone();
        g.n += other.n;
        g.loops |= other.loops;
        for &(u, v) in &other.edges {
            g.edges.push((u + self.n, v + self.n));
        }
        g.edges.sort_unstable();
        for (&l, &v) in &other.labels {
            if g.labels.insert(l, v + self.n).is_some() {
                return Err(Error::Invalid(format!("label {l} used by both operands")));
            }
        }
        Ok(g)
    }

    pub fn delete_vertex(&self, v: Vertex) -> Result<Self> {
        if v >= self.n {
            return Err(Error::UnknownVertex(v));
        }
        let keep: Vec<_> = (0..self.n).filter(|&w| w != v).collect();
        Ok(self.induced(&keep))
    }

    pub fn delete_edge(&self, u: Vertex, v: Vertex) -> Result<Self> {
        let e = canon(u, v);
        let pos = self
            .edges
            .binary_search(&e)
            .map_err(|_| Error::MissingEdge(u, v))?;
        let mut g = self.clone();
        g.edges.remove(pos);
        Ok(g)
    }

    /// Contracts the edge `uv`: `v` is merged into `u`, labels are united and
    /// parallel edges suppressed. The merged vertex keeps a loop only if one
    /// of the endpoints had one.
    pub fn contract_edge(&self, u: Vertex, v: Vertex) -> Result<Self> {
        if u == v || !self.has_edge(u, v) {
            return Err(Error::MissingEdge(u, v));
        }
        let (keep, gone) = canon(u, v);
        let map: Vec<Vertex> = (0..self.n)
            .map(|w| match w.cmp(&gone) {
                std::cmp::Ordering::Less => w,
                std::cmp::Ordering::Equal => keep,
                std::cmp::Ordering::Greater => w - 1,
            })
            .collect();
        let mut g = LabelledGraph::empty(self.n - 1);
        g.loops = self.loops;
        for &(a, b) in &self.edges {
            if canon(a, b) == (keep, gone) {
                continue;
            }
            let (x, y) = (map[a], map[b]);
            if x == y && a != b {
                continue;
            }
            g.add_edge(x, y)?;
        }
        for (&l, &w) in &self.labels {
            g.labels.insert(l, map[w]);
        }
        Ok(g)
    }
}

/// Vertex id of the 1-based grid cell `(i, j)` in a grid with `l` columns.
pub fn grid_vertex(l: usize, i: usize, j: usize) -> Vertex {
    (i - 1) * l + (j - 1)
}

/// The `⊙` product: disjoint union with equally labelled vertices
/// identified. Returns the product together with the maps sending the
/// vertices of `f` and `g` into it.
pub fn product_with_maps(
    f: &LabelledGraph,
    g: &LabelledGraph,
) -> (LabelledGraph, Vec<Vertex>, Vec<Vertex>) {
    let total = f.n + g.n;
    let mut uf = UnionFind::new(total);
    for (&l, &v) in &f.labels {
        if let Some(&w) = g.labels.get(&l) {
            uf.union(v, f.n + w);
        }
    }
    let mut class = vec![usize::MAX; total];
    let mut next = 0;
    let mut id = vec![0; total];
    for x in 0..total {
        let r = uf.find(x);
        if class[r] == usize::MAX {
            class[r] = next;
            next += 1;
        }
        id[x] = class[r];
    }
    let mut out = LabelledGraph::empty(next);
    out.loops = f.loops || g.loops;
    let mut edges = Vec::new();
    for &(u, v) in &f.edges {
        edges.push(canon(id[u], id[v]));
    }
    for &(u, v) in &g.edges {
        edges.push(canon(id[f.n + u], id[f.n + v]));
    }
    if edges.iter().any(|&(a, b)| a == b) {
        out.loops = true;
    }
    edges.sort_unstable();
    edges.dedup();
    out.edges = edges;
    for (&l, &v) in &f.labels {
        out.labels.insert(l, id[v]);
    }
    for (&l, &v) in &g.labels {
        out.labels.insert(l, id[f.n + v]);
    }
    let fm = id[..f.n].to_vec();
    let gm = id[f.n..].to_vec();
    (out, fm, gm)
}

pub fn product(f: &LabelledGraph, g: &LabelledGraph) -> LabelledGraph {
    product_with_maps(f, g).0
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let nx = self.parent[y];
            self.parent[y] = r;
            y = nx;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labelled_edge(a: Label, b: Label) -> LabelledGraph {
        LabelledGraph::from_edges(2, &[(0, 1)])
            .unwrap()
            .set_label(a, 0)
            .unwrap()
            .set_label(b, 1)
            .unwrap()
    }

    #[test]
    fn product_of_single_labelled_vertices() {
        let f = LabelledGraph::empty(1).set_label(1, 0).unwrap();
        let p = product(&f, &f);
        assert_eq!(p.n(), 1);
        assert_eq!(p.m(), 0);
        assert_eq!(p.label(1), Some(0));
    }

    #[test]
    fn product_glues_edges_into_a_path() {
        let p = product(&labelled_edge(1, 2), &labelled_edge(2, 3));
        assert_eq!(p.n(), 3);
        assert_eq!(p.m(), 2);
        let mid = p.label(2).unwrap();
        assert_eq!(p.degree(mid), 2);
        assert_eq!(p.labels().len(), 3);
    }

    #[test]
    fn product_is_idempotent_on_fully_labelled() {
        let e = labelled_edge(1, 2);
        assert_eq!(product(&e, &e), e);
    }

    #[test]
    fn product_can_create_loops() {
        let f = LabelledGraph::from_edges(2, &[(0, 1)])
            .unwrap()
            .set_label(1, 0)
            .unwrap()
            .set_label(2, 1)
            .unwrap();
        let g = LabelledGraph::empty(1)
            .set_label(1, 0)
            .unwrap()
            .set_label(2, 0)
            .unwrap();
        let p = product(&f, &g);
        assert_eq!(p.n(), 1);
        assert!(p.has_loop(0));
    }

    #[test]
    fn label_round_trip() {
        let g = LabelledGraph::complete(2);
        let h = g.set_label(1, 0).unwrap();
        assert_eq!(h.label(1), Some(0));
        assert_eq!(h.remove_label(1).unwrap(), g);
        assert_eq!(g.remove_label(3).unwrap(), g);
        assert!(g.set_label(1, 5).is_err());
        assert!(g.set_label(0, 1).is_err());
    }

    #[test]
    fn looped_versions() {
        assert_eq!(LabelledGraph::empty(1).with_loops().unwrap().m(), 1);
        assert_eq!(LabelledGraph::complete(2).with_loops().unwrap().m(), 3);
        let g = LabelledGraph::grid(2, 5).with_loops().unwrap();
        assert_eq!((g.n(), g.m()), (10, 23));
        assert!(g.with_loops().is_err());
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(LabelledGraph::grid(1, 3), LabelledGraph::path(3));
        for (h, l) in [(2, 5), (3, 4), (4, 9)] {
            let g = LabelledGraph::grid(h, l);
            assert_eq!(g.m(), h * (l - 1) + l * (h - 1));
        }
    }

    #[test]
    fn minors() {
        let k2 = LabelledGraph::complete(2);
        let g = k2.delete_edge(0, 1).unwrap().delete_vertex(1).unwrap();
        assert_eq!(g, LabelledGraph::empty(1));
        let c3 = LabelledGraph::cycle(3).contract_edge(0, 1).unwrap();
        assert_eq!(c3, LabelledGraph::complete(2));
        assert!(k2.delete_edge(0, 0).is_err());
    }

    #[test]
    fn contraction_unions_labels() {
        let g = LabelledGraph::path(3)
            .set_label(1, 0)
            .unwrap()
            .set_label(2, 1)
            .unwrap();
        let h = g.contract_edge(0, 1).unwrap();
        assert_eq!(h.label(1), h.label(2));
        assert_eq!(h.n(), 2);
    }
}
