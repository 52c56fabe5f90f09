//! CFI graphs `G_U`.
//!
//! A vertex `(v, S)` stores `S` as a bitmask over the neighbours of `v` in
//! increasing order: bit `i` stands for the edge to the `i`-th neighbour.

use std::collections::HashMap;

use crate::bits::{self, VSet};
use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, Vertex};

#[derive(Clone, Debug)]
pub struct CfiGraph {
    pub base: LabelledGraph,
    pub twist: VSet,
    /// `(v, S)` for every vertex of [`graph`](Self::graph), in order.
    pub vertices: Vec<(Vertex, u64)>,
    pub graph: LabelledGraph,
    index: HashMap<(Vertex, u64), usize>,
}

impl CfiGraph {
    /// `ρ(v, S) = v`.
    pub fn project(&self, x: usize) -> Vertex {
        self.vertices[x].0
    }

    pub fn index_of(&self, v: Vertex, s: u64) -> Option<usize> {
        self.index.get(&(v, s)).copied()
    }
}

fn position(base: &LabelledGraph, v: Vertex, u: Vertex) -> Option<usize> {
    base.neighbours(v).iter().position(|&w| w == u)
}

pub fn cfi(base: &LabelledGraph, twist: VSet) -> Result<CfiGraph> {
    if base.has_loops() {
        return Err(Error::Precondition(
            "CFI base graph must be loopless".into(),
        ));
    }
    if !base.is_connected() {
        return Err(Error::Disconnected);
    }
    if base.n() > bits::MAX_BITS || twist & !bits::full(base.n()) != 0 {
        return Err(Error::Precondition(
            "twist set outside the vertex range".into(),
        ));
    }
    let nbrs: Vec<Vec<Vertex>> = (0..base.n()).map(|v| base.neighbours(v)).collect();
    let mut vertices = Vec::new();
    for v in 0..base.n() {
        let odd = twist & bits::bit(v) != 0;
        for s in 0..(1u64 << nbrs[v].len()) {
            if (s.count_ones() % 2 == 1) == odd {
                vertices.push((v, s));
            }
        }
    }
    let index: HashMap<(Vertex, u64), usize> =
        vertices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut edges = Vec::new();
    for (i, &(v, s)) in vertices.iter().enumerate() {
        for (j, &(u, t)) in vertices.iter().enumerate().skip(i + 1) {
            if u == v || !base.has_edge(u, v) {
                continue;
            }
            let in_s = s >> position(base, v, u).unwrap() & 1;
            let in_t = t >> position(base, u, v).unwrap() & 1;
            if in_s == in_t {
                edges.push((i, j));
            }
        }
    }
    let graph = LabelledGraph::from_edges(vertices.len(), &edges)?;
    Ok(CfiGraph {
        base: base.without_labels(),
        twist,
        vertices,
        graph,
        index,
    })
}

/// `(G_0, G_1)` with `G_1` twisted at the first vertex.
pub fn cfi_pair(base: &LabelledGraph) -> Result<(LabelledGraph, LabelledGraph)> {
    let g0 = cfi(base, 0)?;
    let g1 = cfi(base, if base.n() == 0 { 0 } else { 1 })?;
    Ok((g0.graph, g1.graph))
}

/// `|V(G_U)|` for a base graph without isolated vertices.
pub fn cfi_size(base: &LabelledGraph) -> usize {
    (0..base.n())
        .map(|v| 1usize << (base.degree(v).max(1) - 1))
        .sum()
}

/// The isomorphism `G_{u} → G_{v}` obtained by toggling the path edges at
/// every gadget along `path` (which runs from `u` to `v`). Returned as the
/// image index of each vertex of `cfi(base, {u})`.
pub fn twist_isomorphism(base: &LabelledGraph, path: &[Vertex]) -> Result<Vec<usize>> {
    let (&u, &v) = match (path.first(), path.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition("empty path".into())),
    };
    for w in path.windows(2) {
        if w[0] == w[1] || !base.has_edge(w[0], w[1]) {
            return Err(Error::MissingEdge(w[0], w[1]));
        }
    }
    let mut seen = 0u64;
    for &w in path {
        if w >= base.n() {
            return Err(Error::UnknownVertex(w));
        }
        if seen & bits::bit(w) != 0 {
            return Err(Error::Precondition("path repeats a vertex".into()));
        }
        seen |= bits::bit(w);
    }
    let from = cfi(base, bits::bit(u))?;
    let to = cfi(base, bits::bit(v))?;
    let mut toggle = vec![0u64; base.n()];
    for w in path.windows(2) {
        toggle[w[0]] ^= 1 << position(base, w[0], w[1]).unwrap();
        toggle[w[1]] ^= 1 << position(base, w[1], w[0]).unwrap();
    }
    from.vertices
        .iter()
        .map(|&(w, s)| {
            to.index_of(w, s ^ toggle[w])
                .ok_or_else(|| Error::Invalid("twist map left the target".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{is_isomorphism, isomorphic};

    #[test]
    fn k2_pair() {
        let (g0, g1) = cfi_pair(&LabelledGraph::complete(2)).unwrap();
        assert_eq!((g0.n(), g0.m()), (2, 1));
        assert_eq!((g1.n(), g1.m()), (2, 0));
    }

    #[test]
    fn triangle_pair() {
        let (g0, g1) = cfi_pair(&LabelledGraph::cycle(3)).unwrap();
        let tt = LabelledGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap();
        assert!(isomorphic(&g0, &tt).unwrap().is_some());
        assert!(isomorphic(&g1, &LabelledGraph::cycle(6)).unwrap().is_some());
    }

    #[test]
    fn size_formula() {
        let base = LabelledGraph::path(7);
        assert_eq!(cfi(&base, 0).unwrap().graph.n(), 12);
        assert_eq!(cfi_size(&base), 12);
    }

    #[test]
    fn twist_along_edge() {
        let base = LabelledGraph::cycle(3);
        let f = twist_isomorphism(&base, &[0, 1]).unwrap();
        let a = cfi(&base, bits::bit(0)).unwrap();
        let b = cfi(&base, bits::bit(1)).unwrap();
        assert!(is_isomorphism(&a.graph, &b.graph, &f));
        for (x, &y) in f.iter().enumerate() {
            assert_eq!(a.project(x), b.project(y));
            if a.project(x) == 2 {
                assert_eq!(a.vertices[x], b.vertices[y]);
            }
        }
        assert!(twist_isomorphism(&LabelledGraph::path(3), &[0, 2]).is_err());
    }

    #[test]
    fn trivial_twist_is_identity() {
        let base = LabelledGraph::path(3);
        let f = twist_isomorphism(&base, &[1]).unwrap();
        assert_eq!(f, (0..f.len()).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_disconnected() {
        assert!(cfi(&LabelledGraph::empty(2), 0).is_err());
    }
}
