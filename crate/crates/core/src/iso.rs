//! Small-scale isomorphism and canonical forms by colour refinement with
//! individualisation.
//!
//! Labels and self-loops are part of the initial colouring, so isomorphisms
//! found here preserve both. Twin vertices (same colour, same neighbourhood
//! up to each other) are interchangeable and only one per twin class is
//! branched on.

use crate::error::{check_cap, Result};
use crate::graph::LabelledGraph;

pub const DEFAULT_CAP: usize = 16;

struct Board {
    adj: Vec<Vec<usize>>,
}

impl Board {
    fn new(gs: &[&LabelledGraph]) -> (Self, Vec<usize>) {
        let total: usize = gs.iter().map(|g| g.n()).sum();
        let mut adj = vec![Vec::new(); total];
        let mut init_keys: Vec<(Vec<usize>, bool)> = Vec::with_capacity(total);
        let mut off = 0;
        for g in gs {
            for &(u, v) in g.edges() {
                if u != v {
                    adj[off + u].push(off + v);
                    adj[off + v].push(off + u);
                }
            }
            for v in 0..g.n() {
                init_keys.push((g.labels_of(v), g.has_loop(v)));
            }
            off += g.n();
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        (Board { adj }, rank(&init_keys))
    }

    /// Coarsest equitable refinement of `col`; colour ids are ranks of
    /// isomorphism-invariant signatures.
    fn refine(&self, mut col: Vec<usize>) -> Vec<usize> {
        let mut classes = distinct(&col);
        loop {
            let sigs: Vec<(usize, Vec<usize>)> = (0..col.len())
                .map(|v| {
                    let mut ns: Vec<usize> = self.adj[v].iter().map(|&w| col[w]).collect();
                    ns.sort_unstable();
                    (col[v], ns)
                })
                .collect();
            col = rank(&sigs);
            let c = distinct(&col);
            if c == classes {
                return col;
            }
            classes = c;
        }
    }

    fn twins(&self, col: &[usize], a: usize, b: usize) -> bool {
        if col[a] != col[b] {
            return false;
        }
        let strip = |x: usize, y: usize| -> Vec<usize> {
            self.adj[x].iter().copied().filter(|&w| w != y).collect()
        };
        strip(a, b) == strip(b, a)
    }

    /// One representative per twin class among `cell`.
    fn twin_reps(&self, col: &[usize], cell: &[usize]) -> Vec<usize> {
        let mut reps: Vec<usize> = Vec::new();
        for &v in cell {
            if !reps.iter().any(|&r| self.twins(col, r, v)) {
                reps.push(v);
            }
        }
        reps
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn distinct(col: &[usize]) -> usize {
    let mut c = col.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn individualise(col: &[usize], v: usize) -> Vec<usize> {
    let c = col[v];
    col.iter()
        .enumerate()
        .map(|(w, &x)| 2 * x + usize::from(x == c && w != v))
        .collect()
}

/// Smallest colour whose class (within `range`) has more than one vertex.
fn target_cell(col: &[usize], range: std::ops::Range<usize>) -> Option<Vec<usize>> {
    let mut counts = std::collections::BTreeMap::<usize, Vec<usize>>::new();
    for v in range {
        counts.entry(col[v]).or_default().push(v);
    }
    counts.into_values().find(|c| c.len() > 1)
}

/// Finds a label- and loop-preserving isomorphism `g → h`, returned as the
/// image of each vertex of `g`.
pub fn isomorphic(g: &LabelledGraph, h: &LabelledGraph) -> Result<Option<Vec<usize>>> {
    isomorphic_with_cap(g, h, DEFAULT_CAP)
}

pub fn isomorphic_with_cap(
    g: &LabelledGraph,
    h: &LabelledGraph,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    check_cap(g.n().max(h.n()), cap)?;
    if g.n() != h.n() || g.m() != h.m() || g.labels().keys().ne(h.labels().keys()) {
        return Ok(None);
    }
    let n = g.n();
    let (board, col) = Board::new(&[g, h]);
    let col = board.refine(col);
    let found = iso_search(&board, col, n);
    Ok(found.filter(|f| is_isomorphism(g, h, f)))
}

fn balanced(col: &[usize], n: usize) -> bool {
    let mut a: Vec<usize> = col[..n].to_vec();
    let mut b: Vec<usize> = col[n..].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn iso_search(board: &Board, col: Vec<usize>, n: usize) -> Option<Vec<usize>> {
    if !balanced(&col, n) {
        return None;
    }
    let Some(cell) = target_cell(&col, 0..n) else {
        let mut img = vec![0; n];
        for x in 0..n {
            img[x] = (n..2 * n).find(|&y| col[y] == col[x])? - n;
        }
        return Some(img);
    };
    let x = cell[0];
    let candidates: Vec<usize> = (n..2 * n).filter(|&y| col[y] == col[x]).collect();
    for y in board.twin_reps(&col, &candidates) {
        let c = col[x];
        let split: Vec<usize> = col
            .iter()
            .enumerate()
            .map(|(w, &z)| 2 * z + usize::from(z == c && w != x && w != y))
            .collect();
        if let Some(f) = iso_search(board, board.refine(split), n) {
            return Some(f);
        }
    }
    None
}

/// Checks that `f` is a bijection `V(g) → V(h)` preserving edges, loops and labels.
pub fn is_isomorphism(g: &LabelledGraph, h: &LabelledGraph, f: &[usize]) -> bool {
    if g.n() != h.n() || f.len() != g.n() || g.m() != h.m() {
        return false;
    }
    let mut seen = vec![false; h.n()];
    for &y in f {
        if y >= h.n() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    g.edges().iter().all(|&(u, v)| h.has_edge(f[u], f[v]))
        && g.labels().len() == h.labels().len()
        && g.labels().iter().all(|(&l, &v)| h.label(l) == Some(f[v]))
}

/// A string that is equal for two graphs exactly when they are isomorphic
/// (respecting labels and loops).
pub fn canonical_form(g: &LabelledGraph) -> Result<String> {
    canonical_form_with_cap(g, DEFAULT_CAP)
}

pub fn canonical_form_with_cap(g: &LabelledGraph, cap: usize) -> Result<String> {
    check_cap(g.n(), cap)?;
    let (board, col) = Board::new(&[g]);
    let col = board.refine(col);
    let mut best: Option<String> = None;
    canon_search(g, &board, col, &mut best);
    Ok(best.unwrap_or_default())
}

fn certificate(g: &LabelledGraph, col: &[usize]) -> String {
    // `col` is a permutation of 0..n at a leaf.
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (col[u], col[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let mut s = format!("{}|{}|", g.n(), u8::from(g.loops_allowed()));
    for (a, b) in edges {
        s.push_str(&format!("{a}-{b},"));
    }
    s.push('|');
    for (&l, &v) in g.labels() {
        s.push_str(&format!("{l}:{},", col[v]));
    }
    s
}

fn canon_search(g: &LabelledGraph, board: &Board, col: Vec<usize>, best: &mut Option<String>) {
    let Some(cell) = target_cell(&col, 0..g.n()) else {
        let cert = certificate(g, &col);
        if best.as_ref().map_or(true, |b| cert < *b) {
            *best = Some(cert);
        }
        return;
    };
    for v in board.twin_reps(&col, &cell) {
        canon_search(g, board, board.refine(individualise(&col, v)), best);
    }
}

/// Cheap isomorphism-invariant key: colour refinement followed by
/// individualising the first vertex of each non-trivial cell. Equal keys imply
/// isomorphism; isomorphic graphs may receive different keys.
pub fn quick_key(g: &LabelledGraph) -> String {
    let (board, col) = Board::new(&[g]);
    let mut col = board.refine(col);
    while let Some(cell) = target_cell(&col, 0..g.n()) {
        col = board.refine(individualise(&col, cell[0]));
    }
    certificate(g, &col)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> LabelledGraph {
        LabelledGraph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn triangles_versus_hexagon() {
        let c6 = LabelledGraph::cycle(6);
        assert_eq!(isomorphic(&two_triangles(), &c6).unwrap(), None);
        assert_ne!(
            canonical_form(&two_triangles()).unwrap(),
            canonical_form(&c6).unwrap()
        );
    }

    #[test]
    fn self_isomorphism() {
        let g = LabelledGraph::grid(2, 5);
        let f = isomorphic(&g, &g).unwrap().unwrap();
        assert!(is_isomorphism(&g, &g, &f));
    }

    #[test]
    fn relabelled_copies_share_a_form() {
        let g = LabelledGraph::grid(3, 3);
        let perm = [4, 0, 8, 2, 6, 1, 3, 5, 7];
        let h = g.permute(&perm);
        assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
        let f = isomorphic(&g, &h).unwrap().unwrap();
        assert!(is_isomorphism(&g, &h, &f));
    }

    #[test]
    fn labels_are_respected() {
        let p = LabelledGraph::path(3);
        let end = p.set_label(1, 0).unwrap();
        let mid = p.set_label(1, 1).unwrap();
        let other_end = p.set_label(1, 2).unwrap();
        assert!(isomorphic(&end, &mid).unwrap().is_none());
        assert!(isomorphic(&end, &other_end).unwrap().is_some());
        assert_eq!(
            canonical_form(&end).unwrap(),
            canonical_form(&other_end).unwrap()
        );
    }

    #[test]
    fn symmetric_graphs_are_cheap() {
        for g in [LabelledGraph::empty(16), LabelledGraph::complete(16)] {
            assert!(canonical_form(&g).is_ok());
        }
        assert!(canonical_form(&LabelledGraph::empty(17)).is_err());
    }
}
