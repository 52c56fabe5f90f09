//! The bijective `k`-pebble game.

use std::collections::HashMap;

use crate::error::{check_cap, Result};
use crate::graph::{LabelledGraph, Vertex};

/// Pebble `i` sits on `(v, w)` when `pos[i] = Some((v, w))`.
pub type PebblePosition = Vec<Option<(Vertex, Vertex)>>;

pub const PEBBLE_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PebbleOutcome {
    DuplicatorWins,
    SpoilerWins,
}

impl PebbleOutcome {
    pub fn duplicator_wins(self) -> bool {
        self == PebbleOutcome::DuplicatorWins
    }
}

pub fn is_partial_isomorphism(
    g: &LabelledGraph,
    h: &LabelledGraph,
    gamma: &[Option<(Vertex, Vertex)>],
) -> bool {
    let placed: Vec<(Vertex, Vertex)> = gamma.iter().flatten().copied().collect();
    placed.iter().all(|&(a, b)| {
        placed
            .iter()
            .all(|&(c, d)| (a == c) == (b == d) && g.has_edge(a, c) == h.has_edge(b, d))
    })
}

fn matrix(g: &LabelledGraph) -> Vec<Vec<bool>> {
    (0..g.n())
        .map(|u| (0..g.n()).map(|v| g.has_edge(u, v)).collect())
        .collect()
}

/// Solver for one pair of graphs. With `symmetric` (the default) positions
/// that differ by renaming pebbles share a memo entry.
pub struct PebbleGame {
    k: usize,
    n: usize,
    ag: Vec<Vec<bool>>,
    ah: Vec<Vec<bool>>,
    same_size: bool,
    symmetric: bool,
    memo: HashMap<(Vec<u32>, usize), bool>,
}

impl PebbleGame {
    pub fn new(g: &LabelledGraph, h: &LabelledGraph, k: usize) -> Result<Self> {
        check_cap(g.n().max(h.n()), PEBBLE_CAP)?;
        Ok(PebbleGame {
            k,
            n: g.n(),
            ag: matrix(g),
            ah: matrix(h),
            same_size: g.n() == h.n(),
            symmetric: true,
            memo: HashMap::new(),
        })
    }

    pub fn symmetric(mut self, on: bool) -> Self {
        self.symmetric = on;
        self
    }

    pub fn states(&self) -> usize {
        self.memo.len()
    }

    fn key(&self, pos: &[Option<(Vertex, Vertex)>]) -> Vec<u32> {
        let mut key: Vec<u32> = pos
            .iter()
            .map(|p| p.map_or(0, |(v, w)| 1 + (v * self.n + w) as u32))
            .collect();
        if self.symmetric {
            key.sort_unstable();
        }
        key
    }

    /// Whether `(v, w)` on pebble `p` keeps the position a partial isomorphism.
    fn compatible(&self, pos: &[Option<(Vertex, Vertex)>], p: usize, v: Vertex, w: Vertex) -> bool {
        if self.ag[v][v] != self.ah[w][w] {
            return false;
        }
        pos.iter().enumerate().all(|(i, x)| match x {
            Some((a, b)) if i != p => (v == *a) == (w == *b) && self.ag[v][*a] == self.ah[w][*b],
            _ => true,
        })
    }

    /// Duplicator survives `q` more rounds from `pos`, which must be a
    /// partial isomorphism.
    fn wins(&mut self, pos: &mut PebblePosition, q: usize) -> bool {
        if q == 0 {
            return true;
        }
        if !self.same_size {
            return false;
        }
        let key = (self.key(pos), q);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let mut result = true;
        for p in 0..self.k {
            if self.symmetric && pos[..p].contains(&pos[p]) {
                continue;
            }
            if !self.bijection_exists(pos, p, q) {
                result = false;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }

    /// A perfect matching in `v ~ w` iff Duplicator survives `q - 1` rounds
    /// after `p` moves to `(v, w)`; edges are evaluated on demand.
    fn bijection_exists(&mut self, pos: &mut PebblePosition, p: usize, q: usize) -> bool {
        let n = self.n;
        let mut rel: Vec<Vec<Option<bool>>> = vec![vec![None; n]; n];
        let mut mate_w: Vec<Option<Vertex>> = vec![None; n];
        let old = pos[p];
        let mut edge = |this: &mut Self, pos: &mut PebblePosition, v: Vertex, w: Vertex| -> bool {
            if let Some(b) = rel[v][w] {
                return b;
            }
            let b = this.compatible(pos, p, v, w) && {
                pos[p] = Some((v, w));
                let r = this.wins(pos, q - 1);
                pos[p] = old;
                r
            };
            rel[v][w] = Some(b);
            b
        };
        // Kuhn's augmenting paths
        fn augment(
            this: &mut PebbleGame,
            pos: &mut PebblePosition,
            v: Vertex,
            seen: &mut [bool],
            mate_w: &mut [Option<Vertex>],
            edge: &mut dyn FnMut(&mut PebbleGame, &mut PebblePosition, Vertex, Vertex) -> bool,
        ) -> bool {
            for w in 0..this.n {
                if seen[w] || !edge(this, pos, v, w) {
                    continue;
                }
                seen[w] = true;
                if mate_w[w].map_or(true, |u| augment(this, pos, u, seen, mate_w, edge)) {
                    mate_w[w] = Some(v);
                    return true;
                }
            }
            false
        }
        for v in 0..n {
            let mut seen = vec![false; n];
            if !augment(self, pos, v, &mut seen, &mut mate_w, &mut edge) {
                return false;
            }
        }
        true
    }

    pub fn play(&mut self, q: usize, start: &[Option<(Vertex, Vertex)>]) -> Result<PebbleOutcome> {
        let mut pos: PebblePosition = start.to_vec();
        if pos.len() > self.k {
            return Err(crate::Error::Precondition(format!(
                "position uses {} pebbles, only {} exist",
                pos.len(),
                self.k
            )));
        }
        pos.resize(self.k, None);
        if pos
            .iter()
            .flatten()
            .any(|&(v, w)| v >= self.n || w >= self.ah.len())
        {
            return Err(crate::Error::Precondition(
                "pebble on a vertex outside the graph".into(),
            ));
        }
        let ok = self.compatible_all(&pos) && self.wins(&mut pos, q);
        Ok(if ok {
            PebbleOutcome::DuplicatorWins
        } else {
            PebbleOutcome::SpoilerWins
        })
    }

    fn compatible_all(&self, pos: &[Option<(Vertex, Vertex)>]) -> bool {
        pos.iter()
            .enumerate()
            .all(|(i, x)| x.map_or(true, |(v, w)| self.compatible(pos, i, v, w)))
    }
}

/// Winner of the `q`-round bijective `k`-pebble game on `g`, `h` from `start`.
pub fn bijective_pebble_game(
    g: &LabelledGraph,
    h: &LabelledGraph,
    k: usize,
    q: usize,
    start: &[Option<(Vertex, Vertex)>],
) -> Result<PebbleOutcome> {
    PebbleGame::new(g, h, k)?.play(q, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> LabelledGraph {
        LabelledGraph::cycle(3)
            .disjoint_union(&LabelledGraph::cycle(3))
            .unwrap()
    }

    #[test]
    fn partial_isomorphisms() {
        let g = LabelledGraph::path(3);
        assert!(is_partial_isomorphism(&g, &g, &[]));
        assert!(is_partial_isomorphism(
            &g,
            &g,
            &[Some((0, 0)), Some((1, 1))]
        ));
        assert!(!is_partial_isomorphism(
            &g,
            &g,
            &[Some((0, 0)), Some((1, 2))]
        ));
        assert!(!is_partial_isomorphism(
            &g,
            &g,
            &[Some((0, 0)), Some((1, 0))]
        ));
    }

    #[test]
    fn a_graph_against_itself() {
        let g = LabelledGraph::grid(2, 3);
        assert!(bijective_pebble_game(&g, &g, 3, 3, &[])
            .unwrap()
            .duplicator_wins());
    }

    #[test]
    fn triangles_and_hexagon() {
        let (a, b) = (two_triangles(), LabelledGraph::cycle(6));
        for q in 0..=5 {
            assert!(bijective_pebble_game(&a, &b, 2, q, &[])
                .unwrap()
                .duplicator_wins());
        }
        // two rounds place two pebbles, which a 2-regular pair cannot tell apart
        assert!(bijective_pebble_game(&a, &b, 3, 2, &[])
            .unwrap()
            .duplicator_wins());
        assert_eq!(
            bijective_pebble_game(&a, &b, 3, 3, &[]).unwrap(),
            PebbleOutcome::SpoilerWins
        );
    }

    #[test]
    fn sizes_and_bad_starts() {
        let (a, b) = (LabelledGraph::path(3), LabelledGraph::path(4));
        assert_eq!(
            bijective_pebble_game(&a, &b, 1, 1, &[]).unwrap(),
            PebbleOutcome::SpoilerWins
        );
        assert!(bijective_pebble_game(&a, &b, 1, 0, &[])
            .unwrap()
            .duplicator_wins());
        let g = LabelledGraph::path(3);
        let bad = [Some((0, 0)), Some((1, 2))];
        assert_eq!(
            bijective_pebble_game(&g, &g, 2, 0, &bad).unwrap(),
            PebbleOutcome::SpoilerWins
        );
    }

    #[test]
    fn symmetry_quotient_agrees() {
        let (a, b) = (two_triangles(), LabelledGraph::cycle(6));
        let c = LabelledGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 2)])
            .unwrap();
        for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
            for k in 1..=3 {
                for q in 0..=3 {
                    let s = PebbleGame::new(x, y, k).unwrap().play(q, &[]).unwrap();
                    let t = PebbleGame::new(x, y, k)
                        .unwrap()
                        .symmetric(false)
                        .play(q, &[])
                        .unwrap();
                    assert_eq!(s, t, "k={k} q={q}");
                }
            }
        }
    }
}
