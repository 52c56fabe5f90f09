//! Exhaustive lists of small graphs up to isomorphism, and the graph
//! families used for homomorphism indistinguishability checks.

use std::collections::{HashMap, HashSet};

use crate::bits::{self, VSet};
use crate::decomp::oracle;
use crate::error::{check_cap, Error, Result};
use crate::game::{Board, Solver, Variant};
use crate::graph::LabelledGraph;
use crate::iso::canonical_form;

/// Largest order handled by [`graphs`].
pub const MAX_ORDER: usize = 9;

/// All unlabelled loopless graphs on exactly `n` vertices, one per
/// isomorphism class, in a fixed order.
pub fn graphs(n: usize) -> Result<Vec<LabelledGraph>> {
    check_cap(n, MAX_ORDER)?;
    let mut level = vec![LabelledGraph::empty(0)];
    for m in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for s in 0..1u64 << (m - 1) {
                let mut h = g.clone();
                let v = h.add_vertex();
                for u in bits::iter(s) {
                    h.add_edge(u, v)?;
                }
                if seen.insert(canonical_form(&h)?) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    Ok(level)
}

/// All graphs with `1..=max_n` vertices.
pub fn graphs_up_to(max_n: usize) -> Result<Vec<LabelledGraph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(graphs(n)?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `T^k_q`.
    Tkq,
    /// `GE^k_q`: graphs with a guarded construction tree, labels dropped.
    Guarded,
    /// `TW_{k-1} ∩ TD_q`.
    TwTd,
}

impl std::str::FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "T" | "tkq" | "Tkq" => Ok(FamilyKind::Tkq),
            "GE" | "ge" | "guarded" => Ok(FamilyKind::Guarded),
            "TWTD" | "twtd" => Ok(FamilyKind::TwTd),
            _ => Err(format!("unknown family {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Family {
    pub kind: FamilyKind,
    pub k: usize,
    pub q: usize,
    pub max_n: usize,
    pub members: Vec<LabelledGraph>,
}

/// Whether Cop wins `CR^k_q(g)`.
pub fn in_tkq(g: &LabelledGraph, k: usize, q: usize) -> Result<bool> {
    let mut s = Solver::new(g, k, Variant::Cr, Board::Plain)?;
    Ok(s.game_value(q).is_some())
}

pub fn in_tw_td(g: &LabelledGraph, k: usize, q: usize) -> Result<bool> {
    Ok(oracle::treewidth(g)? < k as isize && oracle::treedepth(g)? <= q)
}

/// Least number of guarded eliminations that clear the component `c` while
/// its boundary stays labelled: the eliminated vertex must touch a labelled
/// vertex, and boundary plus new vertex must fit in `k` labels.
struct GuardedSearch<'a> {
    adj: &'a [VSet],
    k: usize,
    memo: HashMap<VSet, usize>,
}

impl GuardedSearch<'_> {
    fn g(&mut self, c: VSet) -> usize {
        if let Some(&r) = self.memo.get(&c) {
            return r;
        }
        let sep = bits::neighbourhood(self.adj, c);
        let mut best = usize::MAX;
        if bits::count(sep) < self.k {
            for w in bits::iter(c & bits::neighbourhood(self.adj, sep)) {
                let mut worst = 0;
                for sub in bits::components(self.adj, c & !bits::bit(w)) {
                    worst = worst.max(self.g(sub));
                    if worst >= best {
                        break;
                    }
                }
                best = best.min(worst.saturating_add(1));
            }
        }
        self.memo.insert(c, best);
        best
    }
}

/// Whether `g` with exactly the vertices of `root` labelled has a guarded
/// `k`-construction tree of elimination depth at most `q`.
pub fn guarded_with_labels(g: &LabelledGraph, root: VSet, k: usize, q: usize) -> Result<bool> {
    check_cap(g.n(), bits::MAX_BITS)?;
    if bits::count(root) > k || root == 0 {
        return Ok(false);
    }
    let adj = g.adjacency();
    let mut s = GuardedSearch {
        adj: &adj,
        k,
        memo: HashMap::new(),
    };
    Ok(bits::components(&adj, bits::full(g.n()) & !root)
        .into_iter()
        .all(|c| s.g(c) <= q))
}

/// Membership in `GE^k_q`: some non-empty set of at most `k` labelled
/// vertices admits a guarded construction tree.
pub fn in_guarded(g: &LabelledGraph, k: usize, q: usize) -> Result<bool> {
    check_cap(g.n(), bits::MAX_BITS)?;
    if g.n() == 0 {
        return Ok(false);
    }
    let adj = g.adjacency();
    let mut s = GuardedSearch {
        adj: &adj,
        k,
        memo: HashMap::new(),
    };
    for root in bits::subsets(bits::full(g.n())) {
        if root == 0 || bits::count(root) > k {
            continue;
        }
        if bits::components(&adj, bits::full(g.n()) & !root)
            .into_iter()
            .all(|c| s.g(c) <= q)
        {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn member(kind: FamilyKind, g: &LabelledGraph, k: usize, q: usize) -> Result<bool> {
    match kind {
        FamilyKind::Tkq => in_tkq(g, k, q),
        FamilyKind::Guarded => in_guarded(g, k, q),
        FamilyKind::TwTd => in_tw_td(g, k, q),
    }
}

pub fn enumerate_family(kind: FamilyKind, k: usize, q: usize, max_n: usize) -> Result<Family> {
    if k == 0 || q == 0 {
        return Err(Error::Precondition("k and q must be positive".into()));
    }
    let mut members = Vec::new();
    for g in graphs_up_to(max_n)? {
        if member(kind, &g, k, q)? {
            members.push(g);
        }
    }
    Ok(Family {
        kind,
        k,
        q,
        max_n,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::isomorphic;

    #[test]
    fn counts_match_the_known_sequence() {
        let counts: Vec<usize> = (0..=6).map(|n| graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn no_duplicates_at_four() {
        let gs = graphs(4).unwrap();
        for i in 0..gs.len() {
            for j in i + 1..gs.len() {
                assert!(isomorphic(&gs[i], &gs[j]).unwrap().is_none());
            }
        }
    }

    #[test]
    fn t11_is_edgeless() {
        let f = enumerate_family(FamilyKind::Tkq, 1, 1, 3).unwrap();
        assert_eq!(f.members.len(), 3);
        assert!(f.members.iter().all(|g| g.m() == 0));
    }

    #[test]
    fn guarded_basics() {
        assert!(in_guarded(&LabelledGraph::complete(1), 1, 1).unwrap());
        // two isolated vertices need both labelled at the root
        assert!(!in_guarded(&LabelledGraph::empty(2), 1, 5).unwrap());
        assert!(in_guarded(&LabelledGraph::empty(2), 2, 1).unwrap());
        // a path grows from a labelled end one guarded step at a time
        assert!(in_guarded(&LabelledGraph::path(4), 2, 3).unwrap());
        assert!(!in_guarded(&LabelledGraph::path(5), 1, 9).unwrap());
        let g = LabelledGraph::grid(2, 7);
        let mid = crate::graph::grid_vertex(7, 1, 4);
        assert!(guarded_with_labels(&g, bits::bit(mid), 3, 7).unwrap());
        assert!(!guarded_with_labels(&g, bits::bit(mid), 3, 6).unwrap());
    }
}
