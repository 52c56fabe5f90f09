//! Turns a pre-tree-decomposition into an exact one without increasing its
//! width or depth, by pushing unassigned edges into the cones at each node
//! in breadth-first order.

use serde::Serialize;

use super::ptd::{EdgeIndex, PreTreeDecomposition};
use super::validate_ptd;
use crate::bits::{self, ESet};
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

/// One breadth-first step of [`exactify_with_audit`].
#[derive(Clone, Debug, Serialize)]
pub struct AuditStep {
    pub step: usize,
    pub node: usize,
    /// `F_j` for each child, in child order.
    pub extensions: Vec<Vec<(usize, usize)>>,
    pub boundary: Vec<usize>,
    pub bags: Vec<Vec<usize>>,
}

/// Choice of pairwise disjoint `F_j ⊆ candidates[j]` minimising the
/// boundary of the extended partition, then `|⋃ F_j|`; remaining ties go to
/// the lexicographically least assignment (edges in index order, "no part"
/// before part 1 before part 2 ...).
///
/// `parts` is the partition at the node, children first and the parent cone
/// last (if any); `candidates[j]` belongs to child `j`.
pub fn select_extensions(ix: &EdgeIndex, parts: &[ESet], candidates: &[ESet]) -> Vec<ESet> {
    let a = candidates.len();
    let pool: ESet = candidates.iter().fold(0, |s, &c| s | c);
    if pool == 0 {
        return vec![0; a];
    }
    let n = ix.inc.len();
    // Final part of every edge outside the pool is fixed.
    let mut label = vec![usize::MAX; ix.edges.len()];
    for (p, &set) in parts.iter().enumerate() {
        for e in bits::eiter(set & !pool) {
            label[e] = p;
        }
    }
    let order: Vec<usize> = bits::eiter(pool).collect();
    let home: Vec<usize> = order
        .iter()
        .map(|&e| parts.iter().position(|&s| s & bits::ebit(e) != 0).unwrap())
        .collect();
    let options: Vec<Vec<usize>> = order
        .iter()
        .zip(&home)
        .map(|(&e, &h)| {
            let mut o = vec![h];
            o.extend((0..a).filter(|&j| candidates[j] & bits::ebit(e) != 0));
            o
        })
        .collect();

    struct Search<'a> {
        ix: &'a EdgeIndex,
        order: &'a [usize],
        home: &'a [usize],
        options: &'a [Vec<usize>],
        label: Vec<usize>,
        n: usize,
        best: (usize, usize),
        best_label: Vec<usize>,
    }
    impl Search<'_> {
        /// Vertices whose decided edges already lie in two parts.
        fn bad(&self) -> usize {
            (0..self.n)
                .filter(|&v| {
                    let mut seen = usize::MAX;
                    for e in bits::eiter(self.ix.inc[v]) {
                        let l = self.label[e];
                        if l == usize::MAX {
                            continue;
                        }
                        if seen == usize::MAX {
                            seen = l;
                        } else if seen != l {
                            return true;
                        }
                    }
                    false
                })
                .count()
        }

        fn go(&mut self, i: usize, moved: usize) {
            let lb = self.bad();
            if (lb, moved) >= self.best {
                return;
            }
            if i == self.order.len() {
                self.best = (lb, moved);
                self.best_label = self.label.clone();
                return;
            }
            let e = self.order[i];
            for k in 0..self.options[i].len() {
                let p = self.options[i][k];
                self.label[e] = p;
                self.go(i + 1, moved + usize::from(p != self.home[i]));
            }
            self.label[e] = usize::MAX;
        }
    }

    let mut s = Search {
        ix,
        order: &order,
        home: &home,
        options: &options,
        label,
        n,
        best: (usize::MAX, usize::MAX),
        best_label: Vec::new(),
    };
    s.go(0, 0);
    let mut out = vec![0; a];
    for (i, &e) in order.iter().enumerate() {
        let p = s.best_label[e];
        if p != home[i] {
            out[p] |= bits::ebit(e);
        }
    }
    out
}

/// [`exactify_with_audit`] without the audit trail.
pub fn exactify(g: &LabelledGraph, ptd: &PreTreeDecomposition) -> Result<PreTreeDecomposition> {
    exactify_with_audit(g, ptd).map(|(p, _)| p)
}

pub fn exactify_with_audit(
    g: &LabelledGraph,
    ptd: &PreTreeDecomposition,
) -> Result<(PreTreeDecomposition, Vec<AuditStep>)> {
    validate_ptd(g, ptd).map_err(|v| Error::Invalid(v.to_string()))?;
    let ix = EdgeIndex::new(g)?;
    let tree = &ptd.tree;
    let mut w = ptd.clone();
    let order = tree.bfs();
    let mut pos = vec![0; w.len()];
    for (i, &t) in order.iter().enumerate() {
        pos[t] = i;
    }
    let mut in_ti = vec![false; w.len()];
    let mut audit = Vec::new();

    for (i, &s) in order.iter().enumerate() {
        in_ti[s] = true;
        for &c in tree.children(s) {
            in_ti[c] = true;
        }
        let kids = tree.children(s).to_vec();
        let mut fj = vec![0; kids.len()];
        if !kids.is_empty() {
            let mut parts: Vec<ESet> = kids.iter().map(|&t| w.down[t]).collect();
            if tree.parent(s).is_some() {
                parts.push(w.up[s]);
            }
            let unassigned: Vec<ESet> = kids
                .iter()
                .map(|&t| ix.all & !w.down[t] & !w.up[t])
                .collect();
            fj = select_extensions(&ix, &parts, &unassigned);
            let f: ESet = fj.iter().fold(0, |a, &x| a | x);

            let mut on_path = vec![false; w.len()];
            for t in tree.path_from_root(s) {
                on_path[t] = true;
            }
            let mut below = vec![false; w.len()];
            for t in tree.subtree(s) {
                below[t] = t != s && !kids.contains(&t);
            }
            let star: Vec<ESet> = (0..kids.len())
                .map(|j| (unassigned[j] | f) & !fj[j])
                .collect();
            // `F` is pushed through the whole tree, not only through `T_i`,
            // so that every node keeps a partition of the edges.
            for p in 0..w.len() {
                if below[p] {
                    continue;
                }
                for &c in tree.children(p) {
                    if p == s {
                        let j = kids.iter().position(|&t| t == c).unwrap();
                        w.down[c] = (w.down[c] & !f) | fj[j];
                        w.up[c] |= star[j];
                    } else if let Some(j) = kids.iter().position(|&t| t == p) {
                        w.down[c] &= !star[j];
                    } else if on_path[c] {
                        w.down[c] |= f;
                        w.up[c] &= !f;
                    } else {
                        w.down[c] &= !f;
                        w.up[c] |= f;
                    }
                }
            }
            // cones below nodes not yet considered only ever shrink
            for t in 0..w.len() {
                if let Some(p) = tree.parent(t) {
                    debug_assert!(
                        pos[p] <= i || w.down[t] & !ptd.down[t] == 0,
                        "cone above node {t} grew"
                    );
                }
            }
        }
        for t in 0..w.len() {
            if in_ti[t] {
                w.bags[t] = w.boundary_at(&ix, t);
            } else {
                // outside `T_i` bags only have to cover the boundary; all of
                // them are recomputed once their node enters `T_i`
                w.bags[t] |= w.boundary_at(&ix, t);
            }
        }
        #[cfg(debug_assertions)]
        if let Err(v) = validate_ptd(g, &w) {
            panic!("step {} at node {s} broke the decomposition: {v}", i + 1);
        }
        audit.push(AuditStep {
            step: i + 1,
            node: s,
            extensions: fj
                .iter()
                .map(|&f| bits::eiter(f).map(|e| ix.edges[e]).collect())
                .collect(),
            boundary: bits::to_vec(w.bags[s]),
            bags: w.bags.iter().map(|&b| bits::to_vec(b)).collect(),
        });
    }
    Ok((w, audit))
}

/// Audit trail as JSON lines.
pub fn audit_jsonl(steps: &[AuditStep]) -> String {
    let mut out = String::new();
    for s in steps {
        out.push_str(&serde_json::to_string(s).expect("audit records serialise"));
        out.push('\n');
    }
    out
}
