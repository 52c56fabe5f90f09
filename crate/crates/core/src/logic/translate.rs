//! Construction trees to formulas that pin down a hom count.

use std::collections::HashMap;

use super::formula::{Formula, F};
use crate::decomp::{validate_ct, ConstructionTree};
use crate::error::{Error, Result};

/// Formulas `φ_m` with `g ⊨ φ_m ⇔ hom(F, g) = m`, where `F` is the root
/// graph of a construction tree. Built lazily per `m` and shared between
/// values of `m`.
pub struct HomFormulas<'a> {
    ct: &'a ConstructionTree,
    guarded: bool,
    max_count: Option<usize>,
    memo: HashMap<(usize, usize, u128), F>,
    bodies: HashMap<(usize, u128, bool), F>,
}

impl<'a> HomFormulas<'a> {
    pub fn new(ct: &'a ConstructionTree, guarded: bool) -> Result<Self> {
        validate_ct(ct, None).map_err(|v| Error::Invalid(v.to_string()))?;
        if guarded && !ct.is_guarded() {
            return Err(Error::Precondition(
                "construction tree removes a label without a labelled neighbour".into(),
            ));
        }
        Ok(HomFormulas {
            ct,
            guarded,
            max_count: None,
            memo: HashMap::new(),
            bodies: HashMap::new(),
        })
    }

    /// Only targets with at most `n` vertices will be asked about; counting
    /// quantifiers beyond `n` are left out.
    pub fn for_size(mut self, n: usize) -> Self {
        self.max_count = Some(n);
        self
    }

    pub fn phi(&mut self, m: u128) -> F {
        self.node(self.ct.tree.root(), m)
    }

    fn node(&mut self, t: usize, m: u128) -> F {
        let ch = self.ct.tree.children(t).to_vec();
        match ch.len() {
            0 => self.leaf(t, m),
            1 => self.elimination(t, ch[0], m),
            r => self.prefix(t, r - 1, m),
        }
    }

    fn leaf(&mut self, t: usize, m: u128) -> F {
        let h = &self.ct.graphs[t];
        let first = |v: usize| h.labels_of(v)[0];
        let mut parts = Vec::new();
        for (&l, &v) in h.labels() {
            if first(v) != l {
                parts.push(Formula::eq(first(v), l));
            }
        }
        for &(u, v) in h.edges() {
            parts.push(Formula::edge(first(u), first(v)));
        }
        let one = Formula::and(parts);
        match m {
            0 => Formula::not(one),
            1 => one,
            _ => Formula::bot(),
        }
    }

    /// Product of the first `j + 1` children of `t`.
    fn prefix(&mut self, t: usize, j: usize, m: u128) -> F {
        if let Some(f) = self.memo.get(&(t, j, m)) {
            return f.clone();
        }
        let c = self.ct.tree.children(t)[j];
        let f = if j == 0 {
            self.node(c, m)
        } else if m == 0 {
            Formula::or(vec![self.prefix(t, j - 1, 0), self.node(c, 0)])
        } else {
            let mut alts = Vec::new();
            for d in 1..=m {
                if m % d == 0 {
                    alts.push(Formula::and(vec![
                        self.prefix(t, j - 1, m / d),
                        self.node(c, d),
                    ]));
                }
            }
            Formula::or(alts)
        };
        self.memo.insert((t, j, m), f.clone());
        f
    }

    /// Body `ψ` of the counting quantifiers at the elimination above `w`:
    /// `φ^w_m` (or its negation), behind a guard when guarded.
    fn body(&mut self, t: usize, w: usize, m: u128, negate: bool) -> F {
        if let Some(f) = self.bodies.get(&(w, m, negate)) {
            return f.clone();
        }
        let inner = self.node(w, m);
        let inner = if negate { Formula::not(inner) } else { inner };
        let f = match self.guard(t, w) {
            Some((l, l2)) => Formula::and(vec![Formula::edge(l, l2), inner]),
            None => inner,
        };
        self.bodies.insert((w, m, negate), f.clone());
        f
    }

    /// The removed label and, when guarded, a label on one of its neighbours.
    fn removed(&self, t: usize, w: usize) -> usize {
        let (pg, cg) = (&self.ct.graphs[t], &self.ct.graphs[w]);
        *cg.labels()
            .keys()
            .find(|l| pg.label(**l).is_none())
            .expect("elimination removes a label")
    }

    fn guard(&self, t: usize, w: usize) -> Option<(usize, usize)> {
        if !self.guarded {
            return None;
        }
        let cg = &self.ct.graphs[w];
        let l = self.removed(t, w);
        let v = cg.label(l).unwrap();
        let l2 = cg
            .neighbours(v)
            .into_iter()
            .flat_map(|u| cg.labels_of(u))
            .filter(|&x| x != l)
            .min()?;
        Some((l, l2))
    }

    fn elimination(&mut self, t: usize, w: usize, m: u128) -> F {
        if let Some(f) = self.memo.get(&(t, 0, m)) {
            return f.clone();
        }
        let l = self.removed(t, w);
        let cap = self.max_count.unwrap_or(usize::MAX);
        let mut alts = Vec::new();
        for parts in decompositions(m, 1, cap) {
            let c: usize = parts.iter().map(|p| p.1).sum();
            let mut conj = vec![Formula::exists_exactly(c, l, self.body(t, w, 0, true))];
            for &(mi, ci) in &parts {
                conj.push(Formula::exists_exactly(ci, l, self.body(t, w, mi, false)));
            }
            alts.push(Formula::and(conj));
        }
        let f = Formula::or(alts);
        self.memo.insert((t, 0, m), f.clone());
        f
    }
}

/// All ways to write `m = Σ c_i m_i` with distinct `m_i ≥ lo` (increasing),
/// `c_i ≥ 1` and `Σ c_i ≤ cap`.
fn decompositions(m: u128, lo: u128, cap: usize) -> Vec<Vec<(u128, usize)>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut v = lo;
    while v <= m {
        let mut c = 1usize;
        while c <= cap && (c as u128) * v <= m {
            for mut rest in decompositions(m - c as u128 * v, v + 1, cap - c) {
                rest.insert(0, (v, c));
                out.push(rest);
            }
            c += 1;
        }
        v += 1;
    }
    out
}

/// `φ_m` for the root graph of `ct`.
pub fn formula_from_ct(ct: &ConstructionTree, m: u128) -> Result<F> {
    Ok(HomFormulas::new(ct, false)?.phi(m))
}

/// `φ_m` using guarded quantifiers only; `ct` must be guarded.
pub fn guarded_formula_from_ct(ct: &ConstructionTree, m: u128) -> Result<F> {
    Ok(HomFormulas::new(ct, true)?.phi(m))
}
