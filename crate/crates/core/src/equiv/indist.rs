//! Homomorphism indistinguishability over enumerated families, and the
//! bounded profile test for guarded equivalence.

use std::collections::HashMap;

use crate::bits;
use crate::enumerate::{graphs_up_to, guarded_with_labels, Family};
use crate::error::{Error, Result};
use crate::graph::{product, LabelledGraph, Vertex};
use crate::hom::{hom_count, hom_profile};
use crate::iso::quick_key;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomComparison {
    /// Every member up to the family's size bound has equal counts.
    IndistinguishableUpTo { max_n: usize, checked: usize },
    Distinguished {
        witness: LabelledGraph,
        hom_g: u128,
        hom_h: u128,
    },
}

impl HomComparison {
    pub fn distinguished(&self) -> bool {
        matches!(self, HomComparison::Distinguished { .. })
    }
}

pub fn hom_indistinguishable(
    g: &LabelledGraph,
    h: &LabelledGraph,
    family: &Family,
) -> Result<HomComparison> {
    for f in &family.members {
        let (a, b) = (hom_count(f, g)?, hom_count(f, h)?);
        if a != b {
            return Ok(HomComparison::Distinguished {
                witness: f.clone(),
                hom_g: a,
                hom_h: b,
            });
        }
    }
    Ok(HomComparison::IndistinguishableUpTo {
        max_n: family.max_n,
        checked: family.members.len(),
    })
}

/// Graphs with one vertex labelled 1 that have a guarded `k`-construction
/// tree of elimination depth at most `q`, up to `max_n` vertices.
pub fn guarded_rooted_family(k: usize, q: usize, max_n: usize) -> Result<Vec<LabelledGraph>> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for g in graphs_up_to(max_n)? {
        for v in 0..g.n() {
            if guarded_with_labels(&g, bits::bit(v), k, q)? {
                let f = g.set_label(1, v)?;
                if seen.insert(quick_key(&f)) {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcVerdict {
    /// Profiles over every rooted member up to `max_n` admit a bijection.
    /// Not a proof of equivalence: larger members might still separate.
    EquivalentUpTo {
        max_n: usize,
        members: usize,
        bijection: Vec<Vertex>,
    },
    Refuted(GcRefutation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GcRefutation {
    Sizes {
        g: usize,
        h: usize,
    },
    /// `v ↦ hom(F, g(1 → v))` and the same for `h`, sorted, differ.
    Witness {
        f: LabelledGraph,
        profile_g: Vec<u128>,
        profile_h: Vec<u128>,
    },
    /// Joint profiles differ but no single member or product of two does.
    Profiles,
}

impl GcVerdict {
    pub fn refuted(&self) -> bool {
        matches!(self, GcVerdict::Refuted(_))
    }
}

fn sorted_profile(f: &LabelledGraph, g: &LabelledGraph) -> Result<Vec<u128>> {
    let mut p = hom_profile(f, g)?;
    p.sort_unstable();
    Ok(p)
}

/// Looks for a bijection `f: V(g) → V(h)` with
/// `hom(F, g(1 → v)) = hom(F, h(1 → f(v)))` for all guarded rooted `F` up to
/// `max_n` vertices. A refutation is final; an affirmative answer holds up to
/// the size bound only.
pub fn gc_equivalent(
    g: &LabelledGraph,
    h: &LabelledGraph,
    k: usize,
    q: usize,
    max_n: usize,
) -> Result<GcVerdict> {
    if k == 0 || q == 0 {
        return Err(Error::Precondition("k and q must be positive".into()));
    }
    if g.n() != h.n() {
        return Ok(GcVerdict::Refuted(GcRefutation::Sizes {
            g: g.n(),
            h: h.n(),
        }));
    }
    let family = guarded_rooted_family(k, q, max_n)?;
    let (gu, hu) = (g.without_labels(), h.without_labels());
    let mut pg: Vec<Vec<u128>> = vec![Vec::new(); g.n()];
    let mut ph: Vec<Vec<u128>> = vec![Vec::new(); h.n()];
    for f in &family {
        let (a, b) = (hom_profile(f, &gu)?, hom_profile(f, &hu)?);
        let (mut sa, mut sb) = (a.clone(), b.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(GcVerdict::Refuted(GcRefutation::Witness {
                f: f.clone(),
                profile_g: sa,
                profile_h: sb,
            }));
        }
        for (v, x) in a.into_iter().enumerate() {
            pg[v].push(x);
        }
        for (v, x) in b.into_iter().enumerate() {
            ph[v].push(x);
        }
    }
    // vertices with equal joint profiles are interchangeable
    let mut classes: HashMap<&Vec<u128>, Vec<Vertex>> = HashMap::new();
    for (w, p) in ph.iter().enumerate() {
        classes.entry(p).or_default().push(w);
    }
    let mut bijection = vec![usize::MAX; g.n()];
    let mut joint_ok = true;
    for (v, p) in pg.iter().enumerate() {
        match classes.get_mut(p).and_then(Vec::pop) {
            Some(w) => bijection[v] = w,
            None => {
                joint_ok = false;
                break;
            }
        }
    }
    if joint_ok {
        return Ok(GcVerdict::EquivalentUpTo {
            max_n,
            members: family.len(),
            bijection,
        });
    }
    for i in 0..family.len() {
        for j in i..family.len() {
            let f = product(&family[i], &family[j]);
            let (sa, sb) = (sorted_profile(&f, &gu)?, sorted_profile(&f, &hu)?);
            if sa != sb {
                return Ok(GcVerdict::Refuted(GcRefutation::Witness {
                    f,
                    profile_g: sa,
                    profile_h: sb,
                }));
            }
        }
    }
    Ok(GcVerdict::Refuted(GcRefutation::Profiles))
}
