use std::collections::HashSet;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{Board, Variant};
use crate::bits::{self, VSet};
use crate::decomp::{validate_pfc, PebbleForestCover};
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

/// One rule of a positional strategy: with cops on `cops` and the robber in
/// `region`, move the cops to `next`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyEntry {
    pub cops: VSet,
    pub region: VSet,
    pub next: VSet,
}

#[derive(Clone, Debug)]
pub struct CopStrategy {
    pub variant: Variant,
    pub cops: usize,
    entries: Vec<StrategyEntry>,
    map: FxHashMap<(VSet, VSet), VSet>,
}

impl CopStrategy {
    pub fn new(variant: Variant, cops: usize, entries: Vec<StrategyEntry>) -> Self {
        let map = entries
            .iter()
            .map(|e| ((e.cops, e.region), e.next))
            .collect();
        CopStrategy {
            variant,
            cops,
            entries,
            map,
        }
    }

    pub fn entries(&self) -> &[StrategyEntry] {
        &self.entries
    }

    pub fn next(&self, cops: VSet, region: VSet) -> Option<VSet> {
        self.map.get(&(cops, region)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Copy without the rule for `(cops, region)`.
    pub fn without(&self, cops: VSet, region: VSet) -> Self {
        let kept = self
            .entries
            .iter()
            .copied()
            .filter(|e| (e.cops, e.region) != (cops, region))
            .collect();
        CopStrategy::new(self.variant, self.cops, kept)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rules: Vec<JsonEntry> = self
            .entries
            .iter()
            .map(|e| JsonEntry {
                cops: bits::to_vec(e.cops),
                component: bits::first(e.region).unwrap_or(0),
                next: bits::to_vec(e.next),
            })
            .collect();
        serde_json::json!({ "variant": self.variant, "cops": self.cops, "rules": rules })
    }

    /// Reads the JSON form; regions are recovered from their representative.
    pub fn from_json(g: &LabelledGraph, v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            variant: Variant,
            cops: usize,
            rules: Vec<JsonEntry>,
        }
        let doc: Doc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Invalid(e.to_string()))?;
        let adj = g.adjacency();
        let mut entries = Vec::new();
        for r in doc.rules {
            if r.cops
                .iter()
                .chain(&r.next)
                .chain([&r.component])
                .any(|&v| v >= g.n())
            {
                return Err(Error::Invalid("rule names an unknown vertex".into()));
            }
            let cops = bits::from_iter(r.cops);
            let region = bits::reach(&adj, bits::full(g.n()) & !cops, bits::bit(r.component));
            entries.push(StrategyEntry {
                cops,
                region,
                next: bits::from_iter(r.next),
            });
        }
        Ok(CopStrategy::new(doc.variant, doc.cops, entries))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    cops: Vec<usize>,
    component: usize,
    next: Vec<usize>,
}

/// A play, as the sequence of positions `(cops, region)`, on which the
/// strategy fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LosingLine(pub Vec<(VSet, VSet)>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    Undefined {
        cops: VSet,
        region: VSet,
    },
    TooManyCops {
        cops: VSet,
        next: VSet,
    },
    TooManyPlacements {
        cops: VSet,
        next: VSet,
    },
    NotMonotone {
        cops: VSet,
        region: VSet,
        next: VSet,
    },
    RobberEscapes(LosingLine),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = bits::to_vec;
        match self {
            VerifyError::Undefined { cops, region } => {
                write!(
                    f,
                    "no move for cops {:?} with robber in {:?}",
                    v(*cops),
                    v(*region)
                )
            }
            VerifyError::TooManyCops { cops, next } => {
                write!(
                    f,
                    "move {:?} -> {:?} uses too many cops",
                    v(*cops),
                    v(*next)
                )
            }
            VerifyError::TooManyPlacements { cops, next } => {
                write!(
                    f,
                    "move {:?} -> {:?} places more than one cop",
                    v(*cops),
                    v(*next)
                )
            }
            VerifyError::NotMonotone { cops, region, next } => write!(
                f,
                "move {:?} -> {:?} lets the robber in {:?} escape further",
                v(*cops),
                v(*next),
                v(*region)
            ),
            VerifyError::RobberEscapes(line) => {
                write!(f, "robber survives along")?;
                for (c, r) in &line.0 {
                    write!(f, " ({:?}, {:?})", v(*c), v(*r))?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for VerifyError {}

fn initial_regions(g: &LabelledGraph, variant: Variant, board: Board) -> Vec<VSet> {
    let adj = g.adjacency();
    let mut regions = bits::components(&adj, bits::full(g.n()));
    if variant.edge() && board == Board::Plain {
        regions.retain(|&c| bits::count(c) > 1 || g.has_loop(bits::first(c).unwrap()));
    }
    regions
}

struct Checker<'a> {
    adj: Vec<VSet>,
    all: VSet,
    sigma: &'a CopStrategy,
    k: usize,
    monotone: bool,
    good: HashSet<(VSet, VSet, usize)>,
    line: Vec<(VSet, VSet)>,
}

impl Checker<'_> {
    fn play(&mut self, x: VSet, c: VSet, left: usize) -> std::result::Result<(), VerifyError> {
        if self.good.contains(&(x, c, left)) {
            return Ok(());
        }
        self.line.push((x, c));
        if left == 0 {
            return Err(VerifyError::RobberEscapes(LosingLine(self.line.clone())));
        }
        let next = self
            .sigma
            .next(x, c)
            .ok_or(VerifyError::Undefined { cops: x, region: c })?;
        if bits::count(next) > self.k {
            return Err(VerifyError::TooManyCops { cops: x, next });
        }
        if bits::count(next & !x) > 1 {
            return Err(VerifyError::TooManyPlacements { cops: x, next });
        }
        let d = bits::reach(&self.adj, self.all & !(x & next), c);
        if self.monotone && d != c {
            return Err(VerifyError::NotMonotone {
                cops: x,
                region: c,
                next,
            });
        }
        for sub in bits::components(&self.adj, d & !next) {
            self.play(next, sub, left - 1)?;
        }
        self.line.pop();
        self.good.insert((x, c, left));
        Ok(())
    }
}

/// Plays `sigma` against every robber and reports the first failure.
pub fn verify_strategy(
    g: &LabelledGraph,
    sigma: &CopStrategy,
    k: usize,
    q: usize,
    variant: Variant,
    board: Board,
) -> std::result::Result<(), VerifyError> {
    let mut ch = Checker {
        adj: g.adjacency(),
        all: bits::full(g.n()),
        sigma,
        k,
        monotone: variant.monotone(),
        good: HashSet::new(),
        line: Vec::new(),
    };
    for c in initial_regions(g, variant, board) {
        ch.line.clear();
        ch.play(0, c, q)?;
    }
    Ok(())
}

/// Cop follows the forest: from cops on `β(r)` she moves to `β(r')` for the
/// child `r'` of `r` whose subtree holds the robber.
pub fn cop_strategy_from_pfc(g: &LabelledGraph, pfc: &PebbleForestCover) -> Result<CopStrategy> {
    validate_pfc(g, pfc).map_err(|v| Error::Invalid(v.to_string()))?;
    let n = g.n();
    let adj = g.adjacency();
    let all = bits::full(n);
    let ancestors = |v: usize| -> Vec<usize> {
        let mut a = vec![v];
        let mut cur = v;
        while let Some(p) = pfc.parent[cur] {
            a.push(p);
            cur = p;
        }
        a
    };
    let beta = |v: usize| -> VSet {
        let chain = ancestors(v);
        // chain runs from v up to the root
        let mut b = 0;
        for (i, &u) in chain.iter().enumerate() {
            if chain[..i].iter().all(|&w| pfc.pebble[w] != pfc.pebble[u]) {
                b |= bits::bit(u);
            }
        }
        b
    };
    let below: Vec<VSet> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&w| ancestors(w).contains(&v))
                .fold(0, |s, w| s | bits::bit(w))
        })
        .collect();
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    let mut stack: Vec<(VSet, VSet, Option<usize>)> = bits::components(&adj, all)
        .into_iter()
        .map(|c| (0, c, None))
        .collect();
    while let Some((x, c, r)) = stack.pop() {
        if !seen.insert((x, c)) {
            continue;
        }
        let candidates: Vec<usize> = match r {
            None => (0..n).filter(|&v| pfc.parent[v].is_none()).collect(),
            Some(r) => (0..n).filter(|&v| pfc.parent[v] == Some(r)).collect(),
        };
        let step = candidates
            .into_iter()
            .find(|&v| c & !below[v] == 0)
            .ok_or_else(|| {
                Error::Invalid("robber region leaves the subtree of the current vertex".into())
            })?;
        let next = beta(step);
        entries.push(StrategyEntry {
            cops: x,
            region: c,
            next,
        });
        let d = bits::reach(&adj, all & !(x & next), c);
        for sub in bits::components(&adj, d & !next) {
            stack.push((next, sub, Some(step)));
        }
    }
    entries.sort_by_key(|e| (e.cops, e.region));
    Ok(CopStrategy::new(
        Variant::MonCr,
        pfc.pebbles_used(),
        entries,
    ))
}
