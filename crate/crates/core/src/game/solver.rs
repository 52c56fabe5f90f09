use rustc_hash::FxHashMap;

use super::{Board, CopStrategy, StrategyEntry, Variant};
use crate::bits::{self, VSet};
use crate::error::{check_cap, Result};
use crate::graph::LabelledGraph;

#[derive(Clone, Copy, Debug)]
enum Entry {
    /// Fewest rounds needed, and the cop set reached by an optimal move.
    Exact(u8, VSet),
    /// No win within this many rounds.
    Lower(u8),
}

/// Memoised backward search over positions `(X, C)`.
///
/// Every move places exactly one new cop; removals are free and happen in
/// the same move. A move that only removes cops never helps Cop, since the
/// robber may simply stay where he is.
pub struct Solver {
    adj: Vec<VSet>,
    all: VSet,
    k: usize,
    variant: Variant,
    regions: Vec<VSet>,
    memo: FxHashMap<(VSet, VSet), Entry>,
}

impl Solver {
    pub fn new(g: &LabelledGraph, k: usize, variant: Variant, board: Board) -> Result<Self> {
        check_cap(g.n(), bits::MAX_BITS)?;
        let adj = g.adjacency();
        let all = bits::full(g.n());
        let mut regions = bits::components(&adj, all);
        if variant.edge() && board == Board::Plain {
            // Robber needs an edge to hide in.
            regions.retain(|&c| bits::count(c) > 1 || g.has_loop(bits::first(c).unwrap()));
        }
        Ok(Solver {
            adj,
            all,
            k,
            variant,
            regions,
            memo: FxHashMap::default(),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn cops(&self) -> usize {
        self.k
    }

    /// Escape spaces the robber may start in.
    pub fn initial_regions(&self) -> &[VSet] {
        &self.regions
    }

    pub fn states_explored(&self) -> usize {
        self.memo.len()
    }

    /// Robber's options after Cop moves from `x` to `next` while the robber
    /// occupies `c`. Empty means the robber is caught.
    pub fn children(&self, x: VSet, c: VSet, next: VSet) -> Vec<VSet> {
        let d = bits::reach(&self.adj, self.all & !(x & next), c);
        bits::components(&self.adj, d & !next)
    }

    /// Fewest rounds Cop needs from `(x, c)`, if at most `budget`.
    pub fn min_rounds(&mut self, x: VSet, c: VSet, budget: usize) -> Option<usize> {
        if budget == 0 {
            return None;
        }
        match self.memo.get(&(x, c)) {
            Some(&Entry::Exact(m, _)) => return (m as usize <= budget).then_some(m as usize),
            Some(&Entry::Lower(b)) if budget <= b as usize => return None,
            _ => {}
        }
        let nb = bits::neighbourhood(&self.adj, c);
        let mut best: Option<(usize, VSet)> = None;
        let mut limit = budget;
        let mut kept_sets: Vec<VSet> = bits::subsets(x)
            .filter(|&s| bits::count(s) < self.k && (!self.variant.monotone() || nb & !s == 0))
            .collect();
        kept_sets.sort_by_key(|&s| std::cmp::Reverse(bits::count(s)));
        'outer: for kept in kept_sets {
            let d = bits::reach(&self.adj, self.all & !kept, c);
            let inside = bits::iter(d);
            let outside = bits::iter(self.all & !d & !x);
            for v in inside.chain(outside) {
                let next = kept | bits::bit(v);
                let value = if d & bits::bit(v) != 0 {
                    let mut worst = Some(0);
                    for sub in bits::components(&self.adj, d & !bits::bit(v)) {
                        match self.min_rounds(next, sub, limit - 1) {
                            Some(m) => worst = worst.map(|w| w.max(m)),
                            None => {
                                worst = None;
                                break;
                            }
                        }
                    }
                    match worst {
                        Some(w) => w + 1,
                        None => continue,
                    }
                } else {
                    match self.min_rounds(next, d, limit - 1) {
                        Some(m) => m + 1,
                        None => continue,
                    }
                };
                best = Some((value, next));
                limit = value - 1;
                if limit == 0 {
                    break 'outer;
                }
            }
        }
        match best {
            Some((m, next)) => {
                self.memo.insert((x, c), Entry::Exact(m as u8, next));
                Some(m)
            }
            None => {
                let prev = match self.memo.get(&(x, c)) {
                    Some(&Entry::Lower(b)) => b as usize,
                    _ => 0,
                };
                self.memo
                    .insert((x, c), Entry::Lower(prev.max(budget) as u8));
                None
            }
        }
    }

    /// Rounds Cop needs against the best starting region, if at most `budget`.
    pub fn game_value(&mut self, budget: usize) -> Option<usize> {
        let mut worst = 0;
        for c in self.regions.clone() {
            worst = worst.max(self.min_rounds(0, c, budget)?);
        }
        Some(worst)
    }

    /// Optimal cop move from a position already solved as a Cop win.
    pub fn best_move(&self, x: VSet, c: VSet) -> Option<VSet> {
        match self.memo.get(&(x, c)) {
            Some(&Entry::Exact(_, next)) => Some(next),
            _ => None,
        }
    }

    /// Positional strategy on every position reachable when Cop plays
    /// optimal moves, if Cop wins within `q` rounds.
    pub fn cop_strategy(&mut self, q: usize) -> Option<CopStrategy> {
        self.game_value(q)?;
        let mut entries = FxHashMap::default();
        let mut stack: Vec<(VSet, VSet)> = self.regions.iter().map(|&c| (0, c)).collect();
        while let Some((x, c)) = stack.pop() {
            if entries.contains_key(&(x, c)) {
                continue;
            }
            let next = self.best_move(x, c).expect("solved positions carry a move");
            entries.insert((x, c), next);
            for sub in self.children(x, c, next) {
                stack.push((next, sub));
            }
        }
        let mut list: Vec<StrategyEntry> = entries
            .into_iter()
            .map(|((cops, region), next)| StrategyEntry { cops, region, next })
            .collect();
        list.sort_by_key(|e| (e.cops, e.region));
        Some(CopStrategy::new(self.variant, self.k, list))
    }
}

/// Robber-side evidence: for every cop move, an escape that survives.
pub struct RobberCertificate {
    solver: Solver,
    q: usize,
}

impl RobberCertificate {
    pub fn rounds(&self) -> usize {
        self.q
    }

    /// A starting region in which the robber survives all `q` rounds.
    pub fn initial(&mut self) -> VSet {
        let q = self.q;
        let regions = self.solver.regions.clone();
        *regions
            .iter()
            .find(|&&c| self.solver.min_rounds(0, c, q).is_none())
            .expect("robber wins from some region")
    }

    /// Robber's reply when Cop moves from `x` to `next` with the robber in
    /// `c` and `rounds_left` rounds remaining (including this one).
    pub fn respond(&mut self, x: VSet, c: VSet, next: VSet, rounds_left: usize) -> Option<VSet> {
        let kids = self.solver.children(x, c, next);
        kids.into_iter().find(|&sub| {
            rounds_left <= 1 || self.solver.min_rounds(next, sub, rounds_left - 1).is_none()
        })
    }

    pub fn solver(&mut self) -> &mut Solver {
        &mut self.solver
    }
}

pub enum Outcome {
    CopWins(CopStrategy),
    RobberWins(RobberCertificate),
}

impl Outcome {
    pub fn cop_wins(&self) -> bool {
        matches!(self, Outcome::CopWins(_))
    }
}

pub fn solve_on(
    g: &LabelledGraph,
    k: usize,
    q: usize,
    variant: Variant,
    board: Board,
) -> Result<Outcome> {
    let mut s = Solver::new(g, k, variant, board)?;
    Ok(match s.cop_strategy(q) {
        Some(st) => Outcome::CopWins(st),
        None => Outcome::RobberWins(RobberCertificate { solver: s, q }),
    })
}

/// Solves the game on `G` itself.
pub fn solve(g: &LabelledGraph, k: usize, q: usize, variant: Variant) -> Result<Outcome> {
    solve_on(g, k, q, variant, Board::Plain)
}
