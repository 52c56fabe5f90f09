//! The diagonal sweep on `h × l` grids with `h + 1` cops.
//!
//! Cop first places a diagonal of `h` cops near the middle column. Once the
//! robber has picked a side, the last cop closes a corner next to the
//! diagonal, and from then on the diagonal is rebuilt one cop at a time two
//! columns closer to the corner cell of the robber's side. A robber who
//! steps into a single cell that is surrounded by cops is caught in the next
//! round.

use std::collections::HashMap;

use super::{CopStrategy, StrategyEntry, Variant};
use crate::bits::{self, VSet};
use crate::error::{Error, Result};
use crate::graph::{grid_vertex, LabelledGraph};

/// Robber wins with `h + 1` cops for every `q` up to this bound (for `1 < h < l - 2`).
pub fn grid_lower_bound(h: usize, l: usize) -> usize {
    h * (l - h + 2) / 4
}

/// Round budget of the sweep strategy.
pub fn grid_upper_bound(h: usize, l: usize) -> usize {
    l * h / 4 + h + 1
}

/// Cop sets of the sweep toward the corner `(h, 1)` of a diagonal with
/// column offset `o`, mapped through `f` into real cells. Cells left of
/// column 1 are clipped to column 1.
fn sweep(h: usize, l: usize, o: usize, f: &dyn Fn(usize, isize) -> usize) -> Vec<VSet> {
    let cell = |i: usize, j: isize| f(i, j.max(1));
    let mut seq = Vec::new();
    let mut x = 0;
    for i in 1..=h {
        x |= bits::bit(cell(i, (o + i) as isize));
        seq.push(x);
    }
    let mut cur: Vec<(usize, isize)> = (1..=h).map(|i| (i, (o + i) as isize)).collect();
    cur.push((h, (o + h) as isize - 2));
    let to_set =
        |cur: &[(usize, isize)]| cur.iter().fold(0, |s, &(i, j)| s | bits::bit(cell(i, j)));
    seq.push(to_set(&cur));
    let (mut j, mut i) = ((o + 1) as isize, h);
    for _ in 0..4 * h * l {
        let src = (i, j + i as isize - 1);
        let dst = if i > 1 {
            (i - 1, (j + i as isize - 4).max(1))
        } else {
            (h, j + h as isize - 5)
        };
        if let Some(p) = cur.iter().position(|&c| c == src) {
            cur[p] = dst;
        } else {
            cur.push(dst);
        }
        if i > 1 {
            i -= 1;
        } else {
            i = h;
            j -= 2;
        }
        let s = to_set(&cur);
        seq.push(s);
        if bits::count(s) == 0 {
            break;
        }
    }
    seq
}

/// Clears a small leftover region by keeping its boundary and splitting it.
struct Finish<'a> {
    adj: &'a [VSet],
    k: usize,
    memo: HashMap<VSet, Option<(usize, usize)>>,
}

impl Finish<'_> {
    /// Rounds to clear `c` this way, and the first cell to take.
    fn solve(&mut self, c: VSet) -> Option<(usize, usize)> {
        if let Some(&r) = self.memo.get(&c) {
            return r;
        }
        let mut best: Option<(usize, usize)> = None;
        if bits::count(bits::neighbourhood(self.adj, c)) < self.k {
            for w in bits::iter(c) {
                let mut worst = 0;
                for sub in bits::components(self.adj, c & !bits::bit(w)) {
                    match self.solve(sub) {
                        Some((m, _)) => worst = worst.max(m),
                        None => {
                            worst = usize::MAX;
                            break;
                        }
                    }
                }
                if worst != usize::MAX && best.map_or(true, |(b, _)| worst + 1 < b) {
                    best = Some((worst + 1, w));
                }
            }
        }
        self.memo.insert(c, best);
        best
    }

    fn best(&mut self, c: VSet) -> Option<usize> {
        self.solve(c).map(|(_, w)| w)
    }
}

/// The sweep as a positional strategy on every reachable position.
pub fn grid_cop_strategy(h: usize, l: usize) -> Result<CopStrategy> {
    if !(3 < h && h + 3 < l) {
        return Err(Error::Precondition(format!(
            "need 3 < h < l - 3, got h = {h}, l = {l}"
        )));
    }
    let g = LabelledGraph::grid(h, l);
    let adj = g.adjacency();
    let all = bits::full(g.n());
    let a = l / 2 - h / 2;
    let b = l - a - h;
    let left = sweep(h, l, a, &|i, j| grid_vertex(l, i, j as usize));
    let right = sweep(h, l, b, &|i, j| {
        grid_vertex(l, h + 1 - i, l + 1 - j as usize)
    });
    debug_assert_eq!(left[h - 1], right[h - 1]);
    let corner_left = bits::bit(grid_vertex(l, h, 1));

    // marks positions inside the finishing phase
    const FINISH: usize = usize::MAX;
    let mut finish = Finish {
        adj: &adj,
        k: h + 1,
        memo: HashMap::new(),
    };

    let mut rules: HashMap<(VSet, VSet), VSet> = HashMap::new();
    // (cops, region, side, index into the side's sequence of `cops`)
    let mut stack: Vec<(VSet, VSet, Option<bool>, Option<usize>)> = vec![(0, all, None, None)];
    let mut seen = std::collections::HashSet::new();
    while let Some((x, c, side, idx)) = stack.pop() {
        if !seen.insert((x, c)) {
            continue;
        }
        let (next, side, idx) = if bits::count(c) == 1 {
            (bits::neighbourhood(&adj, c) | c, side, None)
        } else if let Some(w) = (idx.is_some() && bits::count(c) <= 2 * h)
            .then(|| finish.best(c))
            .flatten()
        {
            (
                bits::neighbourhood(&adj, c) | bits::bit(w),
                side,
                Some(FINISH),
            )
        } else {
            let r = idx.map_or(0, |r| r + 1);
            let side = side.or_else(|| (r >= h).then_some(c & corner_left == 0));
            let seq = if side == Some(true) { &right } else { &left };
            match seq.get(r) {
                Some(&s) => (s, side, Some(r)),
                None => continue,
            }
        };
        if let Some(&old) = rules.get(&(x, c)) {
            if old != next {
                return Err(Error::Invalid(
                    "sweep asks for two moves in one position".into(),
                ));
            }
        }
        rules.insert((x, c), next);
        let d = bits::reach(&adj, all & !(x & next), c);
        for sub in bits::components(&adj, d & !next) {
            stack.push((next, sub, side, idx));
        }
    }
    let mut entries: Vec<StrategyEntry> = rules
        .into_iter()
        .map(|((cops, region), next)| StrategyEntry { cops, region, next })
        .collect();
    entries.sort_by_key(|e| (e.cops, e.region));
    Ok(CopStrategy::new(Variant::Cr, h + 1, entries))
}
