//! Homomorphism counts between labelled graphs.
//!
//! A homomorphism `F → G` maps edges to edges (a loop of `F` needs a loop in
//! `G`) and sends the vertex carrying label `i` in `F` to the vertex carrying
//! label `i` in `G`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, Vertex};

fn pinned(f: &LabelledGraph, g: &LabelledGraph) -> Result<Vec<Option<Vertex>>> {
    let mut pin = vec![None; f.n()];
    for (&l, &v) in f.labels() {
        let w = g.label(l).ok_or_else(|| {
            Error::Precondition(format!("label {l} is not assigned in the target"))
        })?;
        match pin[v] {
            Some(x) if x != w => return Ok(vec![]),
            _ => pin[v] = Some(w),
        }
    }
    Ok(pin)
}

/// Adjacency matrix of `g`, loops on the diagonal.
fn matrix(g: &LabelledGraph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for &(u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// `hom(f, g)` by plain backtracking in vertex order.
pub fn hom_count_brute(f: &LabelledGraph, g: &LabelledGraph) -> Result<u128> {
    let pin = pinned(f, g)?;
    if pin.is_empty() && f.n() > 0 {
        return Ok(0);
    }
    let a = matrix(g);
    let mut img = vec![usize::MAX; f.n()];
    fn go(
        f: &LabelledGraph,
        a: &[Vec<bool>],
        pin: &[Option<Vertex>],
        img: &mut [usize],
        v: usize,
    ) -> u128 {
        if v == f.n() {
            return 1;
        }
        let cands: Vec<usize> = match pin[v] {
            Some(w) => vec![w],
            None => (0..a.len()).collect(),
        };
        let mut total = 0;
        for w in cands {
            let ok = f.edges().iter().all(|&(x, y)| {
                let other = match (x == v, y == v) {
                    (true, _) => y,
                    (_, true) => x,
                    _ => return true,
                };
                other > v || a[w][if other == v { w } else { img[other] }]
            });
            if ok {
                img[v] = w;
                total += go(f, a, pin, img, v + 1);
            }
        }
        img[v] = usize::MAX;
        total
    }
    Ok(go(f, &a, &pin, &mut img, 0))
}

/// A table over assignments of `scope` (mixed radix `n`, first variable
/// least significant).
struct Factor {
    scope: Vec<usize>,
    table: Vec<u128>,
}

/// `hom(f, g)`: components of `f` are counted separately, each by
/// eliminating its free vertices in min-degree order.
pub fn hom_count(f: &LabelledGraph, g: &LabelledGraph) -> Result<u128> {
    let pin = pinned(f, g)?;
    if pin.is_empty() && f.n() > 0 {
        return Ok(0);
    }
    let a = matrix(g);
    let n = g.n();
    // constraints between pinned vertices
    for &(u, v) in f.edges() {
        if let (Some(x), Some(y)) = (pin[u], pin[v]) {
            if !a[x][y] {
                return Ok(0);
            }
        }
    }
    let free: Vec<usize> = (0..f.n()).filter(|&v| pin[v].is_none()).collect();
    if free.is_empty() {
        return Ok(1);
    }
    if n == 0 {
        return Ok(0);
    }
    // unary domains from loops and pinned neighbours
    let mut dom: Vec<Vec<bool>> = vec![vec![true; n]; f.n()];
    for &(u, v) in f.edges() {
        match (pin[u], pin[v]) {
            (None, None) if u == v => {
                for w in 0..n {
                    dom[u][w] &= a[w][w];
                }
            }
            (Some(x), None) => (0..n).for_each(|w| dom[v][w] &= a[x][w]),
            (None, Some(y)) => (0..n).for_each(|w| dom[u][w] &= a[y][w]),
            _ => {}
        }
    }
    let mut factors: Vec<Factor> = Vec::new();
    for &v in &free {
        factors.push(Factor {
            scope: vec![v],
            table: dom[v].iter().map(|&b| u128::from(b)).collect(),
        });
    }
    for &(u, v) in f.edges() {
        if u != v && pin[u].is_none() && pin[v].is_none() {
            let mut table = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    table[x + n * y] = u128::from(a[x][y]);
                }
            }
            factors.push(Factor {
                scope: vec![u, v],
                table,
            });
        }
    }

    let mut alive: Vec<bool> = vec![false; f.n()];
    for &v in &free {
        alive[v] = true;
    }
    let mut result: u128 = 1;
    for _ in 0..free.len() {
        // pick the free vertex with fewest live neighbours in the factor graph
        let v = (0..f.n())
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let mut s: Vec<usize> = factors
                    .iter()
                    .filter(|fa| fa.scope.contains(&v))
                    .flat_map(|fa| fa.scope.iter().copied())
                    .collect();
                s.sort_unstable();
                s.dedup();
                s.len()
            })
            .unwrap();
        alive[v] = false;
        let (mine, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|fa| fa.scope.contains(&v));
        factors = rest;
        let mut scope: Vec<usize> = mine
            .iter()
            .flat_map(|fa| fa.scope.iter().copied())
            .filter(|&x| x != v)
            .collect();
        scope.sort_unstable();
        scope.dedup();
        let size = n
            .checked_pow(scope.len() as u32)
            .filter(|&s| s <= 1 << 26)
            .ok_or_else(|| Error::Precondition("elimination table too large".into()))?;
        let mut table = vec![0u128; size];
        let mut assign = vec![0usize; f.n()];
        for (idx, slot) in table.iter_mut().enumerate() {
            let mut r = idx;
            for &x in &scope {
                assign[x] = r % n;
                r /= n;
            }
            let mut sum = 0u128;
            for w in 0..n {
                assign[v] = w;
                let mut prod = 1u128;
                for fa in &mine {
                    let mut i = 0;
                    let mut mul = 1;
                    for &x in &fa.scope {
                        i += assign[x] * mul;
                        mul *= n;
                    }
                    prod *= fa.table[i];
                    if prod == 0 {
                        break;
                    }
                }
                sum += prod;
            }
            *slot = sum;
        }
        if scope.is_empty() {
            result *= table[0];
            if result == 0 {
                return Ok(0);
            }
        } else {
            factors.push(Factor { scope, table });
        }
    }
    Ok(result)
}

/// `v ↦ hom(f, g(ℓ → v))` where `ℓ` is the single label of `f`.
pub fn hom_profile(f: &LabelledGraph, g: &LabelledGraph) -> Result<Vec<u128>> {
    let mut ls = f.labels().keys();
    let l = match (ls.next(), ls.next()) {
        (Some(&l), None) => l,
        _ => {
            return Err(Error::Precondition(
                "profile graphs carry exactly one label".into(),
            ))
        }
    };
    let base = g.without_labels();
    (0..g.n())
        .map(|v| hom_count(f, &base.set_label(l, v)?))
        .collect()
}

/// Hom counts into one fixed target, cached per source graph.
pub struct HomCache<'g> {
    target: &'g LabelledGraph,
    memo: HashMap<LabelledGraph, u128>,
}

impl<'g> HomCache<'g> {
    pub fn new(target: &'g LabelledGraph) -> Self {
        HomCache {
            target,
            memo: HashMap::new(),
        }
    }

    pub fn target(&self) -> &LabelledGraph {
        self.target
    }

    /// `hom(f, target)`, multiplied over the components of `f`.
    pub fn hom(&mut self, f: &LabelledGraph) -> Result<u128> {
        if let Some(&h) = self.memo.get(f) {
            return Ok(h);
        }
        let comps = f.components();
        if comps.len() <= 1 {
            return self.single(f);
        }
        let mut total = 1u128;
        for c in comps {
            total *= self.single(&f.induced(&c))?;
            if total == 0 {
                break;
            }
        }
        self.memo.insert(f.clone(), total);
        Ok(total)
    }

    fn single(&mut self, f: &LabelledGraph) -> Result<u128> {
        if let Some(&h) = self.memo.get(f) {
            return Ok(h);
        }
        let h = hom_count(f, self.target)?;
        self.memo.insert(f.clone(), h);
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_counts_vertices() {
        let g = LabelledGraph::grid(2, 3);
        assert_eq!(hom_count(&LabelledGraph::complete(1), &g).unwrap(), 6);
    }

    #[test]
    fn k2_into_k3() {
        let k3 = LabelledGraph::complete(3);
        assert_eq!(hom_count(&LabelledGraph::complete(2), &k3).unwrap(), 6);
        assert_eq!(
            hom_count_brute(&LabelledGraph::complete(2), &k3).unwrap(),
            6
        );
    }

    #[test]
    fn triangles() {
        let c3 = LabelledGraph::cycle(3);
        let two = c3.disjoint_union(&c3).unwrap();
        assert_eq!(hom_count(&c3, &two).unwrap(), 12);
        assert_eq!(hom_count(&c3, &LabelledGraph::cycle(6)).unwrap(), 0);
    }

    #[test]
    fn labels_pin_vertices() {
        let f = LabelledGraph::complete(2).set_label(1, 0).unwrap();
        let g = LabelledGraph::path(3);
        let prof = hom_profile(&f, &g).unwrap();
        assert_eq!(prof, vec![1, 2, 1]);
        assert!(hom_count(&f, &g).is_err());
        // two labels on one vertex of f need the same vertex in g
        let f2 = LabelledGraph::complete(1)
            .set_label(1, 0)
            .unwrap()
            .set_label(2, 0)
            .unwrap();
        let g2 = g.set_label(1, 0).unwrap().set_label(2, 1).unwrap();
        assert_eq!(hom_count(&f2, &g2).unwrap(), 0);
        assert_eq!(hom_count_brute(&f2, &g2).unwrap(), 0);
    }

    #[test]
    fn loops_need_loops() {
        let f = LabelledGraph::from_edges(1, &[(0, 0)]).unwrap();
        let g = LabelledGraph::from_edges(3, &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(hom_count(&f, &g).unwrap(), 1);
        assert_eq!(hom_count_brute(&f, &g).unwrap(), 1);
        assert_eq!(hom_count(&f, &LabelledGraph::complete(3)).unwrap(), 0);
    }

    #[test]
    fn elimination_agrees_with_backtracking() {
        let targets = [
            LabelledGraph::cycle(5),
            LabelledGraph::grid(2, 3),
            LabelledGraph::complete(4),
        ];
        for f in crate::enumerate::graphs_up_to(5).unwrap() {
            for g in &targets {
                assert_eq!(hom_count(&f, g).unwrap(), hom_count_brute(&f, g).unwrap());
            }
        }
    }
}
