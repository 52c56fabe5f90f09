//! Small vertex sets packed into a `u64`.

pub type VSet = u64;

pub const MAX_BITS: usize = 64;

#[inline]
pub fn bit(v: usize) -> VSet {
    1u64 << v
}

#[inline]
pub fn full(n: usize) -> VSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn count(s: VSet) -> usize {
    s.count_ones() as usize
}

#[inline]
pub fn first(s: VSet) -> Option<usize> {
    if s == 0 {
        None
    } else {
        Some(s.trailing_zeros() as usize)
    }
}

pub fn iter(mut s: VSet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let v = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(v)
        }
    })
}

pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> VSet {
    it.into_iter().fold(0, |s, v| s | bit(v))
}

pub fn to_vec(s: VSet) -> Vec<usize> {
    iter(s).collect()
}

/// Vertices reachable from `start` inside `allowed`.
pub fn reach(adj: &[VSet], allowed: VSet, start: VSet) -> VSet {
    let mut seen = start & allowed;
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in iter(frontier) {
            next |= adj[v];
        }
        next &= allowed & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

/// Connected components of the subgraph induced by `allowed`, ordered by least vertex.
pub fn components(adj: &[VSet], allowed: VSet) -> Vec<VSet> {
    let mut rest = allowed;
    let mut out = Vec::new();
    while rest != 0 {
        let c = reach(adj, allowed, rest & rest.wrapping_neg());
        out.push(c);
        rest &= !c;
    }
    out
}

/// Open neighbourhood of a set.
pub fn neighbourhood(adj: &[VSet], s: VSet) -> VSet {
    let mut out = 0;
    for v in iter(s) {
        out |= adj[v];
    }
    out & !s
}

/// Iterates over all subsets of `s` (including the empty set and `s` itself).
pub fn subsets(s: VSet) -> impl Iterator<Item = VSet> {
    let mut sub = s;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & s;
        }
        Some(cur)
    })
}

/// Edge sets over an edge list of at most 128 entries.
pub type ESet = u128;

pub const MAX_EDGES: usize = 128;

#[inline]
pub fn ebit(i: usize) -> ESet {
    1u128 << i
}

#[inline]
pub fn efull(m: usize) -> ESet {
    if m >= 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    }
}

#[inline]
pub fn ecount(s: ESet) -> usize {
    s.count_ones() as usize
}

pub fn eiter(mut s: ESet) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_of_two_paths() {
        // 0-1  2-3-4
        let mut adj = vec![0u64; 5];
        for (u, v) in [(0, 1), (2, 3), (3, 4)] {
            adj[u] |= bit(v);
            adj[v] |= bit(u);
        }
        let cs = components(&adj, full(5));
        assert_eq!(cs, vec![0b11, 0b11100]);
        assert_eq!(
            components(&adj, full(5) & !bit(3)),
            vec![0b11, bit(2), bit(4)]
        );
    }

    #[test]
    fn subsets_enumerates_all() {
        assert_eq!(subsets(0b101).count(), 4);
        assert_eq!(subsets(0).collect::<Vec<_>>(), vec![0]);
    }
}
