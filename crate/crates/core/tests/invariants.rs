use proptest::prelude::*;

use deepwide::bits::{self, ESet};
use deepwide::enumerate::in_tkq;
use deepwide::equiv::bijective_pebble_game;
use deepwide::game::{solve_on, verify_strategy, Board, Outcome, Solver, Variant};
use deepwide::graph::product;
use deepwide::hom::{hom_count, hom_count_brute};
use deepwide::pretree::{
    exactify, f_extension, partition_width, strategy_tree, EdgeIndex, PreTreeDecomposition,
};
use deepwide::LabelledGraph;

fn build(n: usize, mask: &[bool]) -> LabelledGraph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask[i] {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    LabelledGraph::from_edges(n, &edges).unwrap()
}

fn graph(max_n: usize) -> impl Strategy<Value = LabelledGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |mask| build(n, &mask))
    })
}

/// Graph with labels `1..=labels`, each on an optional vertex.
fn labelled(max_n: usize, labels: usize, all: bool) -> impl Strategy<Value = LabelledGraph> {
    graph(max_n).prop_flat_map(move |g| {
        let n = g.n();
        proptest::collection::vec((0u8..5, 0..n), labels).prop_map(move |ls| {
            let mut g = g.clone();
            for (i, (coin, v)) in ls.into_iter().enumerate() {
                if all || coin < 3 {
                    g = g.set_label(i + 1, v).unwrap();
                }
            }
            g
        })
    })
}

/// Boundary of a partition computed from scratch: vertices touching two parts.
fn boundary_oracle(g: &LabelledGraph, parts: &[ESet]) -> usize {
    (0..g.n())
        .filter(|&v| {
            let touched = parts
                .iter()
                .filter(|&&p| {
                    g.edges()
                        .iter()
                        .enumerate()
                        .any(|(i, &(a, b))| p >> i & 1 == 1 && (a == v || b == v))
                })
                .count();
            touched >= 2
        })
        .count()
}

fn partition(m: usize, owner: &[usize], parts: usize) -> Vec<ESet> {
    let mut out = vec![0; parts];
    for e in 0..m {
        out[owner[e] % parts] |= bits::ebit(e);
    }
    out
}

/// Exact pre-tree-decompositions from solver strategies on `G°`.
fn exact_ptd(
    g: &LabelledGraph,
    k: usize,
    q: usize,
) -> Option<(LabelledGraph, PreTreeDecomposition)> {
    let gl = g.with_loops().unwrap();
    let sigma = Solver::new(&gl, k, Variant::ECr, Board::Looped)
        .unwrap()
        .cop_strategy(q)?;
    let st = strategy_tree(&gl, &sigma).unwrap();
    let ex = exactify(&gl, &st.ptd).unwrap();
    Some((gl, ex))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn width_is_submodular(
        g in graph(8),
        owners in proptest::collection::vec((0usize..4, 0usize..4), 28),
        i in 0usize..3,
        j in 0usize..3,
    ) {
        prop_assume!(g.m() > 0);
        let ix = EdgeIndex::new(&g).unwrap();
        let a: Vec<usize> = owners.iter().map(|o| o.0).collect();
        let b: Vec<usize> = owners.iter().map(|o| o.1).collect();
        let (pi, pj) = (partition(g.m(), &a, 3), partition(g.m(), &b, 3));
        let (x, y) = (pi[i], pj[j]);
        prop_assume!(x | y != ix.all);
        prop_assert_eq!(partition_width(&ix, &pi), boundary_oracle(&g, &pi));
        let lhs = partition_width(&ix, &pi) + partition_width(&ix, &pj);
        let rhs = partition_width(&ix, &f_extension(&pi, i, ix.all & !y))
            + partition_width(&ix, &f_extension(&pj, j, ix.all & !x));
        prop_assert!(lhs >= rhs, "{} < {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn exact_paths_nest(g in graph(7), k in 1usize..=3, q in 1usize..=5) {
        let Some((gl, p)) = exact_ptd(&g, k, q) else { return Ok(()) };
        let ix = EdgeIndex::new(&gl).unwrap();
        prop_assert!(p.is_exact(&ix));
        for t in 0..p.len() {
            if let Some(s) = p.tree.parent(t) {
                if p.tree.parent(s).is_some() {
                    prop_assert_eq!(p.down[s] & p.down[t], p.down[t]);
                    prop_assert_eq!(p.up[t] & p.up[s], p.up[s]);
                }
            }
        }
    }

    #[test]
    fn exact_subtrees_partition_edges(g in graph(7), k in 1usize..=3, q in 1usize..=5, radius in 0usize..4) {
        let Some((gl, p)) = exact_ptd(&g, k, q) else { return Ok(()) };
        let ix = EdgeIndex::new(&gl).unwrap();
        for top in 0..p.len() {
            if p.tree.is_leaf(top) {
                continue;
            }
            // nodes below `top` at distance at most `radius`
            let inside: Vec<usize> =
                p.tree.subtree(top).into_iter().filter(|&t| p.tree.depth_of(t) - p.tree.depth_of(top) <= radius).collect();
            let mut parts: Vec<ESet> = Vec::new();
            if p.tree.parent(top).is_some() {
                parts.push(p.up[top]);
            }
            for &s in &inside {
                if p.tree.is_leaf(s) {
                    parts.push(p.down[s]);
                }
                for &c in p.tree.children(s) {
                    if !inside.contains(&c) {
                        parts.push(p.down[c]);
                    }
                }
            }
            let mut seen: ESet = 0;
            for x in &parts {
                prop_assert_eq!(seen & x, 0);
                seen |= x;
            }
            prop_assert_eq!(seen, ix.all);
        }
    }

    #[test]
    fn exact_iff_monotone(g in graph(6), k in 1usize..=3, q in 1usize..=5, monotone in any::<bool>()) {
        let gl = g.with_loops().unwrap();
        let v = if monotone { Variant::MonECr } else { Variant::ECr };
        let Outcome::CopWins(sigma) = solve_on(&gl, k, q, v, Board::Looped).unwrap() else { return Ok(()) };
        let st = strategy_tree(&gl, &sigma).unwrap();
        let ix = EdgeIndex::new(&gl).unwrap();
        let exact = st.ptd.inexact_edges(&ix).is_empty();
        let is_monotone = verify_strategy(&gl, &sigma, k, q, Variant::MonECr, Board::Looped).is_ok();
        prop_assert_eq!(exact, is_monotone);
        if monotone {
            prop_assert!(exact);
        }
    }

    #[test]
    fn self_loops_sit_above_or_in_a_leaf(g in graph(6), k in 1usize..=3, q in 1usize..=5) {
        let gl = g.with_loops().unwrap();
        let Outcome::CopWins(sigma) = solve_on(&gl, k, q, Variant::ECr, Board::Looped).unwrap() else { return Ok(()) };
        let st = strategy_tree(&gl, &sigma).unwrap();
        let p = &st.ptd;
        let ix = EdgeIndex::new(&gl).unwrap();
        for s in 0..p.len() {
            let Some(ps) = p.tree.parent(s) else { continue };
            if p.tree.is_leaf(s) {
                continue;
            }
            for v in bits::iter(p.bags[s]) {
                let vv = bits::ebit(ix.edge_of(v, v).unwrap());
                let leaf = p.tree.children(s).iter().any(|&c| p.down[c] == vv);
                prop_assert!(p.up[s] & vv != 0 || leaf);
            }
            for v in 0..g.n() {
                if g.degree(v) == 0 {
                    continue;
                }
                let vv = bits::ebit(ix.edge_of(v, v).unwrap());
                let leaf = p.tree.children(s).iter().any(|&c| p.down[c] == vv);
                let fresh = p.bags[s] & !p.bags[ps] & bits::bit(v) != 0;
                prop_assert_eq!(leaf, st.branching[s] && fresh, "s={} v={}", s, v);
            }
        }
    }

    #[test]
    fn cop_wins_are_monotone_in_k_and_q(g in graph(7), k in 1usize..=3, q in 1usize..=4) {
        let wins = |k, q| solve_on(&g, k, q, Variant::Cr, Board::Plain).unwrap().cop_wins();
        if wins(k, q) {
            prop_assert!(wins(k + 1, q));
            prop_assert!(wins(k, q + 1));
        }
    }

    #[test]
    fn minors_stay_in_the_class(g in graph(6), k in 1usize..=3, q in 1usize..=4) {
        prop_assume!(in_tkq(&g, k, q).unwrap());
        for v in 0..g.n() {
            if g.n() > 1 {
                prop_assert!(in_tkq(&g.delete_vertex(v).unwrap(), k, q).unwrap());
            }
        }
        for &(u, v) in g.edges() {
            prop_assert!(in_tkq(&g.delete_edge(u, v).unwrap(), k, q).unwrap());
            prop_assert!(in_tkq(&g.contract_edge(u, v).unwrap(), k, q).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hom_of_product_multiplies(f1 in labelled(4, 3, false), f2 in labelled(4, 3, false), g in labelled(5, 3, true)) {
        let f = product(&f1, &f2);
        prop_assume!(!f.has_loops());
        let lhs = hom_count(&f, &g).unwrap();
        prop_assert_eq!(lhs, hom_count_brute(&f, &g).unwrap());
        prop_assert_eq!(lhs, hom_count(&f1, &g).unwrap() * hom_count(&f2, &g).unwrap());
    }

    #[test]
    fn removing_a_label_sums_over_targets(f in labelled(4, 2, false), g in labelled(5, 2, true)) {
        prop_assume!(f.label(1).is_some());
        let lhs = hom_count(&f.remove_label(1).unwrap(), &g).unwrap();
        let base = g.remove_label(1).unwrap();
        let mut rhs = 0;
        for v in 0..g.n() {
            rhs += hom_count(&f, &base.set_label(1, v).unwrap()).unwrap();
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fully_labelled_homs_are_unique(f in labelled(4, 4, true), g in labelled(5, 4, true)) {
        prop_assume!(f.is_fully_labelled());
        prop_assert!(hom_count(&f, &g).unwrap() <= 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn pebble_game_is_monotone(a in graph(5), b in graph(5), k in 1usize..=3, q in 1usize..=3) {
        prop_assume!(a.n() == b.n());
        let d = |k, q| bijective_pebble_game(&a, &b, k, q, &[]).unwrap().duplicator_wins();
        if d(k, q) {
            prop_assert!(d(k, q - 1));
            if k > 1 {
                prop_assert!(d(k - 1, q));
            }
        }
    }
}
