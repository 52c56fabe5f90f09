use super::exactify::exactify;
use super::ptd::{EdgeIndex, PreTreeDecomposition};
use super::strategy_tree::strategy_tree;
use crate::bits::{self, ESet};
use crate::decomp::{tighten, RootedTree, TreeDecomposition};
use crate::error::{Error, Result};
use crate::game::{Board, Solver, Variant};
use crate::graph::LabelledGraph;

/// Tree-decomposition of the loopless graph underlying `g` (which carries a
/// loop at every vertex) read off an exact pre-tree-decomposition.
///
/// Bags are kept, except that a leaf holding only the loop of an isolated
/// vertex gets that vertex as its bag.
pub fn exact_ptd_to_td(g: &LabelledGraph, ptd: &PreTreeDecomposition) -> Result<TreeDecomposition> {
    let ix = EdgeIndex::new(g)?;
    if !ptd.is_exact(&ix) {
        return Err(Error::Invalid("pre-tree-decomposition is not exact".into()));
    }
    let adj = g.adjacency();
    let mut bags = ptd.bags.clone();
    for t in 0..ptd.len() {
        if !ptd.tree.is_leaf(t) || bits::ecount(ptd.down[t]) != 1 {
            continue;
        }
        let (u, v) = ix.edges[bits::eiter(ptd.down[t]).next().unwrap()];
        if u == v && adj[v] == 0 {
            bags[t] = bits::bit(v);
        }
    }
    Ok(TreeDecomposition {
        tree: ptd.tree.clone(),
        bags,
    })
}

/// Exact pre-tree-decomposition of `G°` built from a tree-decomposition of
/// the loopless graph `g`.
pub fn td_to_exact_ptd(g: &LabelledGraph, td: &TreeDecomposition) -> Result<PreTreeDecomposition> {
    if g.has_loops() {
        return Err(Error::Precondition("expects a loopless graph".into()));
    }
    crate::decomp::validate_td(g, td).map_err(|v| Error::Invalid(v.to_string()))?;
    let td = tighten(g, td);
    let gl = g.with_loops()?;
    let ix = EdgeIndex::new(&gl)?;
    let adj = g.adjacency();

    let mut tree = RootedTree::single();
    let mut bags = vec![0];
    // leaf cone of every node; inner nodes are filled in afterwards
    let mut leaf_edge: Vec<Option<usize>> = vec![None];
    let add = |tree: &mut RootedTree,
               bags: &mut Vec<u64>,
               leaf_edge: &mut Vec<Option<usize>>,
               p,
               bag,
               e| {
        let t = tree.add_child(p);
        bags.push(bag);
        leaf_edge.push(e);
        t
    };

    for c in bits::components(&adj, bits::full(g.n())) {
        if bits::count(c) == 1 {
            let v = bits::first(c).unwrap();
            add(&mut tree, &mut bags, &mut leaf_edge, 0, 0, ix.edge_of(v, v));
            continue;
        }
        let holders: Vec<usize> = (0..td.tree.len())
            .filter(|&t| td.bags[t] & c != 0)
            .collect();
        let top = *holders
            .iter()
            .find(|&&t| td.tree.parent(t).map_or(true, |p| td.bags[p] & c == 0))
            .expect("a component meets some bag");
        // copy the subtree of holders below `top`
        let mut copy = vec![usize::MAX; td.tree.len()];
        let mut stack = vec![(top, 0usize)];
        while let Some((t, p)) = stack.pop() {
            let id = add(&mut tree, &mut bags, &mut leaf_edge, p, 0, None);
            copy[t] = id;
            for &ch in td.tree.children(t) {
                if td.bags[ch] & c != 0 {
                    stack.push((ch, id));
                }
            }
        }
        for v in bits::iter(c) {
            let t = *holders
                .iter()
                .find(|&&t| td.bags[t] & bits::bit(v) != 0)
                .unwrap();
            add(
                &mut tree,
                &mut bags,
                &mut leaf_edge,
                copy[t],
                bits::bit(v),
                ix.edge_of(v, v),
            );
        }
        for &(u, v) in g.edges() {
            if c & bits::bit(u) == 0 {
                continue;
            }
            let e = bits::bit(u) | bits::bit(v);
            let t = *holders.iter().find(|&&t| td.bags[t] & e == e).unwrap();
            add(
                &mut tree,
                &mut bags,
                &mut leaf_edge,
                copy[t],
                e,
                ix.edge_of(u, v),
            );
        }
    }

    let n = tree.len();
    let mut down: Vec<ESet> = vec![0; n];
    for &t in tree.bfs().iter().rev() {
        if let Some(e) = leaf_edge[t] {
            down[t] = bits::ebit(e);
        }
        if let Some(p) = tree.parent(t) {
            if p != tree.root() {
                down[p] |= down[t];
            }
        }
    }
    let up: Vec<ESet> = (0..n)
        .map(|t| {
            if t == tree.root() {
                0
            } else {
                ix.all & !down[t]
            }
        })
        .collect();
    let mut ptd = PreTreeDecomposition {
        tree,
        bags,
        down,
        up,
    };
    for t in 0..n {
        if leaf_edge[t].is_none() {
            ptd.bags[t] = ptd.boundary_at(&ix, t);
        }
    }
    Ok(ptd)
}

/// Tree-decomposition of width `< k` and depth `≤ q` obtained from a cop
/// win in `CR^k_q(g)`: solve the edge game on `G°`, build the strategy tree,
/// make it exact and read off the bags.
pub fn cop_win_to_td(g: &LabelledGraph, k: usize, q: usize) -> Result<TreeDecomposition> {
    if g.has_loops() {
        return Err(Error::Precondition("expects a loopless graph".into()));
    }
    let gl = g.with_loops()?;
    let mut solver = Solver::new(&gl, k, Variant::ECr, Board::Looped)?;
    let sigma = solver.cop_strategy(q).ok_or_else(|| {
        Error::Precondition(format!("Cop does not win with {k} cops in {q} rounds"))
    })?;
    let st = strategy_tree(&gl, &sigma)?;
    let exact = exactify(&gl, &st.ptd)?;
    let td = drop_empty_bags(&exact_ptd_to_td(&gl, &exact)?);
    if td.width() >= k as isize || td.depth() > q {
        return Err(Error::Invalid(format!(
            "decomposition of width {} and depth {} exceeds the bounds",
            td.width(),
            td.depth()
        )));
    }
    Ok(td)
}

/// Contracts every non-root node with an empty bag into its parent, and an
/// empty root with a single child into that child.
pub fn drop_empty_bags(td: &TreeDecomposition) -> TreeDecomposition {
    let t = &td.tree;
    let mut root = t.root();
    while td.bags[root] == 0 && t.children(root).len() == 1 {
        root = t.children(root)[0];
    }
    let mut parent = vec![None];
    let mut bags = vec![td.bags[root]];
    let mut stack: Vec<(usize, usize)> = t.children(root).iter().map(|&c| (c, 0)).collect();
    while let Some((v, p)) = stack.pop() {
        let here = if td.bags[v] == 0 {
            p
        } else {
            parent.push(Some(p));
            bags.push(td.bags[v]);
            bags.len() - 1
        };
        stack.extend(t.children(v).iter().map(|&c| (c, here)));
    }
    TreeDecomposition {
        tree: RootedTree::from_parents(parent).expect("contraction keeps a tree"),
        bags,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{oracle, validate_td};
    use crate::enumerate::graphs;
    use crate::pretree::validate_ptd;

    #[test]
    fn k1_gives_one_bag() {
        let td = cop_win_to_td(&LabelledGraph::complete(1), 1, 1).unwrap();
        assert_eq!(td.bags, vec![0b1]);
    }

    #[test]
    fn path_of_seven() {
        let g = LabelledGraph::path(7);
        let td = cop_win_to_td(&g, 2, 4).unwrap();
        validate_td(&g, &td).unwrap();
        assert!(td.width() <= 1 && td.depth() <= 4);
        assert!(cop_win_to_td(&g, 2, 3).is_err());
    }

    #[test]
    fn one_bag_of_k2() {
        let g = LabelledGraph::complete(2);
        let ptd = td_to_exact_ptd(&g, &TreeDecomposition::single_bag(0b11)).unwrap();
        let gl = g.with_loops().unwrap();
        validate_ptd(&gl, &ptd).unwrap();
        assert!(ptd.is_exact(&EdgeIndex::new(&gl).unwrap()));
        let leaves: Vec<usize> = (0..ptd.len()).filter(|&t| ptd.tree.is_leaf(t)).collect();
        assert_eq!(leaves.len(), 3);
    }

    #[test]
    fn pipeline_on_all_graphs_up_to_five() {
        for n in 1..=5 {
            for g in graphs(n).unwrap() {
                let tw = oracle::treewidth(&g).unwrap();
                let k = (tw + 1) as usize;
                let q = oracle::treedepth(&g).unwrap();
                let td = cop_win_to_td(&g, k.max(1), q).unwrap();
                validate_td(&g, &td).unwrap();
                let back = td_to_exact_ptd(&g, &td).unwrap();
                let gl = g.with_loops().unwrap();
                validate_ptd(&gl, &back).unwrap();
                let again = exact_ptd_to_td(&gl, &back).unwrap();
                validate_td(&g, &again).unwrap();
                assert!(again.width() <= td.width().max(0) && again.depth() <= td.depth());
            }
        }
    }
}
