use crate::bits::{self, VSet};
use crate::decomp::{RootedTree, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    /// The bag gains `v` compared with its child.
    Introduce(usize),
    /// The child's bag has the extra vertex `v`.
    Forget(usize),
    Join,
}

struct Builder {
    parent: Vec<Option<usize>>,
    bags: Vec<VSet>,
}

impl Builder {
    fn node(&mut self, parent: Option<usize>, bag: VSet) -> usize {
        self.parent.push(parent);
        self.bags.push(bag);
        self.bags.len() - 1
    }

    /// Walks from node `a` to a fresh node with bag `target`, shrinking first.
    fn path(&mut self, a: usize, target: VSet) -> usize {
        let mut cur = a;
        let mut bag = self.bags[a];
        for v in bits::iter(bag & !target) {
            bag &= !bits::bit(v);
            cur = self.node(Some(cur), bag);
        }
        for v in bits::iter(target & !bag) {
            bag |= bits::bit(v);
            cur = self.node(Some(cur), bag);
        }
        cur
    }

    fn attach(&mut self, td: &TreeDecomposition, t: usize, x: usize) {
        let ch = td.tree.children(t);
        match ch.len() {
            0 => {
                self.path(x, 0);
            }
            1 => {
                let y = self.path(x, td.bags[ch[0]]);
                self.attach(td, ch[0], y);
            }
            m => {
                let mut host = x;
                for (i, &c) in ch.iter().enumerate() {
                    let slot = if i + 1 == m {
                        host
                    } else {
                        let y = self.node(Some(host), td.bags[t]);
                        host = self.node(Some(host), td.bags[t]);
                        y
                    };
                    let z = self.path(slot, td.bags[c]);
                    self.attach(td, c, z);
                }
            }
        }
    }
}

/// Nice tree-decomposition with empty root and leaf bags. Width and depth
/// are unchanged.
pub fn make_nice(td: &TreeDecomposition) -> TreeDecomposition {
    let mut b = Builder {
        parent: Vec::new(),
        bags: Vec::new(),
    };
    let r = td.tree.root();
    let top = b.node(None, 0);
    let x = b.path(top, td.bags[r]);
    b.attach(td, r, x);
    TreeDecomposition {
        tree: RootedTree::from_parents(b.parent).expect("builder emits a tree"),
        bags: b.bags,
    }
}

/// Classifies `t`, or `None` if `t` breaks the nice shape.
pub fn nice_kind(td: &TreeDecomposition, t: usize) -> Option<NiceKind> {
    let ch = td.tree.children(t);
    let b = td.bags[t];
    match ch {
        [] => (b == 0).then_some(NiceKind::Leaf),
        [c] => {
            let cb = td.bags[*c];
            if cb & !b == 0 && bits::count(b & !cb) == 1 {
                Some(NiceKind::Introduce(bits::first(b & !cb).unwrap()))
            } else if b & !cb == 0 && bits::count(cb & !b) == 1 {
                Some(NiceKind::Forget(bits::first(cb & !b).unwrap()))
            } else {
                None
            }
        }
        [c1, c2] => (td.bags[*c1] == b && td.bags[*c2] == b).then_some(NiceKind::Join),
        _ => None,
    }
}

pub fn is_nice(td: &TreeDecomposition) -> bool {
    td.bags[td.tree.root()] == 0 && (0..td.tree.len()).all(|t| nice_kind(td, t).is_some())
}
