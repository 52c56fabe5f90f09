use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rooted tree on nodes `0..len`, stored as a parent array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Option<usize>>", into = "Vec<Option<usize>>")]
pub struct RootedTree {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl TryFrom<Vec<Option<usize>>> for RootedTree {
    type Error = Error;
    fn try_from(parent: Vec<Option<usize>>) -> Result<Self> {
        RootedTree::from_parents(parent)
    }
}

impl From<RootedTree> for Vec<Option<usize>> {
    fn from(t: RootedTree) -> Self {
        t.parent
    }
}

impl RootedTree {
    pub fn single() -> Self {
        RootedTree {
            parent: vec![None],
            children: vec![Vec::new()],
            root: 0,
        }
    }

    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let roots: Vec<usize> = (0..n).filter(|&t| parent[t].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Invalid(format!(
                "tree needs exactly one root, found {}",
                roots.len()
            )));
        }
        let mut children = vec![Vec::new(); n];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::Invalid(format!("node {t} has unknown parent {p}")));
                }
                children[p].push(t);
            }
        }
        let tree = RootedTree {
            parent,
            children,
            root: roots[0],
        };
        if tree.preorder().len() != n {
            return Err(Error::Invalid("parent array contains a cycle".into()));
        }
        Ok(tree)
    }

    pub fn add_child(&mut self, p: usize) -> usize {
        let t = self.parent.len();
        self.parent.push(Some(p));
        self.children.push(Vec::new());
        self.children[p].push(t);
        t
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent[t]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    /// Leaves are the non-root nodes without children.
    pub fn is_leaf(&self, t: usize) -> bool {
        t != self.root && self.children[t].is_empty()
    }

    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            out.push(t);
            if out.len() > self.len() {
                break;
            }
            stack.extend(self.children[t].iter().rev());
        }
        out
    }

    pub fn bfs(&self) -> Vec<usize> {
        let mut out = vec![self.root];
        let mut i = 0;
        while i < out.len() {
            let t = out[i];
            out.extend_from_slice(&self.children[t]);
            i += 1;
        }
        out
    }

    /// Nodes from the root down to `t`, inclusive.
    pub fn path_from_root(&self, t: usize) -> Vec<usize> {
        let mut p = vec![t];
        let mut cur = t;
        while let Some(q) = self.parent[cur] {
            p.push(q);
            cur = q;
        }
        p.reverse();
        p
    }

    /// `a ⪯ b`: `a` lies on the path from the root to `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut cur = Some(b);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    pub fn depth_of(&self, t: usize) -> usize {
        self.path_from_root(t).len() - 1
    }

    /// Same tree re-rooted at `r`.
    pub fn rerooted(&self, r: usize) -> RootedTree {
        let n = self.len();
        let mut adj = vec![Vec::new(); n];
        for t in 0..n {
            if let Some(p) = self.parent[t] {
                adj[t].push(p);
                adj[p].push(t);
            }
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut stack = vec![r];
        seen[r] = true;
        while let Some(t) = stack.pop() {
            for &s in &adj[t] {
                if !seen[s] {
                    seen[s] = true;
                    parent[s] = Some(t);
                    stack.push(s);
                }
            }
        }
        let mut tree = RootedTree::from_parents(parent).expect("re-rooting keeps a tree");
        for c in &mut tree.children {
            c.sort_unstable();
        }
        tree
    }

    /// Subtree node sets: `below[t]` lists `t` and all its descendants.
    pub fn subtree(&self, t: usize) -> Vec<usize> {
        let mut out = vec![t];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(&self.children[out[i]]);
            i += 1;
        }
        out
    }
}
