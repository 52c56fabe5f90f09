use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::graph::LabelledGraph;

/// Shared formula node. Large formulas are DAGs; every traversal below
/// memoises on node identity.
pub type F = Rc<Formula>;

/// Counting first-order logic over the edge relation. Variables are label
/// indices `1..`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Eq(usize, usize),
    Edge(usize, usize),
    Not(F),
    And(Vec<F>),
    Or(Vec<F>),
    /// `∃^{≥t} x_var body`, `t ≥ 1`.
    Exists {
        t: usize,
        var: usize,
        body: F,
    },
}

fn key(f: &F) -> usize {
    Rc::as_ptr(f) as usize
}

impl Formula {
    pub fn top() -> F {
        Rc::new(Formula::True)
    }

    pub fn bot() -> F {
        Rc::new(Formula::False)
    }

    pub fn eq(i: usize, j: usize) -> F {
        Rc::new(Formula::Eq(i, j))
    }

    pub fn edge(i: usize, j: usize) -> F {
        Rc::new(Formula::Edge(i, j))
    }

    pub fn not(f: F) -> F {
        match &*f {
            Formula::True => Self::bot(),
            Formula::False => Self::top(),
            Formula::Not(g) => g.clone(),
            _ => Rc::new(Formula::Not(f)),
        }
    }

    pub fn and(fs: Vec<F>) -> F {
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            match &*f {
                Formula::True => {}
                Formula::False => return Self::bot(),
                _ => out.push(f),
            }
        }
        match out.len() {
            0 => Self::top(),
            1 => out.pop().unwrap(),
            _ => Rc::new(Formula::And(out)),
        }
    }

    pub fn or(fs: Vec<F>) -> F {
        let mut out = Vec::with_capacity(fs.len());
        for f in fs {
            match &*f {
                Formula::False => {}
                Formula::True => return Self::top(),
                _ => out.push(f),
            }
        }
        match out.len() {
            0 => Self::bot(),
            1 => out.pop().unwrap(),
            _ => Rc::new(Formula::Or(out)),
        }
    }

    /// `∃^{≥t} x_var body`; `t = 0` gives `⊤`.
    pub fn exists(t: usize, var: usize, body: F) -> F {
        if t == 0 {
            return Self::top();
        }
        if matches!(*body, Formula::False) {
            return Self::bot();
        }
        Rc::new(Formula::Exists { t, var, body })
    }

    /// `∃^{=t} x_var body`.
    pub fn exists_exactly(t: usize, var: usize, body: F) -> F {
        Self::and(vec![
            Self::exists(t, var, body.clone()),
            Self::not(Self::exists(t + 1, var, body)),
        ])
    }

    fn children(&self) -> Vec<&F> {
        match self {
            Formula::Not(f) | Formula::Exists { body: f, .. } => vec![f],
            Formula::And(fs) | Formula::Or(fs) => fs.iter().collect(),
            _ => vec![],
        }
    }
}

/// Bottom-up fold over the DAG below `f`, each node visited once.
fn fold<T: Clone>(
    f: &F,
    memo: &mut HashMap<usize, T>,
    step: &mut dyn FnMut(&Formula, Vec<T>) -> T,
) -> T {
    if let Some(v) = memo.get(&key(f)) {
        return v.clone();
    }
    let kids: Vec<T> = f
        .children()
        .into_iter()
        .map(|c| fold(c, memo, step))
        .collect();
    let v = step(f, kids);
    memo.insert(key(f), v.clone());
    v
}

/// Quantifier rank.
pub fn qr(f: &F) -> usize {
    fold(f, &mut HashMap::new(), &mut |node, kids| {
        let deepest = kids.into_iter().max().unwrap_or(0);
        if matches!(node, Formula::Exists { .. }) {
            deepest + 1
        } else {
            deepest
        }
    })
}

/// Every variable index occurring in `f`, bound or free.
pub fn vars(f: &F) -> BTreeSet<usize> {
    fold(f, &mut HashMap::new(), &mut |node, kids| {
        let mut s: BTreeSet<usize> = kids.into_iter().flatten().collect();
        match *node {
            Formula::Eq(i, j) | Formula::Edge(i, j) => {
                s.insert(i);
                s.insert(j);
            }
            Formula::Exists { var, .. } => {
                s.insert(var);
            }
            _ => {}
        }
        s
    })
}

pub fn free_vars(f: &F) -> BTreeSet<usize> {
    fold(f, &mut HashMap::new(), &mut |node, kids| {
        let mut s: BTreeSet<usize> = kids.into_iter().flatten().collect();
        match *node {
            Formula::Eq(i, j) | Formula::Edge(i, j) => {
                s.insert(i);
                s.insert(j);
            }
            Formula::Exists { var, .. } => {
                s.remove(&var);
            }
            _ => {}
        }
        s
    })
}

/// `f ∈ C^k_q`: variables among `x_1..x_k`, quantifier rank at most `q`.
pub fn in_fragment(f: &F, k: usize, q: usize) -> bool {
    vars(f).iter().all(|&v| v >= 1 && v <= k) && qr(f) <= q
}

/// Every quantifier has the shape `∃^{≥t} y (E x y ∧ ψ)` with `x ≠ y`.
pub fn is_guarded(f: &F) -> bool {
    fn guard(g: &Formula, y: usize) -> bool {
        matches!(*g, Formula::Edge(a, b) if a != b && (a == y || b == y))
    }
    fold(f, &mut HashMap::new(), &mut |node, kids| {
        kids.into_iter().all(|b| b)
            && match node {
                Formula::Exists { var, body, .. } => match &**body {
                    Formula::And(fs) => fs.iter().any(|g| guard(g, *var)),
                    g => guard(g, *var),
                },
                _ => true,
            }
    })
}

/// Evaluates formulas on one graph, memoising per node and per assignment
/// of the node's free variables.
pub struct Evaluator<'g> {
    adj: Vec<Vec<bool>>,
    g: &'g LabelledGraph,
    free: HashMap<usize, u64>,
    memo: HashMap<(usize, u128), bool>,
    // keeps every evaluated formula alive so node addresses stay unique
    seen: Vec<F>,
}

const SLOT: u32 = 8;

impl<'g> Evaluator<'g> {
    pub fn new(g: &'g LabelledGraph) -> Result<Self> {
        if g.n() >= 1 << SLOT {
            return Err(Error::CapExceeded {
                size: g.n(),
                cap: (1 << SLOT) - 1,
            });
        }
        let mut adj = vec![vec![false; g.n()]; g.n()];
        for &(u, v) in g.edges() {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        Ok(Evaluator {
            adj,
            g,
            free: HashMap::new(),
            memo: HashMap::new(),
            seen: Vec::new(),
        })
    }

    /// Truth of `f` with free variables read from the graph's labels.
    pub fn eval(&mut self, f: &F) -> Result<bool> {
        let vs = vars(f);
        if vs.iter().any(|&v| v == 0 || v > 15) {
            return Err(Error::Precondition(
                "variable indices must lie in 1..=15".into(),
            ));
        }
        fold(f, &mut self.free, &mut |node, kids| {
            let mut m = kids.into_iter().fold(0u64, |a, b| a | b);
            match *node {
                Formula::Eq(i, j) | Formula::Edge(i, j) => m |= 1 << i | 1 << j,
                Formula::Exists { var, .. } => m &= !(1 << var),
                _ => {}
            }
            m
        });
        self.seen.push(f.clone());
        let mut assign = [usize::MAX; 16];
        for v in free_vars(f) {
            assign[v] = self.g.label(v).ok_or_else(|| {
                Error::Precondition(format!("free variable x{v} is not labelled"))
            })?;
        }
        Ok(self.go(f, &mut assign))
    }

    fn go(&mut self, f: &F, a: &mut [usize; 16]) -> bool {
        let mask = self.free[&key(f)];
        let mut packed = 0u128;
        for v in 0..16 {
            if mask >> v & 1 == 1 {
                packed |= (a[v] as u128) << (SLOT * v as u32);
            }
        }
        if let Some(&b) = self.memo.get(&(key(f), packed)) {
            return b;
        }
        let b = match &**f {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(i, j) => a[*i] == a[*j],
            Formula::Edge(i, j) => self.adj[a[*i]][a[*j]],
            Formula::Not(g) => !self.go(g, a),
            Formula::And(gs) => gs.iter().all(|g| self.go(g, a)),
            Formula::Or(gs) => gs.iter().any(|g| self.go(g, a)),
            Formula::Exists { t, var, body } => {
                let old = a[*var];
                let n = self.g.n();
                let mut hits = 0;
                for v in 0..n {
                    if hits >= *t || hits + (n - v) < *t {
                        break;
                    }
                    a[*var] = v;
                    if self.go(body, a) {
                        hits += 1;
                    }
                }
                a[*var] = old;
                hits >= *t
            }
        };
        self.memo.insert((key(f), packed), b);
        b
    }
}

/// `g ⊨ f`, free variable `x_i` read as the vertex labelled `i`.
pub fn evaluate(g: &LabelledGraph, f: &F) -> Result<bool> {
    Evaluator::new(g)?.eval(f)
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(out, "true"),
            Formula::False => write!(out, "false"),
            Formula::Eq(i, j) => write!(out, "(= {i} {j})"),
            Formula::Edge(i, j) => write!(out, "(E {i} {j})"),
            Formula::Not(g) => write!(out, "(not {g})"),
            Formula::And(gs) | Formula::Or(gs) => {
                write!(
                    out,
                    "({}",
                    if matches!(self, Formula::And(_)) {
                        "and"
                    } else {
                        "or"
                    }
                )?;
                for g in gs {
                    write!(out, " {g}")?;
                }
                write!(out, ")")
            }
            Formula::Exists { t, var, body } => write!(out, "(exists>= {t} {var} {body})"),
        }
    }
}
