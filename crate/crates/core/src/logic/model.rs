//! Formulas to quantum graphs that are indicators of truth on graphs of a
//! fixed size.
//!
//! Expanded literally, the powers taken at every quantifier produce
//! combinatorially many terms. [`QgBuilder`] keeps each intermediate
//! quantum graph small instead: only its values on `n`-vertex targets
//! (with its free variables labelled) matter, so it is rewritten over a
//! basis of terms the construction has already produced whose hom vectors
//! on those targets are linearly independent. Candidate terms are screened
//! modulo a prime; coefficients are solved exactly over the rationals.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::formula::{free_vars, is_guarded, qr, vars, Formula, F};
use crate::decomp::ConstructionTree;
use crate::enumerate::graphs;
use crate::error::{Error, Result};
use crate::graph::LabelledGraph;
use crate::hom::hom_count;
use crate::iso::quick_key;
use crate::quantum::{interpolate, lagrange, range, rat, QuantumGraph, Rational, Term};

const P: u64 = (1 << 61) - 1;

fn mulp(a: u64, b: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(P)) as u64
}

fn subp(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn invp(a: u64) -> u64 {
    let (mut base, mut e, mut r) = (a, P - 2, 1);
    while e > 0 {
        if e & 1 == 1 {
            r = mulp(r, base);
        }
        base = mulp(base, base);
        e >>= 1;
    }
    r
}

fn ratp(x: &Rational) -> Result<u64> {
    let p = BigInt::from(P);
    let red = |z: &BigInt| -> u64 {
        let m = z % &p;
        let m = if m.is_negative() { m + &p } else { m };
        m.to_u64().expect("reduced below the modulus")
    };
    let d = red(x.denom());
    if d == 0 {
        return Err(Error::Precondition(
            "coefficient denominator divisible by the screening prime".into(),
        ));
    }
    Ok(mulp(red(x.numer()), invp(d)))
}

fn labelled(n: usize, labels: &[(usize, usize)], edges: &[(usize, usize)]) -> QuantumGraph {
    let mut g = LabelledGraph::from_edges(n, edges).expect("small fixed graph");
    for &(l, v) in labels {
        g = g.set_label(l, v).expect("small fixed graph");
    }
    QuantumGraph::with_witness(g.clone(), ConstructionTree::leaf(g))
}

fn exists_polynomial(t: usize, n: usize) -> Result<Vec<Rational>> {
    let (t, n) = (t as i64, n as i64);
    let mut pts: Vec<(Rational, Rational)> = range(t, n).into_iter().map(|x| (x, rat(1))).collect();
    pts.extend(range(0, (t - 1).min(n)).into_iter().map(|x| (x, rat(0))));
    lagrange(&pts)
}

/// Linearly independent terms, in echelon form both modulo `P` and exactly.
#[derive(Default)]
struct Basis {
    terms: Vec<Term>,
    modp: Vec<(usize, Vec<u64>)>,
    exact: Vec<(usize, Vec<Rational>, Vec<Rational>)>,
}

impl Basis {
    fn reduce_p(&self, v: &mut [u64]) {
        for (piv, row) in &self.modp {
            let f = v[*piv];
            if f != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = subp(*x, mulp(f, *r));
                }
            }
        }
    }

    /// Adds `term` if its vector is independent of the basis modulo `P`;
    /// returns the new mod-`P` row.
    fn offer(&mut self, term: Term, vec: &[u128]) -> Option<(usize, &[u64])> {
        let mut v: Vec<u64> = vec.iter().map(|&x| (x % u128::from(P)) as u64).collect();
        self.reduce_p(&mut v);
        let piv = v.iter().position(|&x| x != 0)?;
        let inv = invp(v[piv]);
        v.iter_mut().for_each(|x| *x = mulp(*x, inv));

        let idx = self.terms.len();
        let mut e: Vec<Rational> = vec
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)))
            .collect();
        let mut combo = vec![Rational::zero(); idx + 1];
        combo[idx] = Rational::one();
        for (p, row, rc) in &self.exact {
            let f = e[*p].clone();
            if !f.is_zero() {
                for (x, r) in e.iter_mut().zip(row) {
                    *x -= &f * r;
                }
                for (x, r) in combo.iter_mut().zip(rc) {
                    *x -= &f * r;
                }
            }
        }
        let ep = e
            .iter()
            .position(|x| !x.is_zero())
            .expect("independent modulo P, so independent");
        let inv = e[ep].recip();
        e.iter_mut().for_each(|x| *x *= &inv);
        combo.iter_mut().for_each(|x| *x *= &inv);
        self.exact.push((ep, e, combo));
        self.terms.push(term);
        self.modp.push((piv, v));
        self.modp.last().map(|(p, r)| (*p, r.as_slice()))
    }

    /// Coefficients over `terms` reproducing `val`, if it lies in the span.
    fn coords(&self, val: &[Rational]) -> Option<Vec<Rational>> {
        let mut w = val.to_vec();
        let mut c = vec![Rational::zero(); self.terms.len()];
        for (p, row, rc) in &self.exact {
            let f = w[*p].clone();
            if !f.is_zero() {
                for (x, r) in w.iter_mut().zip(row) {
                    *x -= &f * r;
                }
                for (x, r) in c.iter_mut().zip(rc) {
                    *x += &f * r;
                }
            }
        }
        w.iter().all(Zero::is_zero).then_some(c)
    }
}

/// Targets on `n` vertices carrying a fixed set of labels, up to
/// isomorphism, with cached hom vectors of connected graphs.
struct Space {
    targets: Vec<LabelledGraph>,
    comps: HashMap<LabelledGraph, Rc<Vec<u128>>>,
    bases: HashMap<(usize, Option<usize>), Basis>,
}

impl Space {
    fn new(hosts: &[LabelledGraph], labels: &[usize]) -> Result<Self> {
        let mut all = hosts.to_vec();
        for &l in labels {
            all = all
                .into_iter()
                .flat_map(|g| (0..g.n()).map(move |v| g.set_label(l, v)))
                .collect::<Result<Vec<_>>>()?;
        }
        let mut seen = std::collections::HashSet::new();
        all.retain(|g| seen.insert(quick_key(g)));
        Ok(Space {
            targets: all,
            comps: HashMap::new(),
            bases: HashMap::new(),
        })
    }

    fn vector(&mut self, f: &LabelledGraph) -> Result<Vec<u128>> {
        let mut out = vec![1u128; self.targets.len()];
        for c in f.components() {
            let c = f.induced(&c);
            let v = match self.comps.get(&c) {
                Some(v) => v.clone(),
                None => {
                    let v = Rc::new(
                        self.targets
                            .iter()
                            .map(|t| hom_count(&c, t))
                            .collect::<Result<Vec<_>>>()?,
                    );
                    self.comps.insert(c, v.clone());
                    v
                }
            };
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o = o
                    .checked_mul(*x)
                    .ok_or_else(|| Error::Precondition("hom count overflow".into()))?;
            }
        }
        Ok(out)
    }

    fn values(&mut self, q: &QuantumGraph) -> Result<Vec<Rational>> {
        let mut val = vec![Rational::zero(); self.targets.len()];
        for t in q.terms() {
            let v = self.vector(&t.graph)?;
            for (x, h) in val.iter_mut().zip(v) {
                *x += &t.coeff * Rational::from_integer(BigInt::from(h));
            }
        }
        Ok(val)
    }

    /// A combination of basis terms with values `val`, drawing new basis
    /// terms from `cands` as needed. Bases are kept per depth and, for
    /// combinations about to lose a label, per that label: every term there
    /// carries it, so removing it still sums over its positions.
    fn express<I>(
        &mut self,
        key: (usize, Option<usize>),
        val: &[Rational],
        cands: I,
    ) -> Result<QuantumGraph>
    where
        I: Iterator<Item = Result<(Term, Vec<u128>)>>,
    {
        let basis = self.bases.entry(key).or_default();
        let mut res: Vec<u64> = val.iter().map(ratp).collect::<Result<_>>()?;
        basis.reduce_p(&mut res);
        let mut cands = cands;
        loop {
            if res.iter().all(|&x| x == 0) {
                if let Some(c) = basis.coords(val) {
                    let terms = basis
                        .terms
                        .iter()
                        .zip(c)
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(t, c)| Term {
                            coeff: c,
                            ..t.clone()
                        })
                        .collect();
                    return Ok(QuantumGraph::from_term_list(terms));
                }
            }
            let (mut term, vec) = match cands.next() {
                Some(c) => c?,
                None => {
                    return Err(Error::Invalid(
                        "values outside the span of the candidate terms".into(),
                    ))
                }
            };
            term.coeff = Rational::one();
            if let Some((piv, row)) = basis.offer(term, &vec) {
                let f = res[piv];
                if f != 0 {
                    for (x, r) in res.iter_mut().zip(row) {
                        *x = subp(*x, mulp(f, *r));
                    }
                }
            }
        }
    }
}

/// Free variables and quantifier rank of a subformula: the labels its
/// quantum graph may use and the elimination depth its terms may have.
struct At {
    labels: Vec<usize>,
    depth: usize,
}

impl At {
    fn of(f: &F) -> Self {
        At {
            labels: free_vars(f).into_iter().collect(),
            depth: qr(f),
        }
    }
}

/// Builds quantum graphs modelling formulas on targets with exactly `n`
/// vertices. Bases are kept between calls, so one builder should serve
/// many formulas of the same size.
pub struct QgBuilder {
    n: usize,
    hosts: Vec<LabelledGraph>,
    spaces: HashMap<Vec<usize>, Space>,
    memo: HashMap<usize, (F, QuantumGraph)>,
}

impl QgBuilder {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("target size must be positive".into()));
        }
        Ok(QgBuilder {
            n,
            hosts: graphs(n)?,
            spaces: HashMap::new(),
            memo: HashMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn space(&mut self, at: &At) -> Result<&mut Space> {
        if !self.spaces.contains_key(&at.labels) {
            let s = Space::new(&self.hosts, &at.labels)?;
            self.spaces.insert(at.labels.clone(), s);
        }
        Ok(self.spaces.get_mut(&at.labels).unwrap())
    }

    /// Rewrites `q`, whose terms carry only labels of `at` and have
    /// elimination depth at most `at.depth`, over the matching basis.
    fn reduce(&mut self, q: &QuantumGraph, at: &At) -> Result<QuantumGraph> {
        let d = at.depth;
        let space = self.space(at)?;
        let val = space.values(q)?;
        let mut vecs = Vec::with_capacity(q.len());
        for t in q.terms() {
            vecs.push(space.vector(&t.graph)?);
        }
        let mut order: Vec<usize> = (0..q.len()).collect();
        order.sort_by_key(|&i| q.terms()[i].graph.n());
        let cands = order
            .into_iter()
            .map(|i| Ok((q.terms()[i].clone(), vecs[i].clone())));
        space.express((d, None), &val, cands)
    }

    /// `a · b` over the basis of `at`; with `carry`, every term of the
    /// product must carry that label.
    fn mul(
        &mut self,
        a: &QuantumGraph,
        b: &QuantumGraph,
        at: &At,
        carry: Option<usize>,
    ) -> Result<QuantumGraph> {
        let d = at.depth;
        let space = self.space(at)?;
        let va: Vec<Vec<u128>> = a
            .terms()
            .iter()
            .map(|t| space.vector(&t.graph))
            .collect::<Result<_>>()?;
        let vb: Vec<Vec<u128>> = b
            .terms()
            .iter()
            .map(|t| space.vector(&t.graph))
            .collect::<Result<_>>()?;
        let (xa, xb) = (space.values(a)?, space.values(b)?);
        let val: Vec<Rational> = xa.iter().zip(&xb).map(|(x, y)| x * y).collect();
        let mut pairs: Vec<(usize, usize)> = (0..a.len())
            .flat_map(|i| (0..b.len()).map(move |j| (i, j)))
            .collect();
        pairs.sort_by_key(|&(i, j)| a.terms()[i].graph.n() + b.terms()[j].graph.n());
        let cands = pairs.into_iter().filter_map(|(i, j)| {
            let t = a.terms()[i].product(&b.terms()[j])?;
            let v: Option<Vec<u128>> = va[i]
                .iter()
                .zip(&vb[j])
                .map(|(x, y)| x.checked_mul(*y))
                .collect();
            Some(
                v.map(|v| (t, v))
                    .ok_or_else(|| Error::Precondition("hom count overflow".into())),
            )
        });
        space.express((d, carry), &val, cands)
    }

    fn poly(&mut self, x: &QuantumGraph, p: &[Rational], at: &At) -> Result<QuantumGraph> {
        let mut out = QuantumGraph::zero();
        let mut power = QuantumGraph::unit();
        for (j, c) in p.iter().enumerate() {
            if j > 0 {
                power = self.mul(&power, x, at, None)?;
            }
            if !c.is_zero() {
                out = out.add(&power.scale(c));
            }
        }
        self.reduce(&out, at)
    }

    fn go(&mut self, f: &F) -> Result<QuantumGraph> {
        let key = Rc::as_ptr(f) as usize;
        if let Some((_, q)) = self.memo.get(&key) {
            return Ok(q.clone());
        }
        let at = At::of(f);
        let q = match &**f {
            Formula::True => QuantumGraph::unit(),
            Formula::False => QuantumGraph::zero(),
            Formula::Eq(i, j) => labelled(1, &[(*i, 0), (*j, 0)], &[]),
            Formula::Edge(i, j) if i == j => QuantumGraph::zero(),
            Formula::Edge(i, j) => labelled(2, &[(*i, 0), (*j, 1)], &[(0, 1)]),
            Formula::Not(g) => {
                let a = self.go(g)?;
                self.poly(&a, &lagrange(&[(rat(0), rat(1)), (rat(1), rat(0))])?, &at)?
            }
            Formula::And(gs) => {
                let mut acc = QuantumGraph::unit();
                for g in gs {
                    let b = self.go(g)?;
                    acc = self.mul(&acc, &b, &at, None)?;
                }
                acc
            }
            Formula::Or(gs) => {
                let mut sum = QuantumGraph::zero();
                for g in gs {
                    sum = sum.add(&self.go(g)?);
                }
                let sum = self.reduce(&sum, &at)?;
                let mut pts: Vec<(Rational, Rational)> = range(1, gs.len() as i64)
                    .into_iter()
                    .map(|x| (x, rat(1)))
                    .collect();
                pts.push((rat(0), rat(0)));
                self.poly(&sum, &lagrange(&pts)?, &at)?
            }
            Formula::Exists { t, var, body } => {
                let b = self.go(body)?;
                let mut inside = At::of(body);
                if let Err(i) = inside.labels.binary_search(var) {
                    inside.labels.insert(i, *var);
                }
                let inner = self.mul(&b, &labelled(1, &[(*var, 0)], &[]), &inside, Some(*var))?;
                let x = self.reduce(&inner.remove_label(*var)?, &at)?;
                self.poly(&x, &exists_polynomial(*t, self.n)?, &at)?
            }
        };
        self.memo.insert(key, (f.clone(), q.clone()));
        Ok(q)
    }

    /// A quantum graph `q̂` with `hom(q̂, g) = [g ⊨ φ]` for every `g` on
    /// exactly `n` vertices labelling the free variables of `φ`. Every term
    /// carries a construction tree whose labels are variables of `φ` and
    /// whose elimination depth is at most `qr(φ)`.
    pub fn model(&mut self, f: &F) -> Result<QuantumGraph> {
        if vars(f).contains(&0) {
            return Err(Error::Precondition("variables are numbered from 1".into()));
        }
        self.go(f)
    }

    /// [`QgBuilder::model`] for guarded formulas.
    pub fn model_guarded(&mut self, f: &F) -> Result<QuantumGraph> {
        if !is_guarded(f) {
            return Err(Error::Precondition("formula is not guarded".into()));
        }
        self.model(f)
    }
}

/// See [`QgBuilder::model`].
pub fn qg_from_formula(f: &F, n: usize) -> Result<QuantumGraph> {
    QgBuilder::new(n)?.model(f)
}

/// See [`QgBuilder::model_guarded`].
pub fn qg_from_guarded_formula(f: &F, n: usize) -> Result<QuantumGraph> {
    QgBuilder::new(n)?.model_guarded(f)
}

/// The same indicator built by literal expansion: interpolation polynomials
/// are multiplied out term by term with isomorphic terms merged, and
/// nothing else. Term counts explode quickly; meant for small cases.
pub fn qg_from_formula_expanded(f: &F, n: usize) -> Result<QuantumGraph> {
    fn go(f: &F, n: usize, memo: &mut HashMap<usize, QuantumGraph>) -> Result<QuantumGraph> {
        let key = Rc::as_ptr(f) as usize;
        if let Some(q) = memo.get(&key) {
            return Ok(q.clone());
        }
        let q = match &**f {
            Formula::True => QuantumGraph::unit(),
            Formula::False => QuantumGraph::zero(),
            Formula::Eq(i, j) => labelled(1, &[(*i, 0), (*j, 0)], &[]),
            Formula::Edge(i, j) if i == j => QuantumGraph::zero(),
            Formula::Edge(i, j) => labelled(2, &[(*i, 0), (*j, 1)], &[(0, 1)]),
            Formula::Not(g) => interpolate(&go(g, n, memo)?, &[rat(0)], &[rat(1)])?,
            Formula::And(gs) => {
                let mut acc = QuantumGraph::unit();
                for g in gs {
                    acc = acc.product(&go(g, n, memo)?);
                }
                acc
            }
            Formula::Or(gs) => {
                let mut sum = QuantumGraph::zero();
                for g in gs {
                    sum = sum.add(&go(g, n, memo)?);
                }
                interpolate(&sum, &range(1, gs.len() as i64), &[rat(0)])?
            }
            Formula::Exists { t, var, body } => {
                let inner = go(body, n, memo)?.product(&labelled(1, &[(*var, 0)], &[]));
                crate::quantum::polynomial(&inner.remove_label(*var)?, &exists_polynomial(*t, n)?)?
            }
        };
        memo.insert(key, q.clone());
        Ok(q)
    }
    if n == 0 {
        return Err(Error::Precondition("target size must be positive".into()));
    }
    if vars(f).contains(&0) {
        return Err(Error::Precondition("variables are numbered from 1".into()));
    }
    go(f, n, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::validate_ct;
    use crate::logic::{evaluate, in_fragment, parse_formula};

    fn check(q: &QuantumGraph, f: &F, n: usize) {
        let free: Vec<usize> = free_vars(f).into_iter().collect();
        for g in graphs(n).unwrap() {
            let mut gs = vec![g];
            for &x in &free {
                gs = gs
                    .into_iter()
                    .flat_map(|h| (0..n).map(move |v| h.set_label(x, v).unwrap()))
                    .collect();
            }
            for h in gs {
                let want = rat(i64::from(evaluate(&h, f).unwrap()));
                assert_eq!(q.hom(&h).unwrap(), want, "{f} on {h:?}");
            }
        }
    }

    #[test]
    fn atoms() {
        let q = qg_from_formula(&parse_formula("(= 1 1)").unwrap(), 3).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q.terms()[0].graph.n(), 1);
        assert!(qg_from_formula(&parse_formula("(E 1 1)").unwrap(), 3)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn some_vertex_of_degree_two_on_four_vertices() {
        let f = parse_formula("(exists>= 2 1 (exists>= 1 2 (E 1 2)))").unwrap();
        assert!(in_fragment(&f, 2, 2));
        let q = qg_from_formula(&f, 4).unwrap();
        assert_eq!(graphs(4).unwrap().len(), 11);
        check(&q, &f, 4);
        for t in q.terms() {
            let w = t.witness.as_ref().unwrap().tree();
            validate_ct(&w, Some(&t.graph)).unwrap();
            assert!(w.label_bound() <= 2 && w.elimination_depth() <= 2);
        }
    }

    #[test]
    fn expanded_and_reduced_agree() {
        let fs = [
            "(exists>= 1 1 (exists>= 2 2 (E 2 1)))",
            "(or (E 1 2) (= 1 2))",
            "(not (exists>= 2 2 (E 1 2)))",
            "(exists>= 1 1 (exists>= 1 2 (not (E 1 2))))",
        ];
        for s in fs {
            let f = parse_formula(s).unwrap();
            for n in 1..=3 {
                check(&qg_from_formula_expanded(&f, n).unwrap(), &f, n);
                check(&qg_from_formula(&f, n).unwrap(), &f, n);
            }
        }
    }

    #[test]
    fn nested_quantifiers_on_five_vertices() {
        let mut b = QgBuilder::new(5).unwrap();
        for s in [
            "(exists>= 1 1 (exists>= 1 2 (not (E 1 2))))",
            "(exists>= 2 1 (and (exists>= 1 2 (E 1 2)) (exists>= 2 2 (not (E 1 2)))))",
            "(exists>= 2 1 (or (exists>= 1 2 (E 1 2)) (exists>= 2 2 (not (E 1 2)))))",
        ] {
            let f = parse_formula(s).unwrap();
            let q = b.model(&f).unwrap();
            check(&q, &f, 5);
        }
    }

    #[test]
    fn guarded_needs_guards() {
        let f = parse_formula("(exists>= 1 2 (and (E 1 2) (exists>= 1 1 (E 1 2))))").unwrap();
        assert!(qg_from_guarded_formula(&f, 3).is_ok());
        let g = parse_formula("(exists>= 1 2 (= 2 2))").unwrap();
        assert!(qg_from_guarded_formula(&g, 3).is_err());
    }
}
