//! Quantum graphs: finite rational linear combinations of labelled graphs.
//!
//! `hom` extends linearly and products distribute over sums. Terms whose
//! graph picks up a self-loop in a product are dropped, which does not
//! change any count into a loopless target. A term may carry a
//! construction tree for its graph.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::decomp::ConstructionTree;
use crate::error::{Error, Result};
use crate::graph::{product, LabelledGraph};
use crate::hom::HomCache;
use crate::iso::quick_key;

pub type Rational = BigRational;

pub fn rat(x: i64) -> Rational {
    BigRational::from_integer(BigInt::from(x))
}

#[derive(Debug)]
enum Recipe {
    Leaf(ConstructionTree),
    Product(Witness, Witness),
    Eliminate(Witness, usize),
}

/// A construction tree kept as the sequence of products and eliminations
/// that produced it; [`Witness::tree`] builds it.
#[derive(Clone, Debug)]
pub struct Witness(Arc<Recipe>);

impl Witness {
    pub fn leaf(ct: ConstructionTree) -> Self {
        Witness(Arc::new(Recipe::Leaf(ct)))
    }

    pub fn tree(&self) -> ConstructionTree {
        match &*self.0 {
            Recipe::Leaf(ct) => ct.clone(),
            Recipe::Product(a, b) => a.tree().product(&b.tree()),
            Recipe::Eliminate(a, l) => a.tree().eliminate(*l).expect("label present when recorded"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Rational,
    pub graph: LabelledGraph,
    pub witness: Option<Witness>,
}

impl Term {
    /// The product term, or `None` when the glued graph has a loop.
    pub fn product(&self, other: &Term) -> Option<Term> {
        let graph = product(&self.graph, &other.graph);
        if graph.has_loops() {
            return None;
        }
        let witness = match (&self.witness, &other.witness) {
            (Some(x), _) if other.graph.n() == 0 => Some(x.clone()),
            (_, Some(y)) if self.graph.n() == 0 => Some(y.clone()),
            (Some(x), Some(y)) => Some(Witness(Arc::new(Recipe::Product(x.clone(), y.clone())))),
            _ => None,
        };
        Some(Term {
            coeff: &self.coeff * &other.coeff,
            graph,
            witness,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct QuantumGraph {
    terms: Vec<Term>,
}

impl QuantumGraph {
    pub fn zero() -> Self {
        QuantumGraph { terms: Vec::new() }
    }

    /// The empty graph with coefficient 1; `hom` of it is 1 everywhere.
    pub fn unit() -> Self {
        let e = LabelledGraph::empty(0);
        Self::with_witness(e.clone(), ConstructionTree::leaf(e))
    }

    pub fn graph(g: LabelledGraph) -> Self {
        QuantumGraph {
            terms: vec![Term {
                coeff: Rational::one(),
                graph: g,
                witness: None,
            }],
        }
        .normalised()
    }

    pub fn with_witness(g: LabelledGraph, ct: ConstructionTree) -> Self {
        QuantumGraph {
            terms: vec![Term {
                coeff: Rational::one(),
                graph: g,
                witness: Some(Witness::leaf(ct)),
            }],
        }
        .normalised()
    }

    pub fn from_terms(terms: Vec<(Rational, LabelledGraph)>) -> Self {
        QuantumGraph {
            terms: terms
                .into_iter()
                .map(|(coeff, graph)| Term {
                    coeff,
                    graph,
                    witness: None,
                })
                .collect(),
        }
        .normalised()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges isomorphic terms (the first one's graph and witness are kept),
    /// drops zero coefficients and looped graphs.
    fn normalised(self) -> Self {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut out: Vec<Term> = Vec::new();
        for t in self.terms {
            if t.coeff.is_zero() || t.graph.has_loops() {
                continue;
            }
            match index.entry(quick_key(&t.graph)) {
                std::collections::hash_map::Entry::Occupied(e) => out[*e.get()].coeff += t.coeff,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(out.len());
                    out.push(t);
                }
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        QuantumGraph { terms: out }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        QuantumGraph { terms }.normalised()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: &t.coeff * c,
                ..t.clone()
            })
            .collect();
        QuantumGraph { terms }.normalised()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.extend(a.product(b));
            }
        }
        QuantumGraph { terms }.normalised()
    }

    pub(crate) fn from_term_list(terms: Vec<Term>) -> Self {
        QuantumGraph { terms }.normalised()
    }

    /// Removes label `l` from every term. Terms without `l` are unchanged.
    pub fn remove_label(&self, l: usize) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.len());
        for t in &self.terms {
            if t.graph.label(l).is_none() {
                terms.push(t.clone());
                continue;
            }
            let witness = t
                .witness
                .as_ref()
                .map(|w| Witness(Arc::new(Recipe::Eliminate(w.clone(), l))));
            terms.push(Term {
                coeff: t.coeff.clone(),
                graph: t.graph.remove_label(l)?,
                witness,
            });
        }
        Ok(QuantumGraph { terms }.normalised())
    }

    pub fn hom(&self, g: &LabelledGraph) -> Result<Rational> {
        self.hom_cached(&mut HomCache::new(g))
    }

    pub fn hom_cached(&self, cache: &mut HomCache) -> Result<Rational> {
        let mut total = Rational::zero();
        for t in &self.terms {
            let h = cache.hom(&t.graph)?;
            total += &t.coeff * BigRational::from_integer(BigInt::from(h));
        }
        Ok(total)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|t| serde_json::json!({ "coeff": t.coeff.to_string(), "graph": crate::io::write_graph(&t.graph) }))
                .collect(),
        )
    }

    /// Reads a term list; each term names its graph inline under `graph`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid("quantum graph must be a JSON array".into()))?;
        let mut terms = Vec::new();
        for t in arr {
            let c = t["coeff"]
                .as_str()
                .map(str::to_owned)
                .or_else(|| t["coeff"].as_i64().map(|x| x.to_string()));
            let c: Rational = c
                .ok_or_else(|| Error::Invalid("term without coeff".into()))?
                .parse()
                .map_err(|_| Error::Invalid("bad coefficient".into()))?;
            let g = t["graph"]
                .as_str()
                .ok_or_else(|| Error::Invalid("term without graph".into()))?;
            terms.push((c, crate::io::parse_graph(g)?));
        }
        Ok(Self::from_terms(terms))
    }
}

/// `hom(q̂, g)`.
pub fn hom_count_quantum(q: &QuantumGraph, g: &LabelledGraph) -> Result<Rational> {
    q.hom(g)
}

pub fn qg_product(a: &QuantumGraph, b: &QuantumGraph) -> QuantumGraph {
    a.product(b)
}

pub fn remove_label_qg(q: &QuantumGraph, l: usize) -> Result<QuantumGraph> {
    q.remove_label(l)
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// `< points.len()` through the given points.
pub fn lagrange(points: &[(Rational, Rational)]) -> Result<Vec<Rational>> {
    let mut coeffs = vec![Rational::zero(); points.len()];
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // basis polynomial, built factor by factor
        let mut basis = vec![Rational::one()];
        let mut denom = Rational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if xi == xj {
                return Err(Error::Precondition(format!(
                    "repeated interpolation point {xi}"
                )));
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (d, c) in basis.into_iter().enumerate() {
            coeffs[d] += c * &scale;
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// `p(q̂)` for the polynomial `p` that is 1 on `plus` and 0 on `minus`.
pub fn interpolate(
    q: &QuantumGraph,
    plus: &[Rational],
    minus: &[Rational],
) -> Result<QuantumGraph> {
    if let Some(x) = plus.iter().find(|x| minus.contains(x)) {
        return Err(Error::Precondition(format!("{x} is in both sets")));
    }
    let points: Vec<(Rational, Rational)> = plus
        .iter()
        .map(|x| (x.clone(), Rational::one()))
        .chain(minus.iter().map(|x| (x.clone(), Rational::zero())))
        .collect();
    let p = lagrange(&points)?;
    polynomial(q, &p)
}

/// `Σ_j p[j] q̂^j` with `q̂^0` the unit.
pub fn polynomial(q: &QuantumGraph, p: &[Rational]) -> Result<QuantumGraph> {
    let mut out = QuantumGraph::zero();
    let mut power = QuantumGraph::unit();
    for (j, c) in p.iter().enumerate() {
        if j > 0 {
            power = power.product(q);
        }
        if !c.is_zero() {
            out = out.add(&power.scale(c));
        }
    }
    Ok(out)
}

/// Integers `lo..=hi` as rationals.
pub fn range(lo: i64, hi: i64) -> Vec<Rational> {
    (lo..=hi).map(rat).collect()
}
