//! Decorated graphs, free wheeled props and the wheeled-prop interface.
//!
//! [`Free<B>`] is the free wheeled prop on a basis type `B`: a rational span
//! of graphs whose vertices carry basis elements, keyed up to vertex
//! reordering. Taking `B = DecoratedGraph<C>` gives the two-fold
//! construction, and [`Free::flatten`] is the monad multiplication. All
//! biased operations (horizontal composition, contraction, relabelling) are
//! flattenings of one small outer graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{
    corolla, corolla_relabelled, free_edge_graph, loose_canonical, substitute_all, tadpole, two_corollas,
    CanonicalGraph, DirectedGraph, GraphError, Sign,
};
use crate::label::{fresh_labels, Bijection, Boundary, Label};
use crate::translate::wd_to_graph;
use crate::wiring::WiringDiagram;
use crate::Q;

pub mod axioms;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WPropError {
    /// A generator was instantiated at label sets of the wrong sizes.
    #[error("ArityMismatch: {symbol} has arity ({inputs},{outputs}), got ({got_in},{got_out})")]
    ArityMismatch { symbol: String, inputs: usize, outputs: usize, got_in: usize, got_out: usize },
    /// A decoration or argument does not fit the slot it is placed in.
    #[error("BoundaryMismatch: expected {expected:?}, found {found:?}")]
    BoundaryMismatch { expected: Boundary, found: Boundary },
    /// Horizontal composition needs disjoint boundaries.
    #[error("LabelClash: {0}")]
    LabelClash(Label),
    #[error("UnknownLabel: {0}")]
    UnknownLabel(Label),
    #[error("NotABijection: {0}")]
    NotABijection(String),
    #[error("UnknownGenerator: {0}")]
    UnknownGenerator(String),
    /// The number of decorations differs from the number of vertices.
    #[error("DecorationCount: {vertices} vertices, {decorations} decorations")]
    DecorationCount { vertices: usize, decorations: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

type WResult<T> = Result<T, WPropError>;

/// A generator symbol with its arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Generator {
    pub symbol: String,
    #[serde(rename = "in")]
    pub inputs: usize,
    #[serde(rename = "out")]
    pub outputs: usize,
}

/// Finitely many generators of a free bimodule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub generators: Vec<Generator>,
}

impl Signature {
    pub fn new(generators: impl IntoIterator<Item = (&'static str, usize, usize)>) -> Self {
        Signature {
            generators: generators
                .into_iter()
                .map(|(s, i, o)| Generator { symbol: s.to_string(), inputs: i, outputs: o })
                .collect(),
        }
    }

    pub fn get(&self, symbol: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.symbol == symbol)
    }

    /// Instantiates a generator; slot `k` is attached to the `k`-th label of each sorted set.
    pub fn instance(&self, symbol: &str, inputs: &BTreeSet<Label>, outputs: &BTreeSet<Label>) -> WResult<GenInstance> {
        self.instance_with(symbol, inputs.iter().cloned().collect(), outputs.iter().cloned().collect())
    }

    /// Instantiates a generator with an explicit slot order.
    pub fn instance_with(&self, symbol: &str, inputs: Vec<Label>, outputs: Vec<Label>) -> WResult<GenInstance> {
        let g = self.get(symbol).ok_or_else(|| WPropError::UnknownGenerator(symbol.to_string()))?;
        if g.inputs != inputs.len() || g.outputs != outputs.len() {
            return Err(WPropError::ArityMismatch {
                symbol: symbol.to_string(),
                inputs: g.inputs,
                outputs: g.outputs,
                got_in: inputs.len(),
                got_out: outputs.len(),
            });
        }
        GenInstance::new(symbol, inputs, outputs)
    }
}

/// Anything that can decorate a vertex: it knows its own boundary.
pub trait Basis: Clone + Ord + Debug {
    fn boundary(&self) -> Boundary;
}

/// A generator placed at a vertex: `inputs[k]` is the vertex label on input slot `k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenInstance {
    #[serde(rename = "generator")]
    pub symbol: String,
    #[serde(rename = "in")]
    pub inputs: Vec<Label>,
    #[serde(rename = "out")]
    pub outputs: Vec<Label>,
}

impl GenInstance {
    pub fn new(symbol: &str, inputs: Vec<Label>, outputs: Vec<Label>) -> WResult<Self> {
        for side in [&inputs, &outputs] {
            let set: BTreeSet<&Label> = side.iter().collect();
            if set.len() != side.len() {
                return Err(WPropError::NotABijection(format!("repeated slot label in {side:?}")));
            }
        }
        Ok(GenInstance { symbol: symbol.to_string(), inputs, outputs })
    }
}

impl Basis for GenInstance {
    fn boundary(&self) -> Boundary {
        Boundary::new(self.inputs.iter().cloned().collect(), self.outputs.iter().cloned().collect())
    }
}

/// A graph with one decoration per vertex, stored in loose canonical form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedGraph<B> {
    graph: CanonicalGraph,
    decorations: Vec<B>,
}

impl<B: Basis> DecoratedGraph<B> {
    /// Checks that each decoration fits its vertex, then forgets the vertex order.
    pub fn new(g: &DirectedGraph, decorations: Vec<B>) -> WResult<Self> {
        if decorations.len() != g.vertex_count() {
            return Err(WPropError::DecorationCount { vertices: g.vertex_count(), decorations: decorations.len() });
        }
        for (v, d) in decorations.iter().enumerate() {
            let expected = g.neighbourhood(v);
            let found = d.boundary();
            if expected != found {
                return Err(WPropError::BoundaryMismatch { expected, found });
            }
        }
        let (graph, order) = loose_canonical(g, &decorations);
        let decorations = order.iter().map(|&v| decorations[v].clone()).collect();
        Ok(DecoratedGraph { graph, decorations })
    }

    /// The corolla carrying `b`.
    pub fn corolla(b: B) -> Self {
        let bd = b.boundary();
        DecoratedGraph::new(&corolla(&bd.inputs, &bd.outputs), vec![b]).expect("corolla fits its decoration")
    }

    pub fn canonical(&self) -> &CanonicalGraph {
        &self.graph
    }

    /// A concrete representative whose vertex order matches [`Self::decorations`].
    pub fn graph(&self) -> DirectedGraph {
        self.graph.to_graph()
    }

    pub fn decorations(&self) -> &[B] {
        &self.decorations
    }

    pub fn vertex_count(&self) -> usize {
        self.decorations.len()
    }
}

impl<B: Basis> Basis for DecoratedGraph<B> {
    fn boundary(&self) -> Boundary {
        self.graph.boundary()
    }
}

impl<B: Basis> DecoratedGraph<DecoratedGraph<B>> {
    /// Substitutes every inner graph into its vertex.
    pub fn flatten(&self) -> DecoratedGraph<B> {
        let outer = self.graph();
        let subs: BTreeMap<usize, DirectedGraph> =
            self.decorations.iter().enumerate().map(|(v, d)| (v, d.graph())).collect();
        let g = substitute_all(&outer, &subs).expect("decorations fit their vertices");
        let decs = self.decorations.iter().flat_map(|d| d.decorations.iter().cloned()).collect();
        DecoratedGraph::new(&g, decs).expect("substitution keeps the typing")
    }
}

/// A finite rational combination of decorated graphs with a common boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Free<B> {
    boundary: Boundary,
    terms: BTreeMap<DecoratedGraph<B>, Q>,
}

/// Elements of the free wheeled prop on a signature.
pub type FreeElement = Free<GenInstance>;

impl<B: Basis> Free<B> {
    pub fn zero(boundary: Boundary) -> Self {
        Free { boundary, terms: BTreeMap::new() }
    }

    pub fn basis(key: DecoratedGraph<B>) -> Self {
        let mut terms = BTreeMap::new();
        let boundary = key.boundary();
        terms.insert(key, Q::one());
        Free { boundary, terms }
    }

    pub fn from_terms(boundary: Boundary, terms: impl IntoIterator<Item = (DecoratedGraph<B>, Q)>) -> WResult<Self> {
        let mut out = Free::zero(boundary);
        for (k, c) in terms {
            if k.boundary() != out.boundary {
                return Err(WPropError::BoundaryMismatch { expected: out.boundary.clone(), found: k.boundary() });
            }
            out.add_term(k, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, key: DecoratedGraph<B>, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// The corolla on a single basis element.
    pub fn eta(b: B) -> Self {
        Free::basis(DecoratedGraph::corolla(b))
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedGraph<B>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Free<B>) -> WResult<Self> {
        if self.boundary != other.boundary {
            return Err(WPropError::BoundaryMismatch {
                expected: self.boundary.clone(),
                found: other.boundary.clone(),
            });
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Free::zero(self.boundary.clone());
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Decorates `outer` with one element per vertex, expanding multilinearly.
    pub fn nested(outer: &DirectedGraph, decorations: &[Free<B>]) -> WResult<Free<DecoratedGraph<B>>> {
        if decorations.len() != outer.vertex_count() {
            return Err(WPropError::DecorationCount { vertices: outer.vertex_count(), decorations: decorations.len() });
        }
        for (v, d) in decorations.iter().enumerate() {
            let expected = outer.neighbourhood(v);
            if d.boundary != expected {
                return Err(WPropError::BoundaryMismatch { expected, found: d.boundary.clone() });
            }
        }
        let mut partial: Vec<(Vec<DecoratedGraph<B>>, Q)> = vec![(Vec::new(), Q::one())];
        for d in decorations {
            let mut next = Vec::with_capacity(partial.len() * d.terms.len());
            for (keys, c) in &partial {
                for (k, c2) in &d.terms {
                    let mut ks = keys.clone();
                    ks.push(k.clone());
                    next.push((ks, c * c2));
                }
            }
            partial = next;
        }
        let mut out = Free::zero(outer.boundary());
        for (keys, c) in partial {
            out.add_term(DecoratedGraph::new(outer, keys)?, c);
        }
        Ok(out)
    }

    /// Applies a linear map given on basis elements to every decoration.
    pub fn map_basis<C: Basis>(&self, f: impl Fn(&B) -> WResult<Free<C>>) -> WResult<Free<C>> {
        let mut out = Free::zero(self.boundary.clone());
        for (key, c) in &self.terms {
            let images = key.decorations.iter().map(&f).collect::<WResult<Vec<_>>>()?;
            let expanded = Free::nested(&key.graph(), &images)?;
            for (k, c2) in expanded.terms {
                out.add_term(k.flatten(), c * c2);
            }
        }
        Ok(out)
    }

    /// Decorates `outer` and flattens in one step.
    pub fn flatten_over(outer: &DirectedGraph, decorations: &[Free<B>]) -> WResult<Free<B>> {
        Ok(Free::nested(outer, decorations)?.flatten())
    }

    pub fn unit_empty() -> Self {
        Free::basis(DecoratedGraph::new(&DirectedGraph::empty(), vec![]).expect("empty graph"))
    }

    /// The free edge from input `i` to output `i`.
    pub fn unit(i: &Label) -> Self {
        Free::basis(DecoratedGraph::new(&free_edge_graph(i, i), vec![]).expect("free edge"))
    }

    pub fn horizontal(&self, other: &Free<B>) -> WResult<Self> {
        let outer = two_corollas(&self.boundary, &other.boundary).map_err(|e| match e {
            GraphError::LabelClash(l) => WPropError::LabelClash(l),
            e => e.into(),
        })?;
        Free::flatten_over(&outer, &[self.clone(), other.clone()])
    }

    /// Glues boundary input `i` to boundary output `j`.
    pub fn contract(&self, i: &Label, j: &Label) -> WResult<Self> {
        for (l, set) in [(i, &self.boundary.inputs), (j, &self.boundary.outputs)] {
            if !set.contains(l) {
                return Err(WPropError::UnknownLabel(l.clone()));
            }
        }
        let outer = tadpole(&self.boundary, i, j)?;
        Free::flatten_over(&outer, std::slice::from_ref(self))
    }

    pub fn relabel(&self, f: &Bijection, g: &Bijection) -> WResult<Self> {
        check_relabelling(&self.boundary, f, g)?;
        let outer = corolla_relabelled(&self.boundary.inputs, &self.boundary.outputs, f, g)?;
        Free::flatten_over(&outer, std::slice::from_ref(self))
    }

    /// Connects output `l` of `b` to input `i` of `self`.
    pub fn dioperadic(&self, i: &Label, b: &Free<B>, l: &Label) -> WResult<Self> {
        self.horizontal(b)?.contract(i, l)
    }
}

impl<B: Basis> Free<DecoratedGraph<B>> {
    /// The monad multiplication.
    pub fn flatten(&self) -> Free<B> {
        let mut out = Free::zero(self.boundary.clone());
        for (k, c) in &self.terms {
            out.add_term(k.flatten(), c.clone());
        }
        out
    }
}

impl FreeElement {
    /// A generator placed on a corolla with sorted slot assignment.
    pub fn generator(
        sig: &Signature,
        symbol: &str,
        inputs: &BTreeSet<Label>,
        outputs: &BTreeSet<Label>,
    ) -> WResult<Self> {
        Ok(Free::eta(sig.instance(symbol, inputs, outputs)?))
    }
}

#[derive(Serialize, Deserialize)]
struct RawTerm<B> {
    coefficient: String,
    graph: DirectedGraph,
    decorations: Vec<B>,
}

#[derive(Serialize, Deserialize)]
struct RawElement<B> {
    boundary: Boundary,
    terms: Vec<RawTerm<B>>,
}

impl<B: Basis + Serialize> Serialize for Free<B> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawElement {
            boundary: self.boundary.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| RawTerm {
                    coefficient: c.to_string(),
                    graph: k.graph(),
                    decorations: k.decorations.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, B: Basis + Deserialize<'de>> Deserialize<'de> for Free<B> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawElement::<B>::deserialize(d)?;
        let mut terms = Vec::new();
        for t in raw.terms {
            let c = crate::parse_rational(&t.coefficient)
                .ok_or_else(|| D::Error::custom(format!("not a rational: {}", t.coefficient)))?;
            terms.push((DecoratedGraph::new(&t.graph, t.decorations).map_err(D::Error::custom)?, c));
        }
        Free::from_terms(raw.boundary, terms).map_err(D::Error::custom)
    }
}

impl<B: Basis + Serialize> Serialize for DecoratedGraph<B> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a, B> {
            graph: DirectedGraph,
            decorations: &'a [B],
        }
        Raw { graph: self.graph(), decorations: &self.decorations }.serialize(s)
    }
}

impl<'de, B: Basis + Deserialize<'de>> Deserialize<'de> for DecoratedGraph<B> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw<B> {
            graph: DirectedGraph,
            decorations: Vec<B>,
        }
        let raw = Raw::<B>::deserialize(d)?;
        DecoratedGraph::new(&raw.graph, raw.decorations).map_err(D::Error::custom)
    }
}

/// `eta` on a generator of `sig`.
pub fn eta(sig: &Signature, symbol: &str, inputs: &BTreeSet<Label>, outputs: &BTreeSet<Label>) -> WResult<FreeElement> {
    FreeElement::generator(sig, symbol, inputs, outputs)
}

/// Substitutes each vertex's element into `outer` and flattens.
pub fn flatten<B: Basis>(outer: &DirectedGraph, decorations: &[Free<B>]) -> WResult<Free<B>> {
    Free::flatten_over(outer, decorations)
}

fn check_relabelling(bd: &Boundary, f: &Bijection, g: &Bijection) -> WResult<()> {
    if f.domain() != bd.inputs || g.domain() != bd.outputs {
        return Err(WPropError::NotABijection(format!(
            "relabelling must be defined on {:?} and {:?}",
            bd.inputs, bd.outputs
        )));
    }
    Ok(())
}

/// The operations every wheeled prop offers.
pub trait WheeledProp {
    type Elem: Clone + Debug;

    fn boundary(&self, a: &Self::Elem) -> Boundary;
    fn horizontal(&self, a: &Self::Elem, b: &Self::Elem) -> crate::Result<Self::Elem>;
    fn contract(&self, a: &Self::Elem, i: &Label, j: &Label) -> crate::Result<Self::Elem>;
    fn unit_empty(&self) -> Self::Elem;
    fn unit(&self, i: &Label) -> Self::Elem;
    fn relabel(&self, a: &Self::Elem, f: &Bijection, g: &Bijection) -> crate::Result<Self::Elem>;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// Relabelling by permutations of the two boundary sets.
    fn act(&self, sigma: &Bijection, a: &Self::Elem, tau: &Bijection) -> crate::Result<Self::Elem> {
        if !sigma.is_permutation() || !tau.is_permutation() {
            return Err(WPropError::NotABijection("act needs permutations".into()).into());
        }
        self.relabel(a, sigma, tau)
    }

    fn dioperadic(&self, a: &Self::Elem, i: &Label, b: &Self::Elem, l: &Label) -> crate::Result<Self::Elem> {
        let ab = self.horizontal(a, b)?;
        self.contract(&ab, i, l)
    }
}

/// The free wheeled prop, with flattening as its structure map.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeProp;

impl WheeledProp for FreeProp {
    type Elem = FreeElement;

    fn boundary(&self, a: &FreeElement) -> Boundary {
        a.boundary.clone()
    }

    fn horizontal(&self, a: &FreeElement, b: &FreeElement) -> crate::Result<FreeElement> {
        Ok(a.horizontal(b)?)
    }

    fn contract(&self, a: &FreeElement, i: &Label, j: &Label) -> crate::Result<FreeElement> {
        Ok(a.contract(i, j)?)
    }

    fn unit_empty(&self) -> FreeElement {
        Free::unit_empty()
    }

    fn unit(&self, i: &Label) -> FreeElement {
        Free::unit(i)
    }

    fn relabel(&self, a: &FreeElement, f: &Bijection, g: &Bijection) -> crate::Result<FreeElement> {
        Ok(a.relabel(f, g)?)
    }

    fn equal(&self, a: &FreeElement, b: &FreeElement) -> bool {
        a == b
    }
}

/// Evaluates a decorated graph in `w` using only the biased operations.
///
/// Every flag gets a private label; vertex elements are multiplied in one at
/// a time, each internal edge is contracted as soon as both ends are present,
/// free edges are units and free loops are contracted units.
pub fn structure_map<W: WheeledProp>(w: &W, g: &DirectedGraph, decorations: &[W::Elem]) -> crate::Result<W::Elem> {
    if decorations.len() != g.vertex_count() {
        return Err(WPropError::DecorationCount { vertices: g.vertex_count(), decorations: decorations.len() }.into());
    }
    let mut used: BTreeSet<Label> = g.boundary().all_labels();
    for v in 0..g.vertex_count() {
        used.extend(g.neighbourhood(v).all_labels());
    }
    let names = fresh_labels("~", g.flags().len(), &used);
    let name: BTreeMap<_, _> = g.flags().iter().copied().zip(names).collect();

    let mut acc = w.unit_empty();
    let mut done = vec![false; g.vertex_count()];
    let edges = g.edges();
    for (v, a) in decorations.iter().enumerate() {
        let expected = g.neighbourhood(v);
        let found = w.boundary(a);
        if expected != found {
            return Err(WPropError::BoundaryMismatch { expected, found }.into());
        }
        let mut f = BTreeMap::new();
        let mut h = BTreeMap::new();
        for &x in g.vertex(v) {
            let lab = g.lambda(x).unwrap().clone();
            match g.delta(x).unwrap() {
                Sign::Pos => f.insert(lab, name[&x].clone()),
                Sign::Neg => h.insert(lab, name[&x].clone()),
            };
        }
        let a = w.relabel(a, &Bijection::new(f)?, &Bijection::new(h)?)?;
        acc = w.horizontal(&acc, &a)?;
        done[v] = true;
        for &(n, p) in &edges {
            let (vn, vp) = (g.owner(n).unwrap(), g.owner(p).unwrap());
            if done[vn] && done[vp] && (vn == v || vp == v) {
                acc = w.contract(&acc, &name[&p], &name[&n])?;
            }
        }
    }
    let mut fin = BTreeMap::new();
    let mut fout = BTreeMap::new();
    for (p, n) in g.free_edges() {
        acc = w.horizontal(&acc, &w.unit(&name[&p]))?;
        fin.insert(name[&p].clone(), g.beta(p).unwrap().clone());
        fout.insert(name[&p].clone(), g.beta(n).unwrap().clone());
    }
    if g.loop_count() > 0 {
        let u = fresh_labels("~loop", 1, &used).pop().unwrap();
        let circle = w.contract(&w.unit(&u), &u, &u)?;
        for _ in 0..g.loop_count() {
            acc = w.horizontal(&acc, &circle)?;
        }
    }
    for &x in g.flags() {
        if g.owner(x).is_some() && g.is_boundary(x) {
            let b = g.beta(x).unwrap().clone();
            match g.delta(x).unwrap() {
                Sign::Pos => fin.insert(name[&x].clone(), b),
                Sign::Neg => fout.insert(name[&x].clone(), b),
            };
        }
    }
    w.relabel(&acc, &Bijection::new(fin)?, &Bijection::new(fout)?)
}

/// The action of a wiring diagram on a wheeled prop.
///
/// `args[k]` must have inputs `A_{k+1}^in` and outputs `A_{k+1}^out`; the
/// result has inputs `A_0^out` and outputs `A_0^in`.
pub fn wd_action<W: WheeledProp>(w: &W, d: &WiringDiagram, args: &[W::Elem]) -> crate::Result<W::Elem> {
    structure_map(w, &wd_to_graph(d), args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{free_loops_graph, GraphBuilder};
    use crate::label::{l, labels, permutations_of};
    use crate::wiring::{identity_diagram, permutation_diagram};

    fn sig() -> Signature {
        Signature::new([("g", 2, 1), ("h", 1, 2)])
    }

    fn g_at(i: &[&str], o: &[&str]) -> FreeElement {
        eta(&sig(), "g", &labels(i), &labels(o)).unwrap()
    }

    #[test]
    fn eta_builds_one_corolla() {
        let x = g_at(&["a", "b"], &["c"]);
        assert_eq!(x.terms().len(), 1);
        let (k, c) = x.terms().iter().next().unwrap();
        assert!(c.is_one());
        assert_eq!(k.vertex_count(), 1);
        assert!(matches!(eta(&sig(), "g", &labels(&["a"]), &labels(&["c"])), Err(WPropError::ArityMismatch { .. })));
        assert!(matches!(eta(&sig(), "k", &labels(&[]), &labels(&[])), Err(WPropError::UnknownGenerator(_))));
    }

    #[test]
    fn flatten_around_a_corolla_is_identity() {
        let x = g_at(&["a", "b"], &["c"]).add(&g_at(&["b", "a"], &["c"]).scale(&crate::q(3, 2))).unwrap();
        let bd = x.boundary().clone();
        assert_eq!(flatten(&corolla(&bd.inputs, &bd.outputs), std::slice::from_ref(&x)).unwrap(), x);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let x = g_at(&["a", "b"], &["c"]);
        let y = x.add(&x.scale(&crate::q(-1, 1))).unwrap();
        assert!(y.is_zero());
        let bd = y.boundary().clone();
        assert!(flatten(&corolla(&bd.inputs, &bd.outputs), &[y]).unwrap().is_zero());
    }

    #[test]
    fn contracting_the_unit_gives_the_loop() {
        let i = l("i");
        let loop_elem = Free::<GenInstance>::basis(DecoratedGraph::new(&free_loops_graph(1), vec![]).unwrap());
        assert_eq!(Free::<GenInstance>::unit(&i).contract(&i, &i).unwrap(), loop_elem);
    }

    #[test]
    fn horizontal_unit_and_symmetry() {
        let a = g_at(&["a", "b"], &["c"]);
        let b = eta(&sig(), "h", &labels(&["x"]), &labels(&["y", "z"])).unwrap();
        assert_eq!(a.horizontal(&Free::unit_empty()).unwrap(), a);
        assert_eq!(a.horizontal(&b).unwrap(), b.horizontal(&a).unwrap());
        assert!(matches!(a.horizontal(&a), Err(WPropError::LabelClash(_))));
    }

    #[test]
    fn dioperadic_matches_hand_glued_corollas() {
        // g(a,b;c) fed by h(x;y,z) along z -> b.
        let a = g_at(&["a", "b"], &["c"]);
        let b = eta(&sig(), "h", &labels(&["x"]), &labels(&["y", "z"])).unwrap();
        let got = a.dioperadic(&l("b"), &b, &l("z")).unwrap();

        let mut gb = GraphBuilder::new();
        let v = gb.add_vertex();
        let w = gb.add_vertex();
        let fa = gb.add_flag(v, Sign::Pos, l("a"));
        let fb = gb.add_flag(v, Sign::Pos, l("b"));
        let fc = gb.add_flag(v, Sign::Neg, l("c"));
        let fx = gb.add_flag(w, Sign::Pos, l("x"));
        let fy = gb.add_flag(w, Sign::Neg, l("y"));
        let fz = gb.add_flag(w, Sign::Neg, l("z"));
        gb.join(fz, fb);
        for (f, lab) in [(fa, "a"), (fc, "c"), (fx, "x"), (fy, "y")] {
            gb.set_boundary(f, l(lab));
        }
        let g = gb.build().unwrap();
        let decs = vec![
            sig().instance("g", &labels(&["a", "b"]), &labels(&["c"])).unwrap(),
            sig().instance("h", &labels(&["x"]), &labels(&["y", "z"])).unwrap(),
        ];
        assert_eq!(got, Free::basis(DecoratedGraph::new(&g, decs).unwrap()));
    }

    #[test]
    fn relabel_by_identity_and_act_composes() {
        let x = g_at(&["a", "b"], &["c"]).add(&g_at(&["b", "a"], &["c"]).scale(&crate::q(2, 1))).unwrap();
        let bd = x.boundary().clone();
        let idi = Bijection::identity(&bd.inputs);
        let ido = Bijection::identity(&bd.outputs);
        assert_eq!(x.relabel(&idi, &ido).unwrap(), x);
        let w = FreeProp;
        for s in permutations_of(&bd.inputs) {
            for s2 in permutations_of(&bd.inputs) {
                let lhs = w.act(&s.compose(&s2), &x, &ido).unwrap();
                let rhs = w.act(&s, &w.act(&s2, &x, &ido).unwrap(), &ido).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn action_of_identity_and_permutation_diagrams() {
        let w = FreeProp;
        let x = g_at(&["a", "b"], &["c"]);
        // Box interface (out A^out, in A^in) = (out {c}, in {a,b}).
        let d = identity_diagram(&labels(&["a", "b"]), &labels(&["c"]));
        assert_eq!(wd_action(&w, &d, std::slice::from_ref(&x)).unwrap(), x);
        let sigma = Bijection::from_pairs([("a", "b"), ("b", "a")]).unwrap();
        let p = permutation_diagram(&sigma, &Bijection::identity(&labels(&["c"]))).unwrap();
        let expected = w.act(&sigma, &x, &Bijection::identity(&labels(&["c"]))).unwrap();
        assert_eq!(wd_action(&w, &p, &[x]).unwrap(), expected);
    }

    #[test]
    fn structure_map_of_free_elements_is_flatten() {
        let a = g_at(&["a", "b"], &["c"]);
        let b = eta(&sig(), "h", &labels(&["x"]), &labels(&["y", "z"])).unwrap();
        let outer = two_corollas(a.boundary(), b.boundary()).unwrap();
        let outer = crate::graphs::contract_boundary(&outer, &l("b"), &l("z")).unwrap();
        let via_ops = structure_map(&FreeProp, &outer, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(via_ops, flatten(&outer, &[a, b]).unwrap());
    }
}
