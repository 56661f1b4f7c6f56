//! Random instances for property tests, the axiom suite and the examples.
//!
//! Everything takes an explicit generator so runs are reproducible from a seed.

use std::collections::BTreeSet;

use num::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::endo::Tensor;
use crate::graphs::{DirectedGraph, FlagId, GraphBuilder, Sign};
use crate::label::{l, Boundary, Label};
use crate::wiring::{Endpoint, Interface, Polarity, WiringDiagram};
use crate::wprop::{Basis, DecoratedGraph, Free, FreeElement, GenInstance, Signature};
use crate::Q;

const LETTERS: [&str; 10] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];

/// A random subset of size `n` of the letter pool.
fn label_set<R: Rng>(rng: &mut R, n: usize) -> BTreeSet<Label> {
    LETTERS.choose_multiple(rng, n).map(|s| l(s)).collect()
}

/// A small nonzero-biased rational `p/q` with `|p| ≤ 3`, `1 ≤ q ≤ 3`.
pub fn rational<R: Rng>(rng: &mut R) -> Q {
    Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into())
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Q {
    loop {
        let x = rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Size limits for random diagrams.
#[derive(Clone, Copy, Debug)]
pub struct DiagramShape {
    pub max_boxes: usize,
    pub max_labels: usize,
    pub max_circles: usize,
}

impl Default for DiagramShape {
    fn default() -> Self {
        DiagramShape { max_boxes: 5, max_labels: 4, max_circles: 2 }
    }
}

/// A random diagram within `shape`.
pub fn diagram(rng: &mut ChaCha8Rng, shape: DiagramShape) -> WiringDiagram {
    let n_out = rng.gen_range(0..=shape.max_labels);
    let n_in = rng.gen_range(0..=shape.max_labels);
    let output = Interface::new(label_set(rng, n_out), label_set(rng, n_in));
    diagram_inner(rng, shape, output, false)
}

/// A random diagram with the given output interface and at least `min_boxes` input boxes.
pub fn diagram_with_output(
    rng: &mut ChaCha8Rng,
    shape: DiagramShape,
    output: Interface,
    min_boxes: usize,
) -> WiringDiagram {
    loop {
        let d = diagram_inner(rng, shape, output.clone(), true);
        if d.input_count() >= min_boxes {
            return d;
        }
    }
}

fn diagram_inner(rng: &mut ChaCha8Rng, shape: DiagramShape, output: Interface, fixed: bool) -> WiringDiagram {
    let r = rng.gen_range(0..=shape.max_boxes);
    let mut boxes: Vec<(usize, usize)> =
        (0..r).map(|_| (rng.gen_range(0..=shape.max_labels), rng.gen_range(0..=shape.max_labels))).collect();
    let mut out0 = output.out_labels.len();
    let mut in0 = output.in_labels.len();
    // Balance Out and In endpoints by growing or shrinking interfaces.
    loop {
        let outs: usize = out0 + boxes.iter().map(|b| b.0).sum::<usize>();
        let ins: usize = in0 + boxes.iter().map(|b| b.1).sum::<usize>();
        if outs == ins {
            break;
        }
        let need_in = outs > ins;
        let k = rng.gen_range(0..=boxes.len());
        let grow = rng.gen_bool(0.5);
        if k == boxes.len() {
            if fixed {
                if boxes.is_empty() && r < shape.max_boxes.max(1) {
                    boxes.push((0, 0));
                }
                continue;
            }
            let (o, i) = (&mut out0, &mut in0);
            adjust(o, i, need_in, grow, shape.max_labels);
        } else {
            let b = &mut boxes[k];
            adjust(&mut b.0, &mut b.1, need_in, grow, shape.max_labels);
        }
    }
    let output = if fixed {
        output
    } else {
        let keep_out: BTreeSet<Label> = output.out_labels.iter().take(out0).cloned().collect();
        let mut out_labels = keep_out;
        let mut in_labels: BTreeSet<Label> = output.in_labels.iter().take(in0).cloned().collect();
        top_up(rng, &mut out_labels, out0);
        top_up(rng, &mut in_labels, in0);
        Interface::new(out_labels, in_labels)
    };
    let inputs: Vec<Interface> =
        boxes.iter().map(|&(o, i)| Interface::new(label_set(rng, o), label_set(rng, i))).collect();
    let mut outs = Vec::new();
    let mut ins = Vec::new();
    for (b, iface) in std::iter::once(&output).chain(inputs.iter()).enumerate() {
        outs.extend(iface.out_labels.iter().map(|a| Endpoint(b, Polarity::Out, a.clone())));
        ins.extend(iface.in_labels.iter().map(|a| Endpoint(b, Polarity::In, a.clone())));
    }
    ins.shuffle(rng);
    let circles = rng.gen_range(0..=shape.max_circles);
    WiringDiagram::new(output, inputs, outs.into_iter().zip(ins), circles).expect("balanced random diagram")
}

fn adjust(out: &mut usize, inn: &mut usize, need_in: bool, grow: bool, max: usize) {
    let (more, less) = if need_in { (inn, out) } else { (out, inn) };
    if grow && *more < max {
        *more += 1;
    } else if *less > 0 {
        *less -= 1;
    }
}

fn top_up<R: Rng>(rng: &mut R, set: &mut BTreeSet<Label>, n: usize) {
    while set.len() < n {
        set.insert(l(LETTERS.choose(rng).expect("pool")));
    }
}

/// Which associativity square a triple exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleShape {
    /// `d3` goes into a box of `d2`, which goes into box `i` of `d`.
    Nested,
    /// `d2` and `d3` go into two different boxes `i < j` of `d`.
    Parallel,
}

#[derive(Clone, Debug)]
pub struct ComposableTriple {
    pub shape: TripleShape,
    pub d: WiringDiagram,
    pub i: usize,
    pub d2: WiringDiagram,
    /// A box of `d2` for [`TripleShape::Nested`], of `d` for [`TripleShape::Parallel`].
    pub j: usize,
    pub d3: WiringDiagram,
}

/// A random diagram with at least `min_boxes` input boxes.
pub fn diagram_with_boxes(rng: &mut ChaCha8Rng, shape: DiagramShape, min_boxes: usize) -> WiringDiagram {
    loop {
        let d = diagram(rng, shape);
        if d.input_count() >= min_boxes {
            return d;
        }
    }
}

pub fn composable_triple(rng: &mut ChaCha8Rng, shape: DiagramShape, kind: TripleShape) -> ComposableTriple {
    match kind {
        TripleShape::Nested => {
            let d = diagram_with_boxes(rng, shape, 1);
            let i = rng.gen_range(1..=d.input_count());
            let d2 = diagram_with_output(rng, shape, d.inputs()[i - 1].flipped(), 1);
            let j = rng.gen_range(1..=d2.input_count());
            let d3 = diagram_with_output(rng, shape, d2.inputs()[j - 1].flipped(), 0);
            ComposableTriple { shape: kind, d, i, d2, j, d3 }
        }
        TripleShape::Parallel => {
            let d = diagram_with_boxes(rng, shape, 2);
            let mut picks: Vec<usize> = (1..=d.input_count()).collect();
            picks.shuffle(rng);
            let (i, j) = (picks[0].min(picks[1]), picks[0].max(picks[1]));
            let d2 = diagram_with_output(rng, shape, d.inputs()[i - 1].flipped(), 0);
            let d3 = diagram_with_output(rng, shape, d.inputs()[j - 1].flipped(), 0);
            ComposableTriple { shape: kind, d, i, d2, j, d3 }
        }
    }
}

/// A random permutation of `1..=n`, as a list of images.
pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (1..=n).collect();
    p.shuffle(rng);
    p
}

/// Size limits for random graphs.
#[derive(Clone, Copy, Debug)]
pub struct GraphShape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_free_edges: usize,
    pub max_loops: usize,
    pub max_arity: usize,
}

impl Default for GraphShape {
    fn default() -> Self {
        GraphShape { max_vertices: 4, max_edges: 3, max_free_edges: 2, max_loops: 2, max_arity: 3 }
    }
}

/// Renumbers flags by a random injection into `0..1000`.
pub fn shuffle_flags(rng: &mut ChaCha8Rng, g: &DirectedGraph) -> DirectedGraph {
    let ids: Vec<FlagId> = rand::seq::index::sample(rng, 1000, g.flags().len()).into_iter().map(|x| x as u32).collect();
    let old: Vec<FlagId> = g.flags().iter().copied().collect();
    g.rename_flags(|x| ids[old.binary_search(&x).expect("known flag")])
}

/// A random graph within `shape`, with random boundary labels and flag ids.
pub fn graph(rng: &mut ChaCha8Rng, shape: GraphShape) -> DirectedGraph {
    let nv = rng.gen_range(0..=shape.max_vertices);
    let arities: Vec<(usize, usize)> =
        (0..nv).map(|_| (rng.gen_range(0..=shape.max_arity), rng.gen_range(0..=shape.max_arity))).collect();
    let pos: usize = arities.iter().map(|a| a.0).sum();
    let neg: usize = arities.iter().map(|a| a.1).sum();
    let e = rng.gen_range(0..=shape.max_edges.min(pos).min(neg));
    let f = rng.gen_range(0..=shape.max_free_edges);
    let bd = Boundary::new(fresh_pool(rng, pos - e + f, "i"), fresh_pool(rng, neg - e + f, "o"));
    let loops = rng.gen_range(0..=shape.max_loops);
    let g = build(rng, &bd, &arities, e, f, loops);
    shuffle_flags(rng, &g)
}

/// `n` distinct labels `prefix0, prefix1, ...` in random order of use.
fn fresh_pool<R: Rng>(rng: &mut R, n: usize, prefix: &str) -> BTreeSet<Label> {
    let mut ids: Vec<usize> = (0..n + 3).collect();
    ids.shuffle(rng);
    ids.into_iter().take(n).map(|k| l(&format!("{prefix}{k}"))).collect()
}

/// Builds a graph with the given boundary, vertex arities, internal edge count, free edges and loops.
///
/// Requires `Σ in-arity = |in| - free + edges` and likewise for outputs.
fn build(
    rng: &mut ChaCha8Rng,
    bd: &Boundary,
    arities: &[(usize, usize)],
    edges: usize,
    free: usize,
    loops: usize,
) -> DirectedGraph {
    let mut b = GraphBuilder::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &(ni, no) in arities {
        let v = b.add_vertex();
        for a in label_set(rng, ni) {
            pos.push(b.add_flag(v, Sign::Pos, a));
        }
        for a in label_set(rng, no) {
            neg.push(b.add_flag(v, Sign::Neg, a));
        }
    }
    pos.shuffle(rng);
    neg.shuffle(rng);
    for k in 0..edges {
        b.join(neg[k], pos[k]);
    }
    let mut ins: Vec<Label> = bd.inputs.iter().cloned().collect();
    let mut outs: Vec<Label> = bd.outputs.iter().cloned().collect();
    ins.shuffle(rng);
    outs.shuffle(rng);
    for _ in 0..free {
        b.add_free_edge(ins.pop().expect("enough inputs"), outs.pop().expect("enough outputs"));
    }
    assert_eq!(ins.len(), pos.len() - edges, "input count");
    assert_eq!(outs.len(), neg.len() - edges, "output count");
    for (x, a) in pos[edges..].iter().zip(ins) {
        b.set_boundary(*x, a);
    }
    for (x, a) in neg[edges..].iter().zip(outs) {
        b.set_boundary(*x, a);
    }
    b.add_loops(loops);
    b.build().expect("random graph is valid")
}

/// A random graph with exactly the boundary `bd`.
///
/// With `arities`, every vertex has one of the listed `(in, out)` arities;
/// otherwise arities are drawn up to `shape.max_arity`.
pub fn graph_with_boundary(
    rng: &mut ChaCha8Rng,
    bd: &Boundary,
    shape: GraphShape,
    arities: Option<&[(usize, usize)]>,
) -> DirectedGraph {
    let (ni, no) = (bd.inputs.len(), bd.outputs.len());
    for _ in 0..1000 {
        let f = rng.gen_range(0..=ni.min(no).min(shape.max_free_edges));
        let (ri, ro) = (ni - f, no - f);
        let nv = rng.gen_range(0..=shape.max_vertices);
        let vs: Vec<(usize, usize)> = match arities {
            Some(list) => (0..nv).map(|_| *list.choose(rng).expect("nonempty arity list")).collect(),
            None => (0..nv).map(|_| (rng.gen_range(0..=shape.max_arity), rng.gen_range(0..=shape.max_arity))).collect(),
        };
        let p: usize = vs.iter().map(|a| a.0).sum();
        let n: usize = vs.iter().map(|a| a.1).sum();
        if p < ri || n < ro || p - ri != n - ro || p - ri > shape.max_edges.max(3) {
            continue;
        }
        let loops = rng.gen_range(0..=shape.max_loops);
        let g = build(rng, bd, &vs, p - ri, f, loops);
        return shuffle_flags(rng, &g);
    }
    panic!("no graph found with boundary {bd:?} under {shape:?}");
}

/// The two-generator signature `g: (2,1)`, `h: (1,2)`.
pub fn two_generator_signature() -> Signature {
    Signature::new([("g", 2, 1), ("h", 1, 2)])
}

/// A generator of `sig` fitting the boundary, with shuffled slots.
fn instance_for(rng: &mut ChaCha8Rng, sig: &Signature, bd: &Boundary) -> GenInstance {
    let fits: Vec<_> =
        sig.generators.iter().filter(|g| g.inputs == bd.inputs.len() && g.outputs == bd.outputs.len()).collect();
    let g = fits.choose(rng).expect("some generator fits");
    let mut ins: Vec<Label> = bd.inputs.iter().cloned().collect();
    let mut outs: Vec<Label> = bd.outputs.iter().cloned().collect();
    ins.shuffle(rng);
    outs.shuffle(rng);
    sig.instance_with(&g.symbol, ins, outs).expect("arity fits")
}

/// A random decorated graph whose vertices carry generators of `sig`.
pub fn signature_key(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    bd: &Boundary,
    shape: GraphShape,
) -> DecoratedGraph<GenInstance> {
    let ar: Vec<(usize, usize)> = sig.generators.iter().map(|g| (g.inputs, g.outputs)).collect();
    let g = graph_with_boundary(rng, bd, shape, Some(&ar));
    let decs = (0..g.vertex_count()).map(|v| instance_for(rng, sig, &g.neighbourhood(v))).collect();
    DecoratedGraph::new(&g, decs).expect("decorations fit")
}

/// A random element of the free wheeled prop with one or two terms.
pub fn free_element(rng: &mut ChaCha8Rng, sig: &Signature, bd: &Boundary, shape: GraphShape) -> FreeElement {
    let terms = rng.gen_range(1..=2);
    let keys: Vec<_> = (0..terms).map(|_| (signature_key(rng, sig, bd, shape), nonzero_rational(rng))).collect();
    Free::from_terms(bd.clone(), keys).expect("same boundary")
}

/// A generator instance with any arity; symbols are drawn from `p`, `q`.
pub fn loose_instance(rng: &mut ChaCha8Rng, bd: &Boundary) -> GenInstance {
    let mut ins: Vec<Label> = bd.inputs.iter().cloned().collect();
    let mut outs: Vec<Label> = bd.outputs.iter().cloned().collect();
    ins.shuffle(rng);
    outs.shuffle(rng);
    let sym = if rng.gen_bool(0.5) { "p" } else { "q" };
    GenInstance::new(sym, ins, outs).expect("distinct labels")
}

/// A random decorated graph with boundary `bd`, decorating vertex `v` with `leaf(nbh(v))`.
pub fn decorated<B: Basis>(
    rng: &mut ChaCha8Rng,
    bd: &Boundary,
    shape: GraphShape,
    leaf: &mut dyn FnMut(&mut ChaCha8Rng, &Boundary) -> B,
) -> DecoratedGraph<B> {
    let g = graph_with_boundary(rng, bd, shape, None);
    let decs = (0..g.vertex_count()).map(|v| leaf(rng, &g.neighbourhood(v))).collect();
    DecoratedGraph::new(&g, decs).expect("decorations fit")
}

/// A random element of `F(B)` with one to three terms.
pub fn element_of<B: Basis>(
    rng: &mut ChaCha8Rng,
    bd: &Boundary,
    shape: GraphShape,
    leaf: &mut dyn FnMut(&mut ChaCha8Rng, &Boundary) -> B,
) -> Free<B> {
    let terms = rng.gen_range(1..=3);
    let keys: Vec<_> = (0..terms).map(|_| (decorated(rng, bd, shape, leaf), nonzero_rational(rng))).collect();
    Free::from_terms(bd.clone(), keys).expect("same boundary")
}

/// A random boundary with up to `max` labels per side.
pub fn boundary(rng: &mut ChaCha8Rng, max: usize) -> Boundary {
    let ni = rng.gen_range(0..=max);
    let no = rng.gen_range(0..=max);
    Boundary::new(fresh_pool(rng, ni, "i"), fresh_pool(rng, no, "o"))
}

/// A random dense tensor with axes from `bd`.
pub fn tensor(rng: &mut ChaCha8Rng, d: usize, bd: &Boundary) -> Tensor {
    let axes = bd
        .inputs
        .iter()
        .map(|a| (Polarity::In, a.clone()))
        .chain(bd.outputs.iter().map(|a| (Polarity::Out, a.clone())))
        .collect();
    Tensor::from_fn(d, axes, |_| rational(rng)).expect("axis count within cap")
}

/// A random square matrix.
pub fn matrix(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<Q>> {
    (0..d).map(|_| (0..d).map(|_| rational(rng)).collect()).collect()
}

/// Sampler for the free wheeled prop on the two-generator signature.
pub fn free_sampler() -> impl Fn(&Boundary, &mut ChaCha8Rng) -> FreeElement {
    let sig = two_generator_signature();
    let shape = GraphShape { max_vertices: 3, max_edges: 3, max_free_edges: 2, max_loops: 1, max_arity: 2 };
    move |bd, rng| free_element(rng, &sig, bd, shape)
}

/// Sampler for `End(Q^d)`.
pub fn tensor_sampler(d: usize) -> impl Fn(&Boundary, &mut ChaCha8Rng) -> Tensor {
    move |bd, rng| tensor(rng, d, bd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn diagrams_respect_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let d = diagram(&mut rng, DiagramShape::default());
            assert!(d.input_count() <= 5);
            assert!(d.circles() <= 2);
            for iface in std::iter::once(d.output()).chain(d.inputs()) {
                assert!(iface.out_labels.len() <= 4 && iface.in_labels.len() <= 4);
            }
        }
    }

    #[test]
    fn prescribed_outputs_are_kept() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let t = composable_triple(&mut rng, DiagramShape::default(), TripleShape::Nested);
            assert_eq!(t.d2.output(), &t.d.inputs()[t.i - 1].flipped());
            assert_eq!(t.d3.output(), &t.d2.inputs()[t.j - 1].flipped());
        }
    }

    #[test]
    fn graphs_with_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sig = two_generator_signature();
        for _ in 0..100 {
            let bd = boundary(&mut rng, 3);
            let k = signature_key(&mut rng, &sig, &bd, GraphShape::default());
            assert_eq!(k.boundary(), bd);
            let g = graph_with_boundary(&mut rng, &bd, GraphShape::default(), None);
            assert_eq!(g.boundary(), bd);
        }
    }
}
