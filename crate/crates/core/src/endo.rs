//! The endomorphism wheeled prop of `Q^d`.
//!
//! A [`Tensor`] with in-axes `I` and out-axes `J` is a linear map
//! `(Q^d)^{⊗I} → (Q^d)^{⊗J}`. Horizontal composition is the outer product,
//! contraction is a partial trace and the unit on `i` is the Kronecker delta.
//! Everything is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graphs::{DirectedGraph, Sign};
use crate::label::{Bijection, Boundary, Label};
use crate::wiring::Polarity;
use crate::wprop::{DecoratedGraph, Free, GenInstance, WheeledProp};
use crate::Q;

/// Tensors with more axes than this are refused.
pub const MAX_AXES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("LabelClash: axis {0} appears in both factors")]
    LabelClash(String),
    #[error("DimMismatch: expected dimension {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("UnknownAxis: {0}")]
    UnknownAxis(String),
    #[error("ArityMismatch: {symbol} needs a tensor with {inputs} in-axes and {outputs} out-axes, bound tensor has {got_in} and {got_out}")]
    ArityMismatch { symbol: String, inputs: usize, outputs: usize, got_in: usize, got_out: usize },
    #[error("UnboundGenerator: {0}")]
    UnboundGenerator(String),
    #[error("TooLarge: {axes} axes exceed the cap of {cap}")]
    TooLarge { axes: usize, cap: usize },
    #[error("VertexCount: graph has {vertices} vertices, {tensors} tensors given")]
    VertexCount { vertices: usize, tensors: usize },
    #[error("BadTensor: {0}")]
    Parse(String),
}

type EResult<T> = Result<T, EndoError>;

/// An axis: its polarity and label.
pub type Axis = (Polarity, Label);

/// A dense tensor over `Q^d`, stored row-major over its sorted axes.
///
/// Out-axes sort before in-axes. For a tensor with one in-axis and one
/// out-axis, entry `[out = q, in = p]` is the matrix entry `M[q][p]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    axes: Vec<Axis>,
    data: Vec<Q>,
}

fn axis_name(a: &Axis) -> String {
    let p = match a.0 {
        Polarity::In => "in",
        Polarity::Out => "out",
    };
    format!("{p}:{}", a.1)
}

/// Iterates over all multi-indices of length `n` with entries below `d`, in row-major order.
fn multi_indices(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = d.pow(n as u32);
    let mut idx = vec![0usize; n];
    (0..total).map(move |k| {
        if k > 0 {
            for slot in idx.iter_mut().rev() {
                *slot += 1;
                if *slot < d {
                    break;
                }
                *slot = 0;
            }
        }
        idx.clone()
    })
}

impl Tensor {
    /// Builds a tensor whose data is row-major in the given axis order.
    pub fn new(dim: usize, axes: Vec<Axis>, data: Vec<Q>) -> EResult<Self> {
        if dim == 0 {
            return Err(EndoError::Parse("dimension must be positive".into()));
        }
        if axes.len() > MAX_AXES {
            return Err(EndoError::TooLarge { axes: axes.len(), cap: MAX_AXES });
        }
        let set: BTreeSet<&Axis> = axes.iter().collect();
        if set.len() != axes.len() {
            return Err(EndoError::Parse("repeated axis".into()));
        }
        let expected = dim.pow(axes.len() as u32);
        if data.len() != expected {
            return Err(EndoError::Parse(format!("expected {expected} entries, found {}", data.len())));
        }
        let given = Tensor { dim, axes: axes.clone(), data };
        let mut sorted = axes;
        sorted.sort();
        let pos: Vec<usize> = sorted.iter().map(|a| given.axes.iter().position(|b| b == a).unwrap()).collect();
        Tensor::from_fn(dim, sorted, |idx| {
            let mut raw = vec![0; idx.len()];
            for (k, &p) in pos.iter().enumerate() {
                raw[p] = idx[k];
            }
            given.data[given.offset(&raw)].clone()
        })
    }

    /// Fills a tensor from its entries; `f` sees indices in sorted axis order.
    pub fn from_fn(dim: usize, mut axes: Vec<Axis>, mut f: impl FnMut(&[usize]) -> Q) -> EResult<Self> {
        axes.sort();
        if axes.len() > MAX_AXES {
            return Err(EndoError::TooLarge { axes: axes.len(), cap: MAX_AXES });
        }
        if axes.windows(2).any(|w| w[0] == w[1]) {
            return Err(EndoError::Parse("repeated axis".into()));
        }
        let data = multi_indices(dim, axes.len()).map(|i| f(&i)).collect();
        Ok(Tensor { dim, axes, data })
    }

    pub fn scalar(c: Q, dim: usize) -> Self {
        Tensor { dim, axes: vec![], data: vec![c] }
    }

    pub fn zeros(dim: usize, boundary: &Boundary) -> EResult<Self> {
        Tensor::from_fn(dim, axes_of(boundary), |_| Q::zero())
    }

    /// The map with one in-axis and one out-axis given by `m[q][p]`.
    pub fn from_matrix(input: &Label, output: &Label, m: &[Vec<Q>]) -> EResult<Self> {
        let d = m.len();
        if m.iter().any(|r| r.len() != d) {
            return Err(EndoError::Parse("matrix must be square".into()));
        }
        Tensor::from_fn(d, vec![(Polarity::Out, output.clone()), (Polarity::In, input.clone())], |i| {
            m[i[0]][i[1]].clone()
        })
    }

    /// The square matrix of a tensor with exactly one in-axis and one out-axis.
    pub fn to_matrix(&self) -> Option<Vec<Vec<Q>>> {
        if self.axes.len() != 2 || self.axes[0].0 != Polarity::Out || self.axes[1].0 != Polarity::In {
            return None;
        }
        Some(self.data.chunks(self.dim).map(|r| r.to_vec()).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn boundary(&self) -> Boundary {
        let mut b = Boundary::default();
        for (p, a) in &self.axes {
            match p {
                Polarity::In => b.inputs.insert(a.clone()),
                Polarity::Out => b.outputs.insert(a.clone()),
            };
        }
        b
    }

    fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    /// Entry at an index given in sorted axis order.
    pub fn get(&self, idx: &[usize]) -> &Q {
        &self.data[self.offset(idx)]
    }

    /// Entry at an index given per axis.
    pub fn entry(&self, idx: &BTreeMap<Axis, usize>) -> EResult<&Q> {
        let raw = self
            .axes
            .iter()
            .map(|a| idx.get(a).copied().ok_or_else(|| EndoError::UnknownAxis(axis_name(a))))
            .collect::<EResult<Vec<_>>>()?;
        Ok(self.get(&raw))
    }

    /// The value of a tensor without axes.
    pub fn as_scalar(&self) -> Option<&Q> {
        self.axes.is_empty().then(|| &self.data[0])
    }

    fn position(&self, a: &Axis) -> EResult<usize> {
        self.axes.binary_search(a).map_err(|_| EndoError::UnknownAxis(axis_name(a)))
    }

    pub fn scale(&self, c: &Q) -> Tensor {
        Tensor { dim: self.dim, axes: self.axes.clone(), data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &Tensor) -> EResult<Tensor> {
        if self.dim != other.dim {
            return Err(EndoError::DimMismatch { expected: self.dim, found: other.dim });
        }
        if self.axes != other.axes {
            return Err(EndoError::UnknownAxis(format!("{:?} vs {:?}", self.axes, other.axes)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Tensor { dim: self.dim, axes: self.axes.clone(), data })
    }

    /// Renames in-axes by `f` and out-axes by `g`.
    pub fn relabel(&self, f: &Bijection, g: &Bijection) -> EResult<Tensor> {
        let bd = self.boundary();
        for (m, set) in [(f, &bd.inputs), (g, &bd.outputs)] {
            if &m.domain() != set {
                return Err(EndoError::UnknownAxis(format!("relabelling must be defined on exactly {set:?}")));
            }
        }
        let renamed: Vec<Axis> = self
            .axes
            .iter()
            .map(|(p, a)| {
                let b = match p {
                    Polarity::In => f.apply(a),
                    Polarity::Out => g.apply(a),
                };
                (*p, b)
            })
            .collect();
        Tensor::new(self.dim, renamed, self.data.clone())
    }

    /// Contracts pairs `(axis of self, axis of other)` and keeps every other axis.
    pub fn tensordot(&self, other: &Tensor, pairs: &[(Axis, Axis)]) -> EResult<Tensor> {
        if self.dim != other.dim {
            return Err(EndoError::DimMismatch { expected: self.dim, found: other.dim });
        }
        let d = self.dim;
        let cs = pairs.iter().map(|(a, _)| self.position(a)).collect::<EResult<Vec<_>>>()?;
        let co = pairs.iter().map(|(_, b)| other.position(b)).collect::<EResult<Vec<_>>>()?;
        let ks: Vec<usize> = (0..self.axes.len()).filter(|k| !cs.contains(k)).collect();
        let ko: Vec<usize> = (0..other.axes.len()).filter(|k| !co.contains(k)).collect();
        let mut axes: Vec<Axis> = ks.iter().map(|&k| self.axes[k].clone()).collect();
        axes.extend(ko.iter().map(|&k| other.axes[k].clone()));
        let mut check: Vec<&Axis> = axes.iter().collect();
        check.sort();
        if let Some(w) = check.windows(2).find(|w| w[0] == w[1]) {
            return Err(EndoError::LabelClash(axis_name(w[0])));
        }
        if axes.len() > MAX_AXES {
            return Err(EndoError::TooLarge { axes: axes.len(), cap: MAX_AXES });
        }
        // Where each kept axis lands in the sorted result.
        let mut order: Vec<usize> = (0..axes.len()).collect();
        order.sort_by(|&x, &y| axes[x].cmp(&axes[y]));
        let mut slot = vec![0; axes.len()];
        for (sorted_pos, &raw) in order.iter().enumerate() {
            slot[raw] = sorted_pos;
        }
        let mut si = vec![0; self.axes.len()];
        let mut oi = vec![0; other.axes.len()];
        Tensor::from_fn(d, axes, |idx| {
            for (n, &k) in ks.iter().enumerate() {
                si[k] = idx[slot[n]];
            }
            for (n, &k) in ko.iter().enumerate() {
                oi[k] = idx[slot[ks.len() + n]];
            }
            let mut sum = Q::zero();
            for inner in multi_indices(d, pairs.len()) {
                for (n, &v) in inner.iter().enumerate() {
                    si[cs[n]] = v;
                    oi[co[n]] = v;
                }
                let x = self.get(&si);
                if x.is_zero() {
                    continue;
                }
                sum += x * other.get(&oi);
            }
            sum
        })
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axes: Vec<String> = self.axes.iter().map(axis_name).collect();
        let data: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        write!(f, "Tensor(d={}, [{}], [{}])", self.dim, axes.join(", "), data.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct RawAxis {
    polarity: Polarity,
    label: Label,
}

#[derive(Serialize, Deserialize)]
struct RawTensor {
    dim: usize,
    axes: Vec<RawAxis>,
    data: Vec<String>,
}

impl Serialize for Tensor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawTensor {
            dim: self.dim,
            axes: self.axes.iter().map(|(p, a)| RawAxis { polarity: *p, label: a.clone() }).collect(),
            data: self.data.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawTensor::deserialize(d)?;
        let data = raw
            .data
            .iter()
            .map(|x| crate::parse_rational(x).ok_or_else(|| format!("not a rational: {x}")))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        let axes = raw.axes.into_iter().map(|a| (a.polarity, a.label)).collect();
        Tensor::new(raw.dim, axes, data).map_err(serde::de::Error::custom)
    }
}

fn axes_of(b: &Boundary) -> Vec<Axis> {
    b.inputs
        .iter()
        .map(|a| (Polarity::In, a.clone()))
        .chain(b.outputs.iter().map(|a| (Polarity::Out, a.clone())))
        .collect()
}

/// Outer product; the axis sets must be disjoint per polarity.
pub fn tensor_product(s: &Tensor, t: &Tensor) -> EResult<Tensor> {
    s.tensordot(t, &[])
}

/// Traces in-axis `i` against out-axis `j`.
pub fn trace_contract(t: &Tensor, i: &Label, j: &Label) -> EResult<Tensor> {
    let pi = t.position(&(Polarity::In, i.clone()))?;
    let pj = t.position(&(Polarity::Out, j.clone()))?;
    let keep: Vec<usize> = (0..t.axes.len()).filter(|&k| k != pi && k != pj).collect();
    let axes = keep.iter().map(|&k| t.axes[k].clone()).collect();
    let mut raw = vec![0; t.axes.len()];
    Tensor::from_fn(t.dim, axes, |idx| {
        for (n, &k) in keep.iter().enumerate() {
            raw[k] = idx[n];
        }
        let mut sum = Q::zero();
        for v in 0..t.dim {
            raw[pi] = v;
            raw[pj] = v;
            sum += t.get(&raw);
        }
        sum
    })
}

/// The Kronecker delta with in-axis and out-axis `label`.
pub fn identity_tensor(label: &Label, d: usize) -> Tensor {
    Tensor::from_fn(d, vec![(Polarity::Out, label.clone()), (Polarity::In, label.clone())], |i| {
        if i[0] == i[1] {
            Q::one()
        } else {
            Q::zero()
        }
    })
    .expect("two axes")
}

fn flag_axis(g: &DirectedGraph, x: u32) -> Axis {
    let p = match g.delta(x).expect("flag has a sign") {
        Sign::Pos => Polarity::In,
        Sign::Neg => Polarity::Out,
    };
    (p, Label::new(format!("#{x}")).expect("nonempty"))
}

/// Evaluates a graph whose vertex `v` carries `tensors[v]`, with axes named by the vertex labels.
///
/// Vertices are absorbed in order; each one is contracted against the
/// vertices already absorbed along the edges between them.
pub fn evaluate_graph(g: &DirectedGraph, tensors: &[Tensor], d: usize) -> EResult<Tensor> {
    if tensors.len() != g.vertex_count() {
        return Err(EndoError::VertexCount { vertices: g.vertex_count(), tensors: tensors.len() });
    }
    let mut acc = Tensor::scalar(Q::one(), d);
    let edges = g.edges();
    for (v, t) in tensors.iter().enumerate() {
        if t.dim != d {
            return Err(EndoError::DimMismatch { expected: d, found: t.dim });
        }
        let nb = g.neighbourhood(v);
        if t.boundary() != nb {
            return Err(EndoError::UnknownAxis(format!(
                "vertex {v} needs axes {:?}, tensor has {:?}",
                nb,
                t.boundary()
            )));
        }
        let mut f = BTreeMap::new();
        let mut h = BTreeMap::new();
        for &x in g.vertex(v) {
            let (p, name) = flag_axis(g, x);
            let lab = g.lambda(x).expect("vertex flag").clone();
            match p {
                Polarity::In => f.insert(lab, name),
                Polarity::Out => h.insert(lab, name),
            };
        }
        let t = t.relabel(&bij(f), &bij(h))?;
        let mut pairs = Vec::new();
        let mut selfs = Vec::new();
        for &(n, p) in &edges {
            let (vn, vp) = (g.owner(n).unwrap(), g.owner(p).unwrap());
            if vn == v && vp == v {
                selfs.push((p, n));
            } else if vn == v && vp < v {
                pairs.push((flag_axis(g, p), flag_axis(g, n)));
            } else if vp == v && vn < v {
                pairs.push((flag_axis(g, n), flag_axis(g, p)));
            }
        }
        acc = acc.tensordot(&t, &pairs)?;
        for (p, n) in selfs {
            acc = trace_contract(&acc, &flag_axis(g, p).1, &flag_axis(g, n).1)?;
        }
    }
    for (p, n) in g.free_edges() {
        let delta =
            Tensor::new(d, vec![flag_axis(g, n), flag_axis(g, p)], identity_tensor(&Label::new("e").unwrap(), d).data)?;
        acc = tensor_product(&acc, &delta)?;
    }
    let factor = num::pow(Q::from_integer(d.into()), g.loop_count());
    acc = acc.scale(&factor);
    let mut f = BTreeMap::new();
    let mut h = BTreeMap::new();
    for &x in g.flags() {
        if g.is_boundary(x) {
            let (p, name) = flag_axis(g, x);
            let b = g.beta(x).expect("boundary flag").clone();
            match p {
                Polarity::In => f.insert(name, b),
                Polarity::Out => h.insert(name, b),
            };
        }
    }
    acc.relabel(&bij(f), &bij(h))
}

fn bij(m: BTreeMap<Label, Label>) -> Bijection {
    Bijection::new(m).expect("flag names and boundary labels are distinct")
}

/// Places the bound tensor of a generator at a vertex.
///
/// The sorted in-axes of the bound tensor are slots `0, 1, ...`; slot `k`
/// becomes the vertex label `inputs[k]`, and likewise for outputs.
pub fn instantiate(inst: &GenInstance, bind: &BTreeMap<String, Tensor>, d: usize) -> EResult<Tensor> {
    let t = bind.get(&inst.symbol).ok_or_else(|| EndoError::UnboundGenerator(inst.symbol.clone()))?;
    if t.dim != d {
        return Err(EndoError::DimMismatch { expected: d, found: t.dim });
    }
    let bd = t.boundary();
    if bd.inputs.len() != inst.inputs.len() || bd.outputs.len() != inst.outputs.len() {
        return Err(EndoError::ArityMismatch {
            symbol: inst.symbol.clone(),
            inputs: inst.inputs.len(),
            outputs: inst.outputs.len(),
            got_in: bd.inputs.len(),
            got_out: bd.outputs.len(),
        });
    }
    let f = bd.inputs.iter().cloned().zip(inst.inputs.iter().cloned()).collect();
    let g = bd.outputs.iter().cloned().zip(inst.outputs.iter().cloned()).collect();
    t.relabel(&bij(f), &bij(g))
}

/// Evaluates a decorated graph with the given generator bindings.
pub fn evaluate(dg: &DecoratedGraph<GenInstance>, bind: &BTreeMap<String, Tensor>, d: usize) -> EResult<Tensor> {
    let tensors = dg.decorations().iter().map(|i| instantiate(i, bind, d)).collect::<EResult<Vec<_>>>()?;
    evaluate_graph(&dg.graph(), &tensors, d)
}

/// Evaluates every term of a free element and sums.
pub fn evaluate_element(x: &Free<GenInstance>, bind: &BTreeMap<String, Tensor>, d: usize) -> EResult<Tensor> {
    let mut acc = Tensor::zeros(d, x.boundary())?;
    for (k, c) in x.terms() {
        acc = acc.add(&evaluate(k, bind, d)?.scale(c))?;
    }
    Ok(acc)
}

/// `End(Q^d)` as a wheeled prop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndProp {
    pub dim: usize,
}

impl EndProp {
    pub fn new(dim: usize) -> Self {
        EndProp { dim }
    }
}

impl WheeledProp for EndProp {
    type Elem = Tensor;

    fn boundary(&self, a: &Tensor) -> Boundary {
        a.boundary()
    }

    fn horizontal(&self, a: &Tensor, b: &Tensor) -> crate::Result<Tensor> {
        Ok(tensor_product(a, b)?)
    }

    fn contract(&self, a: &Tensor, i: &Label, j: &Label) -> crate::Result<Tensor> {
        Ok(trace_contract(a, i, j)?)
    }

    fn unit_empty(&self) -> Tensor {
        Tensor::scalar(Q::one(), self.dim)
    }

    fn unit(&self, i: &Label) -> Tensor {
        identity_tensor(i, self.dim)
    }

    fn relabel(&self, a: &Tensor, f: &Bijection, g: &Bijection) -> crate::Result<Tensor> {
        Ok(a.relabel(f, g)?)
    }

    fn equal(&self, a: &Tensor, b: &Tensor) -> bool {
        a == b
    }
}

/// `End(Q^d)` with a wrong contraction: input `i` is traced against the
/// smallest out-axis instead of `j`. Used to check that the axiom suite
/// notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrokenEndProp {
    pub dim: usize,
}

impl WheeledProp for BrokenEndProp {
    type Elem = Tensor;

    fn boundary(&self, a: &Tensor) -> Boundary {
        a.boundary()
    }

    fn horizontal(&self, a: &Tensor, b: &Tensor) -> crate::Result<Tensor> {
        EndProp::new(self.dim).horizontal(a, b)
    }

    fn contract(&self, a: &Tensor, i: &Label, j: &Label) -> crate::Result<Tensor> {
        let first = a.boundary().outputs.into_iter().next().unwrap_or_else(|| j.clone());
        Ok(trace_contract(a, i, &first)?)
    }

    fn unit_empty(&self) -> Tensor {
        EndProp::new(self.dim).unit_empty()
    }

    fn unit(&self, i: &Label) -> Tensor {
        identity_tensor(i, self.dim)
    }

    fn relabel(&self, a: &Tensor, f: &Bijection, g: &Bijection) -> crate::Result<Tensor> {
        Ok(a.relabel(f, g)?)
    }

    fn equal(&self, a: &Tensor, b: &Tensor) -> bool {
        a == b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{corolla, free_loops_graph, GraphBuilder};
    use crate::label::l;
    use crate::q;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
    }

    fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
        let n = a.len();
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
    }

    #[test]
    fn unit_scalar_and_product_entries() {
        let s = Tensor::from_matrix(&l("a"), &l("b"), &mat(&[&[1, 2], &[3, 4]])).unwrap();
        let one = Tensor::scalar(Q::one(), 2);
        assert_eq!(tensor_product(&s, &one).unwrap(), s);
        let t = Tensor::from_matrix(&l("c"), &l("e"), &mat(&[&[0, 1], &[5, -1]])).unwrap();
        let st = tensor_product(&s, &t).unwrap();
        for (idx, x) in multi_indices(2, 4).zip(st.data()) {
            // sorted axes: out b, out e, in a, in c
            let lhs = s.get(&[idx[0], idx[2]]) * t.get(&[idx[1], idx[3]]);
            assert_eq!(&lhs, x);
        }
        assert!(matches!(tensor_product(&s, &s), Err(EndoError::LabelClash(_))));
    }

    #[test]
    fn traces() {
        let id = identity_tensor(&l("a"), 3);
        assert_eq!(trace_contract(&id, &l("a"), &l("a")).unwrap(), Tensor::scalar(q(3, 1), 3));
        let m = Tensor::from_matrix(&l("i"), &l("j"), &mat(&[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(trace_contract(&m, &l("i"), &l("j")).unwrap().as_scalar(), Some(&q(5, 1)));
        assert_eq!(identity_tensor(&l("a"), 1).data(), &[Q::one()]);
    }

    #[test]
    fn dioperadic_is_matrix_product() {
        let a = mat(&[&[1, 2], &[3, 4]]);
        let b = mat(&[&[0, 1], &[-2, 5]]);
        let ta = Tensor::from_matrix(&l("i"), &l("j"), &a).unwrap();
        let tb = Tensor::from_matrix(&l("k"), &l("m"), &b).unwrap();
        let w = EndProp::new(2);
        let ab = w.dioperadic(&ta, &l("i"), &tb, &l("m")).unwrap();
        assert_eq!(ab.to_matrix().unwrap(), matmul(&a, &b));
        let ba = w.dioperadic(&tb, &l("k"), &ta, &l("j")).unwrap();
        let tr = |t: &Tensor, i: &str, j: &str| trace_contract(t, &l(i), &l(j)).unwrap();
        assert_eq!(tr(&ab, "k", "j"), tr(&ba, "i", "m"));
    }

    #[test]
    fn json_roundtrip_and_reordering() {
        let s = r#"{"dim":2,"axes":[{"polarity":"in","label":"a"},{"polarity":"out","label":"b"}],"data":["1","2","3/2","4"]}"#;
        let t: Tensor = serde_json::from_str(s).unwrap();
        // Given as [in a][out b]; stored as [out b][in a].
        assert_eq!(t.to_matrix().unwrap(), vec![vec![q(1, 1), q(3, 2)], vec![q(2, 1), q(4, 1)]]);
        let back: Tensor = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        let bad = r#"{"dim":2,"axes":[],"data":["1","2"]}"#;
        assert!(serde_json::from_str::<Tensor>(bad).is_err());
    }

    #[test]
    fn graph_evaluation_basics() {
        let m = Tensor::from_matrix(&l("x"), &l("y"), &mat(&[&[1, 2], &[3, 4]])).unwrap();
        let c = corolla(&crate::label::labels(&["x"]), &crate::label::labels(&["y"]));
        assert_eq!(evaluate_graph(&c, std::slice::from_ref(&m), 2).unwrap(), m);
        assert_eq!(evaluate_graph(&free_loops_graph(1), &[], 2).unwrap(), Tensor::scalar(q(2, 1), 2));

        // Chain: vertex 0 feeds vertex 1.
        let mut b = GraphBuilder::new();
        let v0 = b.add_vertex();
        let v1 = b.add_vertex();
        let x0 = b.add_flag(v0, Sign::Pos, l("x"));
        let y0 = b.add_flag(v0, Sign::Neg, l("y"));
        let x1 = b.add_flag(v1, Sign::Pos, l("x"));
        let y1 = b.add_flag(v1, Sign::Neg, l("y"));
        b.join(y0, x1);
        b.set_boundary(x0, l("in"));
        b.set_boundary(y1, l("out"));
        let g = b.build().unwrap();
        let a = mat(&[&[1, 2], &[3, 4]]);
        let bm = mat(&[&[2, 0], &[1, -1]]);
        let ta = Tensor::from_matrix(&l("x"), &l("y"), &a).unwrap();
        let tb = Tensor::from_matrix(&l("x"), &l("y"), &bm).unwrap();
        let r = evaluate_graph(&g, &[ta, tb], 2).unwrap();
        assert_eq!(r.to_matrix().unwrap(), matmul(&bm, &a));
    }

    #[test]
    fn axis_cap() {
        let axes: Vec<Axis> = (0..13).map(|k| (Polarity::In, l(&format!("a{k}")))).collect();
        assert!(matches!(Tensor::from_fn(1, axes, |_| Q::one()), Err(EndoError::TooLarge { .. })));
    }
}
