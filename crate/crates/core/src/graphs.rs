//! Labelled oriented graphs with open edges and free loops.
//!
//! Flags are opaque integers partitioned into ordered vertices plus one
//! exceptional cell. `iota` pairs flags into edges; `pi` pairs the unpaired
//! exceptional flags into free edges; the remaining paired exceptional flags
//! are free loops, which carry no sign or label. Vertex flags carry a local
//! label `lambda`, boundary flags a boundary label `beta`, and every flag except
//! loop flags carries a sign (`Pos` = incoming).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{Bijection, Boundary, Label};

pub type FlagId = u32;

/// Default cap on vertices for the brute-force loose isomorphism search.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 8;

/// Environment variable overriding [`DEFAULT_BRUTE_FORCE_BOUND`].
pub const BRUTE_FORCE_BOUND_VAR: &str = "WIRECAT_BRUTE_FORCE_BOUND";

/// Orientation of a flag: `Pos` flags point into their vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Neg),
            1 => Some(Sign::Pos),
            _ => None,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = i8::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be -1 or 1, got {v}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    /// A flag lies in two cells of the partition, or is listed twice.
    #[error("PartitionOverlap: flag {0}")]
    PartitionOverlap(FlagId),
    /// A flag is in no cell, or a cell mentions an undeclared flag.
    #[error("PartitionGap: flag {0}")]
    PartitionGap(FlagId),
    /// `iota` is not an involution on the flags.
    #[error("NotAnInvolution: flag {0}")]
    NotAnInvolution(FlagId),
    /// `iota` pairs an exceptional flag with a vertex flag.
    #[error("ExceptionalLeak: flag {0}")]
    ExceptionalLeak(FlagId),
    /// `pi` pairs a flag with itself.
    #[error("PiFixedPoint: flag {0}")]
    PiFixedPoint(FlagId),
    /// `pi` must be defined exactly on the unpaired exceptional flags.
    #[error("PiDomain: flag {0}")]
    PiDomain(FlagId),
    /// A sign is missing, misplaced, or agrees with its partner's.
    #[error("DeltaMismatch: flag {0}")]
    DeltaMismatch(FlagId),
    /// Two flags of one vertex (or of the boundary) share a sign and a label.
    #[error("LabelCollision: {label} at {place}")]
    LabelCollision { place: String, label: Label },
    /// A label is missing or attached to a flag that must not carry one.
    #[error("MissingLabel: flag {0}")]
    MissingLabel(FlagId),
    #[error("UnknownVertex: {0}")]
    UnknownVertex(usize),
    /// The substituted graph's boundary differs from the vertex neighbourhood.
    #[error("BoundaryMismatch: vertex {vertex} has {expected:?}, graph has {found:?}")]
    BoundaryMismatch { vertex: usize, expected: Boundary, found: Boundary },
    #[error("TooManyVertices: {count} exceeds the brute-force bound {bound}")]
    TooManyVertices { count: usize, bound: usize },
    #[error("LabelClash: {0} appears on both boundaries")]
    LabelClash(Label),
    #[error("UnknownLabel: {0}")]
    UnknownLabel(Label),
    #[error("NotAPermutation: {0}")]
    NotAPermutation(String),
}

/// Field-by-field description of a graph; the JSON form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphParts {
    pub flags: Vec<FlagId>,
    pub vertices: Vec<Vec<FlagId>>,
    pub exceptional: Vec<FlagId>,
    /// Moved pairs of `iota`, each listed once.
    pub iota: Vec<(FlagId, FlagId)>,
    pub pi: Vec<(FlagId, FlagId)>,
    pub delta: Vec<(FlagId, Sign)>,
    pub lambda: Vec<(FlagId, Label)>,
    pub beta: Vec<(FlagId, Label)>,
}

/// A validated oriented graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    flags: BTreeSet<FlagId>,
    vertices: Vec<BTreeSet<FlagId>>,
    exceptional: BTreeSet<FlagId>,
    iota: BTreeMap<FlagId, FlagId>,
    pi: BTreeMap<FlagId, FlagId>,
    delta: BTreeMap<FlagId, Sign>,
    lambda: BTreeMap<FlagId, Label>,
    beta: BTreeMap<FlagId, Label>,
    owner: BTreeMap<FlagId, usize>,
}

fn involution(
    pairs: &[(FlagId, FlagId)],
    errs: &mut Vec<GraphError>,
    fixed_point: fn(FlagId) -> GraphError,
) -> BTreeMap<FlagId, FlagId> {
    let mut map = BTreeMap::new();
    for &(x, y) in pairs {
        if x == y {
            errs.push(fixed_point(x));
            continue;
        }
        for (a, b) in [(x, y), (y, x)] {
            if map.insert(a, b).is_some() {
                errs.push(GraphError::NotAnInvolution(a));
            }
        }
    }
    map
}

impl DirectedGraph {
    /// Checks every invariant and reports all violations found.
    pub fn from_parts(p: GraphParts) -> Result<Self, Vec<GraphError>> {
        let mut errs = Vec::new();
        let mut flags = BTreeSet::new();
        for &x in &p.flags {
            if !flags.insert(x) {
                errs.push(GraphError::PartitionOverlap(x));
            }
        }
        let mut owner = BTreeMap::new();
        let mut placed = BTreeSet::new();
        let mut vertices = Vec::with_capacity(p.vertices.len());
        for (v, cell) in p.vertices.iter().enumerate() {
            let mut set = BTreeSet::new();
            for &x in cell {
                if !placed.insert(x) {
                    errs.push(GraphError::PartitionOverlap(x));
                }
                set.insert(x);
                owner.insert(x, v);
            }
            vertices.push(set);
        }
        let mut exceptional = BTreeSet::new();
        for &x in &p.exceptional {
            if !placed.insert(x) {
                errs.push(GraphError::PartitionOverlap(x));
            }
            exceptional.insert(x);
        }
        for x in flags.symmetric_difference(&placed) {
            errs.push(GraphError::PartitionGap(*x));
        }

        let iota = involution(&p.iota, &mut errs, GraphError::NotAnInvolution);
        for (&x, &y) in &iota {
            if !flags.contains(&x) {
                errs.push(GraphError::PartitionGap(x));
            } else if exceptional.contains(&x) != exceptional.contains(&y) && exceptional.contains(&x) {
                errs.push(GraphError::ExceptionalLeak(x));
            }
        }
        let pi = involution(&p.pi, &mut errs, GraphError::PiFixedPoint);
        let bare: BTreeSet<FlagId> = exceptional.iter().copied().filter(|x| !iota.contains_key(x)).collect();
        for x in bare.iter() {
            if !pi.contains_key(x) {
                errs.push(GraphError::PiDomain(*x));
            }
        }
        for x in pi.keys() {
            if !bare.contains(x) {
                errs.push(GraphError::PiDomain(*x));
            }
        }

        let mut delta = BTreeMap::new();
        for &(x, s) in &p.delta {
            if delta.insert(x, s).is_some() {
                errs.push(GraphError::DeltaMismatch(x));
            }
        }
        let signed = |x: &FlagId| owner.contains_key(x) || bare.contains(x);
        for x in flags.iter() {
            if signed(x) != delta.contains_key(x) {
                errs.push(GraphError::DeltaMismatch(*x));
            }
        }
        for x in delta.keys() {
            if !flags.contains(x) {
                errs.push(GraphError::PartitionGap(*x));
            }
        }
        for map in [&iota, &pi] {
            for (x, y) in map {
                if x < y {
                    if let (Some(a), Some(b)) = (delta.get(x), delta.get(y)) {
                        if a == b {
                            errs.push(GraphError::DeltaMismatch(*x));
                        }
                    }
                }
            }
        }

        let mut lambda = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for (table, rows) in [(&mut lambda, &p.lambda), (&mut beta, &p.beta)] {
            for (x, a) in rows {
                if table.insert(*x, a.clone()).is_some() {
                    errs.push(GraphError::LabelCollision { place: format!("flag {x}"), label: a.clone() });
                }
            }
        }
        for x in flags.iter() {
            let is_vertex = owner.contains_key(x);
            let is_boundary = !iota.contains_key(x) && (is_vertex || bare.contains(x));
            if is_vertex != lambda.contains_key(x) || is_boundary != beta.contains_key(x) {
                errs.push(GraphError::MissingLabel(*x));
            }
        }
        for x in lambda.keys().chain(beta.keys()) {
            if !flags.contains(x) {
                errs.push(GraphError::PartitionGap(*x));
            }
        }
        for (v, cell) in vertices.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for x in cell {
                if let (Some(s), Some(a)) = (delta.get(x), lambda.get(x)) {
                    if !seen.insert((*s, a.clone())) {
                        errs.push(GraphError::LabelCollision { place: format!("vertex {v}"), label: a.clone() });
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (x, b) in &beta {
            if let Some(s) = delta.get(x) {
                if !seen.insert((*s, b.clone())) {
                    errs.push(GraphError::LabelCollision { place: "boundary".into(), label: b.clone() });
                }
            }
        }

        if errs.is_empty() {
            Ok(DirectedGraph { flags, vertices, exceptional, iota, pi, delta, lambda, beta, owner })
        } else {
            errs.sort_by_key(|e| e.to_string());
            errs.dedup();
            Err(errs)
        }
    }

    pub fn to_parts(&self) -> GraphParts {
        GraphParts {
            flags: self.flags.iter().copied().collect(),
            vertices: self.vertices.iter().map(|c| c.iter().copied().collect()).collect(),
            exceptional: self.exceptional.iter().copied().collect(),
            iota: self.iota.iter().filter(|(x, y)| x < y).map(|(x, y)| (*x, *y)).collect(),
            pi: self.pi.iter().filter(|(x, y)| x < y).map(|(x, y)| (*x, *y)).collect(),
            delta: self.delta.iter().map(|(x, s)| (*x, *s)).collect(),
            lambda: self.lambda.iter().map(|(x, a)| (*x, a.clone())).collect(),
            beta: self.beta.iter().map(|(x, a)| (*x, a.clone())).collect(),
        }
    }

    /// The graph with no flags and no vertices.
    pub fn empty() -> Self {
        DirectedGraph::from_parts(GraphParts::default()).expect("empty graph")
    }

    pub fn flags(&self) -> &BTreeSet<FlagId> {
        &self.flags
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, v: usize) -> &BTreeSet<FlagId> {
        &self.vertices[v]
    }

    pub fn exceptional(&self) -> &BTreeSet<FlagId> {
        &self.exceptional
    }

    /// Vertex holding `x`, or `None` for exceptional flags.
    pub fn owner(&self, x: FlagId) -> Option<usize> {
        self.owner.get(&x).copied()
    }

    pub fn iota(&self, x: FlagId) -> FlagId {
        self.iota.get(&x).copied().unwrap_or(x)
    }

    pub fn pi(&self, x: FlagId) -> Option<FlagId> {
        self.pi.get(&x).copied()
    }

    pub fn delta(&self, x: FlagId) -> Option<Sign> {
        self.delta.get(&x).copied()
    }

    pub fn lambda(&self, x: FlagId) -> Option<&Label> {
        self.lambda.get(&x)
    }

    pub fn beta(&self, x: FlagId) -> Option<&Label> {
        self.beta.get(&x)
    }

    pub fn is_boundary(&self, x: FlagId) -> bool {
        self.beta.contains_key(&x)
    }

    /// Number of free loops: half the paired exceptional flags.
    pub fn loop_count(&self) -> usize {
        self.exceptional.iter().filter(|x| self.iota.contains_key(x)).count() / 2
    }

    /// Free edges as `(positive flag, negative flag)`.
    pub fn free_edges(&self) -> Vec<(FlagId, FlagId)> {
        self.pi.iter().filter(|(x, _)| self.delta[x] == Sign::Pos).map(|(x, y)| (*x, *y)).collect()
    }

    /// Internal edges as `(negative flag, positive flag)`.
    pub fn edges(&self) -> Vec<(FlagId, FlagId)> {
        self.iota
            .iter()
            .filter(|(x, _)| self.owner.contains_key(x) && self.delta[x] == Sign::Neg)
            .map(|(x, y)| (*x, *y))
            .collect()
    }

    /// `(in(v), out(v))`: labels of the positive and negative flags at `v`.
    pub fn neighbourhood(&self, v: usize) -> Boundary {
        let mut b = Boundary::default();
        for x in &self.vertices[v] {
            let a = self.lambda[x].clone();
            match self.delta[x] {
                Sign::Pos => b.inputs.insert(a),
                Sign::Neg => b.outputs.insert(a),
            };
        }
        b
    }

    /// `(in(G), out(G))` read from the boundary labels.
    pub fn boundary(&self) -> Boundary {
        let mut b = Boundary::default();
        for (x, a) in &self.beta {
            match self.delta[x] {
                Sign::Pos => b.inputs.insert(a.clone()),
                Sign::Neg => b.outputs.insert(a.clone()),
            };
        }
        b
    }

    /// Boundary flag with the given sign and label.
    pub fn boundary_flag(&self, sign: Sign, label: &Label) -> Option<FlagId> {
        self.beta.iter().find(|(x, a)| *a == label && self.delta[x] == sign).map(|(x, _)| *x)
    }

    /// Vertex order permuted: new vertex `k` is old vertex `order[k]`.
    pub fn reorder_vertices(&self, order: &[usize]) -> Result<DirectedGraph, GraphError> {
        check_permutation(order, self.vertex_count())?;
        let mut p = self.to_parts();
        p.vertices = order.iter().map(|&v| self.vertices[v].iter().copied().collect()).collect();
        Ok(DirectedGraph::from_parts(p).expect("reordering keeps validity"))
    }

    /// Flag ids renamed through an injective map.
    pub fn rename_flags(&self, f: impl Fn(FlagId) -> FlagId) -> DirectedGraph {
        let p = self.to_parts();
        let q = GraphParts {
            flags: p.flags.iter().map(|&x| f(x)).collect(),
            vertices: p.vertices.iter().map(|c| c.iter().map(|&x| f(x)).collect()).collect(),
            exceptional: p.exceptional.iter().map(|&x| f(x)).collect(),
            iota: p.iota.iter().map(|&(x, y)| (f(x), f(y))).collect(),
            pi: p.pi.iter().map(|&(x, y)| (f(x), f(y))).collect(),
            delta: p.delta.iter().map(|&(x, s)| (f(x), s)).collect(),
            lambda: p.lambda.iter().map(|(x, a)| (f(*x), a.clone())).collect(),
            beta: p.beta.iter().map(|(x, a)| (f(*x), a.clone())).collect(),
        };
        DirectedGraph::from_parts(q).expect("flag renaming must be injective")
    }

    pub fn canonical_form(&self) -> CanonicalGraph {
        let order: Vec<usize> = (0..self.vertex_count()).collect();
        self.canonical_form_ordered(&order)
    }

    /// Canonical form of the graph with vertices taken in `order`.
    fn canonical_form_ordered(&self, order: &[usize]) -> CanonicalGraph {
        let mut position = vec![0usize; order.len()];
        for (k, &v) in order.iter().enumerate() {
            position[v] = k;
        }
        let vertices = order
            .iter()
            .map(|&v| {
                let mut recs: Vec<FlagRecord> = self.vertices[v]
                    .iter()
                    .map(|&x| {
                        let y = self.iota(x);
                        let link = if y == x {
                            Link::Boundary(self.beta[&x].clone())
                        } else {
                            Link::Edge { vertex: position[self.owner[&y]], label: self.lambda[&y].clone() }
                        };
                        FlagRecord { sign: self.delta[&x], label: self.lambda[&x].clone(), link }
                    })
                    .collect();
                recs.sort();
                recs
            })
            .collect();
        let mut free_edges: Vec<(Label, Label)> =
            self.free_edges().into_iter().map(|(p, n)| (self.beta[&p].clone(), self.beta[&n].clone())).collect();
        free_edges.sort();
        CanonicalGraph { vertices, free_edges, loops: self.loop_count() }
    }

    /// DOT rendering: vertices as nodes, edges oriented from the negative
    /// to the positive flag, boundary legs as half-edges to point nodes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count() {
            let _ = writeln!(s, "  v{v} [shape=circle,label=\"v{}\"];", v + 1);
        }
        for (n, p) in self.edges() {
            let _ = writeln!(
                s,
                "  v{} -> v{} [taillabel=\"{}\",headlabel=\"{}\"];",
                self.owner[&n], self.owner[&p], self.lambda[&n], self.lambda[&p]
            );
        }
        for (x, b) in &self.beta {
            match self.owner.get(x) {
                Some(v) => {
                    let _ = writeln!(s, "  b{x} [shape=point,xlabel=\"{b}\"];");
                    if self.delta[x] == Sign::Pos {
                        let _ = writeln!(s, "  b{x} -> v{v} [headlabel=\"{}\"];", self.lambda[x]);
                    } else {
                        let _ = writeln!(s, "  v{v} -> b{x} [taillabel=\"{}\"];", self.lambda[x]);
                    }
                }
                None => {
                    let _ = writeln!(s, "  b{x} [shape=point,xlabel=\"{b}\"];");
                }
            }
        }
        for (p, n) in self.free_edges() {
            let _ = writeln!(s, "  b{p} -> b{n};");
        }
        for k in 0..self.loop_count() {
            let _ = writeln!(s, "  loop{k} [shape=point,style=invis];");
            let _ = writeln!(s, "  loop{k} -> loop{k} [dir=none];");
        }
        s.push_str("}\n");
        s
    }
}

impl Serialize for DirectedGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_parts().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DirectedGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let p = GraphParts::deserialize(d)?;
        DirectedGraph::from_parts(p).map_err(|errs| {
            let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
            serde::de::Error::custom(msgs.join("; "))
        })
    }
}

fn check_permutation(order: &[usize], n: usize) -> Result<(), GraphError> {
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(GraphError::NotAPermutation(format!("{order:?} on {n} vertices")));
    }
    Ok(())
}

/// Incremental graph construction; `build` validates.
#[derive(Default, Clone, Debug)]
pub struct GraphBuilder {
    parts: GraphParts,
    next: FlagId,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self) -> FlagId {
        let x = self.next;
        self.next += 1;
        self.parts.flags.push(x);
        x
    }

    pub fn add_vertex(&mut self) -> usize {
        self.parts.vertices.push(Vec::new());
        self.parts.vertices.len() - 1
    }

    pub fn add_flag(&mut self, v: usize, sign: Sign, label: Label) -> FlagId {
        let x = self.fresh();
        self.parts.vertices[v].push(x);
        self.parts.delta.push((x, sign));
        self.parts.lambda.push((x, label));
        x
    }

    /// Pairs two vertex flags into an edge.
    pub fn join(&mut self, x: FlagId, y: FlagId) {
        self.parts.iota.push((x, y));
    }

    pub fn set_boundary(&mut self, x: FlagId, label: Label) {
        self.parts.beta.push((x, label));
    }

    /// A free edge from boundary input `i` to boundary output `j`.
    pub fn add_free_edge(&mut self, i: Label, j: Label) -> (FlagId, FlagId) {
        let p = self.fresh();
        let n = self.fresh();
        self.parts.exceptional.extend([p, n]);
        self.parts.pi.push((p, n));
        self.parts.delta.extend([(p, Sign::Pos), (n, Sign::Neg)]);
        self.parts.beta.extend([(p, i), (n, j)]);
        (p, n)
    }

    pub fn add_loops(&mut self, n: usize) {
        for _ in 0..n {
            let a = self.fresh();
            let b = self.fresh();
            self.parts.exceptional.extend([a, b]);
            self.parts.iota.push((a, b));
        }
    }

    pub fn build(self) -> Result<DirectedGraph, Vec<GraphError>> {
        DirectedGraph::from_parts(self.parts)
    }
}

/// How a vertex flag continues: to a boundary label or to a flag of a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Boundary(Label),
    Edge { vertex: usize, label: Label },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FlagRecord {
    pub sign: Sign,
    pub label: Label,
    pub link: Link,
}

/// Flag-free description of a graph; equal exactly for strictly isomorphic graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalGraph {
    pub vertices: Vec<Vec<FlagRecord>>,
    /// `(input label, output label)` of each free edge.
    pub free_edges: Vec<(Label, Label)>,
    pub loops: usize,
}

impl CanonicalGraph {
    /// Rebuilds a graph with deterministic flag numbering.
    pub fn to_graph(&self) -> DirectedGraph {
        let mut b = GraphBuilder::new();
        let mut ids: BTreeMap<(usize, Sign, &Label), FlagId> = BTreeMap::new();
        for (v, recs) in self.vertices.iter().enumerate() {
            let nv = b.add_vertex();
            for r in recs {
                ids.insert((v, r.sign, &r.label), b.add_flag(nv, r.sign, r.label.clone()));
            }
        }
        for (v, recs) in self.vertices.iter().enumerate() {
            for r in recs {
                let x = ids[&(v, r.sign, &r.label)];
                match &r.link {
                    Link::Boundary(a) => b.set_boundary(x, a.clone()),
                    Link::Edge { vertex, label } => {
                        if r.sign == Sign::Neg {
                            b.join(x, ids[&(*vertex, Sign::Pos, label)]);
                        }
                    }
                }
            }
        }
        for (i, j) in &self.free_edges {
            b.add_free_edge(i.clone(), j.clone());
        }
        b.add_loops(self.loops);
        b.build().expect("canonical forms describe valid graphs")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn boundary(&self) -> Boundary {
        let mut b = Boundary::default();
        for r in self.vertices.iter().flatten() {
            if let Link::Boundary(a) = &r.link {
                match r.sign {
                    Sign::Pos => b.inputs.insert(a.clone()),
                    Sign::Neg => b.outputs.insert(a.clone()),
                };
            }
        }
        for (i, j) in &self.free_edges {
            b.inputs.insert(i.clone());
            b.outputs.insert(j.clone());
        }
        b
    }

    pub fn neighbourhood(&self, v: usize) -> Boundary {
        let mut b = Boundary::default();
        for r in &self.vertices[v] {
            match r.sign {
                Sign::Pos => b.inputs.insert(r.label.clone()),
                Sign::Neg => b.outputs.insert(r.label.clone()),
            };
        }
        b
    }
}

pub fn is_isomorphic_strict(g: &DirectedGraph, h: &DirectedGraph) -> bool {
    g.canonical_form() == h.canonical_form()
}

/// Vertex bound for [`is_isomorphic_loose`], read from the environment.
pub fn brute_force_bound() -> usize {
    std::env::var(BRUTE_FORCE_BOUND_VAR).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BRUTE_FORCE_BOUND)
}

/// Searches all vertex orders of `g` for one making it strictly isomorphic to `h`.
///
/// Returns the order (new vertex `k` is old vertex `order[k]`).
pub fn is_isomorphic_loose(g: &DirectedGraph, h: &DirectedGraph) -> Result<Option<Vec<usize>>, GraphError> {
    is_isomorphic_loose_bounded(g, h, brute_force_bound())
}

pub fn is_isomorphic_loose_bounded(
    g: &DirectedGraph,
    h: &DirectedGraph,
    bound: usize,
) -> Result<Option<Vec<usize>>, GraphError> {
    let n = g.vertex_count();
    if n > bound {
        return Err(GraphError::TooManyVertices { count: n, bound });
    }
    if n != h.vertex_count() || g.loop_count() != h.loop_count() || g.boundary() != h.boundary() {
        return Ok(None);
    }
    let target = h.canonical_form();
    Ok(crate::label::index_permutations(n).into_iter().find(|order| g.canonical_form_ordered(order) == target))
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn distinct(colors: &[usize]) -> usize {
    colors.iter().collect::<BTreeSet<_>>().len()
}

/// Per vertex: each flag's sign and label, and the far end of its edge.
type Adjacency = Vec<Vec<(Sign, Label, Option<(usize, Label)>)>>;

struct LooseSearch<'a, T> {
    g: &'a DirectedGraph,
    decorations: &'a [T],
    adjacency: Adjacency,
    best: Option<(CanonicalGraph, Vec<usize>)>,
}

impl<'a, T: Ord> LooseSearch<'a, T> {
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            #[allow(clippy::type_complexity)]
            let keys: Vec<(usize, Vec<(Sign, &Label, Option<(usize, &Label)>)>)> = (0..colors.len())
                .map(|v| {
                    let mut sig: Vec<_> = self.adjacency[v]
                        .iter()
                        .map(|(s, a, link)| (*s, a, link.as_ref().map(|(u, b)| (colors[*u], b))))
                        .collect();
                    sig.sort();
                    (colors[v], sig)
                })
                .collect();
            let next = rank(&keys);
            if distinct(&next) == distinct(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn search(&mut self, colors: Vec<usize>) {
        let colors = self.refine(colors);
        let n = colors.len();
        if distinct(&colors) == n {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| colors[v]);
            let form = self.g.canonical_form_ordered(&order);
            let better = match &self.best {
                None => true,
                Some((bf, bo)) => {
                    (&form, order.iter().map(|&v| &self.decorations[v]).collect::<Vec<_>>())
                        < (bf, bo.iter().map(|&v| &self.decorations[v]).collect::<Vec<_>>())
                }
            };
            if better {
                self.best = Some((form, order));
            }
            return;
        }
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let cell = cells.into_values().find(|c| c.len() > 1).unwrap();
        for &chosen in &cell {
            let keys: Vec<(usize, bool)> = (0..n).map(|v| (colors[v], v != chosen)).collect();
            self.search(rank(&keys));
        }
    }
}

/// Canonical vertex order up to vertex permutation, with a per-vertex
/// decoration that must travel with its vertex.
///
/// Uses colour refinement with individualisation, so it is exact but has no
/// vertex bound. Returns the canonical form and the chosen order.
pub fn loose_canonical<T: Ord>(g: &DirectedGraph, decorations: &[T]) -> (CanonicalGraph, Vec<usize>) {
    assert_eq!(decorations.len(), g.vertex_count(), "one decoration per vertex");
    let n = g.vertex_count();
    let adjacency: Adjacency = (0..n)
        .map(|v| {
            g.vertex(v)
                .iter()
                .map(|&x| {
                    let y = g.iota(x);
                    let link = if y == x { None } else { Some((g.owner[&y], g.lambda[&y].clone())) };
                    (g.delta[&x], g.lambda[&x].clone(), link)
                })
                .collect()
        })
        .collect();
    let dec_rank = {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| decorations[a].cmp(&decorations[b]));
        let mut r = vec![0usize; n];
        let mut cur = 0;
        for k in 0..n {
            if k > 0 && decorations[idx[k]] != decorations[idx[k - 1]] {
                cur += 1;
            }
            r[idx[k]] = cur;
        }
        r
    };
    #[allow(clippy::type_complexity)]
    let initial: Vec<(usize, Vec<(Sign, &Label, Option<&Label>, Option<&Label>)>)> = (0..n)
        .map(|v| {
            let mut sig: Vec<_> = g
                .vertex(v)
                .iter()
                .map(|&x| {
                    let y = g.iota(x);
                    let far = if y == x { None } else { Some(&g.lambda[&y]) };
                    (g.delta[&x], &g.lambda[&x], g.beta.get(&x), far)
                })
                .collect();
            sig.sort();
            (dec_rank[v], sig)
        })
        .collect();
    let colors = rank(&initial);
    let mut search = LooseSearch { g, decorations, adjacency, best: None };
    if n == 0 {
        return (g.canonical_form(), vec![]);
    }
    search.search(colors);
    search.best.expect("at least one leaf")
}

/// One-vertex graph whose boundary labels equal its vertex labels.
pub fn corolla(inputs: &BTreeSet<Label>, outputs: &BTreeSet<Label>) -> DirectedGraph {
    corolla_relabelled(inputs, outputs, &Bijection::identity(inputs), &Bijection::identity(outputs))
        .expect("identity relabelling")
}

/// Corolla with vertex labels `(inputs; outputs)` and boundary labels
/// `f(inputs)`, `g(outputs)`. Substituting a graph into it renames that
/// graph's boundary.
pub fn corolla_relabelled(
    inputs: &BTreeSet<Label>,
    outputs: &BTreeSet<Label>,
    f: &Bijection,
    g: &Bijection,
) -> Result<DirectedGraph, GraphError> {
    let mut b = GraphBuilder::new();
    let v = b.add_vertex();
    for a in inputs {
        let x = b.add_flag(v, Sign::Pos, a.clone());
        b.set_boundary(x, f.get(a).ok_or_else(|| GraphError::UnknownLabel(a.clone()))?.clone());
    }
    for a in outputs {
        let x = b.add_flag(v, Sign::Neg, a.clone());
        b.set_boundary(x, g.get(a).ok_or_else(|| GraphError::UnknownLabel(a.clone()))?.clone());
    }
    b.build().map_err(|mut e| e.remove(0))
}

/// Corolla on `boundary` with input `i` wired back to output `j`.
pub fn tadpole(boundary: &Boundary, i: &Label, j: &Label) -> Result<DirectedGraph, GraphError> {
    if !boundary.inputs.contains(i) {
        return Err(GraphError::UnknownLabel(i.clone()));
    }
    if !boundary.outputs.contains(j) {
        return Err(GraphError::UnknownLabel(j.clone()));
    }
    let mut b = GraphBuilder::new();
    let v = b.add_vertex();
    let mut pos = None;
    let mut neg = None;
    for a in &boundary.inputs {
        let x = b.add_flag(v, Sign::Pos, a.clone());
        if a == i {
            pos = Some(x);
        } else {
            b.set_boundary(x, a.clone());
        }
    }
    for a in &boundary.outputs {
        let x = b.add_flag(v, Sign::Neg, a.clone());
        if a == j {
            neg = Some(x);
        } else {
            b.set_boundary(x, a.clone());
        }
    }
    b.join(neg.unwrap(), pos.unwrap());
    Ok(b.build().expect("tadpole is valid"))
}

/// Two corollas side by side; their boundaries must be disjoint.
pub fn two_corollas(a: &Boundary, b: &Boundary) -> Result<DirectedGraph, GraphError> {
    if let Some(x) = a.inputs.intersection(&b.inputs).chain(a.outputs.intersection(&b.outputs)).next() {
        return Err(GraphError::LabelClash(x.clone()));
    }
    let mut g = GraphBuilder::new();
    for side in [a, b] {
        let v = g.add_vertex();
        for x in &side.inputs {
            let f = g.add_flag(v, Sign::Pos, x.clone());
            g.set_boundary(f, x.clone());
        }
        for x in &side.outputs {
            let f = g.add_flag(v, Sign::Neg, x.clone());
            g.set_boundary(f, x.clone());
        }
    }
    Ok(g.build().expect("disjoint corollas are valid"))
}

pub fn free_edge_graph(i: &Label, j: &Label) -> DirectedGraph {
    let mut b = GraphBuilder::new();
    b.add_free_edge(i.clone(), j.clone());
    b.build().expect("free edge")
}

pub fn free_loops_graph(n: usize) -> DirectedGraph {
    let mut b = GraphBuilder::new();
    b.add_loops(n);
    b.build().expect("free loops")
}

/// `G(H_v)`: replace vertex `v` by `h`, whose boundary must equal `nbh(v)`.
pub fn substitute(g: &DirectedGraph, v: usize, h: &DirectedGraph) -> Result<DirectedGraph, GraphError> {
    let mut subs = BTreeMap::new();
    subs.insert(v, h.clone());
    substitute_all(g, &subs)
}

#[derive(Clone)]
enum End {
    Flag(FlagId),
    Boundary(Label),
}

struct Splice<'a> {
    g: &'a DirectedGraph,
    subs: &'a BTreeMap<usize, DirectedGraph>,
    new_g: BTreeMap<FlagId, FlagId>,
    new_h: BTreeMap<(usize, FlagId), FlagId>,
    to_h: BTreeMap<FlagId, FlagId>,
    to_v: BTreeMap<(usize, FlagId), FlagId>,
    visited: BTreeSet<FlagId>,
}

impl Splice<'_> {
    fn substituted(&self, x: FlagId) -> Option<usize> {
        self.g.owner(x).filter(|v| self.subs.contains_key(v))
    }

    /// Leave substituted vertex flag `f` towards the rest of `g`.
    fn exit_g(&mut self, f: FlagId) -> End {
        self.visited.insert(f);
        let y = self.g.iota(f);
        if y == f {
            return End::Boundary(self.g.beta[&f].clone());
        }
        match self.substituted(y) {
            Some(u) => self.enter_h(u, y),
            None => End::Flag(self.new_g[&y]),
        }
    }

    /// Enter the graph substituted at `v` through its boundary flag matching `f`.
    fn enter_h(&mut self, v: usize, f: FlagId) -> End {
        self.visited.insert(f);
        let h = &self.subs[&v];
        let hf = self.to_h[&f];
        if h.owner(hf).is_some() {
            return End::Flag(self.new_h[&(v, hf)]);
        }
        let h2 = h.pi(hf).expect("boundary flag of a free edge");
        let f2 = self.to_v[&(v, h2)];
        self.exit_g(f2)
    }
}

/// Substitutes every `(v, H_v)` at once. Vertices of the result are, in
/// order, each vertex of `g` or the vertices of its replacement.
pub fn substitute_all(g: &DirectedGraph, subs: &BTreeMap<usize, DirectedGraph>) -> Result<DirectedGraph, GraphError> {
    for (&v, h) in subs {
        if v >= g.vertex_count() {
            return Err(GraphError::UnknownVertex(v));
        }
        let expected = g.neighbourhood(v);
        let found = h.boundary();
        if expected != found {
            return Err(GraphError::BoundaryMismatch { vertex: v, expected, found });
        }
    }
    let mut b = GraphBuilder::new();
    let mut sp = Splice {
        g,
        subs,
        new_g: BTreeMap::new(),
        new_h: BTreeMap::new(),
        to_h: BTreeMap::new(),
        to_v: BTreeMap::new(),
        visited: BTreeSet::new(),
    };
    for u in 0..g.vertex_count() {
        match subs.get(&u) {
            Some(h) => {
                for w in 0..h.vertex_count() {
                    let nv = b.add_vertex();
                    for &x in h.vertex(w) {
                        let id = b.add_flag(nv, h.delta[&x], h.lambda[&x].clone());
                        sp.new_h.insert((u, x), id);
                    }
                }
                let by_label: BTreeMap<(Sign, &Label), FlagId> =
                    h.beta.iter().map(|(x, a)| ((h.delta[x], a), *x)).collect();
                for &f in g.vertex(u) {
                    let hf = by_label[&(g.delta[&f], &g.lambda[&f])];
                    sp.to_h.insert(f, hf);
                    sp.to_v.insert((u, hf), f);
                }
            }
            None => {
                let nv = b.add_vertex();
                for &x in g.vertex(u) {
                    sp.new_g.insert(x, b.add_flag(nv, g.delta[&x], g.lambda[&x].clone()));
                }
            }
        }
    }

    let mut joins: BTreeSet<(FlagId, FlagId)> = BTreeSet::new();
    let mut boundary: Vec<(FlagId, Label)> = Vec::new();
    let mut settle = |x: FlagId, end: End, joins: &mut BTreeSet<(FlagId, FlagId)>| match end {
        End::Flag(p) => {
            joins.insert((x.min(p), x.max(p)));
        }
        End::Boundary(a) => boundary.push((x, a)),
    };
    let plain: Vec<(FlagId, FlagId)> = sp.new_g.iter().map(|(a, b)| (*a, *b)).collect();
    for (x, nx) in plain {
        let y = g.iota(x);
        let end = if y == x {
            End::Boundary(g.beta[&x].clone())
        } else {
            match sp.substituted(y) {
                Some(u) => sp.enter_h(u, y),
                None => End::Flag(sp.new_g[&y]),
            }
        };
        settle(nx, end, &mut joins);
    }
    let inner: Vec<((usize, FlagId), FlagId)> = sp.new_h.iter().map(|(k, n)| (*k, *n)).collect();
    for ((v, x), nx) in inner {
        let h = &subs[&v];
        let y = h.iota(x);
        let end = if y != x { End::Flag(sp.new_h[&(v, y)]) } else { sp.exit_g(sp.to_v[&(v, x)]) };
        settle(nx, end, &mut joins);
    }
    for (x, y) in joins {
        b.join(x, y);
    }
    for (x, a) in boundary {
        b.set_boundary(x, a);
    }

    for (p, n) in g.free_edges() {
        b.add_free_edge(g.beta[&p].clone(), g.beta[&n].clone());
    }
    let mut loops = g.loop_count() + subs.values().map(|h| h.loop_count()).sum::<usize>();
    for &v in subs.keys() {
        for &f in g.vertex(v) {
            if g.iota(f) == f && g.delta[&f] == Sign::Pos {
                if let End::Boundary(out) = sp.enter_h(v, f) {
                    b.add_free_edge(g.beta[&f].clone(), out);
                }
            }
        }
    }
    for &v in subs.keys() {
        for &f in g.vertex(v) {
            if sp.visited.contains(&f) {
                continue;
            }
            loops += 1;
            let mut cur = f;
            loop {
                sp.visited.insert(cur);
                let u = g.owner[&cur];
                let h = &subs[&u];
                let h2 = h.pi(sp.to_h[&cur]).expect("closed chains run through free edges");
                let f2 = sp.to_v[&(u, h2)];
                sp.visited.insert(f2);
                cur = g.iota(f2);
                if cur == f {
                    break;
                }
            }
        }
    }
    b.add_loops(loops);
    b.build().map_err(|mut e| e.remove(0))
}

/// Side-by-side union; vertices of `a` come first.
pub fn disjoint_union(a: &DirectedGraph, b: &DirectedGraph) -> Result<DirectedGraph, GraphError> {
    two_corollas(&a.boundary(), &b.boundary())?;
    let shift = a.flags.iter().next_back().map_or(0, |x| x + 1);
    let b2 = b.rename_flags(|x| x + shift);
    let mut p = a.to_parts();
    let q = b2.to_parts();
    p.flags.extend(q.flags);
    p.vertices.extend(q.vertices);
    p.exceptional.extend(q.exceptional);
    p.iota.extend(q.iota);
    p.pi.extend(q.pi);
    p.delta.extend(q.delta);
    p.lambda.extend(q.lambda);
    p.beta.extend(q.beta);
    DirectedGraph::from_parts(p).map_err(|mut e| e.remove(0))
}

/// Glue boundary input `i` to boundary output `j`.
pub fn contract_boundary(g: &DirectedGraph, i: &Label, j: &Label) -> Result<DirectedGraph, GraphError> {
    let t = tadpole(&g.boundary(), i, j)?;
    substitute(&t, 0, g)
}

/// Renames boundary inputs by `f` and outputs by `h`.
pub fn relabel_boundary(g: &DirectedGraph, f: &Bijection, h: &Bijection) -> Result<DirectedGraph, GraphError> {
    let bd = g.boundary();
    for (map, set) in [(f, &bd.inputs), (h, &bd.outputs)] {
        if &map.domain() != set {
            return Err(GraphError::NotAPermutation(format!("relabelling must be defined on {set:?}")));
        }
    }
    let mut p = g.to_parts();
    for (x, a) in p.beta.iter_mut() {
        *a = match g.delta[x] {
            Sign::Pos => f.apply(a),
            Sign::Neg => h.apply(a),
        };
    }
    DirectedGraph::from_parts(p).map_err(|mut e| e.remove(0))
}
