//! Oriented wiring diagrams in matching form.
//!
//! A diagram has an output interface (box 0), an ordered list of input
//! interfaces (boxes `1..=r`), a bijection from every `Out` endpoint to every
//! `In` endpoint, and a count of closed circles. Composition glues a diagram
//! into an input box and resolves the resulting chains; closed chains become
//! new circles.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{Bijection, Label, LabelError};

/// Endpoint polarity. `Out` endpoints are the sources of strands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Out,
    In,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Out => Polarity::In,
            Polarity::In => Polarity::Out,
        }
    }
}

/// A labelled point on one of the boxes: `(box, polarity, label)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Endpoint(pub usize, pub Polarity, pub Label);

impl Endpoint {
    pub fn new(box_index: usize, polarity: Polarity, label: Label) -> Self {
        Endpoint(box_index, polarity, label)
    }

    pub fn box_index(&self) -> usize {
        self.0
    }

    pub fn polarity(&self) -> Polarity {
        self.1
    }

    pub fn label(&self) -> &Label {
        &self.2
    }
}

/// Label sets on one boundary circle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Interface {
    #[serde(rename = "out")]
    pub out_labels: BTreeSet<Label>,
    #[serde(rename = "in")]
    pub in_labels: BTreeSet<Label>,
}

impl Interface {
    pub fn new(out_labels: BTreeSet<Label>, in_labels: BTreeSet<Label>) -> Self {
        Interface { out_labels, in_labels }
    }

    pub fn of(out_labels: &[&str], in_labels: &[&str]) -> Self {
        Interface::new(crate::label::labels(out_labels), crate::label::labels(in_labels))
    }

    /// The interface seen from the other side of the circle.
    pub fn flipped(&self) -> Interface {
        Interface { out_labels: self.in_labels.clone(), in_labels: self.out_labels.clone() }
    }

    pub fn labels(&self, polarity: Polarity) -> &BTreeSet<Label> {
        match polarity {
            Polarity::Out => &self.out_labels,
            Polarity::In => &self.in_labels,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WiringError {
    /// The matching is not total, or some `In` endpoint is hit zero or several times.
    #[error("NonBijectiveMatching: {0}")]
    NonBijectiveMatching(String),
    /// The matching mentions an endpoint that is not on any interface, or pairs the wrong polarities.
    #[error("EndpointSetMismatch: {0}")]
    EndpointSetMismatch(String),
    /// Circle counts are nonnegative.
    #[error("NegativeCircles: {0}")]
    NegativeCircles(i64),
    /// A box index outside `1..=r`.
    #[error("IndexOutOfRange: box {index} of {count}")]
    IndexOutOfRange { index: usize, count: usize },
    /// The glued interfaces do not match up.
    #[error("InterfaceMismatch: input box {index} is {expected:?} but the inner output is {found:?}")]
    InterfaceMismatch { index: usize, expected: Interface, found: Interface },
    /// A bijection or permutation argument is malformed.
    #[error("NotAPermutation: {0}")]
    NotAPermutation(String),
    #[error(transparent)]
    Label(#[from] LabelError),
}

/// A wiring diagram `(A_0; A_1, ..., A_r; p, l)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WiringDiagram {
    output: Interface,
    inputs: Vec<Interface>,
    matching: BTreeMap<Endpoint, Endpoint>,
    circles: usize,
}

impl WiringDiagram {
    /// Validates and builds a diagram from `(Out, In)` pairs.
    pub fn new(
        output: Interface,
        inputs: Vec<Interface>,
        matching: impl IntoIterator<Item = (Endpoint, Endpoint)>,
        circles: usize,
    ) -> Result<Self, WiringError> {
        let mut outs = BTreeSet::new();
        let mut ins = BTreeSet::new();
        for (b, iface) in std::iter::once(&output).chain(inputs.iter()).enumerate() {
            for a in &iface.out_labels {
                outs.insert(Endpoint(b, Polarity::Out, a.clone()));
            }
            for a in &iface.in_labels {
                ins.insert(Endpoint(b, Polarity::In, a.clone()));
            }
        }
        let mut map = BTreeMap::new();
        let mut hit = BTreeSet::new();
        for (x, y) in matching {
            if !outs.contains(&x) {
                return Err(WiringError::EndpointSetMismatch(format!("{x:?} is not an Out endpoint")));
            }
            if !ins.contains(&y) {
                return Err(WiringError::EndpointSetMismatch(format!("{y:?} is not an In endpoint")));
            }
            if !hit.insert(y.clone()) {
                return Err(WiringError::NonBijectiveMatching(format!("{y:?} has two preimages")));
            }
            if map.insert(x.clone(), y).is_some() {
                return Err(WiringError::NonBijectiveMatching(format!("{x:?} has two images")));
            }
        }
        if let Some(x) = outs.iter().find(|x| !map.contains_key(*x)) {
            return Err(WiringError::NonBijectiveMatching(format!("{x:?} is unmatched")));
        }
        if let Some(y) = ins.iter().find(|y| !hit.contains(*y)) {
            return Err(WiringError::NonBijectiveMatching(format!("{y:?} has no preimage")));
        }
        Ok(WiringDiagram { output, inputs, matching: map, circles })
    }

    /// The diagram with no boxes and `circles` closed circles.
    pub fn circles_only(circles: usize) -> Self {
        WiringDiagram { output: Interface::default(), inputs: vec![], matching: BTreeMap::new(), circles }
    }

    pub fn output(&self) -> &Interface {
        &self.output
    }

    pub fn inputs(&self) -> &[Interface] {
        &self.inputs
    }

    /// Interface of box `b`, where box 0 is the output.
    pub fn interface(&self, b: usize) -> Option<&Interface> {
        if b == 0 {
            Some(&self.output)
        } else {
            self.inputs.get(b - 1)
        }
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn circles(&self) -> usize {
        self.circles
    }

    pub fn matching(&self) -> &BTreeMap<Endpoint, Endpoint> {
        &self.matching
    }

    /// Image of an `Out` endpoint.
    pub fn partner(&self, x: &Endpoint) -> Option<&Endpoint> {
        self.matching.get(x)
    }

    /// The inverse matching, from `In` endpoints to `Out` endpoints.
    pub fn inverse_matching(&self) -> BTreeMap<Endpoint, Endpoint> {
        self.matching.iter().map(|(x, y)| (y.clone(), x.clone())).collect()
    }

    /// Compact JSON with sorted endpoints.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, crate::Error> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    output: Interface,
    inputs: Vec<Interface>,
    matching: Vec<(Endpoint, Endpoint)>,
    circles: i64,
}

impl Serialize for WiringDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawDiagram {
            output: self.output.clone(),
            inputs: self.inputs.clone(),
            matching: self.matching.iter().map(|(x, y)| (x.clone(), y.clone())).collect(),
            circles: self.circles as i64,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WiringDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawDiagram::deserialize(d)?;
        if raw.circles < 0 {
            return Err(serde::de::Error::custom(WiringError::NegativeCircles(raw.circles)));
        }
        WiringDiagram::new(raw.output, raw.inputs, raw.matching, raw.circles as usize).map_err(serde::de::Error::custom)
    }
}

/// Where an endpoint of one of the two glued diagrams lives.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    Outer(Endpoint),
    Inner(Endpoint),
}

/// `D ∘_i D2`: glue `D2` into input box `i` of `D`.
///
/// Input boxes of the result are `D`'s boxes before `i`, then the inputs of
/// `D2`, then `D`'s boxes after `i`.
pub fn compose(d: &WiringDiagram, i: usize, d2: &WiringDiagram) -> Result<WiringDiagram, WiringError> {
    let r = d.input_count();
    if i == 0 || i > r {
        return Err(WiringError::IndexOutOfRange { index: i, count: r });
    }
    let hole = &d.inputs[i - 1];
    if hole.out_labels != d2.output.in_labels || hole.in_labels != d2.output.out_labels {
        return Err(WiringError::InterfaceMismatch { index: i, expected: hole.clone(), found: d2.output.flipped() });
    }
    let s = d2.input_count();
    let renumber = |side: &Side| -> Endpoint {
        match side {
            Side::Outer(Endpoint(b, p, a)) => {
                let nb = if *b < i { *b } else { b + s - 1 };
                Endpoint(nb, *p, a.clone())
            }
            Side::Inner(Endpoint(b, p, a)) => Endpoint(i + b - 1, *p, a.clone()),
        }
    };
    let glued = |side: &Side| match side {
        Side::Outer(e) => e.0 == i,
        Side::Inner(e) => e.0 == 0,
    };
    // Follow p from an Out endpoint; hop across the gluing until an unglued In is reached.
    let step = |side: &Side| -> Side {
        match side {
            Side::Outer(e) => Side::Outer(d.matching[e].clone()),
            Side::Inner(e) => Side::Inner(d2.matching[e].clone()),
        }
    };
    let hop = |side: &Side| -> Side {
        match side {
            Side::Outer(Endpoint(_, _, a)) => Side::Inner(Endpoint(0, Polarity::Out, a.clone())),
            Side::Inner(Endpoint(_, _, a)) => Side::Outer(Endpoint(i, Polarity::Out, a.clone())),
        }
    };

    let mut visited: BTreeSet<Side> = BTreeSet::new();
    let mut matching = Vec::new();
    let starts = d
        .matching
        .keys()
        .filter(|e| e.0 != i)
        .map(|e| Side::Outer(e.clone()))
        .chain(d2.matching.keys().filter(|e| e.0 != 0).map(|e| Side::Inner(e.clone())));
    for start in starts {
        let mut cur = step(&start);
        while glued(&cur) {
            let next = hop(&cur);
            visited.insert(next.clone());
            cur = step(&next);
        }
        matching.push((renumber(&start), renumber(&cur)));
    }

    let mut closed = 0;
    let glued_outs = hole
        .out_labels
        .iter()
        .map(|a| Side::Outer(Endpoint(i, Polarity::Out, a.clone())))
        .chain(d2.output.out_labels.iter().map(|a| Side::Inner(Endpoint(0, Polarity::Out, a.clone()))));
    for start in glued_outs {
        if visited.contains(&start) {
            continue;
        }
        closed += 1;
        let mut cur = start.clone();
        loop {
            visited.insert(cur.clone());
            cur = hop(&step(&cur));
            if cur == start {
                break;
            }
        }
    }

    let mut inputs = Vec::with_capacity(r + s - 1);
    inputs.extend_from_slice(&d.inputs[..i - 1]);
    inputs.extend_from_slice(&d2.inputs);
    inputs.extend_from_slice(&d.inputs[i..]);
    WiringDiagram::new(d.output.clone(), inputs, matching, d.circles + d2.circles + closed)
}

/// `Id^L_{S,T}`: output `(out S, in T)`, one input `(out T, in S)`, straight strands.
pub fn identity_diagram(s: &BTreeSet<Label>, t: &BTreeSet<Label>) -> WiringDiagram {
    let out = Interface::new(s.clone(), t.clone());
    let matching = s
        .iter()
        .map(|a| (Endpoint(0, Polarity::Out, a.clone()), Endpoint(1, Polarity::In, a.clone())))
        .chain(t.iter().map(|b| (Endpoint(1, Polarity::Out, b.clone()), Endpoint(0, Polarity::In, b.clone()))));
    WiringDiagram::new(out.clone(), vec![out.flipped()], matching, 0).expect("identity diagram is valid")
}

/// `Id^R_{S,T} = Id^L_{T,S}`, the right unit for a box with interface `(out S, in T)`.
pub fn right_identity_diagram(s: &BTreeSet<Label>, t: &BTreeSet<Label>) -> WiringDiagram {
    identity_diagram(t, s)
}

/// `D_{σ,τ}`: like the identity, but `σ` carries the inner in-labels to the
/// outer out-labels and `τ` the inner out-labels to the outer in-labels.
pub fn permutation_diagram(sigma: &Bijection, tau: &Bijection) -> Result<WiringDiagram, WiringError> {
    if !sigma.is_permutation() || !tau.is_permutation() {
        return Err(WiringError::NotAPermutation("σ and τ must map their domains onto themselves".into()));
    }
    let s = sigma.domain();
    let t = tau.domain();
    let sigma_inv = sigma.inverse();
    let matching = s
        .iter()
        .map(|a| (Endpoint(0, Polarity::Out, a.clone()), Endpoint(1, Polarity::In, sigma_inv.apply(a))))
        .chain(t.iter().map(|b| (Endpoint(1, Polarity::Out, b.clone()), Endpoint(0, Polarity::In, tau.apply(b)))));
    let matching: Vec<_> = matching.collect();
    let out = Interface::new(s, t);
    WiringDiagram::new(out.clone(), vec![out.flipped()], matching, 0)
}

/// Reorders the input boxes: new box `k` is old box `sigma[k - 1]`.
///
/// `sigma` lists the images `σ(1), ..., σ(r)`. Composing two renumberings
/// gives `renumber(renumber(D, σ'), σ) = renumber(D, σ'∘σ)`.
pub fn renumber_inputs(d: &WiringDiagram, sigma: &[usize]) -> Result<WiringDiagram, WiringError> {
    let r = d.input_count();
    let mut seen = vec![false; r + 1];
    if sigma.len() != r || sigma.iter().any(|&j| j == 0 || j > r || std::mem::replace(&mut seen[j], true)) {
        return Err(WiringError::NotAPermutation(format!("{sigma:?} is not a permutation of 1..={r}")));
    }
    let mut new_index = vec![0usize; r + 1];
    for (k, &j) in sigma.iter().enumerate() {
        new_index[j] = k + 1;
    }
    let mv = |e: &Endpoint| Endpoint(new_index[e.0], e.1, e.2.clone());
    let inputs = sigma.iter().map(|&j| d.inputs[j - 1].clone()).collect();
    let matching = d.matching.iter().map(|(x, y)| (mv(x), mv(y)));
    WiringDiagram::new(d.output.clone(), inputs, matching, d.circles)
}
