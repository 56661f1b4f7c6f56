//! Labels, label sets and finite bijections between them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

/// A nonempty symbol from the label alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Label(String);

/// Rejected label or bijection input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    /// Labels must be nonempty strings.
    #[error("InvalidLabel: labels must be nonempty")]
    Empty,
    /// Two domain labels map to the same image.
    #[error("NotABijection: {0} is hit twice")]
    NotInjective(Label),
    /// The domain is not the set the bijection was required to act on.
    #[error("NotABijection: domain {found:?} does not match {expected:?}")]
    WrongDomain {
        /// Set the bijection must be defined on.
        expected: BTreeSet<Label>,
        /// Actual domain.
        found: BTreeSet<Label>,
    },
    /// A permutation must map its domain onto itself.
    #[error("NotAPermutation: image differs from domain")]
    NotAPermutation,
}

impl Label {
    pub fn new(symbol: impl Into<String>) -> Result<Self, LabelError> {
        let s = symbol.into();
        if s.is_empty() {
            return Err(LabelError::Empty);
        }
        Ok(Label(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Label::new(s).map_err(serde::de::Error::custom)
    }
}

/// Builds a label from a literal. Panics on the empty string.
pub fn l(symbol: &str) -> Label {
    Label::new(symbol).expect("nonempty label literal")
}

/// Builds a label set from literals.
pub fn labels(symbols: &[&str]) -> BTreeSet<Label> {
    symbols.iter().map(|s| l(s)).collect()
}

/// Returns `n` labels with the given prefix that do not occur in `avoid`.
pub fn fresh_labels(prefix: &str, n: usize, avoid: &BTreeSet<Label>) -> Vec<Label> {
    let mut out = Vec::with_capacity(n);
    let mut k = 0usize;
    while out.len() < n {
        let cand = Label(format!("{prefix}{k}"));
        k += 1;
        if !avoid.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// A finite injective map between label sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bijection {
    map: BTreeMap<Label, Label>,
}

impl Bijection {
    pub fn new(map: BTreeMap<Label, Label>) -> Result<Self, LabelError> {
        let mut seen = BTreeSet::new();
        for v in map.values() {
            if !seen.insert(v.clone()) {
                return Err(LabelError::NotInjective(v.clone()));
            }
        }
        Ok(Bijection { map })
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self, LabelError> {
        Bijection::new(pairs.into_iter().map(|(a, b)| (l(a), l(b))).collect())
    }

    pub fn identity(set: &BTreeSet<Label>) -> Self {
        Bijection { map: set.iter().map(|a| (a.clone(), a.clone())).collect() }
    }

    /// Identity on `set` except that `from` is sent to `to`.
    pub fn rename(set: &BTreeSet<Label>, from: &Label, to: &Label) -> Result<Self, LabelError> {
        let mut map: BTreeMap<Label, Label> = set.iter().map(|a| (a.clone(), a.clone())).collect();
        map.insert(from.clone(), to.clone());
        Bijection::new(map)
    }

    pub fn domain(&self) -> BTreeSet<Label> {
        self.map.keys().cloned().collect()
    }

    pub fn image(&self) -> BTreeSet<Label> {
        self.map.values().cloned().collect()
    }

    pub fn get(&self, a: &Label) -> Option<&Label> {
        self.map.get(a)
    }

    /// Image of `a`; labels outside the domain are fixed.
    pub fn apply(&self, a: &Label) -> Label {
        self.map.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    pub fn apply_set(&self, set: &BTreeSet<Label>) -> BTreeSet<Label> {
        set.iter().map(|a| self.apply(a)).collect()
    }

    pub fn inverse(&self) -> Self {
        Bijection { map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Bijection) -> Self {
        Bijection { map: other.map.iter().map(|(a, b)| (a.clone(), self.apply(b))).collect() }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Label, &Label)> {
        self.map.iter()
    }

    pub fn require_domain(&self, expected: &BTreeSet<Label>) -> Result<(), LabelError> {
        let found = self.domain();
        if &found != expected {
            return Err(LabelError::WrongDomain { expected: expected.clone(), found });
        }
        Ok(())
    }

    pub fn is_permutation(&self) -> bool {
        self.domain() == self.image()
    }
}

/// All permutations of `set`, in lexicographic order of images.
pub fn permutations_of(set: &BTreeSet<Label>) -> Vec<Bijection> {
    let items: Vec<Label> = set.iter().cloned().collect();
    index_permutations(items.len())
        .into_iter()
        .map(|p| Bijection { map: items.iter().cloned().zip(p.iter().map(|&k| items[k].clone())).collect() })
        .collect()
}

/// All permutations of `0..n` as image vectors, lexicographically ordered.
pub fn index_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Labels on the two sides of a boundary, as used by graphs and prop elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Boundary {
    #[serde(rename = "in")]
    pub inputs: BTreeSet<Label>,
    #[serde(rename = "out")]
    pub outputs: BTreeSet<Label>,
}

impl Boundary {
    pub fn new(inputs: BTreeSet<Label>, outputs: BTreeSet<Label>) -> Self {
        Boundary { inputs, outputs }
    }

    pub fn of(inputs: &[&str], outputs: &[&str]) -> Self {
        Boundary { inputs: labels(inputs), outputs: labels(outputs) }
    }

    pub fn is_disjoint(&self, other: &Boundary) -> bool {
        self.inputs.is_disjoint(&other.inputs) && self.outputs.is_disjoint(&other.outputs)
    }

    pub fn union(&self, other: &Boundary) -> Boundary {
        Boundary {
            inputs: self.inputs.union(&other.inputs).cloned().collect(),
            outputs: self.outputs.union(&other.outputs).cloned().collect(),
        }
    }

    pub fn all_labels(&self) -> BTreeSet<Label> {
        self.inputs.union(&self.outputs).cloned().collect()
    }
}
