//! Multilinear Lie words, their traces, and Killing forms.
//!
//! Lie words are normalised to the right-normed basis
//! `[a1,[a2,...,[a_{k-1}, m]...]]` where `m` is the largest letter. The
//! trace space `Lie[n;0]` is the span of symbols `t(p)` for `p` in
//! `Lie(n+1)` (letter `n+1` traced against the output) modulo the relations
//! coming from the wheeled-prop structure; its dimension is computed by exact
//! elimination.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::endo::{evaluate, Tensor};
use crate::graphs::{GraphBuilder, Sign};
use crate::label::{l, Label};
use crate::wiring::Polarity;
use crate::wprop::{DecoratedGraph, GenInstance};
use crate::Q;

/// Largest `n` accepted by the enumerating functions.
pub const DEFAULT_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("NotMultilinear: {0}")]
    NotMultilinear(String),
    #[error("BoundExceeded: n = {n} is above the bound {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("ParseError: {0}")]
    Parse(String),
}

type LResult<T> = Result<T, LieError>;

fn check_bound(n: usize, bound: usize) -> LResult<()> {
    if n > bound {
        Err(LieError::BoundExceeded { n, bound })
    } else {
        Ok(())
    }
}

/// A bracket tree over letters `x1, x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieWord {
    Letter(u32),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    pub fn x(i: u32) -> Self {
        LieWord::Letter(i)
    }

    pub fn br(a: LieWord, b: LieWord) -> Self {
        LieWord::Bracket(Box::new(a), Box::new(b))
    }

    /// `[a1,[a2,...,[a_{k-1},a_k]...]]`.
    pub fn right_normed(letters: &[u32]) -> Self {
        let (last, rest) = letters.split_last().expect("at least one letter");
        rest.iter().rev().fold(LieWord::Letter(*last), |acc, &a| LieWord::br(LieWord::Letter(a), acc))
    }

    /// Letters in left-to-right order.
    pub fn letters(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<u32>) {
        match self {
            LieWord::Letter(a) => out.push(*a),
            LieWord::Bracket(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    fn max_letter(&self) -> u32 {
        *self.letters().iter().max().expect("nonempty word")
    }

    fn contains(&self, x: u32) -> bool {
        match self {
            LieWord::Letter(a) => *a == x,
            LieWord::Bracket(a, b) => a.contains(x) || b.contains(x),
        }
    }

    /// Renames every letter.
    pub fn map_letters(&self, f: &impl Fn(u32) -> u32) -> LieWord {
        match self {
            LieWord::Letter(a) => LieWord::Letter(f(*a)),
            LieWord::Bracket(a, b) => LieWord::br(a.map_letters(f), b.map_letters(f)),
        }
    }

    /// Replaces letter `x` by the word `w`.
    pub fn substitute(&self, x: u32, w: &LieWord) -> LieWord {
        match self {
            LieWord::Letter(a) if *a == x => w.clone(),
            LieWord::Letter(_) => self.clone(),
            LieWord::Bracket(a, b) => LieWord::br(a.substitute(x, w), b.substitute(x, w)),
        }
    }

    pub fn check_multilinear(&self) -> LResult<()> {
        let ls = self.letters();
        let set: BTreeSet<u32> = ls.iter().copied().collect();
        if set.len() != ls.len() {
            return Err(LieError::NotMultilinear(format!("a letter repeats in {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for LieWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieWord::Letter(a) => write!(f, "x{a}"),
            LieWord::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl FromStr for LieWord {
    type Err = LieError;

    /// Parses words such as `[x1,[x2,x3]]`; whitespace is ignored.
    fn from_str(s: &str) -> LResult<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let w = parse_word(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(LieError::Parse(format!("trailing input at position {pos}")));
        }
        Ok(w)
    }
}

fn parse_word(c: &[char], pos: &mut usize) -> LResult<LieWord> {
    let err = |p: usize, what: &str| LieError::Parse(format!("expected {what} at position {p}"));
    match c.get(*pos) {
        Some('[') => {
            *pos += 1;
            let a = parse_word(c, pos)?;
            if c.get(*pos) != Some(&',') {
                return Err(err(*pos, "','"));
            }
            *pos += 1;
            let b = parse_word(c, pos)?;
            if c.get(*pos) != Some(&']') {
                return Err(err(*pos, "']'"));
            }
            *pos += 1;
            Ok(LieWord::br(a, b))
        }
        Some('x') => {
            *pos += 1;
            let start = *pos;
            while c.get(*pos).is_some_and(|ch| ch.is_ascii_digit()) {
                *pos += 1;
            }
            let digits: String = c[start..*pos].iter().collect();
            digits.parse().map(LieWord::Letter).map_err(|_| err(start, "a letter index"))
        }
        _ => Err(err(*pos, "'[' or a letter")),
    }
}

/// A rational combination of right-normed basis words, keyed by their letter sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LieElement {
    terms: BTreeMap<Vec<u32>, Q>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    /// The basis word with letter sequence `seq`; the last letter must be the largest.
    pub fn basis(seq: Vec<u32>) -> Self {
        debug_assert!(seq.last() == seq.iter().max());
        let mut terms = BTreeMap::new();
        terms.insert(seq, Q::one());
        LieElement { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, seq: &[u32]) -> Q {
        self.terms.get(seq).cloned().unwrap_or_else(Q::zero)
    }

    fn add_term(&mut self, k: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> LieElement {
        let mut out = LieElement::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&-Q::one()))
    }

    /// Back to a combination of words (each basis key as a right-normed word).
    pub fn words(&self) -> Vec<(LieWord, Q)> {
        self.terms.iter().map(|(k, c)| (LieWord::right_normed(k), c.clone())).collect()
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let w = LieWord::right_normed(k);
            match (n, c.is_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{mag}*{w}")?;
            }
        }
        Ok(())
    }
}

/// `ad(u)` applied to an element whose basis words all end in a letter
/// larger than every letter of `u`.
fn ad(u: &LieWord, e: &LieElement) -> LieElement {
    match u {
        LieWord::Letter(y) => {
            let mut out = LieElement::zero();
            for (k, c) in &e.terms {
                let mut seq = Vec::with_capacity(k.len() + 1);
                seq.push(*y);
                seq.extend_from_slice(k);
                out.add_term(seq, c.clone());
            }
            out
        }
        // [[a,c],B] = [a,[c,B]] - [c,[a,B]]
        LieWord::Bracket(a, c) => ad(a, &ad(c, e)).sub(&ad(c, &ad(a, e))),
    }
}

fn normalize_unchecked(w: &LieWord) -> LieElement {
    match w {
        LieWord::Letter(a) => LieElement::basis(vec![*a]),
        LieWord::Bracket(u, v) => {
            let m = w.max_letter();
            if v.contains(m) {
                ad(u, &normalize_unchecked(v))
            } else {
                ad(v, &normalize_unchecked(u)).scale(&-Q::one())
            }
        }
    }
}

/// Rewrites a multilinear word in the right-normed basis.
pub fn normalize(w: &LieWord) -> LResult<LieElement> {
    w.check_multilinear()?;
    Ok(normalize_unchecked(w))
}

/// Normalises a rational combination of multilinear words.
pub fn normalize_sum(ws: &[(LieWord, Q)]) -> LResult<LieElement> {
    let mut out = LieElement::zero();
    for (w, c) in ws {
        out = out.add(&normalize(w)?.scale(c));
    }
    Ok(out)
}

/// All bracketings of the given letters, each letter used once.
pub fn all_words(letters: &[u32]) -> Vec<LieWord> {
    if letters.len() == 1 {
        return vec![LieWord::Letter(letters[0])];
    }
    let n = letters.len();
    let mut out = Vec::new();
    // Ordered splits into two nonempty parts.
    for mask in 1..(1u64 << n) - 1 {
        let (left, right): (Vec<u32>, Vec<u32>) = {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (k, &a) in letters.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    left.push(a);
                } else {
                    right.push(a);
                }
            }
            (left, right)
        };
        let ls = all_words(&left);
        let rs = all_words(&right);
        for a in &ls {
            for b in &rs {
                out.push(LieWord::br(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// A random bracketing of the letters in random order.
pub fn random_word<R: Rng>(letters: &[u32], rng: &mut R) -> LieWord {
    let mut ls = letters.to_vec();
    ls.shuffle(rng);
    random_tree(&ls, rng)
}

fn random_tree<R: Rng>(ls: &[u32], rng: &mut R) -> LieWord {
    if ls.len() == 1 {
        return LieWord::Letter(ls[0]);
    }
    let cut = rng.gen_range(1..ls.len());
    LieWord::br(random_tree(&ls[..cut], rng), random_tree(&ls[cut..], rng))
}

/// Incremental row echelon form over `Q`; the pivot of a row is its largest key.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord> {
    rows: BTreeMap<K, BTreeMap<K, Q>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, mut v: BTreeMap<K, Q>) -> BTreeMap<K, Q> {
        let mut cursor: Option<K> = None;
        loop {
            let next =
                v.keys().rev().find(|k| cursor.as_ref().is_none_or(|c| *k < c) && self.rows.contains_key(*k)).cloned();
            let Some(k) = next else { break };
            let c = v[&k].clone();
            for (j, x) in &self.rows[&k] {
                let e = v.entry(j.clone()).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(j);
                }
            }
            cursor = Some(k);
        }
        v
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, v: BTreeMap<K, Q>) -> bool {
        let v = self.reduce(v);
        let Some((pivot, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let row = v.into_iter().map(|(k, x)| (k, x / &c)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(rows: impl IntoIterator<Item = BTreeMap<K, Q>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// How to count the dimension of `Lie(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimMethod {
    /// Rank of the normal forms of all bracketings.
    Rewriting,
    /// Rank of the associative expansions `[u,v] = uv - vu` of all bracketings.
    Associative,
}

/// The expansion of a word in the free associative algebra.
pub fn associative_expansion(w: &LieWord) -> BTreeMap<Vec<u32>, Q> {
    match w {
        LieWord::Letter(a) => BTreeMap::from([(vec![*a], Q::one())]),
        LieWord::Bracket(u, v) => {
            let eu = associative_expansion(u);
            let ev = associative_expansion(v);
            let mut out = BTreeMap::new();
            for (a, x) in &eu {
                for (b, y) in &ev {
                    let mut ab = a.clone();
                    ab.extend_from_slice(b);
                    let mut ba = b.clone();
                    ba.extend_from_slice(a);
                    *out.entry(ab).or_insert_with(Q::zero) += x * y;
                    *out.entry(ba).or_insert_with(Q::zero) -= x * y;
                }
            }
            out.retain(|_, c: &mut Q| !c.is_zero());
            out
        }
    }
}

/// Dimension of the multilinear part of the free Lie algebra on `n` letters.
pub fn lie_dim(n: usize) -> LResult<usize> {
    lie_dim_with(n, DimMethod::Rewriting, DEFAULT_BOUND)
}

pub fn lie_dim_with(n: usize, method: DimMethod, bound: usize) -> LResult<usize> {
    check_bound(n, bound)?;
    if n == 0 {
        return Ok(0);
    }
    let letters: Vec<u32> = (1..=n as u32).collect();
    let words = all_words(&letters);
    Ok(match method {
        DimMethod::Rewriting => rank(words.iter().map(|w| normalize_unchecked(w).terms)),
        DimMethod::Associative => rank(words.iter().map(associative_expansion)),
    })
}

/// Options for building a trace space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceOptions {
    /// Use at most this many cyclic relation instances (all when `None`).
    pub max_instances: Option<usize>,
    /// Extra cyclic instances built from random, non-basis words.
    pub extra_random: usize,
    pub seed: u64,
    pub bound: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { max_instances: None, extra_random: 0, seed: 0, bound: DEFAULT_BOUND }
    }
}

/// The quotient `Lie[n;0]` as computed by elimination.
#[derive(Clone, Debug)]
pub struct TraceSpace {
    pub n: usize,
    /// Basis symbols: letter sequences of right-normed words in `Lie(n+1)`.
    pub symbols: Vec<Vec<u32>>,
    /// Relation instances used, by kind: symmetric group, substitution, cyclic.
    pub instances: [usize; 3],
    relations: Echelon<Vec<u32>>,
}

impl TraceSpace {
    pub fn dim(&self) -> usize {
        self.symbols.len() - self.relations.rank()
    }

    /// Symbols that survive as a quotient basis.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let piv: BTreeSet<&Vec<u32>> = self.relations.pivots().collect();
        self.symbols.iter().filter(|s| !piv.contains(s)).cloned().collect()
    }

    /// `t(w)` for a word in `Lie(n+1)`, reduced modulo the relations.
    pub fn trace(&self, w: &LieWord) -> LResult<LieElement> {
        let letters: BTreeSet<u32> = w.letters().into_iter().collect();
        if letters != (1..=self.n as u32 + 1).collect() {
            return Err(LieError::NotMultilinear(format!("{w} is not a word in x1..x{}", self.n + 1)));
        }
        Ok(self.reduce(&normalize(w)?))
    }

    pub fn reduce(&self, e: &LieElement) -> LieElement {
        LieElement { terms: self.relations.reduce(e.terms.clone()) }
    }
}

/// `p` with its marked letter replaced by `q`, whose own marked letter becomes `traced`.
fn glue(p: &LieWord, p_mark: u32, q: &LieWord, q_mark: u32, traced: u32) -> LieWord {
    let q = q.substitute(q_mark, &LieWord::Letter(traced));
    p.substitute(p_mark, &q)
}

/// Builds `Lie[n;0]` with every cyclic relation instance on basis words.
pub fn trace_space_basis(n: usize) -> LResult<TraceSpace> {
    trace_space(n, TraceOptions::default())
}

pub fn trace_space(n: usize, opts: TraceOptions) -> LResult<TraceSpace> {
    check_bound(n, opts.bound)?;
    let top = n as u32 + 1;
    let free: Vec<u32> = (1..=n as u32).collect();
    let symbols: Vec<Vec<u32>> = crate::label::index_permutations(n)
        .into_iter()
        .map(|p| p.into_iter().map(|k| k as u32 + 1).chain([top]).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut relations = Echelon::new();
    let mut instances = [0usize; 3];

    // Symmetric group: t(σp) = σ t(p), with σ fixing the traced letter.
    for sym in symbols.iter().take(4) {
        let p = LieWord::right_normed(sym);
        let mut perm = free.clone();
        perm.shuffle(&mut rng);
        let sigma = |a: u32| if a == top { top } else { perm[a as usize - 1] };
        let lhs = normalize_unchecked(&p.map_letters(&sigma));
        let mut rhs = LieElement::zero();
        for (k, c) in normalize_unchecked(&p).terms {
            rhs.add_term(k.iter().map(|&a| sigma(a)).collect(), c);
        }
        relations.insert(lhs.sub(&rhs).terms);
        instances[0] += 1;
    }

    // Substitution into an untraced letter: t(p ∘_2 q) = t(p) ∘_2 q.
    if n >= 2 {
        let q_letters: Vec<u32> = (2..=n as u32).collect();
        for _ in 0..4 {
            let p = random_word(&[1, 2, top], &mut rng);
            let q = random_word(&q_letters, &mut rng);
            let lhs = normalize_unchecked(&p.substitute(2, &q));
            let mut rhs = LieElement::zero();
            for (w, c) in normalize_unchecked(&p).words() {
                rhs = rhs.add(&normalize_unchecked(&w.substitute(2, &q)).scale(&c));
            }
            relations.insert(lhs.sub(&rhs).terms);
            instances[1] += 1;
        }
    }

    // Cyclic symmetry: t(p ∘ q) = t(q ∘ p) with the free letters split between p and q.
    let mut cyclic = Vec::new();
    let mut random_pairs = Vec::new();
    for mask in 1..(1u64 << n).saturating_sub(1) {
        let a: Vec<u32> = free.iter().copied().filter(|&x| mask >> (x - 1) & 1 == 1).collect();
        let b: Vec<u32> = free.iter().copied().filter(|&x| mask >> (x - 1) & 1 == 0).collect();
        // Marks: p uses `top` for its open slot, q uses `top + 1`.
        let pa: Vec<u32> = a.iter().copied().chain([top]).collect();
        let qb: Vec<u32> = b.iter().copied().chain([top + 1]).collect();
        for ps in crate::label::index_permutations(a.len()) {
            for qs in crate::label::index_permutations(b.len()) {
                let p: Vec<u32> = ps.iter().map(|&k| a[k]).chain([top]).collect();
                let q: Vec<u32> = qs.iter().map(|&k| b[k]).chain([top + 1]).collect();
                cyclic.push((LieWord::right_normed(&p), LieWord::right_normed(&q)));
            }
        }
        random_pairs.push((pa, qb));
    }
    cyclic.shuffle(&mut rng);
    if let Some(m) = opts.max_instances {
        cyclic.truncate(m);
    }
    for _ in 0..opts.extra_random {
        if random_pairs.is_empty() {
            break;
        }
        let (pa, qb) = &random_pairs[rng.gen_range(0..random_pairs.len())];
        cyclic.push((random_word(pa, &mut rng), random_word(qb, &mut rng)));
    }
    for (p, q) in &cyclic {
        let w1 = glue(p, top, q, top + 1, top);
        let w2 = glue(q, top + 1, p, top, top);
        relations.insert(normalize_unchecked(&w1).sub(&normalize_unchecked(&w2)).terms);
        instances[2] += 1;
    }
    Ok(TraceSpace { n, symbols, instances, relations })
}

/// Dimension of `Lie^w[n;m]`: the inputs are split into `m` labelled nonempty
/// blocks (one Lie word per output) and any number of unlabelled nonempty
/// blocks (one trace each). Free loops are not counted.
pub fn lie_w_dim(n: usize, m: usize) -> LResult<Q> {
    // n! [x^n] L(x)^m exp(T(x)), L = sum dim Lie(a) x^a / a!, T = sum dim Lie[b;0] x^b / b!.
    let fact = |k: usize| -> Q { (1..=k).fold(Q::one(), |acc, j| acc * Q::from_integer(j.into())) };
    let mut lser = vec![Q::zero(); n + 1];
    let mut tser = vec![Q::zero(); n + 1];
    for k in 1..=n {
        lser[k] = Q::from_integer(lie_dim(k)?.into()) / fact(k);
        tser[k] = Q::from_integer(trace_space_basis(k)?.dim().into()) / fact(k);
    }
    let mul = |a: &[Q], b: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); n + 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(n + 1 - i) {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut acc = vec![Q::zero(); n + 1];
    acc[0] = Q::one();
    for _ in 0..m {
        acc = mul(&acc, &lser);
    }
    // exp(T) = sum T^k / k!
    let mut expt = vec![Q::zero(); n + 1];
    let mut power = vec![Q::zero(); n + 1];
    power[0] = Q::one();
    for k in 0..=n {
        for (e, p) in expt.iter_mut().zip(&power) {
            *e += p / fact(k);
        }
        power = mul(&power, &tser);
    }
    Ok(mul(&acc, &expt)[n].clone() * fact(n))
}

/// Structure constant `c` in `[e_a, e_b]` for a bracket tensor with in-axes
/// (first argument, second argument) in sorted order and one out-axis.
fn structure(t: &Tensor, a: usize, b: usize, c: usize) -> &Q {
    t.get(&[c, a, b])
}

fn check_bracket(t: &Tensor) -> crate::Result<()> {
    let bd = t.boundary();
    if bd.inputs.len() != 2 || bd.outputs.len() != 1 {
        return Err(crate::endo::EndoError::ArityMismatch {
            symbol: "bracket".into(),
            inputs: 2,
            outputs: 1,
            got_in: bd.inputs.len(),
            got_out: bd.outputs.len(),
        }
        .into());
    }
    Ok(())
}

fn killing_labels(n: usize) -> Vec<Label> {
    let width = n.to_string().len();
    (1..=n).map(|k| l(&format!("x{k:0width$}"))).collect()
}

/// The decorated graph of `κ_n = t([x1,[x2,...[xn, x_{n+1}]...]])` with one
/// bracket generator per vertex.
pub fn killing_graph(n: usize) -> DecoratedGraph<GenInstance> {
    assert!(n >= 1, "κ_n needs n ≥ 1");
    let (x, y, z) = (l("x"), l("y"), l("z"));
    let mut b = GraphBuilder::new();
    let mut flags = Vec::new();
    for lab in killing_labels(n) {
        let v = b.add_vertex();
        let fx = b.add_flag(v, Sign::Pos, x.clone());
        let fy = b.add_flag(v, Sign::Pos, y.clone());
        let fz = b.add_flag(v, Sign::Neg, z.clone());
        b.set_boundary(fx, lab);
        flags.push((fy, fz));
    }
    for k in 0..n {
        // The output of vertex k+1 feeds the second slot of vertex k; vertex 0 closes the trace.
        let (fy, _) = flags[k];
        let (_, fz) = flags[(k + 1) % n];
        b.join(fz, fy);
    }
    let g = b.build().expect("killing graph is valid");
    let inst = GenInstance::new("bracket", vec![x, y], vec![z]).expect("distinct slots");
    DecoratedGraph::new(&g, vec![inst; n]).expect("typing is consistent")
}

/// Evaluates `κ_n` for a bracket tensor by graph evaluation.
///
/// The result has in-axes `x1..xn` (zero-padded when `n ≥ 10`).
pub fn killing_eval(bracket: &Tensor, n: usize) -> crate::Result<Tensor> {
    check_bracket(bracket)?;
    let bind = BTreeMap::from([("bracket".to_string(), bracket.clone())]);
    Ok(evaluate(&killing_graph(n), &bind, bracket.dim())?)
}

/// `tr(ad x1 ... ad xn)` computed from explicit adjoint matrices.
pub fn killing_oracle(bracket: &Tensor, n: usize) -> crate::Result<Tensor> {
    check_bracket(bracket)?;
    let d = bracket.dim();
    let ad: Vec<Vec<Vec<Q>>> = (0..d)
        .map(|a| (0..d).map(|c| (0..d).map(|b| structure(bracket, a, b, c).clone()).collect()).collect())
        .collect();
    let matmul = |p: &[Vec<Q>], q: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| &p[i][k] * &q[k][j]).sum()).collect()).collect()
    };
    let axes = killing_labels(n).into_iter().map(|a| (Polarity::In, a)).collect();
    Ok(Tensor::from_fn(d, axes, |idx| {
        let mut m = ad[idx[0]].clone();
        for &i in &idx[1..] {
            m = matmul(&m, &ad[i]);
        }
        (0..d).map(|i| m[i][i].clone()).sum()
    })?)
}

/// Builds a bracket tensor with in-axes `x`, `y` and out-axis `z` from `[e_a, e_b] = Σ c e_c`.
pub fn bracket_from_constants(d: usize, constants: &[(usize, usize, usize, Q)]) -> Tensor {
    let mut map: BTreeMap<(usize, usize, usize), Q> = BTreeMap::new();
    for (a, b, c, x) in constants {
        *map.entry((*a, *b, *c)).or_insert_with(Q::zero) += x;
    }
    let axes = vec![(Polarity::In, l("x")), (Polarity::In, l("y")), (Polarity::Out, l("z"))];
    Tensor::from_fn(d, axes, |i| map.get(&(i[1], i[2], i[0])).cloned().unwrap_or_else(Q::zero)).expect("three axes")
}

/// `sl2` in the basis `(e, f, h)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2_bracket() -> Tensor {
    let (e, f, h) = (0, 1, 2);
    let c = |n: i64| Q::from_integer(n.into());
    bracket_from_constants(
        3,
        &[(h, e, e, c(2)), (e, h, e, c(-2)), (h, f, f, c(-2)), (f, h, f, c(2)), (e, f, h, c(1)), (f, e, h, c(-1))],
    )
}

/// The two-dimensional nonabelian algebra `[e,f] = e`.
pub fn solvable_bracket() -> Tensor {
    let c = |n: i64| Q::from_integer(n.into());
    bracket_from_constants(2, &[(0, 1, 0, c(1)), (1, 0, 0, c(-1))])
}

pub fn zero_bracket(d: usize) -> Tensor {
    bracket_from_constants(d, &[])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemisimpleReport {
    pub antisymmetry: bool,
    pub jacobi: bool,
    /// Rank of the Killing form `κ2`.
    pub killing_rank: usize,
    pub nondegenerate: bool,
}

impl SemisimpleReport {
    pub fn passes(&self) -> bool {
        self.antisymmetry && self.jacobi && self.nondegenerate
    }
}

/// Checks the Lie axioms exactly and whether the Killing form is nondegenerate.
pub fn semisimple_witness(bracket: &Tensor) -> crate::Result<SemisimpleReport> {
    check_bracket(bracket)?;
    let d = bracket.dim();
    let s = |a, b, c| structure(bracket, a, b, c);
    let mut antisymmetry = true;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                if s(a, b, c) != &-s(b, a, c).clone() {
                    antisymmetry = false;
                }
            }
        }
    }
    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0 on basis triples.
    let nested = |a: usize, b: usize, c: usize, out: usize| -> Q { (0..d).map(|k| s(b, c, k) * s(a, k, out)).sum() };
    let mut jacobi = true;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for o in 0..d {
                    let sum = nested(a, b, c, o) + nested(b, c, a, o) + nested(c, a, b, o);
                    if !sum.is_zero() {
                        jacobi = false;
                    }
                }
            }
        }
    }
    let k2 = killing_eval(bracket, 2)?;
    let killing_rank =
        rank((0..d).map(|i| (0..d).map(|j| (j, k2.get(&[i, j]).clone())).filter(|(_, x)| !x.is_zero()).collect()));
    Ok(SemisimpleReport { antisymmetry, jacobi, killing_rank, nondegenerate: killing_rank == d })
}
