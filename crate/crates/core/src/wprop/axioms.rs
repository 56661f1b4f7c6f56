//! Randomised checks of the wheeled-prop axioms against any [`WheeledProp`].

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::WheeledProp;
use crate::label::{fresh_labels, l, Bijection, Boundary, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    H1,
    H2,
    H3,
    H4,
    C1,
    C2,
    HC1,
    HC2,
}

impl Axiom {
    pub const ALL: [Axiom; 8] =
        [Axiom::H1, Axiom::H2, Axiom::H3, Axiom::H4, Axiom::C1, Axiom::C2, Axiom::HC1, Axiom::HC2];

    pub fn description(self) -> &'static str {
        match self {
            Axiom::H1 => "horizontal composition is associative",
            Axiom::H2 => "horizontal composition commutes with relabelling",
            Axiom::H3 => "horizontal composition is symmetric",
            Axiom::H4 => "the empty unit is a two-sided unit",
            Axiom::C1 => "contraction commutes with relabelling",
            Axiom::C2 => "contractions commute",
            Axiom::HC1 => "contraction commutes with horizontal composition",
            Axiom::HC2 => "units are units for dioperadic composition",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomResult {
    pub axiom: Axiom,
    pub trials: usize,
    pub passed: usize,
    /// Description of the first failing instance.
    pub counterexample: Option<String>,
}

impl AxiomResult {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub seed: u64,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(AxiomResult::ok)
    }

    pub fn get(&self, axiom: Axiom) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.ok())
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let status = if r.ok() { "pass" } else { "FAIL" };
            writeln!(f, "{:<4} {status} {}/{}  {}", r.axiom.to_string(), r.passed, r.trials, r.axiom.description())?;
            if let Some(c) = &r.counterexample {
                writeln!(f, "     counterexample: {c}")?;
            }
        }
        Ok(())
    }
}

/// Produces a random element with exactly the requested boundary.
pub type Sampler<'a, E> = dyn Fn(&Boundary, &mut ChaCha8Rng) -> E + 'a;

/// Runs `trials` random instances of each axiom.
///
/// Each trial draws from its own stream of the seeded generator, so results
/// do not depend on the order trials run in.
pub fn axiom_suite<W: WheeledProp>(w: &W, sampler: &Sampler<'_, W::Elem>, trials: usize, seed: u64) -> AxiomReport {
    let results = Axiom::ALL
        .iter()
        .map(|&axiom| {
            let mut passed = 0;
            let mut counterexample = None;
            for trial in 0..trials {
                let mut rng = trial_rng(seed, axiom, trial);
                match check(w, sampler, axiom, &mut rng) {
                    Ok(()) => passed += 1,
                    Err(msg) => {
                        counterexample.get_or_insert_with(|| format!("trial {trial}: {msg}"));
                    }
                }
            }
            AxiomResult { axiom, trials, passed, counterexample }
        })
        .collect();
    AxiomReport { seed, results }
}

fn trial_rng(seed: u64, axiom: Axiom, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((axiom as u64) << 32) | trial as u64);
    rng
}

const POOL: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// Splits a shuffled label pool into disjoint sets of the given sizes.
fn disjoint_sets(rng: &mut ChaCha8Rng, sizes: &[usize]) -> Vec<BTreeSet<Label>> {
    let mut pool: Vec<Label> = POOL.iter().map(|s| l(s)).collect();
    pool.shuffle(rng);
    let mut it = pool.into_iter();
    sizes.iter().map(|&n| it.by_ref().take(n).collect()).collect()
}

/// Boundaries, disjoint per polarity, with at least `mins[k]` labels on each
/// side of the `k`-th and at most `budget` labels in total.
fn boundaries(rng: &mut ChaCha8Rng, mins: &[usize], budget: usize) -> Vec<Boundary> {
    let k = mins.len();
    let mut ins = mins.to_vec();
    let mut outs = mins.to_vec();
    let extra = budget.saturating_sub(2 * mins.iter().sum::<usize>());
    let extra = rng.gen_range(0..=extra);
    for _ in 0..extra {
        let j = rng.gen_range(0..k);
        let side = if rng.gen_bool(0.5) { &mut ins } else { &mut outs };
        if side[j] < 3 {
            side[j] += 1;
        }
    }
    let is = disjoint_sets(rng, &ins);
    let os = disjoint_sets(rng, &outs);
    is.into_iter().zip(os).map(|(i, o)| Boundary::new(i, o)).collect()
}

fn pick(rng: &mut ChaCha8Rng, set: &BTreeSet<Label>) -> Label {
    let v: Vec<&Label> = set.iter().collect();
    (*v.choose(rng).expect("nonempty set")).clone()
}

fn random_permutation(rng: &mut ChaCha8Rng, set: &BTreeSet<Label>) -> Bijection {
    let dom: Vec<Label> = set.iter().cloned().collect();
    let mut img = dom.clone();
    img.shuffle(rng);
    Bijection::new(dom.into_iter().zip(img).collect()).expect("shuffle is injective")
}

fn restrict(f: &Bijection, set: &BTreeSet<Label>) -> Bijection {
    Bijection::new(set.iter().map(|a| (a.clone(), f.apply(a))).collect()).expect("restriction is injective")
}

fn compare<W: WheeledProp>(w: &W, what: &str, lhs: &W::Elem, rhs: &W::Elem) -> Result<(), String> {
    if w.equal(lhs, rhs) {
        Ok(())
    } else {
        Err(format!("{what}; lhs = {}; rhs = {}", short(lhs), short(rhs)))
    }
}

fn short<T: fmt::Debug>(x: &T) -> String {
    let s = format!("{x:?}");
    if s.len() > 600 {
        format!("{}...", &s[..s.char_indices().nth(600).map_or(s.len(), |(i, _)| i)])
    } else {
        s
    }
}

fn check<W: WheeledProp>(
    w: &W,
    sampler: &Sampler<'_, W::Elem>,
    axiom: Axiom,
    rng: &mut ChaCha8Rng,
) -> Result<(), String> {
    let e = |r: crate::Result<W::Elem>| r.map_err(|e| e.to_string());
    match axiom {
        Axiom::H1 => {
            let bs = boundaries(rng, &[0, 0, 0], 6);
            let (a, b, c) = (sampler(&bs[0], rng), sampler(&bs[1], rng), sampler(&bs[2], rng));
            let lhs = e(w.horizontal(&e(w.horizontal(&a, &b))?, &c))?;
            let rhs = e(w.horizontal(&a, &e(w.horizontal(&b, &c))?))?;
            compare(w, &format!("boundaries {bs:?}"), &lhs, &rhs)
        }
        Axiom::H2 => {
            let bs = boundaries(rng, &[0, 0], 6);
            let (a, b) = (sampler(&bs[0], rng), sampler(&bs[1], rng));
            let all = bs[0].union(&bs[1]);
            let f = random_permutation(rng, &all.inputs);
            let g = random_permutation(rng, &all.outputs);
            let lhs = e(w.relabel(&e(w.horizontal(&a, &b))?, &f, &g))?;
            let ra = e(w.relabel(&a, &restrict(&f, &bs[0].inputs), &restrict(&g, &bs[0].outputs)))?;
            let rb = e(w.relabel(&b, &restrict(&f, &bs[1].inputs), &restrict(&g, &bs[1].outputs)))?;
            let rhs = e(w.horizontal(&ra, &rb))?;
            compare(w, &format!("boundaries {bs:?}, f = {f:?}, g = {g:?}"), &lhs, &rhs)
        }
        Axiom::H3 => {
            let bs = boundaries(rng, &[0, 0], 6);
            let (a, b) = (sampler(&bs[0], rng), sampler(&bs[1], rng));
            let lhs = e(w.horizontal(&a, &b))?;
            let rhs = e(w.horizontal(&b, &a))?;
            compare(w, &format!("boundaries {bs:?}"), &lhs, &rhs)
        }
        Axiom::H4 => {
            let bs = boundaries(rng, &[0], 5);
            let a = sampler(&bs[0], rng);
            let u = w.unit_empty();
            compare(w, &format!("a * 1, boundary {:?}", bs[0]), &e(w.horizontal(&a, &u))?, &a)?;
            compare(w, &format!("1 * a, boundary {:?}", bs[0]), &e(w.horizontal(&u, &a))?, &a)
        }
        Axiom::C1 => {
            let bs = boundaries(rng, &[1], 5);
            let bd = &bs[0];
            let a = sampler(bd, rng);
            let (i, j) = (pick(rng, &bd.inputs), pick(rng, &bd.outputs));
            let f = random_permutation(rng, &bd.inputs);
            let g = random_permutation(rng, &bd.outputs);
            let lhs = e(w.contract(&e(w.relabel(&a, &f, &g))?, &f.apply(&i), &g.apply(&j)))?;
            let mut rest_in = bd.inputs.clone();
            rest_in.remove(&i);
            let mut rest_out = bd.outputs.clone();
            rest_out.remove(&j);
            let rhs = e(w.relabel(&e(w.contract(&a, &i, &j))?, &restrict(&f, &rest_in), &restrict(&g, &rest_out)))?;
            compare(w, &format!("boundary {bd:?}, i = {i}, j = {j}, f = {f:?}, g = {g:?}"), &lhs, &rhs)
        }
        Axiom::C2 => {
            let bs = boundaries(rng, &[2], 6);
            let bd = &bs[0];
            let a = sampler(bd, rng);
            let mut ins: Vec<Label> = bd.inputs.iter().cloned().collect();
            let mut outs: Vec<Label> = bd.outputs.iter().cloned().collect();
            ins.shuffle(rng);
            outs.shuffle(rng);
            let (i, k, j, m) = (&ins[0], &ins[1], &outs[0], &outs[1]);
            let lhs = e(w.contract(&e(w.contract(&a, i, j))?, k, m))?;
            let rhs = e(w.contract(&e(w.contract(&a, k, m))?, i, j))?;
            compare(w, &format!("boundary {bd:?}, (i,j) = ({i},{j}), (k,l) = ({k},{m})"), &lhs, &rhs)
        }
        Axiom::HC1 => {
            let bs = boundaries(rng, &[1, 0], 6);
            let (a, b) = (sampler(&bs[0], rng), sampler(&bs[1], rng));
            let (i, j) = (pick(rng, &bs[0].inputs), pick(rng, &bs[0].outputs));
            let lhs = e(w.contract(&e(w.horizontal(&a, &b))?, &i, &j))?;
            let rhs = e(w.horizontal(&e(w.contract(&a, &i, &j))?, &b))?;
            compare(w, &format!("boundaries {bs:?}, i = {i}, j = {j}"), &lhs, &rhs)
        }
        Axiom::HC2 => {
            let bs = boundaries(rng, &[1], 5);
            let bd = &bs[0];
            let a = sampler(bd, rng);
            let (i, j) = (pick(rng, &bd.inputs), pick(rng, &bd.outputs));
            let u = fresh_labels("u", 1, &bd.all_labels()).pop().expect("one label");
            let unit = w.unit(&u);
            let back = |from: &Label, to: &Label, set: &BTreeSet<Label>| {
                let mut set = set.clone();
                set.remove(to);
                set.insert(from.clone());
                Bijection::rename(&set, from, to).expect("fresh label")
            };
            let left = e(w.contract(&e(w.horizontal(&unit, &a))?, &i, &u))?;
            let left = e(w.relabel(&left, &back(&u, &i, &bd.inputs), &Bijection::identity(&bd.outputs)))?;
            compare(w, &format!("1_u into input {i}, boundary {bd:?}"), &left, &a)?;
            let right = e(w.contract(&e(w.horizontal(&a, &unit))?, &u, &j))?;
            let right = e(w.relabel(&right, &Bijection::identity(&bd.inputs), &back(&u, &j, &bd.outputs)))?;
            compare(w, &format!("output {j} into 1_u, boundary {bd:?}"), &right, &a)
        }
    }
}
