use std::collections::BTreeSet;

use num::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wirecat::label::Boundary;
use wirecat::lie::{
    associative_expansion, killing_eval, killing_oracle, lie_dim, lie_w_dim, normalize, random_word, sl2_bracket,
    trace_space, trace_space_basis, LieWord, TraceOptions,
};
use wirecat::random;
use wirecat::Q;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Necklaces of `n` distinct beads, counted by brute force over rotations.
fn necklaces(n: usize) -> usize {
    let mut seen = BTreeSet::new();
    for p in wirecat::label::index_permutations(n) {
        let best = (0..n).map(|r| [&p[r..], &p[..r]].concat()).min().unwrap();
        seen.insert(best);
    }
    seen.len()
}

/// All set partitions of `0..n`.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in set_partitions(n - 1) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k].push(n - 1);
            out.push(q);
        }
        let mut q = p.clone();
        q.push(vec![n - 1]);
        out.push(q);
    }
    out
}

/// dim of mixed words with `m` labelled output blocks and any number of traces.
fn mixed_dim_oracle(n: usize, m: usize) -> usize {
    let lie = |a: usize| factorial(a - 1);
    let trace = |b: usize| necklaces(b);
    let mut total = 0;
    for p in set_partitions(n) {
        let blocks = p.len();
        if blocks < m {
            continue;
        }
        // Choose which m blocks are outputs, in order.
        for chosen in wirecat::label::index_permutations(blocks) {
            let (outs, rest) = chosen.split_at(m);
            if !rest.windows(2).all(|w| w[0] < w[1]) {
                continue;
            }
            let a: usize = outs.iter().map(|&k| lie(p[k].len())).product();
            let b: usize = rest.iter().map(|&k| trace(p[k].len())).product();
            total += a * b;
        }
    }
    total
}

#[test]
fn lie_dimensions_are_factorials() {
    for n in 1..=6 {
        assert_eq!(lie_dim(n).unwrap(), factorial(n - 1), "n = {n}");
    }
}

#[test]
fn trace_dimensions_match_necklace_count() {
    for n in 1..=5 {
        assert_eq!(trace_space_basis(n).unwrap().dim(), necklaces(n), "n = {n}");
    }
}

#[test]
fn traces_survive_extra_random_relations() {
    for n in 1..=4 {
        let base = trace_space_basis(n).unwrap().dim();
        let more =
            trace_space(n, TraceOptions { extra_random: 40, seed: n as u64, ..TraceOptions::default() }).unwrap();
        assert_eq!(more.dim(), base, "n = {n}");
    }
}

#[test]
fn mixed_dimensions_match_partition_count() {
    for n in 0..=5 {
        for m in 0..=3.min(n) {
            let expected = Q::from_integer(mixed_dim_oracle(n, m).into());
            assert_eq!(lie_w_dim(n, m).unwrap(), expected, "n = {n}, m = {m}");
        }
    }
}

#[test]
fn cyclic_rotation_is_trivial_in_traces() {
    let t = trace_space_basis(3).unwrap();
    let a: LieWord = "[x1,[x2,[x3,x4]]]".parse().unwrap();
    let b: LieWord = "[x2,[x3,[x1,x4]]]".parse().unwrap();
    assert_eq!(t.trace(&a).unwrap(), t.trace(&b).unwrap());
    let c: LieWord = "[x2,[x1,[x3,x4]]]".parse().unwrap();
    assert_ne!(t.trace(&a).unwrap(), t.trace(&c).unwrap());
}

#[test]
fn sl2_killing_form_is_invariant() {
    let k2 = killing_eval(&sl2_bracket(), 2).unwrap();
    let k3 = killing_eval(&sl2_bracket(), 3).unwrap();
    let br = sl2_bracket();
    // κ2([a,b], c) = tr(ad a ad b ad c) - tr(ad b ad a ad c).
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let lhs: Q = (0..3).map(|k| br.get(&[k, a, b]) * k2.get(&[k, c])).sum();
                let rhs = k3.get(&[a, b, c]) - k3.get(&[b, a, c]);
                assert_eq!(lhs, rhs);
                assert_eq!(k2.get(&[a, b]), k2.get(&[b, a]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms_keep_the_associative_image(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let letters: Vec<u32> = (1..=n as u32).collect();
        let w = random_word(&letters, &mut rng);
        let nf = normalize(&w).unwrap();
        let mut sum = std::collections::BTreeMap::new();
        for (word, c) in nf.words() {
            for (k, x) in associative_expansion(&word) {
                *sum.entry(k).or_insert_with(Q::zero) += x * &c;
            }
        }
        sum.retain(|_, x: &mut Q| !x.is_zero());
        prop_assert_eq!(sum, associative_expansion(&w));
        let again = normalize_all(&nf);
        prop_assert_eq!(again, nf);
    }

    #[test]
    fn killing_graph_matches_adjoint_traces(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let br = random::tensor(&mut rng, 2, &Boundary::of(&["x", "y"], &["z"]));
        prop_assert_eq!(killing_eval(&br, n).unwrap(), killing_oracle(&br, n).unwrap());
    }
}

fn normalize_all(e: &wirecat::lie::LieElement) -> wirecat::lie::LieElement {
    let words = e.words();
    wirecat::lie::normalize_sum(&words).unwrap()
}
