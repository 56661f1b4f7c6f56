//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wirecat::endo::{evaluate_graph, identity_tensor, trace_contract, BrokenEndProp, EndProp, Tensor};
use wirecat::graphs::{is_isomorphic_strict, substitute};
use wirecat::label::l;
use wirecat::lie::{
    killing_eval, killing_oracle, lie_dim_with, semisimple_witness, sl2_bracket, solvable_bracket, trace_space,
    zero_bracket, DimMethod, TraceOptions,
};
use wirecat::random::{self, ComposableTriple, DiagramShape, GraphShape, TripleShape};
use wirecat::translate::{graph_to_wd, wd_to_graph};
use wirecat::wiring::{compose, identity_diagram, renumber_inputs, WiringDiagram};
use wirecat::wprop::axioms::axiom_suite;
use wirecat::wprop::{wd_action, DecoratedGraph, Free, FreeProp, GenInstance, WheeledProp};
use wirecat::Q;

struct Outcome {
    passed: usize,
    total: usize,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: 0, total: 0, note: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.note.is_empty() {
            self.note = what();
        }
    }

    fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// Box order after `compose(D, σ(i), D2)` that matches `compose(renumber(D, σ), i, D2)`.
fn induced_renumbering(sigma: &[usize], i: usize, s: usize) -> Vec<usize> {
    let si = sigma[i - 1];
    let pos = |b: usize| if b < si { b } else { b + s - 1 };
    let r = sigma.len();
    let mut tau = Vec::new();
    for k in 1..i {
        tau.push(pos(sigma[k - 1]));
    }
    for c in 1..=s {
        tau.push(si + c - 1);
    }
    for k in i + 1..=r {
        tau.push(pos(sigma[k - 1]));
    }
    tau
}

fn operad_triple(t: &ComposableTriple) -> Result<bool, String> {
    let e = |x: Result<WiringDiagram, _>| x.map_err(|e: wirecat::wiring::WiringError| e.to_string());
    match t.shape {
        TripleShape::Nested => {
            let lhs = e(compose(&e(compose(&t.d, t.i, &t.d2))?, t.i + t.j - 1, &t.d3))?;
            let rhs = e(compose(&t.d, t.i, &e(compose(&t.d2, t.j, &t.d3))?))?;
            Ok(lhs == rhs)
        }
        TripleShape::Parallel => {
            let s = t.d2.input_count();
            let lhs = e(compose(&e(compose(&t.d, t.i, &t.d2))?, t.j + s - 1, &t.d3))?;
            let rhs = e(compose(&e(compose(&t.d, t.j, &t.d3))?, t.i, &t.d2))?;
            Ok(lhs == rhs)
        }
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let shape = DiagramShape::default();
    for k in 0..500 {
        let kind = if k % 2 == 0 { TripleShape::Nested } else { TripleShape::Parallel };
        let t = random::composable_triple(&mut rng, shape, kind);
        let r = operad_triple(&t);
        o.check(r == Ok(true), || format!("associativity ({kind:?}) failed: {r:?} on {t:?}"));

        let d = &t.d;
        let out = d.output();
        let left = compose(&identity_diagram(&out.out_labels, &out.in_labels), 1, d);
        o.check(left.as_ref() == Ok(d), || format!("left unit failed on {d:?}"));
        let hole = &d.inputs()[t.i - 1];
        let right = compose(d, t.i, &identity_diagram(&hole.in_labels, &hole.out_labels));
        o.check(right.as_ref() == Ok(d), || format!("right unit failed on {d:?}"));

        let r = d.input_count();
        let sigma = random::permutation(&mut rng, r);
        let sigma2 = random::permutation(&mut rng, r);
        let twice = renumber_inputs(&renumber_inputs(d, &sigma2).unwrap(), &sigma).unwrap();
        let comp: Vec<usize> = (0..r).map(|k| sigma2[sigma[k] - 1]).collect();
        o.check(twice == renumber_inputs(d, &comp).unwrap(), || "renumbering is not an action".into());

        let i = rng.gen_range(1..=r);
        let inner = random::diagram_with_output(&mut rng, shape, d.inputs()[sigma[i - 1] - 1].flipped(), 0);
        let lhs = compose(&renumber_inputs(d, &sigma).unwrap(), i, &inner).unwrap();
        let tau = induced_renumbering(&sigma, i, inner.input_count());
        let rhs = renumber_inputs(&compose(d, sigma[i - 1], &inner).unwrap(), &tau).unwrap();
        o.check(lhs == rhs, || format!("equivariance failed for σ = {sigma:?}, i = {i}"));
    }
    let secs = start.elapsed().as_secs_f64();
    o.check(secs < 10.0, || format!("took {secs:.2} s"));
    o.note = if o.note.is_empty() { format!("{secs:.2} s") } else { o.note.clone() };
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let shape = GraphShape { max_vertices: 3, max_edges: 2, max_free_edges: 1, max_loops: 1, max_arity: 2 };
    for _ in 0..200 {
        let bd = random::boundary(&mut rng, 2);
        let mut leaf = |rng: &mut ChaCha8Rng, b: &wirecat::label::Boundary| random::loose_instance(rng, b);
        let mut mid = |rng: &mut ChaCha8Rng, b: &wirecat::label::Boundary| random::decorated(rng, b, shape, &mut leaf);
        // An element of F(F(F E)): outer graph, middle graphs, inner graphs.
        let x: Free<DecoratedGraph<DecoratedGraph<GenInstance>>> = {
            let mut top =
                |rng: &mut ChaCha8Rng, b: &wirecat::label::Boundary| random::decorated(rng, b, shape, &mut mid);
            random::element_of(&mut rng, &bd, shape, &mut top)
        };
        let outer_first = x.flatten().flatten();
        // map_basis already multiplies once, so this is μ ∘ F(μ).
        let inner_first = x.map_basis(|k| Ok(Free::basis(k.flatten()))).unwrap();
        o.check(outer_first == inner_first, || format!("associativity failed on {x:?}"));

        let y: Free<GenInstance> = random::element_of(&mut rng, &bd, shape, &mut leaf);
        let mut unit_outer = Free::zero(bd.clone());
        for (k, c) in y.terms() {
            unit_outer = unit_outer.add(&Free::eta(k.clone()).scale(c)).unwrap();
        }
        o.check(unit_outer.flatten() == y, || format!("outer unit failed on {y:?}"));
        let unit_inner = y.map_basis(|b| Ok(Free::eta(b.clone()))).unwrap();
        o.check(unit_inner == y, || format!("inner unit failed on {y:?}"));
    }
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..1000 {
        let d = random::diagram(&mut rng, DiagramShape::default());
        let back = graph_to_wd(&wd_to_graph(&d));
        o.check(back == d, || format!("Φ∘Ψ changed {d:?} into {back:?}"));
    }
    for _ in 0..1000 {
        let g = random::graph(&mut rng, GraphShape::default());
        let back = wd_to_graph(&graph_to_wd(&g));
        o.check(is_isomorphic_strict(&back, &g), || format!("Ψ∘Φ changed {g:?}"));
    }
    for _ in 0..500 {
        let d = random::diagram_with_boxes(&mut rng, DiagramShape::default(), 1);
        let i = rng.gen_range(1..=d.input_count());
        let d2 = random::diagram_with_output(&mut rng, DiagramShape::default(), d.inputs()[i - 1].flipped(), 0);
        let lhs = wd_to_graph(&compose(&d, i, &d2).unwrap());
        let rhs = substitute(&wd_to_graph(&d), i - 1, &wd_to_graph(&d2));
        o.check(rhs.as_ref().is_ok_and(|r| is_isomorphic_strict(&lhs, r)), || {
            format!("Ψ(D ∘_{i} D') differs from substitution for D = {d:?}, D' = {d2:?}")
        });
    }
    o
}

fn box_tensors(rng: &mut ChaCha8Rng, d: &WiringDiagram, dim: usize) -> Vec<Tensor> {
    d.inputs()
        .iter()
        .map(|b| {
            let bd = wirecat::label::Boundary::new(b.in_labels.clone(), b.out_labels.clone());
            random::tensor(rng, dim, &bd)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let shape = DiagramShape { max_boxes: 3, max_labels: 2, max_circles: 2 };
    let w = EndProp::new(2);
    for _ in 0..200 {
        let d = random::diagram(&mut rng, shape);
        let args = box_tensors(&mut rng, &d, 2);
        let via_ops = wd_action(&w, &d, &args);
        let direct = evaluate_graph(&wd_to_graph(&d), &args, 2);
        let same = matches!((&via_ops, &direct), (Ok(a), Ok(b)) if a == b);
        o.check(same, || format!("action and evaluation differ on {d:?}: {via_ops:?} vs {direct:?}"));

        if d.input_count() == 0 {
            continue;
        }
        let i = rng.gen_range(1..=d.input_count());
        let d2 = random::diagram_with_output(&mut rng, shape, d.inputs()[i - 1].flipped(), 0);
        let inner = box_tensors(&mut rng, &d2, 2);
        let composed = compose(&d, i, &d2).unwrap();
        let mut all = args[..i - 1].to_vec();
        all.extend(inner.iter().cloned());
        all.extend(args[i..].iter().cloned());
        let lhs = wd_action(&w, &composed, &all);
        let rhs = wd_action(&w, &d2, &inner).and_then(|t| {
            let mut outer = args.clone();
            outer[i - 1] = t;
            wd_action(&w, &d, &outer)
        });
        let same = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b);
        o.check(same, || format!("composition axiom failed on {d:?} ∘_{i} {d2:?}"));
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let mut notes = Vec::new();
    let free = axiom_suite(&FreeProp, &random::free_sampler(), 200, 5);
    o.check(free.all_pass(), || format!("free prop:\n{free}"));
    for d in 1..=3 {
        let r = axiom_suite(&EndProp::new(d), &random::tensor_sampler(d), 200, 5);
        o.check(r.all_pass(), || format!("End(Q^{d}):\n{r}"));
    }
    let broken = axiom_suite(&BrokenEndProp { dim: 2 }, &random::tensor_sampler(2), 200, 5);
    let witness = broken.failures().find_map(|f| f.counterexample.clone().map(|c| (f.axiom, c)));
    o.check(witness.is_some(), || "broken contraction passed every axiom".into());
    if let Some((axiom, _)) = witness {
        notes.push(format!("broken contraction caught by {axiom}"));
    }
    if o.ok() {
        o.note = notes.join(", ");
    }
    o
}

fn matmul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    for d in 1..=4 {
        let t = trace_contract(&identity_tensor(&l("a"), d), &l("a"), &l("a")).unwrap();
        o.check(t.as_scalar() == Some(&Q::from_integer(d.into())), || format!("tr(id) wrong for d = {d}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for k in 0..100 {
        let d = if k % 2 == 0 { 2 } else { 3 };
        let w = EndProp::new(d);
        let a = random::matrix(&mut rng, d);
        let b = random::matrix(&mut rng, d);
        let ta = Tensor::from_matrix(&l("i"), &l("j"), &a).unwrap();
        let tb = Tensor::from_matrix(&l("k"), &l("m"), &b).unwrap();
        let ab = w.dioperadic(&ta, &l("i"), &tb, &l("m")).unwrap();
        o.check(ab.to_matrix() == Some(matmul(&a, &b)), || format!("dioperadic ≠ AB for {a:?}, {b:?}"));
        let ba = w.dioperadic(&tb, &l("k"), &ta, &l("j")).unwrap();
        let t1 = trace_contract(&ab, &l("k"), &l("j")).unwrap();
        let t2 = trace_contract(&ba, &l("i"), &l("m")).unwrap();
        o.check(t1 == t2, || format!("t(AB) ≠ t(BA) for {a:?}, {b:?}"));
    }
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let mut fact = 1usize;
    for n in 2..=5 {
        fact *= n - 1;
        let a = lie_dim_with(n, DimMethod::Rewriting, 6).unwrap();
        let b = lie_dim_with(n, DimMethod::Associative, 6).unwrap();
        o.check(a == fact && b == fact, || format!("lie_dim({n}): rewriting {a}, associative {b}, expected {fact}"));
    }
    for n in 1..=3 {
        let base = trace_space(n, TraceOptions::default()).unwrap();
        let total: usize = base.instances.iter().sum();
        let doubled = trace_space(n, TraceOptions { extra_random: total, seed: 9, ..TraceOptions::default() }).unwrap();
        o.check(base.dim() == doubled.dim(), || {
            format!("trace dim for n = {n} moved from {} to {} when doubling", base.dim(), doubled.dim())
        });
    }
    let (e, f, h) = (0, 1, 2);
    let oracle = killing_oracle(&sl2_bracket(), 2).unwrap();
    let graph = killing_eval(&sl2_bracket(), 2).unwrap();
    o.check(oracle.get(&[h, h]) == &Q::from_integer(8.into()), || "oracle κ(h,h) ≠ 8".into());
    o.check(oracle.get(&[e, f]) == &Q::from_integer(4.into()), || "oracle κ(e,f) ≠ 4".into());
    o.check(graph == oracle, || format!("graph evaluation {graph:?} ≠ oracle {oracle:?}"));
    let sl2 = semisimple_witness(&sl2_bracket()).unwrap();
    o.check(sl2.passes(), || format!("sl2 witness: {sl2:?}"));
    let zero = semisimple_witness(&zero_bracket(2)).unwrap();
    o.check(zero.jacobi && !zero.nondegenerate, || format!("zero bracket witness: {zero:?}"));
    let solv = semisimple_witness(&solvable_bracket()).unwrap();
    o.check(solv.jacobi && !solv.nondegenerate && solv.killing_rank < 2, || format!("solvable witness: {solv:?}"));
    o
}

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    use std::io::Write;
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wirecat"));
    cmd.args(args).stdout(std::process::Stdio::piped()).stderr(std::process::Stdio::piped());
    cmd.stdin(std::process::Stdio::piped());
    let mut child = cmd.spawn().expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let dir = std::env::temp_dir().join(format!("wirecat-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for seed in 0..20 {
        let (c, g_json) = run(&["sample", "--kind", "graph", "--seed", &seed.to_string()], None);
        o.check(c == 0, || "sample failed".into());
        let g: wirecat::graphs::DirectedGraph = serde_json::from_str(&g_json).unwrap();
        let (c1, wd) = run(&["to-wd", "-"], Some(&g_json));
        let (c2, back) = run(&["to-graph", "-"], Some(&wd));
        let back: Result<wirecat::graphs::DirectedGraph, _> = serde_json::from_str(&back);
        o.check(c1 == 0 && c2 == 0 && back.as_ref().is_ok_and(|b| is_isomorphic_strict(b, &g)), || {
            format!("to-wd | to-graph changed graph for seed {seed}")
        });

        let (_, d_json) = run(&["sample", "--kind", "diagram", "--seed", &seed.to_string()], None);
        let path = dir.join(format!("d{seed}.json"));
        std::fs::write(&path, &d_json).unwrap();
        let (c3, g2) = run(&["to-graph", path.to_str().unwrap()], None);
        let (c4, d2) = run(&["to-wd", "-"], Some(&g2));
        let d: WiringDiagram = WiringDiagram::from_json(&d_json).unwrap();
        o.check(c3 == 0 && c4 == 0 && WiringDiagram::from_json(&d2).is_ok_and(|x| x == d), || {
            format!("to-graph | to-wd changed diagram for seed {seed}")
        });
        o.check(d.to_json() == d_json.trim_end(), || "diagram serialisation is not stable".into());
    }
    let a = run(&["axioms", "--impl", "endo", "--dim", "2", "--trials", "200", "--seed", "7"], None);
    let b = run(&["axioms", "--impl", "endo", "--dim", "2", "--trials", "200", "--seed", "7"], None);
    o.check(a.0 == 0 && a == b, || "fixed-seed axiom runs differ or fail".into());
    let report: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    o.check(report["results"].as_array().is_some_and(|r| r.len() == 8), || "report lacks 8 sections".into());
    let s1 = run(&["sample", "--kind", "element", "--seed", "3"], None);
    let s2 = run(&["sample", "--kind", "element", "--seed", "3"], None);
    o.check(s1 == s2, || "fixed-seed samples differ".into());
    let _ = std::fs::remove_dir_all(&dir);
    o
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("operad laws", criterion_1),
        ("monad laws", criterion_2),
        ("translation roundtrips", criterion_3),
        ("action equals evaluation", criterion_4),
        ("axiom suite", criterion_5),
        ("End(E) numerics", criterion_6),
        ("Lie example", criterion_7),
        ("CLI contract", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let status = if o.ok() { "PASS" } else { "FAIL" };
        if !o.ok() {
            failed += 1;
        }
        let note = if o.note.is_empty() { String::new() } else { format!(" ({})", o.note) };
        println!("criterion {}: {status} {name}: {}/{} checks{note}", k + 1, o.passed, o.total);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
