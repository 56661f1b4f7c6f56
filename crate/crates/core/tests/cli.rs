use std::path::{Path, PathBuf};
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use wirecat::cli::run_with;
use wirecat::graphs::{corolla, DirectedGraph};
use wirecat::label::{labels, Boundary};
use wirecat::lie::sl2_bracket;
use wirecat::random;
use wirecat::wiring::{identity_diagram, WiringDiagram};
use wirecat::wprop::FreeElement;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wirecat").chain(args.iter().copied());
    let code = run_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wirecat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_detects_kinds() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = random::diagram(&mut rng, random::DiagramShape::default());
    let r = cli(&["validate", "-"], &d.to_json());
    assert_eq!(r.code, 0, "{}", r.err);
    let g = random::graph(&mut rng, random::GraphShape::default());
    let r = cli(&["validate", "--kind", "graph", "-"], &serde_json::to_string(&g).unwrap());
    assert_eq!(r.code, 0, "{}", r.err);
}

#[test]
fn invalid_matching_reports_a_named_error() {
    let bad = r#"{"output":{"out":["a"],"in":[]},"inputs":[],"matching":[],"circles":0}"#;
    let r = cli(&["validate", "-"], bad);
    assert_eq!(r.code, 1);
    let v: Value = serde_json::from_str(r.err.trim()).unwrap();
    assert!(v["error"].is_string() && v["message"].is_string(), "{}", r.err);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cli(&["no-such-command"], "").code, 2);
    assert_eq!(cli(&["compose", "x"], "").code, 2);
}

#[test]
fn compose_with_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d = random::diagram_with_boxes(&mut rng, random::DiagramShape::default(), 1);
    let hole = &d.inputs()[0];
    let id = identity_diagram(&hole.in_labels, &hole.out_labels);
    let outer = temp("outer.json", &d.to_json());
    let r = cli(&["compose", "--at", "1", path(&outer), "-"], &id.to_json());
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(WiringDiagram::from_json(&r.out).unwrap(), d);
}

#[test]
fn substitute_a_corolla() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = loop {
        let g = random::graph(&mut rng, random::GraphShape::default());
        if g.vertex_count() > 0 {
            break g;
        }
    };
    let nbh = g.neighbourhood(0);
    let outer = temp("graph.json", &serde_json::to_string(&g).unwrap());
    let inner = serde_json::to_string(&corolla(&nbh.inputs, &nbh.outputs)).unwrap();
    let r = cli(&["substitute", "--vertex", "1", path(&outer), "-"], &inner);
    assert_eq!(r.code, 0, "{}", r.err);
    let s: DirectedGraph = serde_json::from_str(&r.out).unwrap();
    assert!(wirecat::graphs::is_isomorphic_strict(&s, &g));
}

#[test]
fn translations_and_dot() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let d = random::diagram(&mut rng, random::DiagramShape::default());
    let g = cli(&["to-graph", "-"], &d.to_json());
    assert_eq!(g.code, 0, "{}", g.err);
    let back = cli(&["to-wd", "-"], &g.out);
    assert_eq!(WiringDiagram::from_json(&back.out).unwrap(), d);
    let dot = cli(&["export-dot", "-"], &d.to_json());
    assert_eq!(dot.code, 0);
    assert!(dot.out.starts_with("digraph"));
}

#[test]
fn free_operations_and_flatten() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sig = random::two_generator_signature();
    let shape = random::GraphShape { max_vertices: 2, max_edges: 1, max_free_edges: 1, max_loops: 0, max_arity: 2 };
    let a = random::free_element(&mut rng, &sig, &Boundary::of(&["a"], &["b"]), shape);
    let b = random::free_element(&mut rng, &sig, &Boundary::of(&["c"], &["e"]), shape);
    let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let fa = temp("a.json", &ja);

    let h = cli(&["compose-free", "--op", "horizontal", path(&fa), "-"], &jb);
    assert_eq!(h.code, 0, "{}", h.err);
    let h: FreeElement = serde_json::from_str(&h.out).unwrap();
    assert_eq!(h, a.horizontal(&b).unwrap());

    let c = cli(&["compose-free", "--op", "contract", "--i", "a", "--j", "b", "-"], &ja);
    assert_eq!(c.code, 0, "{}", c.err);
    let c: FreeElement = serde_json::from_str(&c.out).unwrap();
    assert_eq!(c, a.contract(&wirecat::label::l("a"), &wirecat::label::l("b")).unwrap());

    let d = cli(&["compose-free", "--op", "dioperadic", "--i", "a", "--j", "e", path(&fa), "-"], &jb);
    assert_eq!(d.code, 0, "{}", d.err);

    let r =
        cli(&["compose-free", "--op", "relabel", "--inputs", r#"{"a":"x"}"#, "--outputs", r#"{"b":"y"}"#, "-"], &ja);
    assert_eq!(r.code, 0, "{}", r.err);
    let r: FreeElement = serde_json::from_str(&r.out).unwrap();
    assert_eq!(r.boundary(), &Boundary::of(&["x"], &["y"]));

    // Flattening a corolla decorated by `a` gives `a`.
    let outer = corolla(&labels(&["a"]), &labels(&["b"]));
    let input = serde_json::json!({ "graph": outer, "decorations": [a] }).to_string();
    let f = cli(&["flatten", "-"], &input);
    assert_eq!(f.code, 0, "{}", f.err);
    let f: FreeElement = serde_json::from_str(&f.out).unwrap();
    assert_eq!(f, a);
}

#[test]
fn eval_binds_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sig = random::two_generator_signature();
    let shape = random::GraphShape { max_vertices: 2, max_edges: 2, max_free_edges: 0, max_loops: 1, max_arity: 2 };
    let x = random::free_element(&mut rng, &sig, &Boundary::of(&["a"], &["b"]), shape);
    let bind = serde_json::json!({
        "g": random::tensor(&mut rng, 2, &Boundary::of(&["p", "q"], &["r"])),
        "h": random::tensor(&mut rng, 2, &Boundary::of(&["p"], &["q", "r"])),
    });
    let bfile = temp("bind.json", &bind.to_string());
    let r = cli(&["eval", "--bind", path(&bfile), "--dim", "2", "-"], &serde_json::to_string(&x).unwrap());
    assert_eq!(r.code, 0, "{}", r.err);
    let t: wirecat::endo::Tensor = serde_json::from_str(&r.out).unwrap();
    let b = serde_json::from_value(bind).unwrap();
    assert_eq!(t, wirecat::endo::evaluate_element(&x, &b, 2).unwrap());
    let missing =
        cli(&["eval", "--bind", "-", "--dim", "2", path(&temp("x.json", &serde_json::to_string(&x).unwrap()))], "{}");
    assert_eq!(missing.code, 1);
    assert!(missing.err.contains("UnboundGenerator"), "{}", missing.err);
}

#[test]
fn lie_subcommands() {
    let r = cli(&["lie-dim", "4"], "");
    assert_eq!(r.out.trim(), "6");
    let r = cli(&["lie-dim", "4", "--method", "associative"], "");
    assert_eq!(r.out.trim(), "6");
    let r = cli(&["lie-dim", "9"], "");
    assert_eq!(r.code, 1);
    assert!(r.err.contains("BoundExceeded"), "{}", r.err);
    let r = cli(&["trace-dim", "3"], "");
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["dim"], 2);

    let br = serde_json::to_string(&sl2_bracket()).unwrap();
    let k = cli(&["killing", "--bracket", "-", "--n", "2", "--d", "3"], &br);
    assert_eq!(k.code, 0, "{}", k.err);
    let t: wirecat::endo::Tensor = serde_json::from_str(&k.out).unwrap();
    assert_eq!(t.get(&[2, 2]), &wirecat::q(8, 1));
    let wrong = cli(&["killing", "--bracket", "-", "--n", "2", "--d", "2"], &br);
    assert!(wrong.err.contains("DimMismatch"));
    let s = cli(&["semisimple", "--bracket", "-"], &br);
    let v: Value = serde_json::from_str(&s.out).unwrap();
    assert_eq!(v["nondegenerate"], true);
}

#[test]
fn axioms_report_and_exit_codes() {
    let ok = cli(&["axioms", "--impl", "endo", "--dim", "1", "--trials", "20", "--seed", "3"], "");
    assert_eq!(ok.code, 0, "{}", ok.out);
    let broken = cli(&["axioms", "--impl", "broken-endo", "--dim", "2", "--trials", "50"], "");
    assert_eq!(broken.code, 1);
    let v: Value = serde_json::from_str(&broken.out).unwrap();
    assert!(v["results"].as_array().unwrap().iter().any(|r| !r["counterexample"].is_null()));
}

#[test]
fn binary_runs_and_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_wirecat");
    let run = || Command::new(bin).args(["sample", "--kind", "tensor", "--seed", "11"]).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let help = Command::new(bin).arg("--help").output().unwrap();
    let text = String::from_utf8(help.stdout).unwrap();
    for sub in [
        "validate",
        "compose",
        "substitute",
        "to-graph",
        "to-wd",
        "flatten",
        "axioms",
        "eval",
        "lie-dim",
        "trace-dim",
        "killing",
        "semisimple",
        "export-dot",
        "compose-free",
    ] {
        assert!(text.contains(sub), "help lacks {sub}");
    }
}
