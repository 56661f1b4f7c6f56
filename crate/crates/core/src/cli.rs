//! The `wirecat` command line.
//!
//! Every subcommand reads JSON from files (or `-` for stdin) and writes JSON
//! to stdout. Exit codes: 0 on success, 1 on a domain error (reported on
//! stderr as `{"error": <invariant>, "message": ...}`), 2 on usage errors.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::endo::{evaluate_element, BrokenEndProp, EndProp, Tensor};
use crate::graphs::{substitute, DirectedGraph};
use crate::label::{Bijection, Label};
use crate::lie::{killing_eval, lie_dim_with, semisimple_witness, trace_space, DimMethod, TraceOptions, DEFAULT_BOUND};
use crate::random;
use crate::translate::{graph_to_wd, wd_to_graph};
use crate::wiring::{compose, WiringDiagram};
use crate::wprop::axioms::axiom_suite;
use crate::wprop::{flatten, FreeElement, FreeProp, Signature};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "wirecat", version, about = "Wiring diagrams, graphs and wheeled props, exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Diagram,
    Graph,
    Element,
    Tensor,
    Signature,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Impl {
    Free,
    Endo,
    BrokenEndo,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FreeOp {
    Horizontal,
    Contract,
    Dioperadic,
    Relabel,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Rewriting,
    Associative,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a file parses and satisfies its invariants.
    Validate {
        file: String,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Glue diagram `inner` into input box `--at` of `outer`.
    Compose {
        #[arg(long)]
        at: usize,
        outer: String,
        inner: String,
    },
    /// Replace vertex `--vertex` (1-based) of `graph` by `inner`.
    Substitute {
        #[arg(long)]
        vertex: usize,
        graph: String,
        inner: String,
    },
    /// Translate a wiring diagram into a graph.
    ToGraph { diagram: String },
    /// Translate a graph into a wiring diagram.
    ToWd { graph: String },
    /// Substitute free elements into the vertices of an outer graph.
    ///
    /// Input: `{"graph": ..., "decorations": [element, ...]}`.
    Flatten { file: String },
    /// Apply a biased operation of the free wheeled prop.
    ComposeFree {
        #[arg(long, value_enum)]
        op: FreeOp,
        a: String,
        b: Option<String>,
        /// Input label for contract and dioperadic.
        #[arg(long)]
        i: Option<String>,
        /// Output label for contract and dioperadic.
        #[arg(long)]
        j: Option<String>,
        /// Input relabelling as JSON object, for relabel.
        #[arg(long)]
        inputs: Option<String>,
        /// Output relabelling as JSON object, for relabel.
        #[arg(long)]
        outputs: Option<String>,
    },
    /// Run the wheeled-prop axiom suite and print a JSON report.
    Axioms {
        #[arg(long = "impl", value_enum, default_value = "free")]
        implementation: Impl,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a free element in End(Q^d) under generator bindings.
    Eval {
        element: String,
        /// JSON object from generator symbol to tensor.
        #[arg(long)]
        bind: String,
        #[arg(long)]
        dim: usize,
    },
    /// Dimension of the multilinear part of the free Lie algebra.
    LieDim {
        n: usize,
        #[arg(long, value_enum, default_value = "rewriting")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Dimension of the trace space with n inputs and no outputs.
    TraceDim {
        n: usize,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Evaluate the generalised Killing form κ_n of a bracket tensor.
    Killing {
        #[arg(long)]
        bracket: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
    },
    /// Check the Lie axioms and nondegeneracy of the Killing form.
    Semisimple {
        #[arg(long)]
        bracket: String,
    },
    /// Write a graph (or the graph of a diagram) in DOT format.
    ExportDot { file: String },
    /// Print a random diagram or graph.
    Sample {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs the command line with the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line against arbitrary streams.
pub fn run_with<I, T>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, stdin_used: false };
    match execute(cli.command, &mut io) {
        Ok(Outcome { text, code }) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(&e));
            1
        }
    }
}

fn error_json(e: &Error) -> String {
    let msg = e.to_string();
    let name = msg.split(':').next().unwrap_or("Error").trim().to_string();
    let name = if name.contains(' ') { "Error".to_string() } else { name };
    serde_json::json!({ "error": name, "message": msg }).to_string()
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl Io<'_> {
    fn read(&mut self, path: &str) -> Result<String> {
        if path == "-" {
            if self.stdin_used {
                return Err(Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "stdin read twice")));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin.read_to_string(&mut s)?;
            Ok(s)
        } else {
            Ok(std::fs::read_to_string(path)?)
        }
    }

    fn json<T: DeserializeOwned>(&mut self, path: &str) -> Result<T> {
        Ok(serde_json::from_str(&self.read(path)?)?)
    }
}

struct Outcome {
    text: String,
    code: i32,
}

fn ok(text: String) -> Result<Outcome> {
    Ok(Outcome { text, code: 0 })
}

fn pretty<T: Serialize>(x: &T) -> Result<Outcome> {
    ok(serde_json::to_string_pretty(x)?)
}

fn parse_diagram(s: &str) -> Result<WiringDiagram> {
    WiringDiagram::from_json(s)
}

fn detect(s: &str) -> Result<(Kind, String)> {
    let v: serde_json::Value = serde_json::from_str(s)?;
    let has = |k: &str| v.get(k).is_some();
    let kind = if has("matching") {
        Kind::Diagram
    } else if has("flags") {
        Kind::Graph
    } else if has("terms") {
        Kind::Element
    } else if has("data") {
        Kind::Tensor
    } else if has("generators") {
        Kind::Signature
    } else {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "cannot tell what kind of file this is",
        )));
    };
    Ok((kind, s.to_string()))
}

fn validate(kind: Kind, s: &str) -> Result<String> {
    Ok(match kind {
        Kind::Diagram => {
            let d = parse_diagram(s)?;
            format!("ok: diagram with {} input boxes and {} circles", d.input_count(), d.circles())
        }
        Kind::Graph => {
            let g: DirectedGraph = serde_json::from_str(s)?;
            format!(
                "ok: graph with {} vertices, {} flags and {} loops",
                g.vertex_count(),
                g.flags().len(),
                g.loop_count()
            )
        }
        Kind::Element => {
            let x: FreeElement = serde_json::from_str(s)?;
            format!("ok: element with {} terms", x.terms().len())
        }
        Kind::Tensor => {
            let t: Tensor = serde_json::from_str(s)?;
            format!("ok: tensor of dimension {} with {} axes", t.dim(), t.axes().len())
        }
        Kind::Signature => {
            let sig: Signature = serde_json::from_str(s)?;
            let mut seen = std::collections::BTreeSet::new();
            for g in &sig.generators {
                if !seen.insert(&g.symbol) {
                    return Err(
                        crate::wprop::WPropError::UnknownGenerator(format!("duplicate symbol {}", g.symbol)).into()
                    );
                }
            }
            format!("ok: signature with {} generators", sig.generators.len())
        }
    })
}

fn label(s: &Option<String>, what: &str) -> Result<Label> {
    let s = s.as_deref().ok_or_else(|| {
        Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidInput, format!("--{what} is required")))
    })?;
    Ok(Label::new(s)?)
}

fn bijection(s: &Option<String>, default: &std::collections::BTreeSet<Label>) -> Result<Bijection> {
    match s {
        None => Ok(Bijection::identity(default)),
        Some(text) => {
            let m: BTreeMap<Label, Label> = serde_json::from_str(text)?;
            Ok(Bijection::new(m)?)
        }
    }
}

fn execute(cmd: Command, io: &mut Io<'_>) -> Result<Outcome> {
    match cmd {
        Command::Validate { file, kind } => {
            let s = io.read(&file)?;
            let kind = match kind {
                Some(k) => k,
                None => detect(&s)?.0,
            };
            ok(validate(kind, &s)?)
        }
        Command::Compose { at, outer, inner } => {
            let d = parse_diagram(&io.read(&outer)?)?;
            let d2 = parse_diagram(&io.read(&inner)?)?;
            ok(compose(&d, at, &d2)?.to_json())
        }
        Command::Substitute { vertex, graph, inner } => {
            let g: DirectedGraph = io.json(&graph)?;
            let h: DirectedGraph = io.json(&inner)?;
            if vertex == 0 || vertex > g.vertex_count() {
                return Err(crate::graphs::GraphError::UnknownVertex(vertex).into());
            }
            pretty(&substitute(&g, vertex - 1, &h)?)
        }
        Command::ToGraph { diagram } => pretty(&wd_to_graph(&parse_diagram(&io.read(&diagram)?)?)),
        Command::ToWd { graph } => {
            let g: DirectedGraph = io.json(&graph)?;
            ok(graph_to_wd(&g).to_json())
        }
        Command::Flatten { file } => {
            #[derive(serde::Deserialize)]
            struct Input {
                graph: DirectedGraph,
                decorations: Vec<FreeElement>,
            }
            let input: Input = io.json(&file)?;
            pretty(&flatten(&input.graph, &input.decorations)?)
        }
        Command::ComposeFree { op, a, b, i, j, inputs, outputs } => {
            let x: FreeElement = io.json(&a)?;
            let second = |io: &mut Io<'_>| -> Result<FreeElement> {
                let path = b.as_deref().ok_or_else(|| {
                    Error::Io(std::io::Error::new(
                        std::io::ErrorKind::InvalidInput,
                        "this operation needs two elements",
                    ))
                })?;
                io.json(path)
            };
            let r = match op {
                FreeOp::Horizontal => x.horizontal(&second(io)?)?,
                FreeOp::Contract => x.contract(&label(&i, "i")?, &label(&j, "j")?)?,
                FreeOp::Dioperadic => x.dioperadic(&label(&i, "i")?, &second(io)?, &label(&j, "j")?)?,
                FreeOp::Relabel => {
                    let f = bijection(&inputs, &x.boundary().inputs)?;
                    let g = bijection(&outputs, &x.boundary().outputs)?;
                    x.relabel(&f, &g)?
                }
            };
            pretty(&r)
        }
        Command::Axioms { implementation, dim, trials, seed } => {
            if dim == 0 {
                return Err(crate::endo::EndoError::DimMismatch { expected: 1, found: 0 }.into());
            }
            let report = match implementation {
                Impl::Free => axiom_suite(&FreeProp, &random::free_sampler(), trials, seed),
                Impl::Endo => axiom_suite(&EndProp::new(dim), &random::tensor_sampler(dim), trials, seed),
                Impl::BrokenEndo => axiom_suite(&BrokenEndProp { dim }, &random::tensor_sampler(dim), trials, seed),
            };
            let code = if report.all_pass() { 0 } else { 1 };
            Ok(Outcome { text: serde_json::to_string_pretty(&report)?, code })
        }
        Command::Eval { element, bind, dim } => {
            let x: FreeElement = io.json(&element)?;
            let b: BTreeMap<String, Tensor> = io.json(&bind)?;
            pretty(&evaluate_element(&x, &b, dim)?)
        }
        Command::LieDim { n, method, bound } => {
            let m = match method {
                Method::Rewriting => DimMethod::Rewriting,
                Method::Associative => DimMethod::Associative,
            };
            ok(lie_dim_with(n, m, bound)?.to_string())
        }
        Command::TraceDim { n, extra, seed, bound } => {
            let t = trace_space(n, TraceOptions { max_instances: None, extra_random: extra, seed, bound })?;
            let basis: Vec<String> =
                t.basis().iter().map(|s| format!("t({})", crate::lie::LieWord::right_normed(s))).collect();
            pretty(&serde_json::json!({ "n": n, "dim": t.dim(), "basis": basis }))
        }
        Command::Killing { bracket, n, d } => {
            let t: Tensor = io.json(&bracket)?;
            if let Some(d) = d {
                if d != t.dim() {
                    return Err(crate::endo::EndoError::DimMismatch { expected: d, found: t.dim() }.into());
                }
            }
            pretty(&killing_eval(&t, n)?)
        }
        Command::Semisimple { bracket } => {
            let t: Tensor = io.json(&bracket)?;
            pretty(&semisimple_witness(&t)?)
        }
        Command::ExportDot { file } => {
            let s = io.read(&file)?;
            let g = match detect(&s)?.0 {
                Kind::Diagram => wd_to_graph(&parse_diagram(&s)?),
                _ => serde_json::from_str::<DirectedGraph>(&s)?,
            };
            ok(g.to_dot())
        }
        Command::Sample { kind, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match kind {
                Kind::Diagram => ok(random::diagram(&mut rng, random::DiagramShape::default()).to_json()),
                Kind::Graph => pretty(&random::graph(&mut rng, random::GraphShape::default())),
                Kind::Element => {
                    let bd = random::boundary(&mut rng, 2);
                    pretty(&random::free_sampler()(&bd, &mut rng))
                }
                Kind::Tensor => {
                    let bd = random::boundary(&mut rng, 2);
                    pretty(&random::tensor(&mut rng, 2, &bd))
                }
                Kind::Signature => pretty(&random::two_generator_signature()),
            }
        }
    }
}
