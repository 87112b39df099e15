//! Command dispatch for the `leavitt` binary. Kept in a library so tests can
//! drive it without spawning processes.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leavitt_core::closures::{
    enumerate_hs_sets_capped, hedgehog, quotient, saturated_closure, subalgebra_graph_by_names, HsSet, QuotientSpec,
};
use leavitt_core::expr::evaluate;
use leavitt_core::graph::line_points;
use leavitt_core::modules::{ChenModule, InfinitePath, InfinitePathJson, ModuleVector, SvModule};
use leavitt_core::report::report;
use leavitt_core::structure::{corner_report, decide_fp, decide_gk, fp_filtration, gk_filtration};
use leavitt_core::{Algebra, Error, Field, Graph, Limits, SpecialEdgeChoice, VertexSet};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "leavitt", version, about = "Analyze directed graphs and their Leavitt path algebras")]
pub struct Cli {
    /// Cap on enumerated simple cycles.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_cycles: usize,
    /// Largest vertex count for hereditary saturated subset enumeration.
    #[arg(long, global = true, default_value_t = 20)]
    pub max_vertices_hs: usize,
    /// Cap on enumerated basis monomials.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_basis: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Graph JSON file; standard input when omitted or `-`.
    pub graph: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FiltrationKind {
    Fp,
    Gk,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModuleKind {
    Chen,
    Sv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a graph and print its canonical form.
    Validate(Input),
    /// Full analysis report.
    Report(Input),
    /// Are all simple modules finitely presented?
    Fp(Input),
    /// Is the GK-dimension finite?
    Gk(Input),
    /// Line points and the ideal they generate.
    Socle(Input),
    /// Smallest hereditary saturated set containing the seed.
    Closure {
        #[arg(long, value_delimiter = ',', required = true)]
        seed: Vec<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Every hereditary saturated set.
    HsSets(Input),
    /// The quotient graph E/(H,S).
    Quotient {
        #[arg(long, value_delimiter = ',')]
        h: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<String>,
        #[command(flatten)]
        input: Input,
    },
    /// The hedgehog graph of (H,S).
    Hedgehog {
        #[arg(long, value_delimiter = ',')]
        h: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[command(flatten)]
        input: Input,
    },
    /// The graph E_F of a finite edge set.
    Ef {
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<String>,
        #[command(flatten)]
        input: Input,
    },
    /// Corner classification at one vertex.
    Corner {
        #[arg(long)]
        vertex: String,
        #[command(flatten)]
        input: Input,
    },
    /// A composition series of graded ideals.
    Filtration {
        #[arg(long, value_enum)]
        kind: FiltrationKind,
        #[command(flatten)]
        input: Input,
    },
    /// Evaluate an algebra expression to normal form.
    Eval {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        input: Input,
    },
    /// dim V_n for n = 0..=N.
    Growth {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Act by an expression on the generator of a simple module.
    Act {
        #[arg(long, value_enum)]
        module: ModuleKind,
        /// Infinite path descriptor JSON, for `chen`.
        #[arg(long)]
        path: Option<String>,
        /// Infinite emitter, for `sv`.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args, Debug, Clone)]
pub struct AlgebraArgs {
    /// Characteristic: 0 for the rationals, otherwise a prime.
    #[arg(long, default_value_t = 0)]
    pub characteristic: u64,
    /// Override the special edge at its source vertex.
    #[arg(long = "special", value_delimiter = ',')]
    pub special: Vec<String>,
}

/// What a run produced: stdout, stderr and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Core(Error),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res<T> = Result<T, Failure>;

fn error_doc(kind: &str, message: &str) -> String {
    format!("{}\n", json!({ "error": { "kind": kind, "message": message } }))
}

fn kind_of(e: &Error) -> &'static str {
    match e {
        Error::InvalidGraph(_) => "invalidGraph",
        Error::UnknownVertex(_) => "unknownVertex",
        Error::UnknownEdge(_) => "unknownEdge",
        Error::UnknownIdentifier(_) => "unknownIdentifier",
        Error::InvalidPath(_) => "invalidPath",
        Error::InfinitelyManyCycles { .. } => "infinitelyManyCycles",
        Error::ResourceCap { .. } => "resourceCap",
        Error::MixedContext => "mixedContext",
        Error::Parse { .. } => "parse",
        Error::InvalidScalar(_) => "invalidScalar",
        Error::NotInfiniteEmitter(_) => "notInfiniteEmitter",
        Error::Precondition(_) => "precondition",
    }
}

pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: error_doc("usage", text.trim_end()), code }
            };
        }
    };
    match execute(&cli, stdin) {
        Ok(doc) => Outcome {
            stdout: format!("{}\n", serde_json::to_string_pretty(&doc).expect("values serialize")),
            stderr: String::new(),
            code: EXIT_OK,
        },
        Err(Failure::Input(msg)) => Outcome {
            stdout: String::new(),
            stderr: error_doc("input", &msg),
            code: EXIT_INPUT,
        },
        Err(Failure::Core(e)) => Outcome {
            stdout: String::new(),
            stderr: error_doc(kind_of(&e), &e.to_string()),
            code: if e.is_resource_cap() { EXIT_CAP } else { EXIT_INPUT },
        },
    }
}

fn load(input: &Input, stdin: &mut dyn Read) -> Res<Graph> {
    let text = match &input.graph {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
            s
        }
    };
    Ok(Graph::from_json_str(&text)?)
}

fn to_value<T: serde::Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn set(names: &[String]) -> VertexSet {
    names.iter().cloned().collect()
}

fn algebra(g: Graph, args: &AlgebraArgs) -> Res<Algebra> {
    let field = match args.characteristic {
        0 => Field::Rational,
        p => Field::prime(p)?,
    };
    let mut special = SpecialEdgeChoice::smallest(&g);
    for e in &args.special {
        special = special.with(&g, e)?;
    }
    Ok(Algebra::with_parts(g, field, special))
}

fn element_doc(alg: &Algebra, x: &leavitt_core::AlgebraElement) -> Value {
    json!({ "text": alg.format(x), "terms": alg.terms_json(x) })
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Res<Value> {
    let limits = Limits {
        max_cycles: cli.max_cycles,
        max_vertices_hs: cli.max_vertices_hs,
        max_basis: cli.max_basis,
    };
    Ok(match &cli.command {
        Command::Validate(i) => to_value(load(i, stdin)?.to_json()),
        Command::Report(i) => report(&load(i, stdin)?, &limits)?,
        Command::Fp(i) => to_value(decide_fp(&load(i, stdin)?, &limits)?),
        Command::Gk(i) => to_value(decide_gk(&load(i, stdin)?, &limits)?),
        Command::Socle(i) => {
            let g = load(i, stdin)?;
            let lines = line_points(&g);
            let closure = saturated_closure(&g, &lines)?.vertices;
            json!({ "linePoints": lines, "closure": closure })
        }
        Command::Closure { seed, input } => {
            let g = load(input, stdin)?;
            to_value(saturated_closure(&g, &set(seed))?)
        }
        Command::HsSets(i) => {
            let g = load(i, stdin)?;
            let sets: Vec<VertexSet> = enumerate_hs_sets_capped(&g, limits.max_vertices_hs)?
                .into_iter()
                .map(|h| h.vertices)
                .collect();
            to_value(sets)
        }
        Command::Quotient { h, s, input } => {
            let g = load(input, stdin)?;
            let spec = QuotientSpec::new(&g, HsSet::new(&g, set(h))?, set(s))?;
            to_value(quotient(&g, &spec)?.to_json())
        }
        Command::Hedgehog { h, s, depth, input } => {
            let g = load(input, stdin)?;
            to_value(hedgehog(&g, &set(h), &set(s), *depth)?.to_json())
        }
        Command::Ef { edges, input } => {
            let g = load(input, stdin)?;
            to_value(subalgebra_graph_by_names(&g, edges)?.to_json())
        }
        Command::Corner { vertex, input } => to_value(corner_report(&load(input, stdin)?, vertex)?),
        Command::Filtration { kind, input } => {
            let g = load(input, stdin)?;
            to_value(match kind {
                FiltrationKind::Fp => fp_filtration(&g, &limits)?,
                FiltrationKind::Gk => gk_filtration(&g, &limits)?,
            })
        }
        Command::Eval { expr, algebra: a, input } => {
            let alg = algebra(load(input, stdin)?, a)?;
            element_doc(&alg, &evaluate(&alg, expr)?)
        }
        Command::Growth { n, input } => {
            let alg = Algebra::new(load(input, stdin)?);
            to_value(alg.growth_profile(*n)?)
        }
        Command::Act { module, path, vertex, expr, algebra: a, input } => {
            let g = load(input, stdin)?;
            let alg = algebra(g.clone(), a)?;
            let x = evaluate(&alg, expr)?;
            let one = alg.field().one();
            match module {
                ModuleKind::Chen => {
                    let desc = path.as_deref().ok_or_else(|| Failure::Input("--path is required for chen".into()))?;
                    let desc: InfinitePathJson =
                        serde_json::from_str(desc).map_err(|e| Failure::Input(format!("--path: {e}")))?;
                    let m = ChenModule::new(g.clone(), InfinitePath::from_json(&g, &desc)?);
                    let v = m.act(&alg, &x, &ModuleVector::basis(m.generator(), one))?;
                    json!({ "generator": m.element_json(&m.generator()), "result": m.vector_json(&v) })
                }
                ModuleKind::Sv => {
                    let v = vertex.as_deref().ok_or_else(|| Failure::Input("--vertex is required for sv".into()))?;
                    let m = SvModule::new(g, v)?;
                    let r = m.act(&alg, &x, &ModuleVector::basis(m.generator(), one))?;
                    json!({ "generator": v, "result": m.vector_json(&r) })
                }
            }
        }
    })
}
