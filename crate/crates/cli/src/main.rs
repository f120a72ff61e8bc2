//! `qcolor` command-line front end.
//!
//! Exit codes: 0 success, 1 negative verdict (infeasible coloring, reduction
//! disagreement), 2 unreadable or malformed input, 3 method not applicable to
//! the input or size guard exceeded, 4 search budget exhausted before
//! optimality was proven (the incumbent is still printed).

mod dot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::{json, Value};

use qcolor::bounds::{bound_report, trivial_coloring};
use qcolor::families::{gen_with_embedding, FamilySpec};
use qcolor::format::{self, GraphFile};
use qcolor::oracle::{forced_propagation, solve_exact, EdgeOrder, OracleConfig, OracleError};
use qcolor::planar::{approx_planar, Embedding};
use qcolor::reduction::{check_equivalence, reduce_general, reduce_uniform, Verdict};
use qcolor::tree::{solve_tree_with, CandidateSearch};
use qcolor::graph::validate;
use qcolor::{EdgeColoring, Graph, QSpec, SolveReport};

#[derive(Parser)]
#[command(name = "qcolor", version, about = "Min-max edge q-coloring solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph family in the text graph format.
    Gen(GenArgs),
    /// Solve an instance and print a report.
    Solve(SolveArgs),
    /// Print the lower bounds of an instance.
    Bounds(BoundsArgs),
    /// Check a coloring against the color budgets.
    Validate(PairArgs),
    /// Build the gadget instance of a monotone one-in-three formula.
    Reduce(ReduceArgs),
    /// Render a colored graph as Graphviz DOT.
    ExportDot(PairArgs),
    /// Compare satisfiability of a formula with the optimum of its gadget.
    CheckReduction(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Clique,
    Biclique,
    Hypercube,
    RandomTree,
    Grid,
    RandomPlanar,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    /// Size parameters: n, or two numbers for biclique and grid.
    #[arg(required = true, num_args = 1..=2)]
    params: Vec<usize>,
    /// Required by the random families.
    #[arg(long)]
    seed: Option<u64>,
    /// Append the rotation system as `r` lines (planar families).
    #[arg(long)]
    with_embedding: bool,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    Tree,
    Exact,
    Planar,
    Trivial,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Input,
    Degree,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Report,
    Raw,
    Dot,
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file, or `-` for standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Override the budgets of the file with a uniform q.
    #[arg(long)]
    q: Option<usize>,
    /// Edge-class guard of the exact search (default 40; 16 for `auto`).
    #[arg(long)]
    max_edges: Option<usize>,
    /// Seconds before the exact search returns its incumbent.
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long, value_enum, default_value_t = Order::Input)]
    order: Order,
    /// Tree solver: scan candidates linearly instead of binary search.
    #[arg(long)]
    audit_linear_scan: bool,
    /// `auto`, a fraction like `1/10`, or a decimal.
    #[arg(long, default_value = "auto")]
    epsilon: String,
    /// File with `r` rotation lines for the planar method.
    #[arg(long)]
    embedding: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Report)]
    format: OutputFormat,
}

#[derive(Args)]
struct BoundsArgs {
    input: PathBuf,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Args)]
struct PairArgs {
    graph: PathBuf,
    coloring: PathBuf,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["general", "uniform"])))]
struct ReduceArgs {
    formula: PathBuf,
    #[arg(long)]
    general: bool,
    /// Uniform budget q >= 2.
    #[arg(long, value_name = "Q")]
    uniform: Option<usize>,
    /// Star size parameter replacing L in the uniform gadget (wiring tests only).
    #[arg(long, requires = "uniform")]
    scale: Option<usize>,
    /// Write the instance here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Roles document path; defaults to `<out>.roles.json` when `--out` is given.
    #[arg(long)]
    roles: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    formula: PathBuf,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

type Outcome = Result<u8, Failure>;

trait Code<T> {
    fn code(self, code: u8) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for Result<T, E> {
    fn code(self, code: u8) -> Result<T, Failure> {
        self.map_err(|e| Failure { code, error: e.into() })
    }
}

fn fail<T>(code: u8, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure {
        code,
        error: anyhow!(msg.into()),
    })
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading standard input").code(2);
    }
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .code(2)
}

fn load_graph(path: &Path) -> Result<GraphFile, Failure> {
    let text = read_input(path)?;
    format::parse_graph(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .code(2)
}

fn load_coloring(path: &Path) -> Result<EdgeColoring, Failure> {
    let text = read_input(path)?;
    format::parse_coloring(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .code(2)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())).code(2),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// One top-level field per line; nested values stay on their line.
fn pretty(v: &Value) -> String {
    let compact = |v: &Value| serde_json::to_string(v).expect("json values serialize");
    match v {
        Value::Object(obj) if !obj.is_empty() => {
            let fields: Vec<String> = obj
                .iter()
                .map(|(k, v)| format!("  {}: {}", compact(&Value::from(k.as_str())), compact(v)))
                .collect();
            format!("{{\n{}\n}}\n", fields.join(",\n"))
        }
        _ => compact(v) + "\n",
    }
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let p = &a.params;
    let need_two = matches!(a.family, Family::Biclique | Family::Grid);
    if p.len() != if need_two { 2 } else { 1 } {
        return fail(2, "wrong number of size parameters for this family");
    }
    let seed = || match a.seed {
        Some(s) => Ok(s),
        None => fail(2, "random families require --seed"),
    };
    let spec = match a.family {
        Family::Clique => FamilySpec::Clique(p[0]),
        Family::Biclique => FamilySpec::biclique(p[0], p[1]),
        Family::Hypercube => FamilySpec::Hypercube(u32::try_from(p[0]).unwrap_or(u32::MAX)),
        Family::RandomTree => FamilySpec::RandomTree { n: p[0], seed: seed()? },
        Family::Grid => FamilySpec::Grid { rows: p[0], cols: p[1] },
        Family::RandomPlanar => FamilySpec::RandomPlanar { n: p[0], seed: seed()? },
    };
    if a.q == 0 {
        return fail(2, "q must be positive");
    }
    let generated = gen_with_embedding(&spec).code(2)?;
    let embedding = if a.with_embedding {
        match &generated.embedding {
            Some(e) => Some(e),
            None => return fail(3, "this family has no embedding"),
        }
    } else {
        None
    };
    let text = format::write_graph(&generated.graph, &QSpec::Uniform(a.q), embedding);
    emit(a.out.as_deref(), &text)?;
    Ok(0)
}

fn parse_epsilon(s: &str) -> Result<Option<f64>, Failure> {
    if s == "auto" {
        return Ok(None);
    }
    let value = match s.parse::<Ratio<u64>>() {
        Ok(r) if *r.denom() != 0 => *r.numer() as f64 / *r.denom() as f64,
        _ => s
            .parse::<f64>()
            .map_err(|_| anyhow!("epsilon must be `auto`, a fraction or a decimal, got `{s}`"))
            .code(2)?,
    };
    if !(value > 0.0 && value <= 1.0) {
        return fail(2, format!("epsilon must lie in (0, 1], got {s}"));
    }
    Ok(Some(value))
}

fn require_q2(qs: &QSpec, method: &str) -> Result<(), Failure> {
    match qs.uniform() {
        Some(2) => Ok(()),
        _ => fail(3, format!("the {method} method needs a uniform q = 2")),
    }
}

fn run_exact(g: &Graph, qs: &QSpec, a: &SolveArgs, guard: usize) -> Result<SolveReport, Failure> {
    let config = OracleConfig {
        max_units: guard,
        time_budget: a.time_budget.map(Duration::from_secs_f64),
        order: match a.order {
            Order::Input => EdgeOrder::Input,
            Order::Degree => EdgeOrder::Degree,
        },
        upper_hint: None,
    };
    match solve_exact(g, qs, &config) {
        Ok(r) => Ok(r),
        Err(e @ OracleError::TooLarge { .. }) => Err(Failure { code: 3, error: e.into() }),
        Err(e) => Err(Failure { code: 2, error: e.into() }),
    }
}

fn cmd_solve(a: SolveArgs) -> Outcome {
    let gf = load_graph(&a.input)?;
    let g = &gf.graph;
    let qs = a.q.map(QSpec::Uniform).unwrap_or(gf.qspec.clone());
    qs.check(g).code(2)?;
    let epsilon = parse_epsilon(&a.epsilon)?;
    let embedding: Option<Embedding> = match &a.embedding {
        Some(p) => Some(format::parse_rotation(&read_input(p)?, g).code(2)?),
        None => gf.embedding.clone(),
    };
    if a.time_budget.is_some_and(|t| !(t >= 0.0 && t.is_finite())) {
        return fail(2, "time budget must be a non-negative number of seconds");
    }

    let tree = |mode| match solve_tree_with(g, mode) {
        Ok(r) => Ok(r),
        Err(e) => Err(Failure { code: 3, error: e.into() }),
    };
    let mode = if a.audit_linear_scan {
        CandidateSearch::LinearScan
    } else {
        CandidateSearch::Binary
    };
    let report = match a.method {
        Method::Tree => {
            require_q2(&qs, "tree")?;
            tree(mode)?
        }
        Method::Exact => run_exact(g, &qs, &a, a.max_edges.unwrap_or(40))?,
        Method::Planar => {
            require_q2(&qs, "planar")?;
            approx_planar(g, embedding.as_ref(), epsilon)
        }
        Method::Trivial => trivial_coloring(g),
        Method::Auto => {
            let q2 = qs.uniform() == Some(2);
            let guard = a.max_edges.unwrap_or(16);
            if q2 && g.is_tree() {
                tree(mode)?
            } else if q2 && embedding.is_some() {
                approx_planar(g, embedding.as_ref(), epsilon)
            } else if forced_propagation(g, &qs).len() <= guard {
                run_exact(g, &qs, &a, guard)?
            } else {
                trivial_coloring(g)
            }
        }
    };
    let check = validate(g, &qs, &report.coloring).code(2)?;
    assert!(check.is_feasible(), "solver produced an infeasible coloring");

    let text = match a.format {
        OutputFormat::Report => pretty(&format::report_json(&report)),
        OutputFormat::Raw => serde_json::to_string(report.coloring.colors()).expect("serializable") + "\n",
        OutputFormat::Dot => dot::render(g, &report.coloring),
    };
    emit(None, &text)?;
    Ok(if report.proven_optimal || report.method != "exact" { 0 } else { 4 })
}

fn uniform_q(gf: &GraphFile, q: Option<usize>) -> Result<usize, Failure> {
    match q.or(gf.qspec.uniform()) {
        Some(0) => fail(2, "q must be positive"),
        Some(q) => Ok(q),
        None => fail(3, "bounds need a uniform q; pass --q"),
    }
}

fn cmd_bounds(a: BoundsArgs) -> Outcome {
    let gf = load_graph(&a.input)?;
    let q = uniform_q(&gf, a.q)?;
    let report = bound_report(&gf.graph, q);
    emit(None, &pretty(&serde_json::to_value(&report).expect("serializable")))?;
    Ok(0)
}

fn cmd_validate(a: PairArgs) -> Outcome {
    let gf = load_graph(&a.graph)?;
    let col = load_coloring(&a.coloring)?;
    let qs = a.q.map(QSpec::Uniform).unwrap_or(gf.qspec.clone());
    let check = validate(&gf.graph, &qs, &col).code(2)?;
    let doc = match check.first_violation() {
        None => json!({ "feasible": true, "value": col.max_group(), "colors_used": col.num_colors() }),
        Some(v) => json!({
            "feasible": false,
            "first_violation": v,
            "incident_colors": check.incident_colors[v],
            "budget": qs.budget(v),
            "violations": check.violations.len(),
        }),
    };
    emit(None, &pretty(&doc))?;
    Ok(if check.is_feasible() { 0 } else { 1 })
}

fn cmd_export_dot(a: PairArgs) -> Outcome {
    let gf = load_graph(&a.graph)?;
    let col = load_coloring(&a.coloring)?;
    if col.len() != gf.graph.m() {
        return fail(
            2,
            format!("coloring has {} entries for {} edges", col.len(), gf.graph.m()),
        );
    }
    emit(None, &dot::render(&gf.graph, &col))?;
    Ok(0)
}

fn cmd_reduce(a: ReduceArgs) -> Outcome {
    let phi = format::parse_formula(&read_input(&a.formula)?).code(2)?;
    let art = match a.uniform {
        Some(q) => reduce_uniform(&phi, q, a.scale).code(3)?,
        None => reduce_general(&phi).code(3)?,
    };
    let text = format::write_graph(art.graph(), &art.qspec, None);
    emit(a.out.as_deref(), &text)?;
    let roles_path = a.roles.or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".roles.json");
            PathBuf::from(s)
        })
    });
    if let Some(p) = roles_path {
        emit(Some(&p), &pretty(&art.roles_json()))?;
    }
    Ok(0)
}

fn cmd_check_reduction(a: CheckArgs) -> Outcome {
    let phi = format::parse_formula(&read_input(&a.formula)?).code(2)?;
    let eq = check_equivalence(&phi).code(3)?;
    emit(None, &pretty(&serde_json::to_value(&eq).expect("serializable")))?;
    Ok(match eq.verdict {
        Verdict::Agree => 0,
        Verdict::Disagree => 1,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::ExportDot(a) => cmd_export_dot(a),
        Command::CheckReduction(a) => cmd_check_reduction(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
