//! Line-oriented text formats.
//!
//! Graphs:
//!
//! ```text
//! p qcolor <n> <m> <q>          # or: p qcolor-general <n> <m>
//! q <q_0> ... <q_{n-1}>         # general form only
//! e <u> <v>                     # m lines, 0-based
//! r <v> <w_1> ... <w_d>         # optional rotation system
//! ```
//!
//! Formulas: `f <n_vars> <n_clauses>` followed by `c <i> <j> <k>` lines.
//! Blank lines and `#` comments are ignored in both. Colorings are JSON
//! objects with at least a `colors` array.

use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{EdgeColoring, Graph, GraphError, QSpec, SolveReport, VertexId};
use crate::planar::Embedding;
use crate::reduction::{FormulaError, MonotoneFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("header announces {expected} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("rotation lists do not match the edges")]
    EmbeddingMismatch,
    #[error("coloring document: {0}")]
    Coloring(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

/// Non-empty, comment-stripped lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn numbers(line: usize, toks: &[&str]) -> Result<Vec<usize>, FormatError> {
    toks.iter()
        .map(|t| t.parse().map_err(|_| syntax(line, format!("not a non-negative integer: {t}"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub graph: Graph,
    pub qspec: QSpec,
    pub embedding: Option<Embedding>,
}

pub fn parse_graph(text: &str) -> Result<GraphFile, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let (n, m, mut qspec) = match header.as_slice() {
        ["p", "qcolor", rest @ ..] => match numbers(hline, rest)?.as_slice() {
            &[n, m, q] => (n, m, Some(QSpec::Uniform(q))),
            _ => return Err(syntax(hline, "expected `p qcolor <n> <m> <q>`")),
        },
        ["p", "qcolor-general", rest @ ..] => match numbers(hline, rest)?.as_slice() {
            &[n, m] => (n, m, None),
            _ => return Err(syntax(hline, "expected `p qcolor-general <n> <m>`")),
        },
        _ => return Err(syntax(hline, "expected a `p qcolor` header")),
    };
    let mut pairs = Vec::with_capacity(m);
    let mut rotation: Option<Vec<Vec<VertexId>>> = None;
    for (line, toks) in lines {
        match toks[0] {
            "q" if qspec.is_none() => {
                let qs = numbers(line, &toks[1..])?;
                if qs.len() != n {
                    return Err(syntax(line, format!("expected {n} budgets, found {}", qs.len())));
                }
                qspec = Some(QSpec::PerVertex(qs));
            }
            "e" => match numbers(line, &toks[1..])?.as_slice() {
                &[u, v] => pairs.push((u, v)),
                _ => return Err(syntax(line, "expected `e <u> <v>`")),
            },
            "r" => {
                let nums = numbers(line, &toks[1..])?;
                let (&v, rest) = nums
                    .split_first()
                    .ok_or_else(|| syntax(line, "expected `r <v> <neighbors...>`"))?;
                if v >= n {
                    return Err(syntax(line, format!("vertex {v} out of range")));
                }
                rotation.get_or_insert_with(|| vec![Vec::new(); n])[v] = rest.to_vec();
            }
            other => return Err(syntax(line, format!("unexpected record `{other}`"))),
        }
    }
    let qspec = qspec.ok_or_else(|| syntax(hline, "general instance without a `q` line"))?;
    if pairs.len() != m {
        return Err(FormatError::CountMismatch {
            what: "edges",
            expected: m,
            found: pairs.len(),
        });
    }
    let graph = Graph::new(n, &pairs)?;
    let embedding = rotation.map(|rotation| Embedding { rotation });
    if let Some(emb) = &embedding {
        if !emb.matches(&graph) {
            return Err(FormatError::EmbeddingMismatch);
        }
    }
    Ok(GraphFile { graph, qspec, embedding })
}

/// Reads only the `r` records of a document, so both bare rotation files and
/// full graph files with rotation lines are accepted.
pub fn parse_rotation(text: &str, g: &Graph) -> Result<Embedding, FormatError> {
    let mut rotation = vec![Vec::new(); g.n()];
    for (line, toks) in content_lines(text) {
        if toks[0] != "r" {
            continue;
        }
        let nums = numbers(line, &toks[1..])?;
        match nums.split_first() {
            Some((&v, rest)) if v < g.n() => rotation[v] = rest.to_vec(),
            _ => return Err(syntax(line, "expected `r <v> <neighbors...>` with v in range")),
        }
    }
    let emb = Embedding { rotation };
    if emb.matches(g) {
        Ok(emb)
    } else {
        Err(FormatError::EmbeddingMismatch)
    }
}

pub fn write_graph(g: &Graph, qs: &QSpec, embedding: Option<&Embedding>) -> String {
    let mut out = String::new();
    match qs {
        QSpec::Uniform(q) => writeln!(out, "p qcolor {} {} {}", g.n(), g.m(), q).unwrap(),
        QSpec::PerVertex(qs) => {
            writeln!(out, "p qcolor-general {} {}", g.n(), g.m()).unwrap();
            out.push('q');
            for q in qs {
                write!(out, " {q}").unwrap();
            }
            out.push('\n');
        }
    }
    for &(u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    if let Some(emb) = embedding {
        for (v, rot) in emb.rotation.iter().enumerate() {
            write!(out, "r {v}").unwrap();
            for w in rot {
                write!(out, " {w}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

/// Report document: `value`, `method`, `colors`, `lower_bound`, then
/// `proven_optimal`, `elapsed_ms` and the solver statistics.
pub fn report_json(report: &SolveReport) -> Value {
    let mut doc = json!({
        "value": report.value,
        "method": report.method,
        "colors": report.coloring.colors(),
        "lower_bound": report.lower_bound,
        "proven_optimal": report.proven_optimal,
        "elapsed_ms": report.elapsed.as_secs_f64() * 1000.0,
    });
    let obj = doc.as_object_mut().expect("object literal");
    for (k, v) in &report.stats {
        obj.entry(k.clone()).or_insert_with(|| v.clone());
    }
    doc
}

/// Accepts a report-style object with a `colors` array or a bare array.
pub fn parse_coloring(text: &str) -> Result<EdgeColoring, FormatError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| FormatError::Coloring(e.to_string()))?;
    let colors = match &doc {
        Value::Array(_) => &doc,
        Value::Object(obj) => obj
            .get("colors")
            .ok_or_else(|| FormatError::Coloring("no `colors` field".into()))?,
        _ => return Err(FormatError::Coloring("expected an object or an array".into())),
    };
    serde_json::from_value(colors.clone())
        .map(EdgeColoring::new)
        .map_err(|e| FormatError::Coloring(format!("`colors`: {e}")))
}

pub fn coloring_json(col: &EdgeColoring) -> Value {
    json!({
        "value": col.max_group(),
        "colors": col.colors(),
    })
}

pub fn parse_formula(text: &str) -> Result<MonotoneFormula, FormatError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let (n_vars, m) = match header.as_slice() {
        ["f", rest @ ..] => match numbers(hline, rest)?.as_slice() {
            &[n, m] => (n, m),
            _ => return Err(syntax(hline, "expected `f <n_vars> <n_clauses>`")),
        },
        _ => return Err(syntax(hline, "expected an `f` header")),
    };
    let mut clauses = Vec::with_capacity(m);
    for (line, toks) in lines {
        match (toks[0], numbers(line, &toks[1..])?.as_slice()) {
            ("c", &[i, j, k]) => clauses.push([i, j, k]),
            _ => return Err(syntax(line, "expected `c <i> <j> <k>`")),
        }
    }
    if clauses.len() != m {
        return Err(FormatError::CountMismatch {
            what: "clauses",
            expected: m,
            found: clauses.len(),
        });
    }
    Ok(MonotoneFormula::new(n_vars, clauses)?)
}

pub fn write_formula(phi: &MonotoneFormula) -> String {
    let mut out = format!("f {} {}\n", phi.n_vars, phi.m());
    for [i, j, k] in &phi.clauses {
        writeln!(out, "c {i} {j} {k}").unwrap();
    }
    out
}
