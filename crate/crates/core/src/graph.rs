//! Graph and coloring data model.
//!
//! A [`Graph`] is a simple undirected graph with vertices `0..n` and a
//! canonical edge list; edge ids are positions in that list. Every solver in
//! the crate produces an [`EdgeColoring`] indexed by those edge ids.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::time::Duration;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Color = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex id {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("coloring has {got} entries but the graph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("per-vertex budget list has {got} entries but the graph has {expected} vertices")]
    BudgetLengthMismatch { expected: usize, got: usize },
    #[error("color budget of vertex {0} is zero")]
    ZeroBudget(VertexId),
}

/// Simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
}

impl Graph {
    /// Builds a graph from `n` vertices and a list of vertex pairs.
    ///
    /// Pairs are normalized to `(min, max)` but keep their input order, so
    /// edge `i` is the `i`-th pair given. Self-loops, repeated pairs and out of
    /// range ids are rejected.
    pub fn new(n: usize, edge_pairs: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edge_pairs.len());
        let mut edges = Vec::with_capacity(edge_pairs.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edge_pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            let id = edges.len();
            edges.push((a, b));
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// `(neighbor, edge id)` pairs incident to `v`, in edge insertion order.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Maximum degree and exact average degree `2m/n`.
    pub fn degree_stats(&self) -> DegreeStats {
        let avg = if self.n == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(2 * self.m() as u64, self.n as u64)
        };
        DegreeStats {
            max_degree: self.max_degree(),
            avg_degree: avg,
        }
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adjacency[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// True iff the graph is connected and has exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() + 1 == self.n && self.is_connected()
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]` and edges listed
    /// in the order given by `edge_order`.
    pub fn relabeled(&self, perm: &[VertexId], edge_order: &[EdgeId]) -> Graph {
        let pairs: Vec<_> = edge_order
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (perm[u], perm[v])
            })
            .collect();
        Graph::new(self.n, &pairs).expect("relabeling preserves simplicity")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub avg_degree: Ratio<u64>,
}

/// Per-vertex color budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum QSpec {
    Uniform(usize),
    PerVertex(Vec<usize>),
}

impl QSpec {
    pub fn budget(&self, v: VertexId) -> usize {
        match self {
            QSpec::Uniform(q) => *q,
            QSpec::PerVertex(qs) => qs[v],
        }
    }

    pub fn uniform(&self) -> Option<usize> {
        match self {
            QSpec::Uniform(q) => Some(*q),
            QSpec::PerVertex(_) => None,
        }
    }

    /// Checks that every budget is positive and the list matches `g`.
    pub fn check(&self, g: &Graph) -> Result<(), ColoringError> {
        match self {
            QSpec::Uniform(0) => Err(ColoringError::ZeroBudget(0)),
            QSpec::Uniform(_) => Ok(()),
            QSpec::PerVertex(qs) => {
                if qs.len() != g.n() {
                    return Err(ColoringError::BudgetLengthMismatch {
                        expected: g.n(),
                        got: qs.len(),
                    });
                }
                match qs.iter().position(|&q| q == 0) {
                    Some(v) => Err(ColoringError::ZeroBudget(v)),
                    None => Ok(()),
                }
            }
        }
    }
}

/// Assignment of a color id to every edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeColoring {
    colors: Vec<Color>,
}

impl EdgeColoring {
    pub fn new(colors: Vec<Color>) -> Self {
        EdgeColoring { colors }
    }

    pub fn uniform(m: usize) -> Self {
        EdgeColoring { colors: vec![0; m] }
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, e: EdgeId) -> Color {
        self.colors[e]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().collect::<HashSet<_>>().len()
    }

    /// Relabels colors by first occurrence in edge-id order.
    pub fn canonicalize(&self) -> EdgeColoring {
        let mut map = HashMap::new();
        let colors = self
            .colors
            .iter()
            .map(|c| {
                let next = map.len();
                *map.entry(*c).or_insert(next)
            })
            .collect();
        EdgeColoring { colors }
    }

    pub fn group_sizes(&self) -> GroupSizes {
        let mut sizes = BTreeMap::new();
        for &c in &self.colors {
            *sizes.entry(c).or_insert(0) += 1;
        }
        let max = sizes.values().copied().max().unwrap_or(0);
        GroupSizes { sizes, max }
    }

    /// Size of the largest color group, the min-max objective.
    pub fn max_group(&self) -> usize {
        self.group_sizes().max
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSizes {
    pub sizes: BTreeMap<Color, usize>,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    /// Number of distinct colors incident to each vertex.
    pub incident_colors: Vec<usize>,
    /// Vertices whose count exceeds their budget, ascending.
    pub violations: Vec<VertexId>,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<VertexId> {
        self.violations.first().copied()
    }
}

/// Counts the distinct colors at every vertex and compares them with the budget.
pub fn validate(g: &Graph, qs: &QSpec, col: &EdgeColoring) -> Result<Feasibility, ColoringError> {
    if col.len() != g.m() {
        return Err(ColoringError::LengthMismatch {
            expected: g.m(),
            got: col.len(),
        });
    }
    qs.check(g)?;
    let mut incident_colors = Vec::with_capacity(g.n());
    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for v in 0..g.n() {
        seen.clear();
        seen.extend(g.neighbors(v).iter().map(|&(_, e)| col.color(e)));
        if seen.len() > qs.budget(v) {
            violations.push(v);
        }
        incident_colors.push(seen.len());
    }
    Ok(Feasibility {
        incident_colors,
        violations,
    })
}

/// Outcome of any solver in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub value: usize,
    pub coloring: EdgeColoring,
    pub method: String,
    pub lower_bound: usize,
    pub elapsed: Duration,
    /// False when a search stopped on a budget before proving optimality.
    pub proven_optimal: bool,
    /// Method-specific statistics, emitted as extra report fields.
    pub stats: BTreeMap<String, serde_json::Value>,
}

impl SolveReport {
    pub fn new(
        coloring: EdgeColoring,
        method: impl Into<String>,
        lower_bound: usize,
        elapsed: Duration,
    ) -> Self {
        let value = coloring.max_group();
        SolveReport {
            value,
            coloring,
            method: method.into(),
            lower_bound: lower_bound.min(value),
            elapsed,
            proven_optimal: false,
            stats: BTreeMap::new(),
        }
    }

    pub fn with_stat(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.stats.insert(key.to_string(), value.into());
        self
    }
}
