//! Gadget graphs from monotone one-in-three SAT.
//!
//! [`reduce_general`] builds an instance with per-vertex budgets whose
//! optimum is at most `L = 4m + n` exactly when the formula has an
//! assignment making one variable true in every clause. [`reduce_uniform`]
//! simulates the budgets 1 and 2 under a uniform `q` by attaching vertices to
//! large stars whose colors are already full.
//!
//! Vertex layout of the general instance: clause vertices `c_0..c_{m-1}`,
//! then `a_i`, `b_i`, `v_i` for every variable, then `f`, then the leaves of
//! the `a` vertices and of the `b` vertices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeColoring, Graph, QSpec, VertexId};
use crate::oracle::{solve_exact, OracleConfig, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("formula has no clauses")]
    NoClauses,
    #[error("clause {clause} repeats a variable")]
    RepeatedVariable { clause: usize },
    #[error("clause {clause} uses variable {var}, but there are only {n_vars}")]
    VariableOutOfRange { clause: usize, var: usize, n_vars: usize },
    #[error("variable {0} occurs in no clause")]
    UnusedVariable(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneFormula {
    pub n_vars: usize,
    pub clauses: Vec<[usize; 3]>,
}

impl MonotoneFormula {
    pub fn new(n_vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self, FormulaError> {
        for (j, cl) in clauses.iter().enumerate() {
            if let Some(&var) = cl.iter().find(|&&x| x >= n_vars) {
                return Err(FormulaError::VariableOutOfRange { clause: j, var, n_vars });
            }
            if cl[0] == cl[1] || cl[0] == cl[2] || cl[1] == cl[2] {
                return Err(FormulaError::RepeatedVariable { clause: j });
            }
        }
        Ok(MonotoneFormula { n_vars, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses each variable occurs in.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.n_vars];
        for cl in &self.clauses {
            for &x in cl {
                occ[x] += 1;
            }
        }
        occ
    }

    pub fn threshold(&self) -> usize {
        4 * self.m() + self.n_vars
    }

    /// True iff every clause has exactly one true variable.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n_vars
            && self
                .clauses
                .iter()
                .all(|cl| cl.iter().filter(|&&x| assignment[x]).count() == 1)
    }

    /// First satisfying assignment in binary counting order, by enumeration.
    pub fn solve_brute(&self) -> Option<Vec<bool>> {
        assert!(self.n_vars <= 30, "enumeration limited to 30 variables");
        (0u64..1 << self.n_vars)
            .map(|mask| (0..self.n_vars).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.satisfied_by(a))
    }

    /// Rejects formulas the gadget cannot encode.
    fn check_encodable(&self) -> Result<(), FormulaError> {
        if self.clauses.is_empty() {
            return Err(FormulaError::NoClauses);
        }
        // a_i needs degree 2m_i while already adjacent to v_i
        match self.occurrences().iter().position(|&k| k == 0) {
            Some(i) => Err(FormulaError::UnusedVariable(i)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", content = "index", rename_all = "kebab-case")]
pub enum Role {
    Clause(usize),
    A(usize),
    B(usize),
    V(usize),
    F,
    /// Leaf attached to the given vertex.
    Leaf(VertexId),
    StarCenter(usize),
    StarLeaf(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionArtifact {
    pub formula: MonotoneFormula,
    pub graph: Graph,
    pub qspec: QSpec,
    pub l: usize,
    pub roles: Vec<Role>,
    /// Uniform budget, for artifacts built by [`reduce_uniform`].
    pub uniform_q: Option<usize>,
    /// Star leaf count when a reduced star size was requested.
    pub star_leaves: Option<usize>,
}

impl ReductionArtifact {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Sidecar document: threshold and the role of every vertex.
    pub fn roles_json(&self) -> serde_json::Value {
        serde_json::json!({
            "L": self.l,
            "n_vars": self.formula.n_vars,
            "n_clauses": self.formula.m(),
            "uniform_q": self.uniform_q,
            "star_leaves": self.star_leaves,
            "roles": self.roles,
        })
    }

    pub fn clause_vertex(&self, j: usize) -> VertexId {
        j
    }

    pub fn a(&self, i: usize) -> VertexId {
        self.formula.m() + i
    }

    pub fn b(&self, i: usize) -> VertexId {
        self.formula.m() + self.formula.n_vars + i
    }

    pub fn v(&self, i: usize) -> VertexId {
        self.formula.m() + 2 * self.formula.n_vars + i
    }

    pub fn f(&self) -> VertexId {
        self.formula.m() + 3 * self.formula.n_vars
    }

    /// The vertices whose budget the uniform version simulates, with the
    /// budget of the general version.
    pub fn mimicked(&self) -> Vec<(VertexId, usize)> {
        let (m, n) = (self.formula.m(), self.formula.n_vars);
        let mut out: Vec<_> = (0..m).map(|j| (self.clause_vertex(j), 2)).collect();
        out.extend((0..n).map(|i| (self.a(i), 1)));
        out.extend((0..n).map(|i| (self.b(i), 1)));
        out.extend((0..n).map(|i| (self.v(i), 2)));
        out.push((self.f(), 1));
        out
    }
}

struct Builder {
    pairs: Vec<(VertexId, VertexId)>,
    roles: Vec<Role>,
}

impl Builder {
    fn add(&mut self, role: Role) -> VertexId {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn leaves(&mut self, owner: VertexId, count: usize) {
        for _ in 0..count {
            let leaf = self.add(Role::Leaf(owner));
            self.pairs.push((owner, leaf));
        }
    }
}

fn gadget(phi: &MonotoneFormula) -> Result<(Builder, usize), FormulaError> {
    phi.check_encodable()?;
    let (m, n) = (phi.m(), phi.n_vars);
    let l = phi.threshold();
    let occ = phi.occurrences();
    let mut b = Builder {
        pairs: Vec::new(),
        roles: Vec::new(),
    };
    for j in 0..m {
        b.add(Role::Clause(j));
    }
    for role in [Role::A as fn(usize) -> Role, Role::B, Role::V] {
        for i in 0..n {
            b.add(role(i));
        }
    }
    let f = b.add(Role::F);
    let (a, bv, v) = (|i| m + i, |i| m + n + i, |i| m + 2 * n + i);
    for i in 0..n {
        b.pairs.push((v(i), a(i)));
        b.pairs.push((v(i), bv(i)));
        b.pairs.push((f, v(i)));
    }
    for (j, cl) in phi.clauses.iter().enumerate() {
        for &x in cl {
            b.pairs.push((a(x), j));
        }
    }
    for i in 0..n {
        b.leaves(a(i), occ[i] - 1);
    }
    for i in 0..n {
        b.leaves(bv(i), l - 2 * occ[i] - 1);
    }
    Ok((b, l))
}

fn check_general(art: &ReductionArtifact) {
    let g = art.graph();
    let occ = art.formula.occurrences();
    assert_eq!(art.l, 4 * art.formula.m() + art.formula.n_vars);
    for (i, &k) in occ.iter().enumerate() {
        assert_eq!(g.degree(art.a(i)), 2 * k);
        assert_eq!(g.degree(art.b(i)), art.l - 2 * k);
    }
    for (v, budget) in art.mimicked() {
        assert_eq!(art.qspec.budget(v), budget);
    }
}

/// Instance with per-vertex budgets: 1 at `a_i`, `b_i`, `f` and leaves, 2 at
/// `v_i` and clause vertices.
pub fn reduce_general(phi: &MonotoneFormula) -> Result<ReductionArtifact, FormulaError> {
    let (b, l) = gadget(phi)?;
    let qs = b
        .roles
        .iter()
        .map(|r| match r {
            Role::Clause(_) | Role::V(_) => 2,
            _ => 1,
        })
        .collect();
    let graph = Graph::new(b.roles.len(), &b.pairs).expect("gadget is a simple graph");
    let art = ReductionArtifact {
        formula: phi.clone(),
        graph,
        qspec: QSpec::PerVertex(qs),
        l,
        roles: b.roles,
        uniform_q: None,
        star_leaves: None,
    };
    check_general(&art);
    Ok(art)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniformError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("q must be at least 2")]
    BudgetTooSmall,
    #[error("stars with {leaves} leaves cannot host {needed} attached vertices")]
    StarsTooSmall { leaves: usize, needed: usize },
}

/// Uniform-budget instance: `q - 1` stars with `qL` leaves each. A vertex
/// simulating budget `b` is merged with one leaf of each of `q - b` stars.
///
/// `scale` replaces `L` in the star size (stars get `q * scale` leaves); the
/// result is then only a wiring test and not a faithful reduction.
pub fn reduce_uniform(
    phi: &MonotoneFormula,
    q: usize,
    scale: Option<usize>,
) -> Result<ReductionArtifact, UniformError> {
    if q < 2 {
        return Err(UniformError::BudgetTooSmall);
    }
    let (mut b, l) = gadget(phi)?;
    let (m, n) = (phi.m(), phi.n_vars);
    assert!(m + 3 * n + 1 <= 2 * l, "mimicked vertices fit in the stars");
    let leaves = q * scale.unwrap_or(l);
    let mimics: Vec<(VertexId, usize)> = b
        .roles
        .iter()
        .enumerate()
        .filter_map(|(v, r)| match r {
            Role::Clause(_) | Role::V(_) => Some((v, 2)),
            Role::A(_) | Role::B(_) | Role::F => Some((v, 1)),
            _ => None,
        })
        .collect();
    // the first star hosts every vertex with a budget below q
    let needed = mimics.iter().filter(|&&(_, budget)| budget < q).count();
    if needed > leaves {
        return Err(UniformError::StarsTooSmall { leaves, needed });
    }
    let centers: Vec<VertexId> = (0..q - 1).map(|s| b.add(Role::StarCenter(s))).collect();
    for (s, &center) in centers.iter().enumerate() {
        let mut used = 0;
        for &(v, budget) in &mimics {
            if s < q - budget {
                b.pairs.push((center, v));
                used += 1;
            }
        }
        for _ in used..leaves {
            let leaf = b.add(Role::StarLeaf(s));
            b.pairs.push((center, leaf));
        }
    }
    let graph = Graph::new(b.roles.len(), &b.pairs).expect("gadget is a simple graph");
    for &c in &centers {
        assert_eq!(graph.degree(c), leaves);
    }
    Ok(ReductionArtifact {
        formula: phi.clone(),
        graph,
        qspec: QSpec::Uniform(q),
        l,
        roles: b.roles,
        uniform_q: Some(q),
        star_leaves: scale.map(|_| leaves),
    })
}

/// The coloring of a satisfying assignment: false variables join the color
/// of `f`, each true variable gets one color for both of its stars, each
/// false variable's `b_i` star gets its own color. Star edges of a uniform
/// artifact fill blocks of `leaves / q` edges.
pub fn assignment_coloring(art: &ReductionArtifact, assignment: &[bool]) -> EdgeColoring {
    let g = art.graph();
    let n = art.formula.n_vars;
    let mut owner_color = vec![usize::MAX; g.n()];
    owner_color[art.f()] = 0;
    let mut next = 1;
    for i in 0..n {
        if assignment[i] {
            owner_color[art.a(i)] = next;
            owner_color[art.b(i)] = next;
        } else {
            owner_color[art.a(i)] = 0;
            owner_color[art.b(i)] = next;
        }
        next += 1;
    }
    // star s uses colors 1 + n + s*q .. in blocks of `block` edges
    let q = art.uniform_q.unwrap_or(1);
    let block = art.star_leaves.unwrap_or(q * art.l) / q;
    let mut star_used = vec![0; q];
    let colors = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let star = match (art.roles[u], art.roles[v]) {
                (Role::StarCenter(s), _) | (_, Role::StarCenter(s)) => Some(s),
                _ => None,
            };
            if let Some(s) = star {
                let k = star_used[s];
                star_used[s] += 1;
                return 1 + n + s * q + k / block;
            }
            match (owner_color[u], owner_color[v]) {
                (c, _) if c != usize::MAX => c,
                (_, c) if c != usize::MAX => c,
                _ => unreachable!("every gadget edge touches a, b or f"),
            }
        })
        .collect();
    EdgeColoring::new(colors)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("coloring has {got} entries for {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
}

/// Reads the truth assignment off a coloring: `x_i` is true iff the edge
/// `a_i v_i` does not have the color of `f v_0`.
pub fn extract_assignment(art: &ReductionArtifact, col: &EdgeColoring) -> Result<Vec<bool>, ExtractError> {
    let g = art.graph();
    if col.len() != g.m() {
        return Err(ExtractError::LengthMismatch {
            expected: g.m(),
            got: col.len(),
        });
    }
    let edge_between = |x: VertexId, y: VertexId| {
        g.neighbors(x)
            .iter()
            .find(|&&(w, _)| w == y)
            .map(|&(_, e)| e)
            .expect("gadget edge exists")
    };
    let false_color = col.color(edge_between(art.f(), art.v(0)));
    Ok((0..art.formula.n_vars)
        .map(|i| col.color(edge_between(art.a(i), art.v(i))) != false_color)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Agree,
    Disagree,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equivalence {
    pub sat: bool,
    pub opt: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub verdict: Verdict,
    /// Assignment read from the optimal coloring when `opt <= L`.
    pub extracted: Option<Vec<bool>>,
    pub proven_optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("{0} variables exceed the enumeration limit of 20")]
    TooManyVariables(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Compares satisfiability by enumeration with the oracle optimum of the
/// general reduction.
pub fn check_equivalence(phi: &MonotoneFormula) -> Result<Equivalence, EquivalenceError> {
    if phi.n_vars > 20 {
        return Err(EquivalenceError::TooManyVariables(phi.n_vars));
    }
    let art = reduce_general(phi)?;
    let (sat, report) = rayon::join(
        || phi.solve_brute().is_some(),
        || solve_exact(art.graph(), &art.qspec, &OracleConfig::default()),
    );
    let report = report?;
    let opt = report.value;
    let extracted = (opt <= art.l)
        .then(|| extract_assignment(&art, &report.coloring).expect("oracle colors every edge"));
    let verdict = if sat == (opt <= art.l) {
        Verdict::Agree
    } else {
        Verdict::Disagree
    };
    Ok(Equivalence {
        sat,
        opt,
        l: art.l,
        verdict,
        extracted,
        proven_optimal: report.proven_optimal,
    })
}
