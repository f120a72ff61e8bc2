//! Exact branch-and-bound for small instances.
//!
//! Edges are first grouped into classes that must share a color (every edge
//! at a vertex with budget 1 has the same color). The search then assigns a
//! color to one class at a time, choosing either an existing color admissible
//! at all vertices the class touches or the next unused color. Introducing at
//! most one fresh color per step enumerates each coloring once up to color
//! renaming.
//!
//! A branch is cut when a group would reach the incumbent value, or when some
//! vertex cannot absorb its remaining classes within its color budget.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Color, ColoringError, EdgeColoring, EdgeId, Graph, QSpec, SolveReport, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance has {units} edge classes, above the limit of {limit}")]
    TooLarge { units: usize, limit: usize },
    #[error(transparent)]
    Budget(#[from] ColoringError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeOrder {
    #[default]
    Input,
    /// Classes sorted by decreasing endpoint degree sum.
    Degree,
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    /// Largest number of edge classes the search accepts.
    pub max_units: usize,
    pub time_budget: Option<Duration>,
    pub order: EdgeOrder,
    /// Known upper bound on the optimum; the search only looks at or below it.
    pub upper_hint: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_units: 40,
            time_budget: None,
            order: EdgeOrder::Input,
            upper_hint: None,
        }
    }
}

/// Partitions edges into classes forced to share one color.
///
/// All edges at a vertex with budget 1 are merged, transitively. Classes are
/// returned sorted internally and ordered by their smallest edge id.
pub fn forced_propagation(g: &Graph, qs: &QSpec) -> Vec<Vec<EdgeId>> {
    let mut parent: Vec<usize> = (0..g.m()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for v in 0..g.n() {
        if qs.budget(v) != 1 {
            continue;
        }
        let mut edges = g.neighbors(v).iter().map(|&(_, e)| e);
        if let Some(first) = edges.next() {
            for e in edges {
                let (a, b) = (find(&mut parent, first), find(&mut parent, e));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: Vec<Vec<EdgeId>> = Vec::new();
    let mut slot = vec![usize::MAX; g.m()];
    for e in 0..g.m() {
        let r = find(&mut parent, e);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(e);
    }
    classes
}

struct Unit {
    edges: Vec<EdgeId>,
    touched: Vec<VertexId>,
}

fn build_units(g: &Graph, classes: Vec<Vec<EdgeId>>, order: EdgeOrder) -> Vec<Unit> {
    let mut units: Vec<Unit> = classes
        .into_iter()
        .map(|edges| {
            let mut touched: Vec<VertexId> = edges
                .iter()
                .flat_map(|&e| {
                    let (u, v) = g.edge(e);
                    [u, v]
                })
                .collect();
            touched.sort_unstable();
            touched.dedup();
            Unit { edges, touched }
        })
        .collect();
    if order == EdgeOrder::Degree {
        let key = |u: &Unit| -> usize { u.touched.iter().map(|&v| g.degree(v)).sum() };
        units.sort_by_key(|u| std::cmp::Reverse(key(u)));
    }
    units
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Find the smallest maximum group; stop early once `stop_at` is reached.
    Optimize { stop_at: usize },
    /// Visit every complete coloring with all groups at most the limit.
    Enumerate { collect: bool },
}

struct Search<'a> {
    units: &'a [Unit],
    budgets: Vec<usize>,
    vertex_colors: Vec<Vec<Color>>,
    /// Edges of unassigned classes touching each vertex.
    load: Vec<usize>,
    sizes: Vec<usize>,
    assign: Vec<Color>,
    limit: usize,
    mode: Mode,
    best: Option<(usize, Vec<Color>)>,
    done: bool,
    count: u64,
    collected: Vec<Vec<Color>>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl<'a> Search<'a> {
    fn new(units: &'a [Unit], budgets: Vec<usize>, limit: usize, mode: Mode) -> Self {
        let n = budgets.len();
        let mut load = vec![0; n];
        for u in units {
            for &v in &u.touched {
                load[v] += u.edges.len();
            }
        }
        Search {
            units,
            budgets,
            vertex_colors: vec![Vec::new(); n],
            load,
            sizes: Vec::new(),
            assign: vec![usize::MAX; units.len()],
            limit,
            mode,
            best: None,
            done: false,
            count: 0,
            collected: Vec::new(),
            nodes: 0,
            deadline: None,
            timed_out: false,
        }
    }

    fn admissible(&self, unit: &Unit, c: Option<Color>) -> bool {
        unit.touched.iter().all(|&v| {
            let vc = &self.vertex_colors[v];
            c.is_some_and(|c| vc.contains(&c)) || vc.len() < self.budgets[v]
        })
    }

    /// Can `v` still place its remaining load under the current limit?
    fn has_capacity(&self, v: VertexId) -> bool {
        let limit = self.limit as u128;
        let vc = &self.vertex_colors[v];
        let open = (self.budgets[v] - vc.len()) as u128 * limit;
        let used: u128 = vc
            .iter()
            .map(|&c| limit.saturating_sub(self.sizes[c] as u128))
            .sum();
        self.load[v] as u128 <= open + used
    }

    fn dfs(&mut self, k: usize, cur_max: usize) {
        if self.done || cur_max > self.limit {
            return;
        }
        self.nodes += 1;
        if self.nodes & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    self.done = true;
                    return;
                }
            }
        }
        if k == self.units.len() {
            match self.mode {
                Mode::Optimize { stop_at } => {
                    self.best = Some((cur_max, self.assign.clone()));
                    if cur_max <= stop_at || cur_max == 0 {
                        self.done = true;
                    } else {
                        self.limit = cur_max - 1;
                    }
                }
                Mode::Enumerate { collect } => {
                    self.count += 1;
                    if collect {
                        self.collected.push(self.assign.clone());
                    }
                }
            }
            return;
        }
        let unit = &self.units[k];
        let weight = unit.edges.len();
        let mut candidates: Vec<(usize, Color)> = (0..self.sizes.len())
            .filter(|&c| self.sizes[c] + weight <= self.limit && self.admissible(unit, Some(c)))
            .map(|c| (self.sizes[c], c))
            .collect();
        let fresh = self.sizes.len();
        if weight <= self.limit && self.admissible(unit, None) {
            candidates.push((0, fresh));
        }
        if matches!(self.mode, Mode::Optimize { .. }) {
            candidates.sort_unstable();
        }
        for (_, c) in candidates {
            if self.done || cur_max > self.limit {
                return;
            }
            if self.sizes[..].len() <= c {
                self.sizes.push(0);
            }
            // the limit may have dropped since candidates were listed
            if self.sizes[c] + weight > self.limit {
                if c == fresh {
                    self.sizes.pop();
                }
                continue;
            }
            self.sizes[c] += weight;
            self.assign[k] = c;
            let mut pushed = Vec::with_capacity(unit.touched.len());
            for &v in &unit.touched {
                self.load[v] -= weight;
                if !self.vertex_colors[v].contains(&c) {
                    self.vertex_colors[v].push(c);
                    pushed.push(v);
                }
            }
            if unit.touched.iter().all(|&v| self.has_capacity(v)) {
                let next_max = cur_max.max(self.sizes[c]);
                self.dfs(k + 1, next_max);
            }
            for &v in &pushed {
                self.vertex_colors[v].pop();
            }
            for &v in &unit.touched {
                self.load[v] += weight;
            }
            self.sizes[c] -= weight;
            self.assign[k] = usize::MAX;
            if c == fresh {
                self.sizes.pop();
            }
        }
    }

    fn coloring(&self, assign: &[Color], m: usize) -> EdgeColoring {
        let mut colors = vec![0; m];
        for (unit, &c) in self.units.iter().zip(assign) {
            for &e in &unit.edges {
                colors[e] = c;
            }
        }
        EdgeColoring::new(colors).canonicalize()
    }
}

fn budgets(g: &Graph, qs: &QSpec) -> Result<Vec<usize>, OracleError> {
    qs.check(g)?;
    Ok((0..g.n()).map(|v| qs.budget(v)).collect())
}

/// Bounds valid for every instance that the search may stop at: the largest
/// forced class and `ceil(deg(v) / q(v))` at every vertex.
fn elementary_lower_bound(g: &Graph, budgets: &[usize], units: &[Unit]) -> usize {
    let by_degree = (0..g.n())
        .map(|v| g.degree(v).div_ceil(budgets[v]))
        .max()
        .unwrap_or(0);
    let by_class = units.iter().map(|u| u.edges.len()).max().unwrap_or(0);
    by_degree.max(by_class)
}

/// Optimal min-max coloring by branch and bound.
///
/// If the time budget runs out the best coloring found so far is returned
/// with `proven_optimal == false`.
pub fn solve_exact(g: &Graph, qs: &QSpec, config: &OracleConfig) -> Result<SolveReport, OracleError> {
    let start = Instant::now();
    let budgets = budgets(g, qs)?;
    let classes = forced_propagation(g, qs);
    if classes.len() > config.max_units {
        return Err(OracleError::TooLarge {
            units: classes.len(),
            limit: config.max_units,
        });
    }
    let units = build_units(g, classes, config.order);
    let lower = elementary_lower_bound(g, &budgets, &units);
    let m = g.m();

    let run = |limit: usize| {
        let mut search = Search::new(&units, budgets.clone(), limit, Mode::Optimize { stop_at: lower });
        search.deadline = config.time_budget.map(|b| start + b);
        search.dfs(0, 0);
        search
    };

    let hinted = config.upper_hint.map(|h| h.min(m));
    let mut search = run(hinted.unwrap_or(m));
    if search.best.is_none() && !search.timed_out && hinted.is_some_and(|h| h < m) {
        // the hint was below the optimum
        search = run(m);
    }
    let (coloring, proven) = match &search.best {
        Some((_, assign)) => (search.coloring(assign, m), !search.timed_out),
        None => (EdgeColoring::uniform(m), false),
    };
    let mut report = SolveReport::new(coloring, "exact", lower, start.elapsed());
    report.proven_optimal = proven;
    Ok(report.with_stat("nodes", search.nodes))
}

/// Every optimal coloring, canonical and deduplicated, sorted.
pub fn solve_exact_all_optima(g: &Graph, qs: &QSpec) -> Result<Vec<EdgeColoring>, OracleError> {
    const LIMIT: usize = 12;
    if g.m() > LIMIT {
        return Err(OracleError::TooLarge {
            units: g.m(),
            limit: LIMIT,
        });
    }
    let opt = solve_exact(g, qs, &OracleConfig::default())?.value;
    let budgets = budgets(g, qs)?;
    let units = build_units(g, forced_propagation(g, qs), EdgeOrder::Input);
    let mut search = Search::new(&units, budgets, opt, Mode::Enumerate { collect: true });
    search.dfs(0, 0);
    let mut seen = HashSet::new();
    let mut out: Vec<EdgeColoring> = search
        .collected
        .iter()
        .map(|a| search.coloring(a, g.m()))
        .filter(|c| c.max_group() == opt && seen.insert(c.clone()))
        .collect();
    out.sort_by(|a, b| a.colors().cmp(b.colors()));
    Ok(out)
}

/// Number of feasible colorings up to color renaming, by canonical branching
/// over single edges in id order.
pub fn count_feasible_colorings(g: &Graph, qs: &QSpec) -> Result<u64, OracleError> {
    let budgets = budgets(g, qs)?;
    let classes = (0..g.m()).map(|e| vec![e]).collect();
    let units = build_units(g, classes, EdgeOrder::Input);
    let mut search = Search::new(&units, budgets, usize::MAX, Mode::Enumerate { collect: false });
    search.dfs(0, 0);
    Ok(search.count)
}
