//! Exact min-max edge 2-coloring of trees.
//!
//! For a fixed root and a candidate bound `c`, vertices are processed bottom
//! up. Every non-root vertex carries a *residual*: the uncolored edges hanging
//! from it (its parent edge included) that must share the parent edge's color.
//! At each vertex a knapsack picks the children whose residual edges get a
//! fresh color, maximizing that group without exceeding `c`; the leftover
//! children join the vertex's own residual. The attempt fails as soon as a
//! residual exceeds `c`. The optimum is the smallest `c` that succeeds for
//! some root.

use std::collections::VecDeque;
use std::time::Instant;

use rayon::prelude::*;

use crate::bounds::{tree_interval, NotATree};
use crate::graph::{EdgeColoring, EdgeId, Graph, SolveReport, VertexId};
use crate::knapsack::knapsack_max;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttemptOutcome {
    Success(EdgeColoring),
    /// The residual of this vertex exceeded the candidate.
    Failure(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedAttempt {
    pub root: VertexId,
    pub candidate: usize,
    /// Residual of every vertex after its own step; untouched vertices keep
    /// their initial value (1, or 0 for the root).
    pub residuals: Vec<usize>,
    pub outcome: AttemptOutcome,
}

impl RootedAttempt {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, AttemptOutcome::Success(_))
    }
}

/// How the candidate bound is searched for each root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateSearch {
    #[default]
    Binary,
    /// Tries every candidate from the lower end; for auditing the binary search.
    LinearScan,
}

struct RootedTree {
    parent_edge: Vec<Option<EdgeId>>,
    children: Vec<Vec<VertexId>>,
    /// Vertices by descending depth, ascending id within a level.
    bottom_up: Vec<VertexId>,
}

fn root_tree(g: &Graph, root: VertexId) -> RootedTree {
    let n = g.n();
    let mut parent_edge = vec![None; n];
    let mut children = vec![Vec::new(); n];
    let mut visited = vec![false; n];
    let mut levels: Vec<Vec<VertexId>> = vec![vec![root]];
    visited[root] = true;
    loop {
        let mut next = Vec::new();
        for &u in levels.last().unwrap() {
            for &(w, e) in g.neighbors(u) {
                if !visited[w] {
                    visited[w] = true;
                    parent_edge[w] = Some(e);
                    children[u].push(w);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        levels.push(next);
    }
    for ch in &mut children {
        ch.sort_unstable();
    }
    let bottom_up = levels.into_iter().rev().flatten().collect();
    RootedTree {
        parent_edge,
        children,
        bottom_up,
    }
}

fn attempt_rooted(g: &Graph, tree: &RootedTree, root: VertexId, c: usize) -> RootedAttempt {
    let n = g.n();
    let mut colors = vec![usize::MAX; g.m()];
    let mut next_color = 0;
    // pending[v]: uncolored edges that will take the color of v's parent edge
    let mut pending: Vec<Vec<EdgeId>> = (0..n)
        .map(|v| tree.parent_edge[v].into_iter().collect())
        .collect();

    let mut residuals: Vec<usize> = pending.iter().map(Vec::len).collect();

    for &v in &tree.bottom_up {
        let kids = &tree.children[v];
        if kids.is_empty() {
            continue;
        }
        let items: Vec<usize> = kids.iter().map(|&w| pending[w].len()).collect();
        let sol = knapsack_max(&items, c);
        let items_total: usize = items.iter().sum();
        if items_total - sol.total + pending[v].len() > c {
            return RootedAttempt {
                root,
                candidate: c,
                residuals,
                outcome: AttemptOutcome::Failure(v),
            };
        }
        let mut selected = sol.selected.iter().peekable();
        let fresh = next_color;
        if !sol.selected.is_empty() {
            next_color += 1;
        }
        let mut leftover = Vec::new();
        for (i, &w) in kids.iter().enumerate() {
            let absorbed = std::mem::take(&mut pending[w]);
            if selected.peek() == Some(&&i) {
                selected.next();
                for e in absorbed {
                    colors[e] = fresh;
                }
            } else {
                leftover.extend(absorbed);
            }
        }
        pending[v].extend(leftover);
        residuals[v] = pending[v].len();
    }

    if !pending[root].is_empty() {
        for &e in &pending[root] {
            colors[e] = next_color;
        }
    }
    debug_assert!(colors.iter().all(|&c| c != usize::MAX));
    RootedAttempt {
        root,
        candidate: c,
        residuals,
        outcome: AttemptOutcome::Success(EdgeColoring::new(colors).canonicalize()),
    }
}

/// Runs one bottom-up coloring pass with the given root and candidate bound.
pub fn attempt(g: &Graph, root: VertexId, c: usize) -> Result<RootedAttempt, NotATree> {
    if !g.is_tree() || root >= g.n() {
        return Err(NotATree);
    }
    Ok(attempt_rooted(g, &root_tree(g, root), root, c))
}

/// Smallest successful candidate in `[lo, hi]` for one root, with its coloring.
fn search_root(
    g: &Graph,
    root: VertexId,
    lo: usize,
    hi: usize,
    mode: CandidateSearch,
) -> Option<(usize, EdgeColoring)> {
    let tree = root_tree(g, root);
    let run = |c: usize| match attempt_rooted(g, &tree, root, c).outcome {
        AttemptOutcome::Success(col) => Some(col),
        AttemptOutcome::Failure(_) => None,
    };
    match mode {
        CandidateSearch::LinearScan => (lo..=hi).find_map(|c| run(c).map(|col| (c, col))),
        CandidateSearch::Binary => {
            let mut best = (hi, run(hi)?);
            let (mut l, mut u) = (lo, hi);
            while l < u {
                let c = (l + u) / 2;
                match run(c) {
                    Some(col) => {
                        best = (c, col);
                        u = c;
                    }
                    None => l = c + 1,
                }
            }
            Some(best)
        }
    }
}

pub fn solve_tree(g: &Graph) -> Result<SolveReport, NotATree> {
    solve_tree_with(g, CandidateSearch::Binary)
}

/// Optimal 2-coloring of a tree: the best candidate over all roots.
///
/// Roots are evaluated in parallel; ties go to the smaller root id.
pub fn solve_tree_with(g: &Graph, mode: CandidateSearch) -> Result<SolveReport, NotATree> {
    let start = Instant::now();
    let (lo, hi) = tree_interval(g)?;
    let finish = |col: EdgeColoring, root: Option<VertexId>| {
        let mut report = SolveReport::new(col, "tree", lo, start.elapsed());
        report.proven_optimal = true;
        match root {
            Some(r) => report.with_stat("root", r),
            None => report,
        }
    };
    if g.max_degree() <= 1 {
        return Ok(finish(EdgeColoring::uniform(g.m()), None));
    }
    let best = (0..g.n())
        .into_par_iter()
        .filter_map(|root| search_root(g, root, lo, hi, mode).map(|(c, col)| (c, root, col)))
        .min_by_key(|&(c, root, _)| (c, root))
        .expect("any root admits a coloring with groups of at most Δ-1 edges");
    let (_, root, col) = best;
    Ok(finish(col, Some(root)))
}

/// Rooted depths, used by tests and the CLI for diagnostics.
pub fn depths(g: &Graph, root: VertexId) -> Vec<usize> {
    let mut depth = vec![usize::MAX; g.n()];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.neighbors(u) {
            if depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate, QSpec};

    fn star(leaves: usize) -> Graph {
        let pairs: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &pairs).unwrap()
    }

    fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    /// Root 0 with three children, each carrying three leaves.
    fn broom_of_stars() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..3 {
            let child = 1 + 4 * i;
            pairs.push((0, child));
            for j in 1..=3 {
                pairs.push((child, child + j));
            }
        }
        Graph::new(13, &pairs).unwrap()
    }

    #[test]
    fn star_splits_evenly() {
        let g = star(6);
        let a = attempt(&g, 0, 3).unwrap();
        match a.outcome {
            AttemptOutcome::Success(col) => {
                assert_eq!(col.max_group(), 3);
                assert!(validate(&g, &QSpec::Uniform(2), &col).unwrap().is_feasible());
            }
            AttemptOutcome::Failure(v) => panic!("failed at {v}"),
        }
        assert!(!attempt(&g, 0, 2).unwrap().is_success());
    }

    #[test]
    fn failing_root_when_children_overflow() {
        let g = broom_of_stars();
        let a = attempt(&g, 0, 2).unwrap();
        assert_eq!(a.outcome, AttemptOutcome::Failure(0));
        // each child kept one leaf edge plus its parent edge
        for child in [1, 5, 9] {
            assert_eq!(a.residuals[child], 2);
        }
        for root in 0..g.n() {
            assert!(!attempt(&g, root, 2).unwrap().is_success());
        }
        assert_eq!(solve_tree(&g).unwrap().value, 3);
    }

    #[test]
    fn path_from_end_uses_singletons() {
        let g = path(5);
        match attempt(&g, 0, 1).unwrap().outcome {
            AttemptOutcome::Success(col) => {
                assert_eq!(col.num_colors(), 4);
                assert_eq!(col.max_group(), 1);
            }
            AttemptOutcome::Failure(v) => panic!("failed at {v}"),
        }
    }

    #[test]
    fn residual_invariants_on_success() {
        let g = broom_of_stars();
        for root in 0..g.n() {
            let a = attempt(&g, root, 3).unwrap();
            assert!(a.is_success());
            for (v, &r) in a.residuals.iter().enumerate() {
                assert!(r <= 3);
                if v != root {
                    assert!(r >= 1);
                }
            }
        }
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_tree(&star(9)).unwrap().value, 5);
        assert_eq!(solve_tree(&path(2)).unwrap().value, 1);
        assert_eq!(solve_tree(&path(3)).unwrap().value, 1);
        let single = solve_tree(&Graph::new(1, &[]).unwrap()).unwrap();
        assert_eq!(single.value, 0);
    }

    #[test]
    fn rejects_non_trees() {
        let tri = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(solve_tree(&tri).unwrap_err(), NotATree);
        assert_eq!(attempt(&tri, 0, 1).unwrap_err(), NotATree);
        let forest = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(solve_tree(&forest).is_err());
    }

    #[test]
    fn linear_scan_agrees() {
        for g in [star(9), broom_of_stars(), path(7)] {
            assert_eq!(
                solve_tree_with(&g, CandidateSearch::LinearScan).unwrap().value,
                solve_tree(&g).unwrap().value
            );
        }
    }

    #[test]
    fn depth_levels() {
        assert_eq!(depths(&path(4), 1), vec![1, 0, 1, 2]);
    }
}
