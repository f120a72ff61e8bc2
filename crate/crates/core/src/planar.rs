//! Separator-based 2-coloring for planar graphs.
//!
//! A vertex separator `S` leaves components of at most `ceil(εn)` vertices.
//! All edges touching `S` share one color and every remaining component
//! gets a fresh color for its internal edges. Component vertices then see at
//! most two colors and separator vertices see one, so the result is feasible
//! for `q = 2` whatever the separator looks like; the separator's size only
//! affects the quality.
//!
//! The separator engine splits the largest oversized component repeatedly.
//! Each split tries BFS levels first and, when the best level is large,
//! fundamental cycles of a BFS tree (short in shallow graphs such as random
//! triangulations).

use std::time::Instant;

use crate::bounds::{best_lower_bound, trivial_coloring};
use crate::graph::{EdgeColoring, Graph, QSpec, SolveReport, VertexId};
use crate::oracle::{solve_exact, OracleConfig};

/// Combinatorial embedding: neighbors of every vertex in rotation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub rotation: Vec<Vec<VertexId>>,
}

impl Embedding {
    /// Number of faces traced by the rotation system. For a connected plane
    /// graph this is `m - n + 2`.
    pub fn face_count(&self) -> usize {
        let mut pos = std::collections::HashMap::new();
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &w) in rot.iter().enumerate() {
                pos.insert((v, w), i);
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut faces = 0;
        for (u, rot) in self.rotation.iter().enumerate() {
            for &v in rot {
                if seen.contains(&(u, v)) {
                    continue;
                }
                faces += 1;
                let (mut a, mut b) = (u, v);
                while seen.insert((a, b)) {
                    // next dart: from b to the neighbor preceding a at b
                    let rb = &self.rotation[b];
                    let i = pos[&(b, a)];
                    let w = rb[(i + rb.len() - 1) % rb.len()];
                    (a, b) = (b, w);
                }
            }
        }
        faces
    }

    /// Checks that the rotation lists are exactly the adjacency of `g`.
    pub fn matches(&self, g: &Graph) -> bool {
        self.rotation.len() == g.n()
            && (0..g.n()).all(|v| {
                let mut a = self.rotation[v].clone();
                let mut b: Vec<_> = g.neighbors(v).iter().map(|&(w, _)| w).collect();
                a.sort_unstable();
                b.sort_unstable();
                a == b
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorResult {
    /// Separator vertices, ascending.
    pub separator: Vec<VertexId>,
    /// Connected components of `G - S`, each ascending, ordered by smallest vertex.
    pub components: Vec<Vec<VertexId>>,
    pub epsilon: f64,
    /// Largest admissible component size, `max(1, ceil(εn))`.
    pub limit: usize,
    /// `sqrt(n/ε)`, the scale the separator size is compared with.
    pub size_budget_estimate: f64,
}

pub fn component_limit(n: usize, epsilon: f64) -> usize {
    // a small slack keeps exact products like 0.1 * 100 from rounding up
    ((epsilon * n as f64) - 1e-9).ceil().max(1.0) as usize
}

/// Vertex subsets are handled through a shared mask of removed vertices.
struct Workspace<'a> {
    g: &'a Graph,
    removed: Vec<bool>,
    mark: Vec<u32>,
    stamp: u32,
    dist: Vec<usize>,
}

impl<'a> Workspace<'a> {
    fn new(g: &'a Graph) -> Self {
        Workspace {
            g,
            removed: vec![false; g.n()],
            mark: vec![0; g.n()],
            stamp: 0,
            dist: vec![usize::MAX; g.n()],
        }
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp += 1;
        self.stamp
    }

    /// BFS inside the live vertices, returning vertices in visit order and
    /// recording distances. Neighbors are visited in adjacency order.
    fn bfs(&mut self, start: VertexId, blocked: &[VertexId]) -> Vec<VertexId> {
        let s = self.next_stamp();
        for &b in blocked {
            self.mark[b] = s;
        }
        let mut order = vec![start];
        self.mark[start] = s;
        self.dist[start] = 0;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &(w, _) in self.g.neighbors(u) {
                if !self.removed[w] && self.mark[w] != s {
                    self.mark[w] = s;
                    self.dist[w] = self.dist[u] + 1;
                    order.push(w);
                }
            }
        }
        order
    }

    /// Components of `comp` minus `blocked`.
    fn split_components(&mut self, comp: &[VertexId], blocked: &[VertexId]) -> Vec<Vec<VertexId>> {
        let s = self.next_stamp();
        for &b in blocked {
            self.mark[b] = s;
        }
        let mut out = Vec::new();
        for &v in comp {
            if self.mark[v] == s {
                continue;
            }
            self.mark[v] = s;
            let mut members = vec![v];
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &(w, _) in self.g.neighbors(u) {
                    if !self.removed[w] && self.mark[w] != s {
                        self.mark[w] = s;
                        members.push(w);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    fn largest_after(&mut self, comp: &[VertexId], blocked: &[VertexId]) -> usize {
        self.split_components(comp, blocked)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
    }

    /// BFS levels of a component from the far end of a double sweep.
    fn levels(&mut self, comp: &[VertexId]) -> Vec<Vec<VertexId>> {
        let first = *comp.iter().min().unwrap();
        let sweep = self.bfs(first, &[]);
        let start = *sweep.last().unwrap();
        let order = self.bfs(start, &[]);
        let depth = self.dist[*order.last().unwrap()];
        let mut levels: Vec<Vec<VertexId>> = vec![Vec::new(); depth + 1];
        for &v in &order {
            levels[self.dist[v]].push(v);
        }
        levels
    }

    /// Picks a separator for one connected component of at least two vertices.
    fn split(&mut self, comp: &[VertexId]) -> Vec<VertexId> {
        let size = comp.len();
        let levels = self.levels(comp);
        let depth = levels.len() - 1;

        // BFS level with the fewest vertices among those leaving both sides
        // within two thirds, else the most balanced one
        let mut below = 0;
        let mut level_pick: Option<(bool, usize, usize, usize)> = None;
        for (i, level) in levels.iter().enumerate() {
            let above = size - below - level.len();
            let worst = below.max(above);
            let balanced = 3 * worst <= 2 * size;
            let key = if balanced {
                (false, level.len(), worst, i)
            } else {
                (true, worst, level.len(), i)
            };
            if level_pick.is_none_or(|best| key < best) {
                level_pick = Some(key);
            }
            below += level.len();
        }
        let level_sep = levels[level_pick.unwrap().3].clone();

        let small_enough = (level_sep.len() as f64) <= 2.0 * (2.0 * size as f64).sqrt();
        if small_enough || size < 16 {
            return level_sep;
        }
        let mut best = {
            let largest = self.largest_after(comp, &level_sep);
            (score(largest, level_sep.len(), size), level_sep)
        };

        // fundamental cycles of a BFS tree rooted midway along the sweep path
        let root = {
            let mut v = *levels[depth].last().unwrap();
            let target = depth / 2;
            while self.dist[v] > target {
                v = self
                    .g
                    .neighbors(v)
                    .iter()
                    .map(|&(w, _)| w)
                    .filter(|&w| !self.removed[w] && self.dist[w] + 1 == self.dist[v])
                    .min()
                    .unwrap();
            }
            v
        };
        let tree_order = self.bfs(root, &[]);
        let mut parent = std::collections::HashMap::with_capacity(size);
        for &u in &tree_order {
            for &(w, _) in self.g.neighbors(u) {
                if !self.removed[w] && self.dist[w] == self.dist[u] + 1 {
                    parent.entry(w).or_insert(u);
                }
            }
        }
        let mut non_tree: Vec<(usize, VertexId, VertexId)> = Vec::new();
        for &u in comp {
            for &(w, _) in self.g.neighbors(u) {
                if u < w && !self.removed[w] && parent.get(&w) != Some(&u) && parent.get(&u) != Some(&w) {
                    non_tree.push((self.dist[u] + self.dist[w], u, w));
                }
            }
        }
        non_tree.sort_unstable_by(|a, b| b.cmp(a));
        const SAMPLES: usize = 48;
        let step = non_tree.len().div_ceil(SAMPLES).max(1);
        for &(_, u, w) in non_tree.iter().step_by(step) {
            let cycle = tree_cycle(&parent, &self.dist, u, w);
            if cycle.len() >= best.1.len() && !best.0 .0 {
                continue;
            }
            let largest = self.largest_after(comp, &cycle);
            let s = score(largest, cycle.len(), size);
            if s < best.0 {
                best = (s, cycle);
            }
        }
        best.1
    }
}

/// Lower is better: balanced first, then separator size, then balance.
fn score(largest: usize, sep: usize, size: usize) -> (bool, usize, usize) {
    let unbalanced = 3 * largest > 2 * size;
    if unbalanced {
        (true, largest, sep)
    } else {
        (false, sep, largest)
    }
}

fn tree_cycle(
    parent: &std::collections::HashMap<VertexId, VertexId>,
    dist: &[usize],
    mut a: VertexId,
    mut b: VertexId,
) -> Vec<VertexId> {
    let mut cycle = Vec::new();
    while dist[a] > dist[b] {
        cycle.push(a);
        a = parent[&a];
    }
    while dist[b] > dist[a] {
        cycle.push(b);
        b = parent[&b];
    }
    while a != b {
        cycle.push(a);
        cycle.push(b);
        a = parent[&a];
        b = parent[&b];
    }
    cycle.push(a);
    cycle
}

/// Splits the largest oversized component until every component fits.
fn recursive_separator(ws: &mut Workspace, limit: usize) -> Vec<VertexId> {
    let mut separator = Vec::new();
    let mut pending: Vec<Vec<VertexId>> = ws.g.components();
    while let Some(comp) = pending.pop() {
        if comp.len() <= limit {
            continue;
        }
        let sep = ws.split(&comp);
        debug_assert!(!sep.is_empty());
        let parts = ws.split_components(&comp, &sep);
        for &v in &sep {
            ws.removed[v] = true;
        }
        separator.extend(sep);
        pending.extend(parts);
    }
    separator
}

/// Repeatedly deletes a highest-degree vertex of an oversized component.
/// Gives up once `cap` vertices are spent, returning `None`.
fn peeling_separator(ws: &mut Workspace, limit: usize, cap: usize) -> Option<Vec<VertexId>> {
    let mut separator = Vec::new();
    let mut pending: Vec<Vec<VertexId>> = ws.g.components();
    while let Some(comp) = pending.pop() {
        if comp.len() <= limit {
            continue;
        }
        if separator.len() + 1 >= cap {
            return None;
        }
        let live = |v: VertexId, ws: &Workspace| ws.g.neighbors(v).iter().filter(|&&(w, _)| !ws.removed[w]).count();
        let v = *comp.iter().max_by_key(|&&v| (live(v, ws), std::cmp::Reverse(v))).unwrap();
        ws.removed[v] = true;
        separator.push(v);
        pending.extend(ws.split_components(&comp, &[v]));
    }
    Some(separator)
}

/// Cuts whole BFS levels of each oversized component: the cheapest set of
/// levels such that the levels between two consecutive cuts hold at most
/// `limit` vertices, by dynamic programming over the level sizes.
fn layered_separator(ws: &mut Workspace, limit: usize) -> Vec<VertexId> {
    let mut separator = Vec::new();
    for comp in ws.g.components() {
        if comp.len() <= limit {
            continue;
        }
        let levels = ws.levels(&comp);
        let sizes: Vec<usize> = levels.iter().map(Vec::len).collect();
        let d = sizes.len();
        // best[i]: cheapest cut of levels 0..=i with level i cut
        let mut best = vec![usize::MAX; d];
        let mut prev = vec![None; d];
        for i in 0..d {
            let mut band = 0;
            let mut j = i;
            // j: candidate previous cut, scanned downwards
            loop {
                if j == 0 {
                    if band <= limit {
                        let cost = sizes[i];
                        if cost < best[i] {
                            best[i] = cost;
                            prev[i] = None;
                        }
                    }
                    break;
                }
                j -= 1;
                if band <= limit && best[j] != usize::MAX && best[j] + sizes[i] < best[i] {
                    best[i] = best[j] + sizes[i];
                    prev[i] = Some(j);
                }
                band += sizes[j];
                if band > limit {
                    break;
                }
            }
        }
        let mut tail = 0;
        let mut last = None;
        for i in (0..d).rev() {
            if tail > limit {
                break;
            }
            if best[i] != usize::MAX && last.is_none_or(|l: usize| best[i] < best[l]) {
                last = Some(i);
            }
            tail += sizes[i];
        }
        let mut cut = last;
        while let Some(i) = cut {
            separator.extend_from_slice(&levels[i]);
            cut = prev[i];
        }
    }
    separator
}

/// Finds `S` so that every component of `G - S` has at most `ceil(εn)`
/// vertices. The size guarantee holds by construction; `|S|` is best effort.
pub fn find_separator(g: &Graph, epsilon: f64, embedding: Option<&Embedding>) -> SeparatorResult {
    let n = g.n();
    let limit = component_limit(n, epsilon);
    let mut ws = Workspace::new(g);
    // cycles come from BFS trees, so a rotation system is only checked
    if let Some(emb) = embedding {
        debug_assert!(emb.matches(g), "embedding does not match the graph");
    }
    let bisected = recursive_separator(&mut ws, limit);
    let mut ws = Workspace::new(g);
    let layered = layered_separator(&mut ws, limit);
    let mut separator = if layered.len() < bisected.len() { layered } else { bisected };
    let mut ws = Workspace::new(g);
    if let Some(peeled) = peeling_separator(&mut ws, limit, separator.len()) {
        separator = peeled;
    }

    let mut ws = Workspace::new(g);
    let mut done = ws.split_components(&(0..n).collect::<Vec<_>>(), &separator);
    for c in &mut done {
        c.sort_unstable();
    }
    done.sort_unstable_by_key(|c| c[0]);
    separator.sort_unstable();
    SeparatorResult {
        separator,
        components: done,
        epsilon,
        limit,
        size_budget_estimate: if epsilon > 0.0 { (n as f64 / epsilon).sqrt() } else { f64::INFINITY },
    }
}

pub fn default_epsilon(n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        (n as f64).powf(-1.0 / 3.0)
    }
}

/// Colors from a separator: one color for edges touching `S`, one fresh color
/// per component with internal edges, components by smallest vertex.
pub fn separator_coloring(g: &Graph, sep: &SeparatorResult) -> EdgeColoring {
    let mut owner = vec![usize::MAX; g.n()];
    for (i, comp) in sep.components.iter().enumerate() {
        for &v in comp {
            owner[v] = i;
        }
    }
    let mut has_edges = vec![false; sep.components.len()];
    for &(u, v) in g.edges() {
        if owner[u] != usize::MAX && owner[v] != usize::MAX {
            has_edges[owner[u]] = true;
        }
    }
    let mut comp_color = vec![0; sep.components.len()];
    let mut next = 1;
    for (i, &used) in has_edges.iter().enumerate() {
        if used {
            comp_color[i] = next;
            next += 1;
        }
    }
    let colors = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            if owner[u] == usize::MAX || owner[v] == usize::MAX {
                0
            } else {
                debug_assert_eq!(owner[u], owner[v]);
                comp_color[owner[u]]
            }
        })
        .collect();
    EdgeColoring::new(colors)
}

/// Planar approximation with `ε = n^(-1/3)` unless overridden.
pub fn approx_planar(g: &Graph, embedding: Option<&Embedding>, epsilon: Option<f64>) -> SolveReport {
    let start = Instant::now();
    let n = g.n();
    let lower = best_lower_bound(g, 2);
    if n < 8 {
        let small = if g.m() <= 16 {
            solve_exact(g, &QSpec::Uniform(2), &OracleConfig::default()).ok()
        } else {
            None
        };
        let report = small.unwrap_or_else(|| trivial_coloring(g));
        let method = format!("planar/{}", report.method);
        let mut report = SolveReport { method, ..report };
        report.lower_bound = report.lower_bound.max(lower).min(report.value);
        return report;
    }
    let eps = epsilon.unwrap_or_else(|| default_epsilon(n));
    let sep = find_separator(g, eps, embedding);
    let coloring = separator_coloring(g, &sep);
    let report = SolveReport::new(coloring, "planar", lower, start.elapsed());
    let ratio = if lower == 0 { 1.0 } else { report.value as f64 / lower as f64 };
    report
        .with_stat("separator_size", sep.separator.len())
        .with_stat("num_components", sep.components.len())
        .with_stat("epsilon_used", eps)
        .with_stat("component_limit", sep.limit)
        .with_stat("ratio", ratio)
}
