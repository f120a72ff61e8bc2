//! Lower bounds on the min-max objective and the one-color baseline.

use std::time::Instant;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Color, EdgeColoring, Graph, SolveReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph is not a tree")]
pub struct NotATree;

/// `ceil(Δ / q)`: a vertex of maximum degree spreads its edges over at most
/// `q` groups.
pub fn max_degree_bound(g: &Graph, q: usize) -> usize {
    if g.m() == 0 {
        return 0;
    }
    g.max_degree().div_ceil(q)
}

/// `d² / (2q²)` with `d = 2m/n`, kept exact.
pub fn avg_degree_bound(g: &Graph, q: usize) -> Ratio<u64> {
    if g.m() == 0 {
        return Ratio::from_integer(0);
    }
    let d = g.degree_stats().avg_degree;
    d * d / Ratio::from_integer(2 * (q as u64) * (q as u64))
}

fn ceil_ratio(r: Ratio<u64>) -> usize {
    r.ceil().to_integer() as usize
}

/// Range `[ceil(Δ/2), Δ-1]` containing the optimum of a tree for q = 2.
/// A single edge gives `(1, 1)`; an edgeless tree gives `(0, 0)`.
pub fn tree_interval(g: &Graph) -> Result<(usize, usize), NotATree> {
    if !g.is_tree() {
        return Err(NotATree);
    }
    let delta = g.max_degree();
    Ok(match delta {
        0 => (0, 0),
        1 => (1, 1),
        _ => (delta.div_ceil(2), delta - 1),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub max_degree_bound: usize,
    #[serde(serialize_with = "ratio_as_string")]
    pub avg_degree_bound_real: Ratio<u64>,
    pub avg_degree_bound: usize,
    pub tree_interval: Option<(usize, usize)>,
    pub best: usize,
}

fn ratio_as_string<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// All applicable lower bounds for `g` under a uniform budget `q`.
///
/// The tree interval is only reported for trees with `q = 2`, where it holds.
pub fn bound_report(g: &Graph, q: usize) -> BoundReport {
    let max_degree_bound = max_degree_bound(g, q);
    let avg_degree_bound_real = avg_degree_bound(g, q);
    let avg_degree_bound = ceil_ratio(avg_degree_bound_real);
    let tree_interval = if q == 2 { tree_interval(g).ok() } else { None };
    let best = max_degree_bound
        .max(avg_degree_bound)
        .max(tree_interval.map_or(0, |(lo, _)| lo));
    BoundReport {
        max_degree_bound,
        avg_degree_bound_real,
        avg_degree_bound,
        tree_interval,
        best,
    }
}

pub fn best_lower_bound(g: &Graph, q: usize) -> usize {
    bound_report(g, q).best
}

/// Every edge gets color 0.
pub fn trivial_coloring(g: &Graph) -> SolveReport {
    let start = Instant::now();
    let report = SolveReport::new(
        EdgeColoring::uniform(g.m()),
        "trivial",
        best_lower_bound(g, 1),
        start.elapsed(),
    );
    let proven = report.value == report.lower_bound;
    SolveReport {
        proven_optimal: proven,
        ..report
    }
}

/// Average degree of each color's edge-induced subgraph, by ascending color.
pub fn color_subgraph_avg_degrees(g: &Graph, col: &EdgeColoring) -> Vec<(Color, Ratio<u64>)> {
    let mut per_color: std::collections::BTreeMap<Color, (usize, std::collections::HashSet<usize>)> =
        Default::default();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let entry = per_color.entry(col.color(e)).or_default();
        entry.0 += 1;
        entry.1.insert(u);
        entry.1.insert(v);
    }
    per_color
        .into_iter()
        .map(|(c, (edges, verts))| (c, Ratio::new(2 * edges as u64, verts.len() as u64)))
        .collect()
}

/// True iff some color subgraph has average degree at least `d(G)/q`.
pub fn has_dense_color_subgraph(g: &Graph, col: &EdgeColoring, q: usize) -> bool {
    if g.m() == 0 {
        return true;
    }
    let threshold = g.degree_stats().avg_degree / Ratio::from_integer(q as u64);
    color_subgraph_avg_degrees(g, col)
        .iter()
        .any(|&(_, d)| d >= threshold)
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, &pairs).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        let pairs: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, &pairs).unwrap()
    }

    fn hypercube(dim: u32) -> Graph {
        let n = 1usize << dim;
        let pairs: Vec<_> = (0..n)
            .flat_map(|x| (0..dim).map(move |b| (x, x ^ (1 << b))))
            .filter(|&(x, y)| x < y)
            .collect();
        Graph::new(n, &pairs).unwrap()
    }

    fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(max_degree_bound(&complete(6), 2), 3);
        assert_eq!(max_degree_bound(&star(9), 2), 5);
        assert_eq!(max_degree_bound(&hypercube(4), 2), 2);
        assert_eq!(max_degree_bound(&Graph::new(3, &[]).unwrap(), 2), 0);
    }

    #[test]
    fn avg_degree_examples() {
        assert_eq!(avg_degree_bound(&complete(6), 2), Ratio::new(25, 8));
        assert_eq!(avg_degree_bound(&hypercube(4), 2), Ratio::from_integer(2));
        for n in 2..20 {
            assert!(avg_degree_bound(&path(n), 2) < Ratio::from_integer(2));
        }
    }

    #[test]
    fn tree_interval_examples() {
        assert_eq!(tree_interval(&star(8)), Ok((4, 7)));
        assert_eq!(tree_interval(&path(3)), Ok((1, 1)));
        assert_eq!(tree_interval(&path(2)), Ok((1, 1)));
        // spider: center with five legs of length two
        let mut pairs = Vec::new();
        for leg in 0..5 {
            let a = 1 + 2 * leg;
            pairs.push((0, a));
            pairs.push((a, a + 1));
        }
        let spider = Graph::new(11, &pairs).unwrap();
        assert_eq!(tree_interval(&spider), Ok((3, 4)));
        assert_eq!(tree_interval(&complete(3)), Err(NotATree));
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(trivial_coloring(&complete(6)).value, 15);
        assert_eq!(trivial_coloring(&path(3)).value, 2);
        assert_eq!(trivial_coloring(&hypercube(3)).value, 12);
    }

    #[test]
    fn report_fields() {
        let r = bound_report(&complete(6), 2);
        assert_eq!(r.max_degree_bound, 3);
        assert_eq!(r.avg_degree_bound, 4);
        assert_eq!(r.tree_interval, None);
        assert_eq!(r.best, 4);
        let s = bound_report(&star(8), 2);
        assert_eq!(s.tree_interval, Some((4, 7)));
        assert_eq!(s.best, 4);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["avg_degree_bound_real"], "25/8");
        let empty = bound_report(&Graph::new(4, &[]).unwrap(), 2);
        assert_eq!(empty.best, 0);
    }

    #[test]
    fn subgraph_degrees() {
        let k6 = complete(6);
        assert_eq!(
            color_subgraph_avg_degrees(&k6, &EdgeColoring::uniform(15)),
            vec![(0, Ratio::from_integer(5))]
        );
        assert!(has_dense_color_subgraph(&k6, &EdgeColoring::uniform(15), 2));
    }
}
