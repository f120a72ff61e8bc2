//! Graph families and their constructive colorings.
//!
//! Cliques, bicliques and hypercubes come with closed-form optima or lower
//! bounds and with explicit 2-colorings that reach (or nearly reach) them.
//! Random trees, grids and random planar triangulations are generated for
//! testing the tree and planar solvers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Color, EdgeColoring, Graph, VertexId};
use crate::planar::Embedding;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParameters { family: &'static str, reason: String },
}

fn invalid(family: &'static str, reason: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParameters {
        family,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Clique(usize),
    /// Sides are stored larger first.
    Biclique(usize, usize),
    Hypercube(u32),
    RandomTree { n: usize, seed: u64 },
    Grid { rows: usize, cols: usize },
    RandomPlanar { n: usize, seed: u64 },
}

impl FamilySpec {
    pub fn biclique(a: usize, b: usize) -> Self {
        FamilySpec::Biclique(a.max(b), a.min(b))
    }
}

pub struct Generated {
    pub graph: Graph,
    /// Rotation system, for the planar families.
    pub embedding: Option<Embedding>,
}

pub fn gen(spec: &FamilySpec) -> Result<Graph, FamilyError> {
    gen_with_embedding(spec).map(|g| g.graph)
}

pub fn gen_with_embedding(spec: &FamilySpec) -> Result<Generated, FamilyError> {
    let plain = |graph| Ok(Generated { graph, embedding: None });
    match *spec {
        FamilySpec::Clique(n) => {
            if n == 0 {
                return Err(invalid("clique", "n must be positive"));
            }
            plain(clique(n))
        }
        FamilySpec::Biclique(a, b) => {
            if a == 0 || b == 0 {
                return Err(invalid("biclique", "both sides must be positive"));
            }
            plain(biclique(a.max(b), a.min(b)))
        }
        FamilySpec::Hypercube(d) => {
            if d == 0 || d > 24 {
                return Err(invalid("hypercube", "dimension must be in 1..=24"));
            }
            plain(hypercube(d))
        }
        FamilySpec::RandomTree { n, seed } => {
            if n == 0 {
                return Err(invalid("random-tree", "n must be positive"));
            }
            plain(random_tree(n, seed))
        }
        FamilySpec::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(invalid("grid", "rows and cols must be positive"));
            }
            let (graph, embedding) = grid(rows, cols);
            Ok(Generated {
                graph,
                embedding: Some(embedding),
            })
        }
        FamilySpec::RandomPlanar { n, seed } => {
            if n == 0 {
                return Err(invalid("random-planar", "n must be positive"));
            }
            let (graph, embedding) = random_planar(n, seed);
            Ok(Generated {
                graph,
                embedding: Some(embedding),
            })
        }
    }
}

fn build(n: usize, pairs: &[(VertexId, VertexId)]) -> Graph {
    Graph::new(n, pairs).expect("generators emit simple graphs")
}

pub fn clique(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    build(n, &pairs)
}

/// `K_{a,b}` with side `V1 = 0..a` and side `V2 = a..a+b`.
pub fn biclique(a: usize, b: usize) -> Graph {
    let pairs: Vec<_> = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).collect();
    build(a + b, &pairs)
}

/// `Q_d` on bitstrings `0..2^d`; edges listed by lower endpoint, then bit.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    let pairs: Vec<_> = (0..n)
        .flat_map(|x| (0..d).map(move |b| (x, x | (1 << b))))
        .filter(|&(x, y)| x != y)
        .collect();
    build(n, &pairs)
}

pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    build(n, &pairs)
}

pub fn star(leaves: usize) -> Graph {
    let pairs: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    build(leaves + 1, &pairs)
}

/// Each vertex `v > 0` attaches to a uniformly random earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    build(n, &pairs)
}

/// Grid with vertex `r * cols + c`; rotation order right, up, left, down.
pub fn grid(rows: usize, cols: usize) -> (Graph, Embedding) {
    let id = |r: usize, c: usize| r * cols + c;
    let mut pairs = Vec::new();
    let mut rotation = vec![Vec::new(); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                pairs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                pairs.push((id(r, c), id(r + 1, c)));
            }
            let rot = &mut rotation[id(r, c)];
            if c + 1 < cols {
                rot.push(id(r, c + 1));
            }
            if r > 0 {
                rot.push(id(r - 1, c));
            }
            if c > 0 {
                rot.push(id(r, c - 1));
            }
            if r + 1 < rows {
                rot.push(id(r + 1, c));
            }
        }
    }
    (build(rows * cols, &pairs), Embedding { rotation })
}

/// Random stacked triangulation: start from a triangle and repeatedly put a
/// new vertex inside a uniformly chosen face, joining it to the face corners.
///
/// The rotation system is maintained alongside. Faces are stored as
/// `(a, b, c)` with `c` following `b` in the rotation at `a`.
pub fn random_planar(n: usize, seed: u64) -> (Graph, Embedding) {
    match n {
        1 => return (build(1, &[]), Embedding { rotation: vec![vec![]] }),
        2 => {
            return (
                build(2, &[(0, 1)]),
                Embedding {
                    rotation: vec![vec![1], vec![0]],
                },
            )
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = vec![(0, 1), (1, 2), (0, 2)];
    let mut rotation: Vec<Vec<VertexId>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let mut faces: Vec<(VertexId, VertexId, VertexId)> = vec![(0, 1, 2), (0, 2, 1)];
    fn insert_after(rot: &mut Vec<VertexId>, after: VertexId, w: VertexId) {
        let pos = rot.iter().position(|&x| x == after).expect("corner is a neighbor");
        rot.insert(pos + 1, w);
    }
    for w in 3..n {
        let (a, b, c) = faces.swap_remove(rng.gen_range(0..faces.len()));
        insert_after(&mut rotation[a], b, w);
        insert_after(&mut rotation[b], c, w);
        insert_after(&mut rotation[c], a, w);
        rotation.push(vec![a, b, c]);
        pairs.extend([(a, w), (b, w), (c, w)]);
        faces.extend([(a, b, w), (b, c, w), (c, a, w)]);
    }
    (build(n, &pairs), Embedding { rotation })
}

/// Exact optimum for `K_n` under `q = 2`, by the remainder of `n` mod 3.
pub fn clique_opt_value(n: usize) -> usize {
    let k = n / 3;
    let edges = n * n.saturating_sub(1) / 2;
    let third = edges.div_ceil(3);
    match n % 3 {
        0 => third,
        1 => third.max((5 * k * (k + 1)).div_ceil(4)),
        _ => third.max((k + 1) * (k + 1)),
    }
}

/// Vertex groups of the three-color clique construction, larger groups first.
fn clique_groups(n: usize) -> [std::ops::Range<usize>; 3] {
    let k = n / 3;
    let r = n % 3;
    let sizes = [k + usize::from(r > 0), k + usize::from(r > 1), k];
    let a = sizes[0];
    let b = a + sizes[1];
    [0..a, a..b, b..n]
}

/// Splits intra-group edges between the two colors of each group.
///
/// Color 0 spans groups (0,1), color 1 groups (0,2), color 2 groups (1,2).
/// Returns how many intra edges of group 0 go to color 0, of group 1 to
/// color 0, and of group 2 to color 1; the rest go to the group's other color.
fn clique_split(sizes: [usize; 3]) -> (usize, usize, usize) {
    let intra = sizes.map(|s| s * s.saturating_sub(1) / 2);
    let cross = [sizes[0] * sizes[1], sizes[0] * sizes[2], sizes[1] * sizes[2]];
    let fits = |bound: usize| -> Option<(usize, usize, usize)> {
        if cross.iter().any(|&c| c > bound) {
            return None;
        }
        (0..=intra[0]).find_map(|x| {
            let room0 = bound.checked_sub(cross[0] + x)?;
            let room1 = bound.checked_sub(cross[1] + intra[0] - x)?;
            let y = intra[1].min(room0);
            let z = intra[2].min(room1);
            let color2 = cross[2] + intra[1] - y + intra[2] - z;
            (color2 <= bound).then_some((x, y, z))
        })
    };
    let total: usize = intra.iter().chain(cross.iter()).sum();
    let (mut lo, mut hi) = (total.div_ceil(3), total);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fits(mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    fits(lo).expect("the whole edge count always fits")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0}")]
    Unsupported(String),
    #[error("construction reached {got} but the expected optimum is {expected}")]
    Mismatch { got: usize, expected: usize },
}

/// Three-color coloring of `K_n` (edge order as in [`clique`]).
///
/// Vertices are split into three near-equal groups; each color takes the
/// edges between one pair of groups plus part of the two groups' inner edges.
pub fn clique_coloring(n: usize) -> Result<EdgeColoring, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Unsupported(format!(
            "clique coloring needs n >= 3, got {n}"
        )));
    }
    let groups = clique_groups(n);
    let group_of = |v: usize| groups.iter().position(|g| g.contains(&v)).unwrap();
    let (x, y, z) = clique_split(groups.clone().map(|g| g.len()));
    // per group: (first color, how many intra edges take it, second color)
    let plan = [(0, x, 1), (0, y, 2), (1, z, 2)];
    let mut taken = [0usize; 3];
    let g = clique(n);
    let colors: Vec<Color> = g
        .edges()
        .iter()
        .map(|&(u, v)| match (group_of(u), group_of(v)) {
            (a, b) if a == b => {
                let (first, quota, second) = plan[a];
                taken[a] += 1;
                if taken[a] <= quota {
                    first
                } else {
                    second
                }
            }
            (0, 1) => 0,
            (0, 2) => 1,
            _ => 2,
        })
        .collect();
    let col = EdgeColoring::new(colors).canonicalize();
    let expected = clique_opt_value(n);
    if col.max_group() != expected {
        return Err(ConstructionError::Mismatch {
            got: col.max_group(),
            expected,
        });
    }
    Ok(col)
}

/// `ceil(mn/4)`.
pub fn biclique_bound(m: usize, n: usize) -> usize {
    (m * n).div_ceil(4)
}

/// Four-block coloring of `K_{m,n}` (vertex layout as in [`biclique`] with
/// the larger side first). Each side is halved, the larger half taking the
/// lower ids, and each pair of halves gets its own color. Empty halves (a
/// side of size one) simply drop their blocks.
pub fn biclique_coloring(m: usize, n: usize) -> Result<EdgeColoring, ConstructionError> {
    if m == 0 || n == 0 {
        return Err(ConstructionError::Unsupported("biclique sides must be positive".into()));
    }
    let (a, b) = (m.max(n), m.min(n));
    let (ha, hb) = (a.div_ceil(2), b.div_ceil(2));
    let g = biclique(a, b);
    let colors = g
        .edges()
        .iter()
        .map(|&(u, v)| 2 * usize::from(u >= ha) + usize::from(v - a >= hb))
        .collect();
    Ok(EdgeColoring::new(colors).canonicalize())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypercubeBound {
    /// `(d/2) * 2^(d/2 - 1)`.
    pub value: f64,
    /// Exact value for even `d`.
    pub exact: Option<usize>,
    pub ceil: usize,
}

pub fn hypercube_bound(d: u32) -> HypercubeBound {
    if d % 2 == 0 {
        let half = d / 2;
        let v = if half == 0 { 0 } else { half as usize * (1usize << (half - 1)) };
        HypercubeBound {
            value: v as f64,
            exact: Some(v),
            ceil: v,
        }
    } else {
        let value = d as f64 / 2.0 * 2f64.powf(d as f64 / 2.0 - 1.0);
        HypercubeBound {
            value,
            exact: None,
            ceil: value.ceil() as usize,
        }
    }
}

/// Largest edge count of a `k`-vertex subgraph of a hypercube: `(k/2) log2 k`.
pub fn subgraph_edge_bound(k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    k as f64 / 2.0 * (k as f64).log2()
}

/// Color of hypercube edge `(x, x ^ (1 << bit))` in the even construction
/// on `2h` bits: flipping a low bit keeps the high half fixed and vice versa.
fn even_cube_color(x: usize, bit: u32, h: u32) -> Color {
    let low_mask = (1usize << h) - 1;
    if bit < h {
        x >> h
    } else {
        (1usize << h) + (x & low_mask)
    }
}

/// Coloring of `Q_d` (edge order as in [`hypercube`]).
///
/// Even `d = 2h`: every color is an `h`-subcube, `h * 2^(h-1)` edges each.
/// Odd `d = 2h + 1`: the two halves along the top bit are colored alike and
/// each color also takes `2^(h-1)` of the matching edges between them, for
/// `(2h + 1) * 2^(h-1)` edges per color.
pub fn hypercube_coloring(d: u32) -> Result<EdgeColoring, ConstructionError> {
    if d == 0 {
        return Err(ConstructionError::Unsupported("dimension must be positive".into()));
    }
    if d == 1 {
        return Ok(EdgeColoring::uniform(1));
    }
    let g = hypercube(d);
    let h = d / 2;
    let top = 2 * h;
    let colors = g
        .edges()
        .iter()
        .map(|&(x, y)| {
            let bit = (x ^ y).trailing_zeros();
            let x = x & ((1usize << top) - 1);
            if bit < top {
                even_cube_color(x, bit, h)
            } else {
                // matching edge: the lower endpoint belongs to the row
                // subcube and the column subcube; alternate like a checkerboard
                let (row, col) = (x >> h, x & ((1usize << h) - 1));
                if (row + col) % 2 == 0 {
                    even_cube_color(x, 0, h)
                } else {
                    even_cube_color(x, h, h)
                }
            }
        })
        .collect();
    Ok(EdgeColoring::new(colors).canonicalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{validate, QSpec};

    fn feasible2(g: &Graph, col: &EdgeColoring) -> bool {
        validate(g, &QSpec::Uniform(2), col).unwrap().is_feasible()
    }

    #[test]
    fn generator_sizes() {
        let k6 = gen(&FamilySpec::Clique(6)).unwrap();
        assert_eq!((k6.n(), k6.m()), (6, 15));
        let q3 = gen(&FamilySpec::Hypercube(3)).unwrap();
        assert_eq!((q3.n(), q3.m()), (8, 12));
        let kb = gen(&FamilySpec::biclique(2, 4)).unwrap();
        assert_eq!((kb.n(), kb.m()), (6, 8));
        assert_eq!(FamilySpec::biclique(2, 4), FamilySpec::Biclique(4, 2));
        let grid = gen(&FamilySpec::Grid { rows: 3, cols: 4 }).unwrap();
        assert_eq!((grid.n(), grid.m()), (12, 17));
        assert!(gen(&FamilySpec::Clique(0)).is_err());
        assert!(gen(&FamilySpec::Hypercube(0)).is_err());
    }

    #[test]
    fn random_families_are_seeded() {
        let a = gen(&FamilySpec::RandomTree { n: 12, seed: 7 }).unwrap();
        let b = gen(&FamilySpec::RandomTree { n: 12, seed: 7 }).unwrap();
        assert_eq!(a, b);
        assert!(a.is_tree());
        let p = gen(&FamilySpec::RandomPlanar { n: 50, seed: 7 }).unwrap();
        assert_eq!(p, gen(&FamilySpec::RandomPlanar { n: 50, seed: 7 }).unwrap());
        assert_eq!(p.m(), 3 * 50 - 6);
    }

    #[test]
    fn planar_rotation_matches_adjacency() {
        for (n, seed) in [(3, 1), (10, 2), (200, 3)] {
            let (g, emb) = random_planar(n, seed);
            for v in 0..n {
                let mut rot = emb.rotation[v].clone();
                let mut adj: Vec<_> = g.neighbors(v).iter().map(|&(w, _)| w).collect();
                rot.sort_unstable();
                adj.sort_unstable();
                assert_eq!(rot, adj);
            }
            assert_eq!(emb.face_count(), 2 * n - 4);
        }
        let (_, emb) = grid(4, 5);
        assert_eq!(emb.face_count(), 31 - 20 + 2);
    }

    #[test]
    fn clique_values() {
        assert_eq!(clique_opt_value(6), 5);
        assert_eq!(clique_opt_value(7), 8);
        assert_eq!(clique_opt_value(5), 4);
        assert_eq!(clique_opt_value(4), 3);
        assert_eq!(clique_opt_value(3), 1);
        assert_eq!(clique_opt_value(2), 1);
    }

    #[test]
    fn clique_constructions() {
        let c6 = clique_coloring(6).unwrap();
        assert_eq!(c6.num_colors(), 3);
        assert!(c6.group_sizes().sizes.values().all(|&s| s == 5));
        assert_eq!(clique_coloring(3).unwrap().max_group(), 1);
        assert_eq!(clique_coloring(3).unwrap().num_colors(), 3);
        let c5 = clique_coloring(5).unwrap();
        assert!(feasible2(&clique(5), &c5));
        assert_eq!(c5.max_group(), 4);
        for n in 3..=40 {
            let col = clique_coloring(n).unwrap();
            let g = clique(n);
            let f = validate(&g, &QSpec::Uniform(2), &col).unwrap();
            assert!(f.is_feasible(), "n = {n}");
            assert!(f.incident_colors.iter().all(|&c| c == 2));
            assert_eq!(col.max_group(), clique_opt_value(n));
        }
        assert!(clique_coloring(2).is_err());
    }

    #[test]
    fn biclique_values() {
        assert_eq!(biclique_bound(2, 4), 2);
        assert_eq!(biclique_bound(2, 2), 1);
        assert_eq!(biclique_bound(3, 3), 3);
        let c = biclique_coloring(2, 4).unwrap();
        assert_eq!(c.num_colors(), 4);
        assert_eq!(c.max_group(), 2);
        assert_eq!(biclique_coloring(2, 2).unwrap().max_group(), 1);
        assert_eq!(biclique_coloring(3, 3).unwrap().max_group(), 4);
        let star = biclique_coloring(5, 1).unwrap();
        assert_eq!((star.num_colors(), star.max_group()), (2, 3));
        for a in 1..=12 {
            for b in 1..=12 {
                let col = biclique_coloring(a, b).unwrap();
                let g = biclique(a.max(b), a.min(b));
                assert!(feasible2(&g, &col));
                assert_eq!(col.max_group(), a.div_ceil(2) * b.div_ceil(2));
                if a % 2 == 0 && b % 2 == 0 {
                    assert_eq!(col.max_group(), biclique_bound(a, b));
                }
            }
        }
    }

    #[test]
    fn hypercube_values() {
        assert_eq!(hypercube_bound(4).exact, Some(4));
        assert_eq!(hypercube_bound(2).exact, Some(1));
        let b3 = hypercube_bound(3);
        assert!((b3.value - 1.5 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(b3.ceil, 3);
        assert_eq!(b3.exact, None);
    }

    #[test]
    fn hypercube_constructions() {
        let c4 = hypercube_coloring(4).unwrap();
        assert_eq!(c4.num_colors(), 8);
        assert!(c4.group_sizes().sizes.values().all(|&s| s == 4));
        let c2 = hypercube_coloring(2).unwrap();
        assert_eq!((c2.num_colors(), c2.max_group()), (4, 1));
        assert_eq!(hypercube_coloring(3).unwrap().max_group(), 3);
        assert_eq!(hypercube_coloring(1).unwrap().max_group(), 1);
        for d in 1..=10u32 {
            let col = hypercube_coloring(d).unwrap();
            assert!(feasible2(&hypercube(d), &col), "d = {d}");
            let h = d / 2;
            let sizes: Vec<_> = col.group_sizes().sizes.into_values().collect();
            if d % 2 == 0 {
                assert_eq!(col.max_group(), hypercube_bound(d).exact.unwrap());
                assert_eq!(sizes.len(), 2 << h);
            } else if d > 1 {
                assert_eq!(col.max_group(), (2 * h as usize + 1) << (h - 1));
            }
            assert!(sizes.iter().all(|&s| s == col.max_group()));
        }
    }

    #[test]
    fn subgraph_bound_examples() {
        assert_eq!(subgraph_edge_bound(1), 0.0);
        assert_eq!(subgraph_edge_bound(4), 4.0);
        assert_eq!(subgraph_edge_bound(8), 12.0);
    }
}
