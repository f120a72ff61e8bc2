//! Solvers for the min-max edge q-coloring problem.
//!
//! Color the edges of an undirected graph so that every vertex sees at most
//! `q` distinct colors, while keeping the largest color group as small as
//! possible. The crate provides:
//!
//! * [`graph`]: the graph/coloring model and feasibility checks,
//! * [`bounds`]: lower bounds and the one-color baseline,
//! * [`tree`]: an exact polynomial algorithm for trees with `q = 2`,
//! * [`oracle`]: an exact branch-and-bound solver for small instances,
//! * [`families`]: generators and constructive colorings for cliques,
//!   bicliques and hypercubes,
//! * [`planar`]: the separator-based approximation for planar graphs,
//! * [`reduction`]: the 1-in-3-SAT gadget construction,
//! * [`format`]: the line-oriented text formats.

pub mod bounds;
pub mod families;
pub mod format;
pub mod graph;
pub mod knapsack;
pub mod oracle;
pub mod planar;
pub mod reduction;
pub mod tree;

pub use graph::{EdgeColoring, Graph, QSpec, SolveReport};
