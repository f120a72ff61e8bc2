use std::fmt::Write as _;

use qcolor::{EdgeColoring, Graph};

pub const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#000000", "#f0c000",
];

/// Edges get `color` from the palette by color id; ids past the palette also
/// get a `label` so that reused palette entries stay distinguishable.
pub fn render(g: &Graph, col: &EdgeColoring) -> String {
    let mut out = String::from("graph qcolor {\n  node [shape=circle];\n");
    for v in 0..g.n() {
        writeln!(out, "  {v};").unwrap();
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let c = col.color(e);
        write!(out, "  {u} -- {v} [color=\"{}\"", PALETTE[c % PALETTE.len()]).unwrap();
        if c >= PALETTE.len() {
            write!(out, ", label=\"{c}\"").unwrap();
        }
        out.push_str("];\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_past_the_palette() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let dot = render(&g, &EdgeColoring::new(vec![0, 13]));
        assert!(dot.contains("0 -- 1 [color=\"#1f77b4\"];"));
        assert!(dot.contains("1 -- 2 [color=\"#ff7f0e\", label=\"13\"];"));
    }
}
