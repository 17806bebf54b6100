//! Graphviz output for Hasse diagrams.

use std::fmt::Write;

use crate::lattice::{ElementId, FiniteLattice};
use crate::ortho::Ortholattice;

#[derive(Clone, Copy, Debug, Default)]
pub struct DotOptions {
    /// Draw `x -- x⊥` as dashed undirected edges.
    pub perp: bool,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Bottom-up Hasse diagram: one node per element sorted by (height, name),
/// one `rank=same` group per height, one edge per cover.
pub fn lattice_dot(l: &FiniteLattice, name: &str) -> String {
    render(l, None, name, DotOptions::default())
}

pub fn ortho_dot(o: &Ortholattice, name: &str, opts: DotOptions) -> String {
    render(o.lattice(), Some(o.perp_table()), name, opts)
}

fn render(l: &FiniteLattice, perp: Option<&[ElementId]>, name: &str, opts: DotOptions) -> String {
    let heights = l.heights();
    let mut order: Vec<ElementId> = l.elements().collect();
    order.sort_by(|&x, &y| (heights[x.index()], l.name(x)).cmp(&(heights[y.index()], l.name(y))));
    let node = |x: ElementId| format!("n{}", x.index());

    let mut s = String::new();
    writeln!(s, "digraph {} {{", quote(name)).unwrap();
    writeln!(s, "  rankdir=BT;").unwrap();
    writeln!(s, "  node [shape=circle];").unwrap();
    for &x in &order {
        writeln!(s, "  {} [label={}];", node(x), quote(l.name(x))).unwrap();
    }
    let top = heights.iter().copied().max().unwrap_or(0);
    for h in 0..=top {
        let group: Vec<String> = order.iter().filter(|x| heights[x.index()] == h).map(|&x| node(x)).collect();
        if !group.is_empty() {
            writeln!(s, "  {{ rank=same; {}; }}", group.join("; ")).unwrap();
        }
    }
    let pos: Vec<usize> = {
        let mut p = vec![0; l.len()];
        for (i, x) in order.iter().enumerate() {
            p[x.index()] = i;
        }
        p
    };
    let mut covers = l.covers();
    covers.sort_by_key(|&(x, y)| (pos[x.index()], pos[y.index()]));
    for (x, y) in covers {
        writeln!(s, "  {} -> {};", node(x), node(y)).unwrap();
    }
    if let (Some(perp), true) = (perp, opts.perp) {
        for &x in &order {
            let y = perp[x.index()];
            if pos[x.index()] < pos[y.index()] {
                writeln!(s, "  {} -> {} [dir=none, style=dashed, constraint=false];", node(x), node(y)).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}
