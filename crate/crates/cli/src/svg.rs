//! Static SVG rendering of a warehouse and a tour: aisles and cross-aisles
//! to scale, items as dots, the depot as a square, and one `<g
//! class="seg">` group per used edge with parallel strokes showing the
//! multiplicity.

use std::fmt::Write;

use pickroute_core::model::{EdgeKind, VertexKind, WarehouseGraph, WarehouseInstance};
use pickroute_core::tour::TourSubgraph;

const CANVAS: f64 = 720.0;
const MARGIN: f64 = 40.0;

struct Layout {
    xs: Vec<f64>,
    ys: Vec<f64>,
    height: f64,
}

impl Layout {
    fn new(instance: &WarehouseInstance) -> Layout {
        let mut xs = vec![0.0];
        for g in 1..instance.aisles() {
            xs.push(xs[(g - 1) as usize] + instance.gap_width(g) as f64);
        }
        let mut ys = vec![0.0];
        for b in 1..instance.cross_aisles() {
            ys.push(ys[(b - 1) as usize] + instance.block_length(b) as f64);
        }
        let w = xs.last().copied().unwrap_or(0.0).max(1.0);
        let h = ys.last().copied().unwrap_or(0.0).max(1.0);
        let scale = (CANVAS - 2.0 * MARGIN) / w.max(h);
        let height = h * scale + 2.0 * MARGIN;
        Layout {
            xs: xs.iter().map(|x| MARGIN + x * scale).collect(),
            ys: ys.iter().map(|y| y * scale).collect(),
            height,
        }
    }

    fn x(&self, aisle: u32) -> f64 {
        self.xs[(aisle - 1) as usize]
    }

    /// Row 1 sits at the bottom of the picture.
    fn y(&self, from_bottom: f64) -> f64 {
        self.height - MARGIN - from_bottom
    }

    fn y_row(&self, row: u32) -> f64 {
        self.y(self.ys[(row - 1) as usize])
    }
}

fn vertex_position(
    layout: &Layout,
    instance: &WarehouseInstance,
    graph: &WarehouseGraph,
    v: usize,
) -> (f64, f64) {
    match graph.vertex(v) {
        VertexKind::Intersection { aisle, row } => (layout.x(*aisle), layout.y_row(*row)),
        VertexKind::Item {
            aisle,
            block,
            offset,
            ..
        } => {
            let base = layout.ys[(*block - 1) as usize];
            let span = layout.ys[*block as usize] - base;
            let frac = *offset as f64 / instance.block_length(*block) as f64;
            (layout.x(*aisle), layout.y(base + span * frac))
        }
    }
}

pub fn render(
    instance: &WarehouseInstance,
    graph: &WarehouseGraph,
    tour: &TourSubgraph,
) -> String {
    let layout = Layout::new(instance);
    let mut svg = String::new();
    let width = CANVAS;
    let height = layout.height;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Grid: every edge of the routing graph as a faint line.
    for e in 0..graph.edge_count() {
        let edge = graph.edge(e);
        let (x1, y1) = vertex_position(&layout, instance, graph, edge.a);
        let (x2, y2) = vertex_position(&layout, instance, graph, edge.b);
        let _ = writeln!(
            svg,
            r##"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="#cccccc" stroke-width="1"/>"##
        );
    }

    // Tour edges: one group per used edge, one stroke per copy, offset
    // perpendicular to the edge so doubles read as parallel tracks.
    for e in 0..graph.edge_count() {
        let mult = tour.multiplicity(e);
        if mult == 0 {
            continue;
        }
        let edge = graph.edge(e);
        let (x1, y1) = vertex_position(&layout, instance, graph, edge.a);
        let (x2, y2) = vertex_position(&layout, instance, graph, edge.b);
        let (ox, oy) = match edge.kind {
            EdgeKind::Vertical { .. } => (2.2, 0.0),
            EdgeKind::Horizontal { .. } => (0.0, 2.2),
        };
        let _ = writeln!(svg, r#"<g class="seg" data-mult="{mult}">"#);
        for copy in 0..mult {
            let shift = copy as f64 - (mult as f64 - 1.0) / 2.0;
            let (dx, dy) = (ox * shift, oy * shift);
            let _ = writeln!(
                svg,
                r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#d62728" stroke-width="2"/>"##,
                x1 + dx,
                y1 + dy,
                x2 + dx,
                y2 + dy
            );
        }
        let _ = writeln!(svg, "</g>");
    }

    // Items and depot on top.
    for &iv in graph.item_vertices() {
        let (x, y) = vertex_position(&layout, instance, graph, iv);
        let _ = writeln!(
            svg,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="#1f77b4"/>"##
        );
    }
    let (dx, dy) = vertex_position(&layout, instance, graph, graph.depot_vertex());
    let _ = writeln!(
        svg,
        r##"<rect x="{:.1}" y="{:.1}" width="10" height="10" fill="#2ca02c"/>"##,
        dx - 5.0,
        dy - 5.0
    );
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use pickroute_core::model::{build_graph, DepotLocation, ItemLocation, WarehouseInstance};

    #[test]
    fn seg_groups_match_used_edges() {
        let inst = WarehouseInstance::new(
            2,
            2,
            vec![10],
            vec![5],
            vec![ItemLocation {
                aisle: 1,
                block: 1,
                offset: 4,
            }],
            DepotLocation {
                aisle: 1,
                cross_aisle: 1,
            },
        )
        .unwrap();
        let graph = build_graph(&inst);
        let mut t = TourSubgraph::empty(&graph);
        t.set_multiplicity(0, 2);
        t.set_multiplicity(2, 1);
        let svg = render(&inst, &graph, &t);
        assert_eq!(svg.matches(r#"class="seg""#).count(), 2);
        assert!(svg.contains("</svg>"));
    }
}
