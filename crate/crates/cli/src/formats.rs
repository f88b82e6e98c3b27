//! JSON documents for instances and tours.
//!
//! Instance document:
//! ```json
//! {"aisles": 2, "cross_aisles": 2, "block_lengths": [10],
//!  "gap_widths": [5], "depot": {"aisle": 1, "cross_aisle": 1},
//!  "items": [{"aisle": 1, "block": 1, "offset": 4}]}
//! ```
//! Tour document, using the vertex ids the graph builder assigns:
//! ```json
//! {"edges": [{"from": 0, "to": 1, "mult": 2}]}
//! ```
//! Unknown keys are rejected; item order is preserved; output is
//! pretty-printed with a stable key order so diffs stay meaningful.

use std::fmt;

use serde::{Deserialize, Serialize};

use pickroute_core::model::{
    DepotLocation, InstanceError, ItemLocation, Length, WarehouseGraph, WarehouseInstance,
};
use pickroute_core::tour::TourSubgraph;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    aisles: u32,
    cross_aisles: u32,
    block_lengths: Vec<Length>,
    gap_widths: Vec<Length>,
    depot: DepotDoc,
    items: Vec<ItemDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DepotDoc {
    aisle: u32,
    cross_aisle: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemDoc {
    aisle: u32,
    block: u32,
    offset: Length,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TourDoc {
    edges: Vec<TourEdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TourEdgeDoc {
    from: usize,
    to: usize,
    mult: u32,
}

#[derive(Debug)]
pub enum FormatError {
    /// Malformed JSON or schema mismatch.
    Malformed(String),
    /// The document parsed but violates an instance invariant.
    Instance(InstanceError),
    /// A tour edge references a vertex the graph does not have.
    UnknownVertex { vertex: usize },
    /// No edge joins the two vertices.
    UnknownEdge { from: usize, to: usize },
    /// The same edge appears twice in a tour document.
    DuplicateEdge { from: usize, to: usize },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Malformed(msg) => write!(f, "malformed document: {msg}"),
            FormatError::Instance(err) => write!(f, "invalid instance: {err}"),
            FormatError::UnknownVertex { vertex } => write!(f, "unknown vertex id {vertex}"),
            FormatError::UnknownEdge { from, to } => {
                write!(f, "no edge between vertices {from} and {to}")
            }
            FormatError::DuplicateEdge { from, to } => {
                write!(f, "edge between {from} and {to} listed twice")
            }
        }
    }
}

impl std::error::Error for FormatError {}

pub fn parse_instance(text: &str) -> Result<WarehouseInstance, FormatError> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| FormatError::Malformed(e.to_string()))?;
    WarehouseInstance::new(
        doc.aisles,
        doc.cross_aisles,
        doc.block_lengths,
        doc.gap_widths,
        doc.items
            .into_iter()
            .map(|i| ItemLocation {
                aisle: i.aisle,
                block: i.block,
                offset: i.offset,
            })
            .collect(),
        DepotLocation {
            aisle: doc.depot.aisle,
            cross_aisle: doc.depot.cross_aisle,
        },
    )
    .map_err(FormatError::Instance)
}

pub fn instance_to_json(instance: &WarehouseInstance) -> String {
    let doc = InstanceDoc {
        aisles: instance.aisles(),
        cross_aisles: instance.cross_aisles(),
        block_lengths: instance.block_lengths().to_vec(),
        gap_widths: instance.gap_widths().to_vec(),
        depot: DepotDoc {
            aisle: instance.depot().aisle,
            cross_aisle: instance.depot().cross_aisle,
        },
        items: instance
            .items()
            .iter()
            .map(|i| ItemDoc {
                aisle: i.aisle,
                block: i.block,
                offset: i.offset,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("instances serialize");
    out.push('\n');
    out
}

/// Reads a tour document against a graph. Edges are matched by their two
/// endpoint ids; anything the graph does not have is an error.
pub fn parse_tour(text: &str, graph: &WarehouseGraph) -> Result<TourSubgraph, FormatError> {
    let doc: TourDoc =
        serde_json::from_str(text).map_err(|e| FormatError::Malformed(e.to_string()))?;
    let mut t = TourSubgraph::empty(graph);
    let mut seen = vec![false; graph.edge_count()];
    for entry in &doc.edges {
        for v in [entry.from, entry.to] {
            if v >= graph.vertex_count() {
                return Err(FormatError::UnknownVertex { vertex: v });
            }
        }
        let edge = graph
            .incident_edges(entry.from)
            .iter()
            .copied()
            .find(|&e| graph.other_end(e, entry.from) == entry.to)
            .ok_or(FormatError::UnknownEdge {
                from: entry.from,
                to: entry.to,
            })?;
        if seen[edge] {
            return Err(FormatError::DuplicateEdge {
                from: entry.from,
                to: entry.to,
            });
        }
        seen[edge] = true;
        t.set_multiplicity(edge, entry.mult);
    }
    Ok(t)
}

/// Writes the nonzero edges in edge-id order, endpoints low id first.
pub fn tour_to_json(graph: &WarehouseGraph, t: &TourSubgraph) -> String {
    let edges: Vec<TourEdgeDoc> = (0..graph.edge_count())
        .filter(|&e| t.multiplicity(e) > 0)
        .map(|e| {
            let edge = graph.edge(e);
            TourEdgeDoc {
                from: edge.a.min(edge.b),
                to: edge.a.max(edge.b),
                mult: t.multiplicity(e),
            }
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&TourDoc { edges }).expect("tours serialize");
    out.push('\n');
    out
}
