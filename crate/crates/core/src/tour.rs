//! Tour subgraphs: edge multiplicity maps over the routing graph.
//!
//! A multiset of edges admits a closed picking walk from the depot exactly
//! when every pick vertex is touched, the used edges form one connected
//! piece, and every vertex has even degree. The validator reports every
//! violated condition with a witness vertex; `extract_walk` turns a valid
//! subgraph into an explicit vertex sequence.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{EdgeId, Length, VertexId, WarehouseGraph};

/// Edge multiplicities, dense over the graph's edge ids (missing = 0).
/// Solver output uses only 0/1/2 but the type deliberately accepts any
/// multiplicity so rewrites and stress tests can go beyond that.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TourSubgraph {
    mult: Vec<u32>,
}

impl TourSubgraph {
    pub fn empty(graph: &WarehouseGraph) -> Self {
        TourSubgraph {
            mult: vec![0; graph.edge_count()],
        }
    }

    /// Wraps a dense multiplicity vector; its length must match the graph.
    pub fn from_multiplicities(graph: &WarehouseGraph, mult: Vec<u32>) -> Self {
        assert_eq!(
            mult.len(),
            graph.edge_count(),
            "multiplicity vector must cover every edge"
        );
        TourSubgraph { mult }
    }

    pub fn multiplicity(&self, e: EdgeId) -> u32 {
        self.mult[e]
    }

    pub fn set_multiplicity(&mut self, e: EdgeId, m: u32) {
        self.mult[e] = m;
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.mult
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    pub fn degree(&self, graph: &WarehouseGraph, v: VertexId) -> u64 {
        graph
            .incident_edges(v)
            .iter()
            .map(|&e| self.mult[e] as u64)
            .sum()
    }

    /// Multiplicity-wise sum of two subgraphs over the same graph.
    pub fn sum(&self, other: &TourSubgraph) -> TourSubgraph {
        assert_eq!(self.mult.len(), other.mult.len());
        TourSubgraph {
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

/// The three tour-subgraph conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureCondition {
    ItemsCovered,
    Connected,
    EvenDegree,
}

impl fmt::Display for FailureCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FailureCondition::ItemsCovered => "items-covered",
            FailureCondition::Connected => "connected",
            FailureCondition::EvenDegree => "even-degree",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub condition: FailureCondition,
    pub witness: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    pub failures: Vec<Failure>,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the three conditions, reporting every violation.
///
/// Coverage asks each item vertex for nonzero degree; the depot needs
/// nonzero degree too unless the whole subgraph is empty and there is
/// nothing to pick (the empty tour). Connectivity is over vertices of
/// nonzero degree only.
pub fn is_tour_subgraph(graph: &WarehouseGraph, t: &TourSubgraph) -> ValidityReport {
    let mut failures = Vec::new();
    let degrees: Vec<u64> = (0..graph.vertex_count())
        .map(|v| t.degree(graph, v))
        .collect();

    let has_items = !graph.item_vertices().is_empty();
    let nonempty = degrees.iter().any(|&d| d > 0);
    let depot = graph.depot_vertex();
    if (has_items || nonempty) && degrees[depot] == 0 {
        failures.push(Failure {
            condition: FailureCondition::ItemsCovered,
            witness: depot,
        });
    }
    for &iv in graph.item_vertices() {
        if degrees[iv] == 0 {
            failures.push(Failure {
                condition: FailureCondition::ItemsCovered,
                witness: iv,
            });
        }
    }

    // One BFS per component over nonzero-degree vertices; the component
    // holding the depot (or the lowest active vertex) is the reference.
    let mut component = vec![usize::MAX; graph.vertex_count()];
    let mut reps = Vec::new();
    for start in 0..graph.vertex_count() {
        if degrees[start] == 0 || component[start] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(start);
        component[start] = id;
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for &e in graph.incident_edges(v) {
                if t.multiplicity(e) == 0 {
                    continue;
                }
                let u = graph.other_end(e, v);
                if component[u] == usize::MAX {
                    component[u] = id;
                    queue.push(u);
                }
            }
        }
    }
    if reps.len() > 1 {
        let reference = if degrees[depot] > 0 {
            component[depot]
        } else {
            0
        };
        for (id, &rep) in reps.iter().enumerate() {
            if id != reference {
                failures.push(Failure {
                    condition: FailureCondition::Connected,
                    witness: rep,
                });
            }
        }
    }

    for (v, &d) in degrees.iter().enumerate() {
        if d % 2 != 0 {
            failures.push(Failure {
                condition: FailureCondition::EvenDegree,
                witness: v,
            });
        }
    }

    ValidityReport { failures }
}

/// Total length: sum of multiplicity times edge length.
pub fn tour_length(graph: &WarehouseGraph, t: &TourSubgraph) -> Length {
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| t.multiplicity(e) as Length * edge.length)
        .sum()
}

/// A closed walk from the depot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<VertexId>,
    pub length: Length,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkError {
    InvalidSubgraph(ValidityReport),
}

impl fmt::Display for WalkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkError::InvalidSubgraph(report) => {
                write!(f, "not a tour subgraph ({} failures)", report.failures.len())
            }
        }
    }
}

impl core::error::Error for WalkError {}

/// Extracts an Euler circuit from the depot, using every edge exactly its
/// multiplicity. Edge choice is deterministic: lowest-id neighbour first.
/// An empty subgraph yields the walk that never leaves the depot.
pub fn extract_walk(graph: &WarehouseGraph, t: &TourSubgraph) -> Result<Walk, WalkError> {
    let report = is_tour_subgraph(graph, t);
    if !report.valid() {
        return Err(WalkError::InvalidSubgraph(report));
    }
    let depot = graph.depot_vertex();
    if t.is_empty() {
        return Ok(Walk {
            vertices: vec![depot],
            length: 0,
        });
    }

    let mut remaining: Vec<u32> = t.multiplicities().to_vec();
    let mut cursor = vec![0usize; graph.vertex_count()];
    let mut stack = vec![depot];
    let mut circuit = Vec::new();
    while let Some(&v) = stack.last() {
        let incident = graph.incident_edges(v);
        // Skip exhausted edges; a partially used edge must stay reachable,
        // so the cursor only moves past zeros.
        while cursor[v] < incident.len() && remaining[incident[cursor[v]]] == 0 {
            cursor[v] += 1;
        }
        if cursor[v] == incident.len() {
            circuit.push(v);
            stack.pop();
        } else {
            let e = incident[cursor[v]];
            remaining[e] -= 1;
            stack.push(graph.other_end(e, v));
        }
    }
    circuit.reverse();

    debug_assert!(remaining.iter().all(|&r| r == 0), "walk must use every edge");
    Ok(Walk {
        vertices: circuit,
        length: tour_length(graph, t),
    })
}
