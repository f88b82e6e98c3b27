//! Warehouse instances and the routing graph built from them.
//!
//! A warehouse has `m >= 1` vertical aisles and `n >= 2` horizontal
//! cross-aisles. The stretch of an aisle between two consecutive
//! cross-aisles is a *block* (subaisle); items sit strictly inside blocks.
//! All distances are exact non-negative integers so that solver and oracle
//! results can be compared with plain equality.
//!
//! Indexing convention: aisles run 1..=m left to right, cross-aisles 1..=n
//! bottom to top. Block `j` of an aisle lies between cross-aisles `j` and
//! `j + 1`.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact integer distance. Callers scale real-world units themselves.
pub type Length = u64;

/// Index of a vertex in a [`WarehouseGraph`], stable across rebuilds of the
/// same instance.
pub type VertexId = usize;

/// Index of an edge in a [`WarehouseGraph`].
pub type EdgeId = usize;

/// A pick location: aisle, block, and distance from the block's lower
/// cross-aisle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemLocation {
    pub aisle: u32,
    pub block: u32,
    pub offset: Length,
}

/// The depot sits on an aisle/cross-aisle intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DepotLocation {
    pub aisle: u32,
    pub cross_aisle: u32,
}

/// A validated warehouse instance.
///
/// Invariants enforced by [`WarehouseInstance::new`]:
/// * every block length and gap width is strictly positive,
/// * `block_lengths.len() == n - 1` and `gap_widths.len() == m - 1`,
/// * every item offset `o` satisfies `0 < o < block_lengths[block - 1]`
///   (items never sit on a cross-aisle),
/// * depot indices are within bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WarehouseInstance {
    aisles: u32,
    cross_aisles: u32,
    block_lengths: Vec<Length>,
    gap_widths: Vec<Length>,
    items: Vec<ItemLocation>,
    depot: DepotLocation,
}

/// Why an instance was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    NoAisles,
    TooFewCrossAisles { cross_aisles: u32 },
    BlockLengthCount { expected: usize, found: usize },
    GapWidthCount { expected: usize, found: usize },
    ZeroBlockLength { block: u32 },
    ZeroGapWidth { gap: u32 },
    DepotOutOfBounds { aisle: u32, cross_aisle: u32 },
    ItemOutOfBounds { item: usize },
    /// Offset 0 or >= the block length would place the item on a cross-aisle.
    ItemOnCrossAisle { item: usize, offset: Length },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::NoAisles => write!(f, "aisles: must be at least 1"),
            InstanceError::TooFewCrossAisles { cross_aisles } => {
                write!(f, "cross_aisles: must be at least 2, got {cross_aisles}")
            }
            InstanceError::BlockLengthCount { expected, found } => {
                write!(f, "block_lengths: expected {expected} entries, found {found}")
            }
            InstanceError::GapWidthCount { expected, found } => {
                write!(f, "gap_widths: expected {expected} entries, found {found}")
            }
            InstanceError::ZeroBlockLength { block } => {
                write!(f, "block_lengths: block {block} has zero length")
            }
            InstanceError::ZeroGapWidth { gap } => {
                write!(f, "gap_widths: gap {gap} has zero width")
            }
            InstanceError::DepotOutOfBounds { aisle, cross_aisle } => {
                write!(f, "depot: ({aisle}, {cross_aisle}) out of bounds")
            }
            InstanceError::ItemOutOfBounds { item } => {
                write!(f, "items[{item}]: aisle or block out of bounds")
            }
            InstanceError::ItemOnCrossAisle { item, offset } => {
                write!(f, "items[{item}]: item on cross-aisle (offset {offset})")
            }
        }
    }
}

impl core::error::Error for InstanceError {}

impl WarehouseInstance {
    pub fn new(
        aisles: u32,
        cross_aisles: u32,
        block_lengths: Vec<Length>,
        gap_widths: Vec<Length>,
        items: Vec<ItemLocation>,
        depot: DepotLocation,
    ) -> Result<Self, InstanceError> {
        if aisles < 1 {
            return Err(InstanceError::NoAisles);
        }
        if cross_aisles < 2 {
            return Err(InstanceError::TooFewCrossAisles { cross_aisles });
        }
        let blocks = (cross_aisles - 1) as usize;
        if block_lengths.len() != blocks {
            return Err(InstanceError::BlockLengthCount {
                expected: blocks,
                found: block_lengths.len(),
            });
        }
        let gaps = (aisles - 1) as usize;
        if gap_widths.len() != gaps {
            return Err(InstanceError::GapWidthCount {
                expected: gaps,
                found: gap_widths.len(),
            });
        }
        if let Some(b) = block_lengths.iter().position(|&d| d == 0) {
            return Err(InstanceError::ZeroBlockLength { block: b as u32 + 1 });
        }
        if let Some(g) = gap_widths.iter().position(|&w| w == 0) {
            return Err(InstanceError::ZeroGapWidth { gap: g as u32 + 1 });
        }
        if depot.aisle < 1
            || depot.aisle > aisles
            || depot.cross_aisle < 1
            || depot.cross_aisle > cross_aisles
        {
            return Err(InstanceError::DepotOutOfBounds {
                aisle: depot.aisle,
                cross_aisle: depot.cross_aisle,
            });
        }
        for (idx, item) in items.iter().enumerate() {
            if item.aisle < 1
                || item.aisle > aisles
                || item.block < 1
                || item.block > cross_aisles - 1
            {
                return Err(InstanceError::ItemOutOfBounds { item: idx });
            }
            let d = block_lengths[(item.block - 1) as usize];
            if item.offset == 0 || item.offset >= d {
                return Err(InstanceError::ItemOnCrossAisle {
                    item: idx,
                    offset: item.offset,
                });
            }
        }
        Ok(WarehouseInstance {
            aisles,
            cross_aisles,
            block_lengths,
            gap_widths,
            items,
            depot,
        })
    }

    pub fn aisles(&self) -> u32 {
        self.aisles
    }

    pub fn cross_aisles(&self) -> u32 {
        self.cross_aisles
    }

    /// Number of blocks per aisle (`n - 1`).
    pub fn blocks(&self) -> u32 {
        self.cross_aisles - 1
    }

    pub fn block_lengths(&self) -> &[Length] {
        &self.block_lengths
    }

    pub fn gap_widths(&self) -> &[Length] {
        &self.gap_widths
    }

    /// Length of block `j` (1-based).
    pub fn block_length(&self, block: u32) -> Length {
        self.block_lengths[(block - 1) as usize]
    }

    /// Width of the gap between aisles `gap` and `gap + 1` (1-based).
    pub fn gap_width(&self, gap: u32) -> Length {
        self.gap_widths[(gap - 1) as usize]
    }

    /// The pick list, in document order.
    pub fn items(&self) -> &[ItemLocation] {
        &self.items
    }

    pub fn depot(&self) -> DepotLocation {
        self.depot
    }
}

/// What a graph vertex stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexKind {
    /// Intersection of `aisle` with cross-aisle `row`.
    Intersection { aisle: u32, row: u32 },
    /// A pick position. `labels` are the indices into the instance's pick
    /// list that collapse onto this point.
    Item {
        aisle: u32,
        block: u32,
        offset: Length,
        labels: Vec<usize>,
    },
}

/// Whether an edge is a piece of an aisle or of a cross-aisle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Segment inside block `block` of `aisle`.
    Vertical { aisle: u32, block: u32 },
    /// Cross-aisle piece between aisles `gap` and `gap + 1` on row `row`.
    Horizontal { gap: u32, row: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub length: Length,
    pub kind: EdgeKind,
}

/// The routing graph: `m * n` intersection vertices plus one vertex per
/// distinct pick position, connected by vertical segments along aisles and
/// horizontal segments along cross-aisles.
///
/// Vertex ids are deterministic: aisle-major, bottom to top within an aisle
/// (intersections interleaved with item vertices sorted by height). Edge ids
/// follow the same sweep, vertical segments first, then horizontal segments
/// gap-major by row.
#[derive(Debug, Clone)]
pub struct WarehouseGraph {
    vertices: Vec<VertexKind>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>,
    intersections: Vec<Vec<VertexId>>,
    block_segments: Vec<Vec<Vec<EdgeId>>>,
    block_offsets: Vec<Vec<Vec<Length>>>,
    horizontal: Vec<Vec<EdgeId>>,
    depot: VertexId,
    item_vertices: Vec<VertexId>,
    aisles: u32,
    cross_aisles: u32,
}

impl WarehouseGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, v: VertexId) -> &VertexKind {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    /// Edges incident to `v`, sorted so that the lowest-id neighbour comes
    /// first.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v]
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let edge = &self.edges[e];
        if edge.a == v {
            edge.b
        } else {
            edge.a
        }
    }

    pub fn aisles(&self) -> u32 {
        self.aisles
    }

    pub fn cross_aisles(&self) -> u32 {
        self.cross_aisles
    }

    /// Vertex at the intersection of `aisle` and cross-aisle `row` (1-based).
    pub fn intersection(&self, aisle: u32, row: u32) -> VertexId {
        self.intersections[(aisle - 1) as usize][(row - 1) as usize]
    }

    /// Vertical segments of block `block` in `aisle`, bottom to top.
    pub fn block_segments(&self, aisle: u32, block: u32) -> &[EdgeId] {
        &self.block_segments[(aisle - 1) as usize][(block - 1) as usize]
    }

    /// Distinct item offsets inside a block, ascending.
    pub fn block_item_offsets(&self, aisle: u32, block: u32) -> &[Length] {
        &self.block_offsets[(aisle - 1) as usize][(block - 1) as usize]
    }

    /// Horizontal edge between aisles `gap` and `gap + 1` on `row` (1-based).
    pub fn horizontal_edge(&self, gap: u32, row: u32) -> EdgeId {
        self.horizontal[(gap - 1) as usize][(row - 1) as usize]
    }

    pub fn depot_vertex(&self) -> VertexId {
        self.depot
    }

    /// Distinct item vertices in vertex-id order.
    pub fn item_vertices(&self) -> &[VertexId] {
        &self.item_vertices
    }
}

/// Builds the routing graph for an instance. Items sharing a position
/// collapse onto a single vertex carrying every pick-list label.
pub fn build_graph(instance: &WarehouseInstance) -> WarehouseGraph {
    let m = instance.aisles();
    let n = instance.cross_aisles();

    // Distinct item positions per (aisle, block), offset -> labels.
    let mut positions: BTreeMap<(u32, u32), BTreeMap<Length, Vec<usize>>> = BTreeMap::new();
    for (idx, item) in instance.items().iter().enumerate() {
        positions
            .entry((item.aisle, item.block))
            .or_default()
            .entry(item.offset)
            .or_default()
            .push(idx);
    }

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut intersections = vec![vec![0; n as usize]; m as usize];
    let mut block_segments = vec![vec![Vec::new(); (n - 1) as usize]; m as usize];
    let mut block_offsets = vec![vec![Vec::new(); (n - 1) as usize]; m as usize];
    let mut item_vertices = Vec::new();

    for aisle in 1..=m {
        let mut below: Option<VertexId> = None;
        for row in 1..=n {
            let v = vertices.len();
            vertices.push(VertexKind::Intersection { aisle, row });
            intersections[(aisle - 1) as usize][(row - 1) as usize] = v;
            if let Some(prev) = below {
                // Close the block below this row with its final segment.
                let block = row - 1;
                let d = instance.block_length(block);
                let last_offset = block_offsets[(aisle - 1) as usize][(block - 1) as usize]
                    .last()
                    .copied()
                    .unwrap_or(0);
                let e = edges.len();
                edges.push(Edge {
                    a: prev,
                    b: v,
                    length: d - last_offset,
                    kind: EdgeKind::Vertical { aisle, block },
                });
                block_segments[(aisle - 1) as usize][(block - 1) as usize].push(e);
            }
            if row < n {
                // Item vertices of the block above this row, bottom to top.
                let block = row;
                let mut prev = v;
                let mut prev_offset = 0;
                if let Some(by_offset) = positions.get(&(aisle, block)) {
                    for (&offset, labels) in by_offset {
                        let iv = vertices.len();
                        vertices.push(VertexKind::Item {
                            aisle,
                            block,
                            offset,
                            labels: labels.clone(),
                        });
                        item_vertices.push(iv);
                        let e = edges.len();
                        edges.push(Edge {
                            a: prev,
                            b: iv,
                            length: offset - prev_offset,
                            kind: EdgeKind::Vertical { aisle, block },
                        });
                        block_segments[(aisle - 1) as usize][(block - 1) as usize].push(e);
                        block_offsets[(aisle - 1) as usize][(block - 1) as usize].push(offset);
                        prev = iv;
                        prev_offset = offset;
                    }
                }
                below = Some(prev);
            }
        }
    }

    let mut horizontal = vec![vec![0; n as usize]; m.saturating_sub(1) as usize];
    for gap in 1..m {
        for row in 1..=n {
            let e = edges.len();
            edges.push(Edge {
                a: intersections[(gap - 1) as usize][(row - 1) as usize],
                b: intersections[gap as usize][(row - 1) as usize],
                length: instance.gap_width(gap),
                kind: EdgeKind::Horizontal { gap, row },
            });
            horizontal[(gap - 1) as usize][(row - 1) as usize] = e;
        }
    }

    let mut adjacency = vec![Vec::new(); vertices.len()];
    for (e, edge) in edges.iter().enumerate() {
        adjacency[edge.a].push(e);
        adjacency[edge.b].push(e);
    }
    for (v, list) in adjacency.iter_mut().enumerate() {
        let edges_ref = &edges;
        list.sort_by_key(|&e| {
            let other = if edges_ref[e].a == v {
                edges_ref[e].b
            } else {
                edges_ref[e].a
            };
            (other, e)
        });
    }

    let depot = intersections[(instance.depot().aisle - 1) as usize]
        [(instance.depot().cross_aisle - 1) as usize];

    WarehouseGraph {
        vertices,
        edges,
        adjacency,
        intersections,
        block_segments,
        block_offsets,
        horizontal,
        depot,
        item_vertices,
        aisles: m,
        cross_aisles: n,
    }
}

/// Exact shortest-path distances between a fixed list of terminal vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    terminals: Vec<VertexId>,
    dist: Vec<Vec<Length>>,
}

impl DistanceMatrix {
    pub fn terminals(&self) -> &[VertexId] {
        &self.terminals
    }

    /// Distance between terminals `i` and `j` (indices into `terminals`).
    pub fn distance(&self, i: usize, j: usize) -> Length {
        self.dist[i][j]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    UnknownVertex { vertex: VertexId },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::UnknownVertex { vertex } => write!(f, "unknown vertex id {vertex}"),
        }
    }
}

impl core::error::Error for GraphError {}

/// All-pairs shortest paths between `terminals`, by Dijkstra from each one.
pub fn shortest_paths(
    graph: &WarehouseGraph,
    terminals: &[VertexId],
) -> Result<DistanceMatrix, GraphError> {
    for &t in terminals {
        if t >= graph.vertex_count() {
            return Err(GraphError::UnknownVertex { vertex: t });
        }
    }
    let mut dist = Vec::with_capacity(terminals.len());
    for &source in terminals {
        let all = dijkstra(graph, source);
        dist.push(terminals.iter().map(|&t| all[t]).collect());
    }
    Ok(DistanceMatrix {
        terminals: terminals.to_vec(),
        dist,
    })
}

fn dijkstra(graph: &WarehouseGraph, source: VertexId) -> Vec<Length> {
    let mut dist = vec![Length::MAX; graph.vertex_count()];
    dist[source] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &e in graph.incident_edges(v) {
            let u = graph.other_end(e, v);
            let nd = d + graph.edge(e).length;
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse((nd, u)));
            }
        }
    }
    dist
}

/// Parameters for [`generate_instance`]. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub aisles: u32,
    pub cross_aisles: u32,
    pub items: u32,
    pub block_length_range: (Length, Length),
    pub gap_width_range: (Length, Length),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    InvalidDimensions { aisles: u32, cross_aisles: u32 },
    EmptyRange { lo: Length, hi: Length },
    /// Items were requested but no sampled block can hold an interior offset.
    NoInteriorPositions,
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidDimensions {
                aisles,
                cross_aisles,
            } => write!(f, "need m >= 1 and n >= 2, got m={aisles}, n={cross_aisles}"),
            GenError::EmptyRange { lo, hi } => write!(f, "empty length range {lo}..={hi}"),
            GenError::NoInteriorPositions => {
                write!(f, "no block admits an interior item offset (all lengths < 2)")
            }
        }
    }
}

impl core::error::Error for GenError {}

/// Draws a random valid instance, deterministically for a fixed seed.
///
/// Block lengths and gap widths are uniform over their ranges; the depot is
/// uniform over intersections; each item picks a uniform aisle, a uniform
/// block among those long enough to hold an interior offset, and a uniform
/// interior offset.
pub fn generate_instance(params: &GenParams, seed: u64) -> Result<WarehouseInstance, GenError> {
    if params.aisles < 1 || params.cross_aisles < 2 {
        return Err(GenError::InvalidDimensions {
            aisles: params.aisles,
            cross_aisles: params.cross_aisles,
        });
    }
    let (blo, bhi) = params.block_length_range;
    let (glo, ghi) = params.gap_width_range;
    if blo == 0 || blo > bhi {
        return Err(GenError::EmptyRange { lo: blo, hi: bhi });
    }
    if glo == 0 || glo > ghi {
        return Err(GenError::EmptyRange { lo: glo, hi: ghi });
    }
    if params.items > 0 && bhi < 2 {
        return Err(GenError::NoInteriorPositions);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = (params.cross_aisles - 1) as usize;

    let mut block_lengths: Vec<Length> = Vec::new();
    for attempt in 0.. {
        block_lengths = (0..blocks).map(|_| rng.gen_range(blo..=bhi)).collect();
        if params.items == 0 || block_lengths.iter().any(|&d| d >= 2) {
            break;
        }
        if attempt > 4096 {
            return Err(GenError::NoInteriorPositions);
        }
    }

    let gap_widths: Vec<Length> = (0..params.aisles - 1)
        .map(|_| rng.gen_range(glo..=ghi))
        .collect();

    let depot = DepotLocation {
        aisle: rng.gen_range(1..=params.aisles),
        cross_aisle: rng.gen_range(1..=params.cross_aisles),
    };

    let eligible: Vec<u32> = (0..blocks as u32)
        .filter(|&b| block_lengths[b as usize] >= 2)
        .map(|b| b + 1)
        .collect();
    let mut items = Vec::with_capacity(params.items as usize);
    for _ in 0..params.items {
        let aisle = rng.gen_range(1..=params.aisles);
        let block = eligible[rng.gen_range(0..eligible.len())];
        let d = block_lengths[(block - 1) as usize];
        let offset = rng.gen_range(1..=d - 1);
        items.push(ItemLocation {
            aisle,
            block,
            offset,
        });
    }

    Ok(WarehouseInstance::new(
        params.aisles,
        params.cross_aisles,
        block_lengths,
        gap_widths,
        items,
        depot,
    )
    .expect("generated instance must satisfy the invariants"))
}
