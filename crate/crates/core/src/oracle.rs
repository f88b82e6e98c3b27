//! Independent exact solvers used as ground truth for the sweep DP.
//!
//! `solve_held_karp` treats the problem as a travelling-salesman tour over
//! the metric closure of the terminals (depot plus distinct pick vertices):
//! the optimal closed walk through the terminals has the same length as the
//! optimal tour subgraph. `brute_force_subgraphs` enumerates entire tour
//! subgraphs from the configuration alphabet on tiny instances and keeps
//! the shortest valid one, so the two referees also check each other.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::configs::{enumerate_vertical_configs, ConfigEffect, Parity, Subaisle, VerticalConfig};
use crate::model::{build_graph, DistanceMatrix, Length, VertexId, WarehouseInstance};
use crate::tour::{is_tour_subgraph, tour_length, TourSubgraph};

/// Bitmask feasibility bound for Held-Karp.
pub const HELD_KARP_MAX_ITEMS: usize = 18;

/// Enumeration bounds for the subgraph brute force.
pub const BRUTE_FORCE_MAX_BLOCKS: u32 = 6;
pub const BRUTE_FORCE_MAX_GAP_SEGMENTS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleWitness {
    /// Terminal vertices in optimal visiting order, depot first and last.
    VisitOrder(Vec<VertexId>),
    /// A minimum-length tour subgraph.
    Subgraph(TourSubgraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub length: Length,
    pub witness: OracleWitness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    TooManyItems { items: usize, max: usize },
    InstanceTooLarge { blocks: u32, gap_segments: u32 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyItems { items, max } => {
                write!(f, "{items} items exceed the Held-Karp bound of {max}")
            }
            OracleError::InstanceTooLarge {
                blocks,
                gap_segments,
            } => write!(
                f,
                "instance too large for brute force ({blocks} blocks, {gap_segments} gap segments; both bounded by {BRUTE_FORCE_MAX_BLOCKS})"
            ),
        }
    }
}

impl core::error::Error for OracleError {}

const INF: Length = Length::MAX / 4;

fn held_karp_table(dm: &DistanceMatrix, t: usize) -> (Vec<Length>, Vec<usize>) {
    // dp[mask * t + v] = shortest walk depot -> (terminals in mask) ending
    // at item v; terminal index v+1 in the matrix.
    let size = (1usize << t) * t;
    let mut dp = vec![INF; size];
    let mut parent = vec![usize::MAX; size];
    for v in 0..t {
        dp[(1 << v) * t + v] = dm.distance(0, v + 1);
    }
    for mask in 1usize..(1 << t) {
        for v in 0..t {
            if mask & (1 << v) == 0 {
                continue;
            }
            let cur = dp[mask * t + v];
            if cur >= INF {
                continue;
            }
            for u in 0..t {
                if mask & (1 << u) != 0 {
                    continue;
                }
                let next = mask | (1 << u);
                let cand = cur + dm.distance(v + 1, u + 1);
                if cand < dp[next * t + u] {
                    dp[next * t + u] = cand;
                    parent[next * t + u] = v;
                }
            }
        }
    }
    (dp, parent)
}

/// Minimum closed walk from the depot through every item, by bitmask DP
/// over the metric closure.
pub fn solve_held_karp(instance: &WarehouseInstance) -> Result<OracleResult, OracleError> {
    if instance.items().len() > HELD_KARP_MAX_ITEMS {
        return Err(OracleError::TooManyItems {
            items: instance.items().len(),
            max: HELD_KARP_MAX_ITEMS,
        });
    }
    let graph = build_graph(instance);
    let depot = graph.depot_vertex();
    let mut terminals = vec![depot];
    terminals.extend_from_slice(graph.item_vertices());
    let dm = shortest_paths_unchecked(&graph, &terminals);
    let t = terminals.len() - 1;
    if t == 0 {
        return Ok(OracleResult {
            length: 0,
            witness: OracleWitness::VisitOrder(vec![depot]),
        });
    }

    let (dp, parent) = held_karp_table(&dm, t);
    let full = (1usize << t) - 1;
    let mut best = INF;
    let mut best_end = 0;
    for v in 0..t {
        let cand = dp[full * t + v] + dm.distance(v + 1, 0);
        if cand < best {
            best = cand;
            best_end = v;
        }
    }

    let mut order = vec![depot];
    let mut chain = Vec::new();
    let mut mask = full;
    let mut v = best_end;
    loop {
        chain.push(terminals[v + 1]);
        let p = parent[mask * t + v];
        mask &= !(1 << v);
        if p == usize::MAX {
            break;
        }
        v = p;
    }
    chain.reverse();
    order.extend(chain);
    order.push(depot);

    Ok(OracleResult {
        length: best,
        witness: OracleWitness::VisitOrder(order),
    })
}

fn shortest_paths_unchecked(
    graph: &crate::model::WarehouseGraph,
    terminals: &[VertexId],
) -> DistanceMatrix {
    crate::model::shortest_paths(graph, terminals).expect("terminals come from the graph")
}

/// Exhaustive minimum over whole tour subgraphs assembled from the
/// configuration alphabet, one vertical configuration per block and
/// multiplicity 0/1/2 per gap segment, filtered by the validator.
///
/// Horizontal multiplicity parities are forced row by row once the vertical
/// configurations are fixed, which keeps the enumeration tractable; every
/// surviving candidate still goes through `is_tour_subgraph`. Ties keep the
/// first candidate in lexicographic enumeration order.
pub fn brute_force_subgraphs(instance: &WarehouseInstance) -> Result<OracleResult, OracleError> {
    let m = instance.aisles();
    let n = instance.cross_aisles();
    let blocks_total = m * (n - 1);
    let gap_segments = (m - 1) * n;
    if blocks_total > BRUTE_FORCE_MAX_BLOCKS || gap_segments > BRUTE_FORCE_MAX_GAP_SEGMENTS {
        return Err(OracleError::InstanceTooLarge {
            blocks: blocks_total,
            gap_segments,
        });
    }

    let graph = build_graph(instance);
    let blocks = (n - 1) as usize;

    // Options indexed aisle-major, block ascending.
    let mut options: Vec<Vec<(VerticalConfig, ConfigEffect)>> = Vec::new();
    for aisle in 1..=m {
        for block in 1..=blocks as u32 {
            let subaisle = Subaisle::new(
                instance.block_length(block),
                graph.block_item_offsets(aisle, block).to_vec(),
            )
            .expect("graph offsets are interior");
            options.push(enumerate_vertical_configs(&subaisle));
        }
    }

    let mut best: Option<(Length, TourSubgraph)> = None;
    let mut indices = vec![0usize; options.len()];
    let mut mult = vec![0u32; graph.edge_count()];
    'combos: loop {
        // Vertical parities per intersection (aisle-major, row ascending).
        let mut odd = vec![false; (m as usize) * (n as usize)];
        for (slot, &idx) in indices.iter().enumerate() {
            let aisle = slot / blocks;
            let block = slot % blocks;
            let effect = &options[slot][idx].1;
            if effect.parity_bottom == Parity::Odd {
                odd[aisle * n as usize + block] ^= true;
            }
            if effect.parity_top == Parity::Odd {
                odd[aisle * n as usize + block + 1] ^= true;
            }
        }

        // The horizontal parities are a chain per row: the first gap matches
        // aisle 1's parity, each later gap balances the next aisle, and the
        // last aisle must come out even.
        let mut forced: Vec<bool> = Vec::with_capacity(gap_segments as usize);
        let mut consistent = true;
        'rows: for row in 0..n as usize {
            let mut carry = false;
            for aisle in 0..m as usize {
                let p = odd[aisle * n as usize + row] ^ carry;
                if aisle + 1 < m as usize {
                    forced.push(p);
                    carry = p;
                } else if p {
                    consistent = false;
                    break 'rows;
                }
            }
        }
        if consistent {
            // forced is indexed row-major; re-index to (gap, row).
            let free: Vec<(usize, usize)> = (0..m as usize - 1)
                .flat_map(|g| (0..n as usize).map(move |r| (g, r)))
                .filter(|&(g, r)| !forced[r * (m as usize - 1) + g])
                .collect();

            for seg in mult.iter_mut() {
                *seg = 0;
            }
            for (slot, &idx) in indices.iter().enumerate() {
                let aisle = (slot / blocks) as u32 + 1;
                let block = (slot % blocks) as u32 + 1;
                let effect = &options[slot][idx].1;
                for (seg, &sm) in graph
                    .block_segments(aisle, block)
                    .iter()
                    .zip(&effect.segment_multiplicities)
                {
                    mult[*seg] = sm;
                }
            }
            for g in 0..m.saturating_sub(1) as usize {
                for r in 0..n as usize {
                    if forced[r * (m as usize - 1) + g] {
                        mult[graph.horizontal_edge(g as u32 + 1, r as u32 + 1)] = 1;
                    }
                }
            }

            for mask in 0u32..(1 << free.len()) {
                for (bit, &(g, r)) in free.iter().enumerate() {
                    let e = graph.horizontal_edge(g as u32 + 1, r as u32 + 1);
                    mult[e] = if mask & (1 << bit) != 0 { 2 } else { 0 };
                }
                let t = TourSubgraph::from_multiplicities(&graph, mult.clone());
                if !is_tour_subgraph(&graph, &t).valid() {
                    continue;
                }
                let length = tour_length(&graph, &t);
                if best.as_ref().is_none_or(|(b, _)| length < *b) {
                    best = Some((length, t));
                }
            }
        }

        // Advance the vertical combination, last block least significant.
        let mut slot = options.len();
        loop {
            if slot == 0 {
                break 'combos;
            }
            slot -= 1;
            indices[slot] += 1;
            if indices[slot] < options[slot].len() {
                break;
            }
            indices[slot] = 0;
        }
    }

    let (length, subgraph) = best.expect("every instance admits some tour subgraph");
    Ok(OracleResult {
        length,
        witness: OracleWitness::Subgraph(subgraph),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DepotLocation, ItemLocation};

    fn instance(items: Vec<ItemLocation>) -> WarehouseInstance {
        WarehouseInstance::new(
            2,
            2,
            vec![10],
            vec![5],
            items,
            DepotLocation {
                aisle: 1,
                cross_aisle: 1,
            },
        )
        .unwrap()
    }

    #[test]
    fn no_items_means_zero() {
        let result = solve_held_karp(&instance(vec![])).unwrap();
        assert_eq!(result.length, 0);
        let bf = brute_force_subgraphs(&instance(vec![])).unwrap();
        assert_eq!(bf.length, 0);
    }

    #[test]
    fn single_item_is_out_and_back() {
        let inst = instance(vec![ItemLocation {
            aisle: 1,
            block: 1,
            offset: 4,
        }]);
        assert_eq!(solve_held_karp(&inst).unwrap().length, 8);
    }

    #[test]
    fn two_items_match_permutation_search() {
        let inst = instance(vec![
            ItemLocation {
                aisle: 1,
                block: 1,
                offset: 4,
            },
            ItemLocation {
                aisle: 2,
                block: 1,
                offset: 6,
            },
        ]);
        let result = solve_held_karp(&inst).unwrap();
        assert_eq!(result.length, 30);

        // Independent check: both visiting orders over the metric closure.
        let graph = build_graph(&inst);
        let mut terminals = vec![graph.depot_vertex()];
        terminals.extend_from_slice(graph.item_vertices());
        let dm = crate::model::shortest_paths(&graph, &terminals).unwrap();
        let a = dm.distance(0, 1) + dm.distance(1, 2) + dm.distance(2, 0);
        let b = dm.distance(0, 2) + dm.distance(2, 1) + dm.distance(1, 0);
        assert_eq!(result.length, a.min(b));

        match result.witness {
            OracleWitness::VisitOrder(ref order) => {
                assert_eq!(order.first(), Some(&graph.depot_vertex()));
                assert_eq!(order.last(), Some(&graph.depot_vertex()));
                assert_eq!(order.len(), 4);
            }
            _ => panic!("expected a visit order"),
        }
    }

    #[test]
    fn item_cap_is_enforced() {
        let items = (0..19)
            .map(|i| ItemLocation {
                aisle: 1,
                block: 1,
                offset: 1 + (i % 9),
            })
            .collect();
        assert!(matches!(
            solve_held_karp(&instance(items)),
            Err(OracleError::TooManyItems { .. })
        ));
    }

    #[test]
    fn brute_force_caps_are_enforced() {
        let inst = WarehouseInstance::new(
            4,
            3,
            vec![5, 5],
            vec![2, 2, 2],
            vec![],
            DepotLocation {
                aisle: 1,
                cross_aisle: 1,
            },
        )
        .unwrap();
        assert!(matches!(
            brute_force_subgraphs(&inst),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn oracles_agree_on_small_instances() {
        let inst = instance(vec![
            ItemLocation {
                aisle: 1,
                block: 1,
                offset: 4,
            },
            ItemLocation {
                aisle: 2,
                block: 1,
                offset: 6,
            },
        ]);
        let hk = solve_held_karp(&inst).unwrap();
        let bf = brute_force_subgraphs(&inst).unwrap();
        assert_eq!(hk.length, bf.length);
        match bf.witness {
            OracleWitness::Subgraph(ref t) => {
                let graph = build_graph(&inst);
                assert!(is_tour_subgraph(&graph, t).valid());
                assert_eq!(tour_length(&graph, t), bf.length);
            }
            _ => panic!("expected a subgraph"),
        }
    }

    #[test]
    fn bellman_recurrence_audit() {
        let inst = WarehouseInstance::new(
            3,
            3,
            vec![7, 9],
            vec![4, 6],
            vec![
                ItemLocation {
                    aisle: 1,
                    block: 1,
                    offset: 3,
                },
                ItemLocation {
                    aisle: 2,
                    block: 2,
                    offset: 5,
                },
                ItemLocation {
                    aisle: 3,
                    block: 1,
                    offset: 2,
                },
                ItemLocation {
                    aisle: 3,
                    block: 2,
                    offset: 8,
                },
            ],
            DepotLocation {
                aisle: 2,
                cross_aisle: 1,
            },
        )
        .unwrap();
        let graph = build_graph(&inst);
        let mut terminals = vec![graph.depot_vertex()];
        terminals.extend_from_slice(graph.item_vertices());
        let dm = crate::model::shortest_paths(&graph, &terminals).unwrap();
        let t = terminals.len() - 1;
        let (dp, _) = held_karp_table(&dm, t);
        for mask in 1usize..(1 << t) {
            for v in 0..t {
                if mask & (1 << v) == 0 || mask.count_ones() < 2 {
                    continue;
                }
                let rest = mask & !(1 << v);
                let expected = (0..t)
                    .filter(|u| rest & (1 << u) != 0)
                    .map(|u| dp[rest * t + u].saturating_add(dm.distance(u + 1, v + 1)))
                    .min()
                    .unwrap();
                assert_eq!(dp[mask * t + v], expected);
            }
        }
    }
}
