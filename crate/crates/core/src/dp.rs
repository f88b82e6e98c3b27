//! Exact minimum-tour solver: a left-to-right sweep over aisles with a
//! dynamic program over frontier states.
//!
//! The frontier between two consecutive aisles is crossed by up to `n`
//! horizontal edges, one per cross-aisle. A state records, per cross-aisle,
//! the multiplicity class of that crossing (zero, one, or two edges), how
//! the nonzero crossings are partitioned into connected components of the
//! partial tour (always a non-crossing partition, since the layout is
//! planar), and whether the tour has already been completed. A component
//! may drop off the frontier only when it is the sole remaining component;
//! that single drop marks the tour as closed, which forces the depot and
//! every item seen so far to be inside it and everything after it to stay
//! empty.
//!
//! Transitions pick one vertical configuration per block of the current
//! aisle and a right-frontier vector, filtered by even degree at every
//! intersection, item coverage, and depot attachment. The optional pruning
//! mode additionally rejects assignments in which a chain of
//! double-traversal blocks carries horizontal edges at both of its end
//! intersections; such chains are never needed for an optimal tour.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::configs::{enumerate_vertical_configs, ConfigEffect, Parity, Subaisle, VerticalConfig};
use crate::model::{build_graph, Length, WarehouseInstance};
use crate::tour::{tour_length, TourSubgraph};

/// Largest supported cross-aisle count; the state space grows quickly
/// beyond desk scale.
pub const MAX_CROSS_AISLES: u32 = 6;

/// Multiplicity class of one frontier crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MultiplicityClass {
    Zero,
    /// Realized as exactly one edge.
    Odd,
    /// Realized as exactly two edges.
    Even,
}

impl MultiplicityClass {
    pub fn realized(self) -> u32 {
        match self {
            MultiplicityClass::Zero => 0,
            MultiplicityClass::Odd => 1,
            MultiplicityClass::Even => 2,
        }
    }

    fn is_odd(self) -> bool {
        matches!(self, MultiplicityClass::Odd)
    }

    fn is_zero(self) -> bool {
        matches!(self, MultiplicityClass::Zero)
    }
}

/// DP state at one frontier. `partition` groups the rows with nonzero
/// multiplicity into connected components; blocks and rows are sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FrontierState {
    pub h: Vec<MultiplicityClass>,
    pub partition: Vec<Vec<u8>>,
    pub closed: bool,
}

impl FrontierState {
    fn initial(n: usize) -> Self {
        FrontierState {
            h: vec![MultiplicityClass::Zero; n],
            partition: Vec::new(),
            closed: false,
        }
    }

    fn accepting(n: usize) -> Self {
        FrontierState {
            h: vec![MultiplicityClass::Zero; n],
            partition: Vec::new(),
            closed: true,
        }
    }
}

/// Two partition blocks cross if they interleave as a < b < a' < b'.
fn is_noncrossing(blocks: &[Vec<u8>]) -> bool {
    for (i, x) in blocks.iter().enumerate() {
        for y in blocks.iter().skip(i + 1) {
            for &a in x {
                for &a2 in x {
                    if a >= a2 {
                        continue;
                    }
                    for &b in y {
                        for &b2 in y {
                            if b >= b2 {
                                continue;
                            }
                            if (a < b && b < a2 && a2 < b2) || (b < a && a < b2 && b2 < a2) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

fn set_partitions(elements: &[u8]) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    fn recurse(elements: &[u8], idx: usize, blocks: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>) {
        if idx == elements.len() {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(elements[idx]);
            recurse(elements, idx + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![elements[idx]]);
        recurse(elements, idx + 1, blocks, out);
        blocks.pop();
    }
    recurse(elements, 0, &mut blocks, &mut out);
    out
}

/// All structurally valid frontier states for `n` cross-aisles, in a
/// deterministic order. A closed frontier carries no ports, so the single
/// accepting state comes last.
pub fn enumerate_states(n: u32) -> Vec<FrontierState> {
    let n = n as usize;
    let classes = [
        MultiplicityClass::Zero,
        MultiplicityClass::Odd,
        MultiplicityClass::Even,
    ];
    let mut out = Vec::new();
    let mut h = vec![MultiplicityClass::Zero; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in h.iter_mut().rev() {
            *slot = classes[c % 3];
            c /= 3;
        }
        let ports: Vec<u8> = (0..n as u8).filter(|&j| !h[j as usize].is_zero()).collect();
        for partition in set_partitions(&ports) {
            if !is_noncrossing(&partition) {
                continue;
            }
            let mut canonical = partition;
            canonical.sort();
            out.push(FrontierState {
                h: h.clone(),
                partition: canonical,
                closed: false,
            });
        }
    }
    out.push(FrontierState::accepting(n));
    out
}

/// Solver options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Reject transitions that create a connecting double run.
    pub prune_connecting: bool,
    /// Drop the double-traversal configuration from the alphabet entirely
    /// (classically sufficient for two cross-aisles).
    pub forbid_double_traversal: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            prune_connecting: true,
            forbid_double_traversal: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// States taken off a layer and expanded.
    pub states_expanded: u64,
    /// Transitions that survived every filter and produced a successor.
    pub transitions_evaluated: u64,
}

/// A minimum-length tour with the work done to find it.
#[derive(Debug, Clone)]
pub struct OptimalTour {
    pub length: Length,
    pub subgraph: TourSubgraph,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    TooManyCrossAisles { cross_aisles: u32, max: u32 },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::TooManyCrossAisles { cross_aisles, max } => {
                write!(f, "{cross_aisles} cross-aisles exceed the supported maximum of {max}")
            }
        }
    }
}

impl core::error::Error for SolveError {}

/// One choice of vertical configurations for every block of an aisle,
/// with its consequences summarized per row.
struct AisleCombo {
    option_indices: Vec<usize>,
    cost: Length,
    odd_at_row: Vec<bool>,
    attach_at_row: Vec<bool>,
    connects_block: Vec<bool>,
    double_block: Vec<bool>,
}

fn build_combos(options: &[Vec<(VerticalConfig, ConfigEffect)>], n: usize) -> Vec<AisleCombo> {
    let blocks = options.len();
    let mut combos = Vec::new();
    let mut indices = vec![0usize; blocks];
    loop {
        let mut cost = 0;
        let mut odd_at_row = vec![false; n];
        let mut attach_at_row = vec![false; n];
        let mut connects_block = vec![false; blocks];
        let mut double_block = vec![false; blocks];
        for (b, &idx) in indices.iter().enumerate() {
            let (config, effect) = &options[b][idx];
            cost += effect.length;
            if effect.parity_bottom == Parity::Odd {
                odd_at_row[b] = !odd_at_row[b];
            }
            if effect.parity_top == Parity::Odd {
                odd_at_row[b + 1] = !odd_at_row[b + 1];
            }
            if effect.attaches_bottom() {
                attach_at_row[b] = true;
            }
            if effect.attaches_top() {
                attach_at_row[b + 1] = true;
            }
            connects_block[b] = effect.connects_ends;
            double_block[b] = *config == VerticalConfig::DoubleTraversal;
        }
        combos.push(AisleCombo {
            option_indices: indices.clone(),
            cost,
            odd_at_row,
            attach_at_row,
            connects_block,
            double_block,
        });
        // Next tuple, last block least significant.
        let mut b = blocks;
        loop {
            if b == 0 {
                return combos;
            }
            b -= 1;
            indices[b] += 1;
            if indices[b] < options[b].len() {
                break;
            }
            indices[b] = 0;
        }
    }
}

struct UnionFind {
    parent: [u8; MAX_CROSS_AISLES as usize],
}

impl UnionFind {
    fn new(n: usize) -> Self {
        let mut parent = [0u8; MAX_CROSS_AISLES as usize];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        UnionFind { parent }
    }

    fn find(&mut self, x: u8) -> u8 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: u8, b: u8) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Rejects the assignment when a maximal chain of double-traversal blocks
/// carries a horizontal edge at both of its end rows. Chains are split at
/// interior rows that carry a horizontal edge, matching how double runs are
/// delimited.
fn has_connecting_double_chain(combo: &AisleCombo, horiz: &[bool]) -> bool {
    let blocks = combo.double_block.len();
    let mut b = 0;
    while b < blocks {
        if !combo.double_block[b] {
            b += 1;
            continue;
        }
        let lo = b;
        while b < blocks && combo.double_block[b] {
            b += 1;
        }
        let hi = b; // blocks lo..hi are double, rows lo..=hi span the chain
        let mut start = lo;
        for row in lo + 1..hi {
            if horiz[row] {
                if horiz[start] {
                    return true;
                }
                start = row;
            }
        }
        if horiz[start] && horiz[hi] {
            return true;
        }
    }
    false
}

/// Finds a minimum-length tour subgraph visiting the depot and every item.
///
/// The returned subgraph uses multiplicities 0/1/2 only, always validates,
/// and re-measures to the reported length. Ties are broken toward the
/// lexicographically smallest configuration tuple, then the smallest
/// predecessor state, so output is deterministic. An empty pick list
/// short-circuits to the empty tour.
pub fn solve_dp(
    instance: &WarehouseInstance,
    options: SolveOptions,
) -> Result<OptimalTour, SolveError> {
    let n = instance.cross_aisles();
    if n > MAX_CROSS_AISLES {
        return Err(SolveError::TooManyCrossAisles {
            cross_aisles: n,
            max: MAX_CROSS_AISLES,
        });
    }
    let graph = build_graph(instance);
    if instance.items().is_empty() {
        return Ok(OptimalTour {
            length: 0,
            subgraph: TourSubgraph::empty(&graph),
            stats: SolveStats::default(),
        });
    }

    let m = instance.aisles();
    let n = n as usize;
    let blocks = instance.blocks() as usize;
    let depot = instance.depot();

    // Per-aisle block options and their cartesian products.
    let mut aisle_options: Vec<Vec<Vec<(VerticalConfig, ConfigEffect)>>> = Vec::new();
    let mut aisle_has_items = Vec::new();
    for aisle in 1..=m {
        let mut per_block = Vec::with_capacity(blocks);
        let mut has_items = false;
        for block in 1..=blocks as u32 {
            let offsets = graph.block_item_offsets(aisle, block).to_vec();
            has_items |= !offsets.is_empty();
            let subaisle = Subaisle::new(instance.block_length(block), offsets)
                .expect("graph offsets are interior");
            let mut opts = enumerate_vertical_configs(&subaisle);
            if options.forbid_double_traversal {
                opts.retain(|(c, _)| *c != VerticalConfig::DoubleTraversal);
            }
            per_block.push(opts);
        }
        aisle_options.push(per_block);
        aisle_has_items.push(has_items);
    }
    let aisle_combos: Vec<Vec<AisleCombo>> = aisle_options
        .iter()
        .map(|opts| build_combos(opts, n))
        .collect();

    type Key = (usize, usize); // (combo index, predecessor index)
    type Layer = Vec<(FrontierState, Length, Option<Key>)>;

    let mut stats = SolveStats::default();
    let mut layers: Vec<Layer> = Vec::with_capacity(m as usize + 1);
    layers.push(vec![(FrontierState::initial(n), 0, None)]);

    for aisle in 1..=m {
        let last = aisle == m;
        let gap_width = if last { 0 } else { instance.gap_width(aisle) };
        let combos = &aisle_combos[(aisle - 1) as usize];
        let mut next: BTreeMap<FrontierState, (Length, Key)> = BTreeMap::new();

        let mut push = |state: FrontierState, cost: Length, key: Key, stats: &mut SolveStats| {
            stats.transitions_evaluated += 1;
            match next.get_mut(&state) {
                Some(entry) => {
                    if cost < entry.0 || (cost == entry.0 && key < entry.1) {
                        *entry = (cost, key);
                    }
                }
                None => {
                    next.insert(state, (cost, key));
                }
            }
        };

        for (prev_idx, (state, cost, _)) in layers[(aisle - 1) as usize].iter().enumerate() {
            stats.states_expanded += 1;

            if state.closed {
                // A finished tour admits nothing further: no items to cover,
                // no depot left behind, no new edges.
                if !aisle_has_items[(aisle - 1) as usize] && aisle != depot.aisle {
                    push(state.clone(), *cost, (usize::MAX, prev_idx), &mut stats);
                }
                continue;
            }

            for (combo_idx, combo) in combos.iter().enumerate() {
                // Row parities of the right frontier are forced by the left
                // frontier and the chosen verticals.
                let mut req_odd = [false; MAX_CROSS_AISLES as usize];
                for (j, slot) in req_odd.iter_mut().enumerate().take(n) {
                    *slot = state.h[j].is_odd() ^ combo.odd_at_row[j];
                }
                if last && req_odd[..n].iter().any(|&r| r) {
                    continue;
                }
                let free_rows: Vec<usize> = if last {
                    Vec::new()
                } else {
                    (0..n).filter(|&j| !req_odd[j]).collect()
                };

                for mask in 0u32..(1 << free_rows.len()) {
                    let mut h_next = vec![MultiplicityClass::Zero; n];
                    let mut horiz_cost = 0;
                    if !last {
                        for (slot, &odd) in h_next.iter_mut().zip(&req_odd[..n]) {
                            if odd {
                                *slot = MultiplicityClass::Odd;
                            }
                        }
                        for (bit, &j) in free_rows.iter().enumerate() {
                            if mask & (1 << bit) != 0 {
                                h_next[j] = MultiplicityClass::Even;
                            }
                        }
                        horiz_cost = h_next
                            .iter()
                            .map(|c| c.realized() as Length * gap_width)
                            .sum();
                    }

                    let mut active = [false; MAX_CROSS_AISLES as usize];
                    for j in 0..n {
                        active[j] = !state.h[j].is_zero()
                            || !h_next[j].is_zero()
                            || combo.attach_at_row[j];
                    }

                    if aisle == depot.aisle && !active[(depot.cross_aisle - 1) as usize] {
                        continue;
                    }

                    if options.prune_connecting {
                        let mut horiz = [false; MAX_CROSS_AISLES as usize];
                        for j in 0..n {
                            horiz[j] = !state.h[j].is_zero() || !h_next[j].is_zero();
                        }
                        if has_connecting_double_chain(combo, &horiz[..n]) {
                            continue;
                        }
                    }

                    let mut uf = UnionFind::new(n);
                    for block in &state.partition {
                        for pair in block.windows(2) {
                            uf.union(pair[0], pair[1]);
                        }
                    }
                    for (b, &connects) in combo.connects_block.iter().enumerate() {
                        if connects {
                            uf.union(b as u8, b as u8 + 1);
                        }
                    }

                    // Components over active rows; any component without a
                    // right port dies here, which is only allowed for the
                    // final single component.
                    let mut roots: Vec<(u8, bool)> = Vec::new();
                    for j in 0..n {
                        if !active[j] {
                            continue;
                        }
                        let root = uf.find(j as u8);
                        let has_port = !h_next[j].is_zero();
                        match roots.iter_mut().find(|(r, _)| *r == root) {
                            Some(entry) => entry.1 |= has_port,
                            None => roots.push((root, has_port)),
                        }
                    }
                    let dying = roots.iter().filter(|(_, port)| !port).count();
                    let closed_next = if dying > 0 {
                        if roots.len() != 1 {
                            continue;
                        }
                        true
                    } else {
                        false
                    };

                    let mut partition: Vec<Vec<u8>> = Vec::new();
                    let mut root_slot = [usize::MAX; MAX_CROSS_AISLES as usize];
                    for (j, class) in h_next.iter().enumerate() {
                        if class.is_zero() {
                            continue;
                        }
                        let root = uf.find(j as u8) as usize;
                        if root_slot[root] == usize::MAX {
                            root_slot[root] = partition.len();
                            partition.push(Vec::new());
                        }
                        partition[root_slot[root]].push(j as u8);
                    }
                    debug_assert!(is_noncrossing(&partition));

                    push(
                        FrontierState {
                            h: h_next,
                            partition,
                            closed: closed_next,
                        },
                        cost + combo.cost + horiz_cost,
                        (combo_idx, prev_idx),
                        &mut stats,
                    );
                }
            }
        }

        layers.push(
            next.into_iter()
                .map(|(state, (cost, key))| (state, cost, Some(key)))
                .collect(),
        );
    }

    let accepting = FrontierState::accepting(n);
    let final_layer = &layers[m as usize];
    let final_idx = final_layer
        .iter()
        .position(|(state, _, _)| *state == accepting)
        .expect("an instance with items always admits a tour");
    let length = final_layer[final_idx].1;

    // Backtrack and materialize the subgraph.
    let mut subgraph = TourSubgraph::empty(&graph);
    let mut idx = final_idx;
    for aisle in (1..=m).rev() {
        let (state, _, key) = &layers[aisle as usize][idx];
        let (combo_idx, prev_idx) = key.expect("non-initial layers have parents");
        if combo_idx != usize::MAX {
            let combo = &aisle_combos[(aisle - 1) as usize][combo_idx];
            for (b, &opt) in combo.option_indices.iter().enumerate() {
                let effect = &aisle_options[(aisle - 1) as usize][b][opt].1;
                let segments = graph.block_segments(aisle, b as u32 + 1);
                for (seg, &mult) in segments.iter().zip(&effect.segment_multiplicities) {
                    subgraph.set_multiplicity(*seg, mult);
                }
            }
            if aisle < m {
                for (j, class) in state.h.iter().enumerate() {
                    let e = graph.horizontal_edge(aisle, j as u32 + 1);
                    subgraph.set_multiplicity(e, class.realized());
                }
            }
        }
        idx = prev_idx;
    }

    debug_assert_eq!(tour_length(&graph, &subgraph), length);
    Ok(OptimalTour {
        length,
        subgraph,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DepotLocation, ItemLocation};
    use crate::tour::is_tour_subgraph;

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
    fn empty_pick_list_is_a_zero_tour() {
        let result = solve_dp(&instance(vec![]), SolveOptions::default()).unwrap();
        assert_eq!(result.length, 0);
        assert!(result.subgraph.is_empty());
    }

    #[test]
    fn single_item_forces_out_and_back() {
        let inst = instance(vec![ItemLocation {
            aisle: 1,
            block: 1,
            offset: 4,
        }]);
        let result = solve_dp(&inst, SolveOptions::default()).unwrap();
        assert_eq!(result.length, 8);
    }

    #[test]
    fn two_items_across_the_gap() {
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
        for prune in [false, true] {
            let result = solve_dp(
                &inst,
                SolveOptions {
                    prune_connecting: prune,
                    forbid_double_traversal: false,
                },
            )
            .unwrap();
            assert_eq!(result.length, 30);
            let graph = build_graph(&inst);
            assert!(is_tour_subgraph(&graph, &result.subgraph).valid());
            assert_eq!(tour_length(&graph, &result.subgraph), result.length);
        }
    }

    #[test]
    fn cross_aisle_cap_is_enforced() {
        let inst = WarehouseInstance::new(
            1,
            7,
            vec![5; 6],
            vec![],
            vec![],
            DepotLocation {
                aisle: 1,
                cross_aisle: 1,
            },
        )
        .unwrap();
        assert!(matches!(
            solve_dp(&inst, SolveOptions::default()),
            Err(SolveError::TooManyCrossAisles { .. })
        ));
    }

    #[test]
    fn state_enumeration_contains_endpoints() {
        let states = enumerate_states(2);
        assert!(states.contains(&FrontierState::initial(2)));
        assert!(states.contains(&FrontierState::accepting(2)));
        // 1 (no ports) + 4 single-port + 4 two-port h-vectors with two
        // partitions each, plus the accepting state.
        assert_eq!(states.len(), 14);
    }

    #[test]
    fn noncrossing_rejects_interleaving() {
        assert!(is_noncrossing(&[vec![0, 2], vec![1]])); // nested is fine
        assert!(!is_noncrossing(&[vec![0, 2], vec![1, 3]]));
    }
}
