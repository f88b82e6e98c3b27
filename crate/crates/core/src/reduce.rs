//! Detection and constructive elimination of connecting double runs.
//!
//! A *double run* is a maximal vertical stretch whose blocks all carry
//! multiplicity exactly two, with no horizontal edges at interior
//! intersections. It is *connecting* when both of its end intersections
//! carry horizontal edges, i.e. the doubled stretch stitches cross-aisle
//! travel together. Such runs are
//! never necessary: each one can either be deleted outright (when its ends
//! stay connected without it) or swapped into the neighbouring aisle at
//! equal length. Iterating the rewrite pushes the obstruction toward the
//! warehouse boundary, where it dies, so the loop terminates.
//!
//! Trace labels: `0.1` redundant pair removal; `0.2` swap with no clean
//! single path in the neighbouring aisle; `1` swap for states (1,1), (1,2),
//! (2,2); `2` swap for state (0,2); `3i`/`3ii`/`3iii` swap for state (0,1),
//! split by where the shifted run's far end keeps horizontal edges (none /
//! toward the original aisle / away from it).

use alloc::vec::Vec;
use core::fmt;

use crate::model::{Length, WarehouseGraph};
use crate::tour::{is_tour_subgraph, tour_length, TourSubgraph, ValidityReport};

/// A maximal doubled vertical stretch, between the intersections at
/// `bottom_row` and `top_row` (`bottom_row < top_row`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleRun {
    pub aisle: u32,
    pub bottom_row: u32,
    pub top_row: u32,
    /// Number of blocks covered.
    pub span: u32,
    /// Horizontal edges present at both end intersections.
    pub connecting: bool,
}

/// The symmetry applied while normalizing a run's state: `mirror_lr`
/// reflects the warehouse across the run's aisle (left and right swap),
/// `swap_ab` flips it upside down (the run's ends swap roles).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orientation {
    pub mirror_lr: bool,
    pub swap_ab: bool,
}

/// Horizontal multiplicities next to a connecting run's ends, normalized so
/// that the counted side of the `b` end is populated and the pair is
/// ordered. The five possible values are (0,1), (0,2), (1,1), (1,2), (2,2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoubleEdgeState {
    pub pair: (u8, u8),
    pub orientation: Orientation,
}

/// Step labels for the elimination trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepCase {
    /// The run's ends stay connected without it; a pair of edges comes out.
    Redundant,
    /// The neighbouring aisle has no clean single path between the run's
    /// rows, so the swap strictly reduces the doubled footprint.
    MissingSingle,
    /// Both ends carry edges on the counted side.
    BothIncident,
    /// State (0,2): the swap leaves a redundant double behind.
    DoubleIncident,
    /// State (0,1): the shifted run lost all horizontal support.
    ShiftCleared,
    /// State (0,1): the shifted run keeps support toward the original aisle.
    ShiftOpposite,
    /// State (0,1): the run moved one aisle over, support away from it.
    ShiftLeft,
}

impl fmt::Display for StepCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            StepCase::Redundant => "0.1",
            StepCase::MissingSingle => "0.2",
            StepCase::BothIncident => "1",
            StepCase::DoubleIncident => "2",
            StepCase::ShiftCleared => "3i",
            StepCase::ShiftOpposite => "3ii",
            StepCase::ShiftLeft => "3iii",
        };
        f.write_str(label)
    }
}

/// One record per rewrite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReduceStep {
    pub index: usize,
    pub case: StepCase,
    pub aisle: u32,
    pub bottom_row: u32,
    pub top_row: u32,
    pub length_before: Length,
    pub length_after: Length,
}

/// Final subgraph plus the trace that produced it.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub subgraph: TourSubgraph,
    pub steps: Vec<ReduceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReduceError {
    NotConnecting,
    NotRedundant,
    /// The edge scheduled for removal is absent.
    MissingHorizontal { gap: u32, row: u32 },
    /// The run sits on the boundary in its normalized orientation.
    NoAdjacentAisle,
    InvalidSubgraph(ValidityReport),
    /// The rewrite loop did not finish within its budget. This would
    /// contradict the termination argument and is surfaced loudly.
    IterationCapExceeded { cap: usize },
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::NotConnecting => write!(f, "run is not connecting"),
            ReduceError::NotRedundant => write!(f, "run is not redundant"),
            ReduceError::MissingHorizontal { gap, row } => {
                write!(f, "no horizontal edge to remove at gap {gap}, row {row}")
            }
            ReduceError::NoAdjacentAisle => write!(f, "no adjacent aisle in this orientation"),
            ReduceError::InvalidSubgraph(report) => {
                write!(f, "input is not a tour subgraph ({} failures)", report.failures.len())
            }
            ReduceError::IterationCapExceeded { cap } => write!(
                f,
                "rewrite loop exceeded {cap} steps; potential counterexample to the elimination argument"
            ),
        }
    }
}

impl core::error::Error for ReduceError {}

fn horizontal_mults(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
    aisle: u32,
    row: u32,
) -> (u32, u32) {
    let left = if aisle > 1 {
        t.multiplicity(graph.horizontal_edge(aisle - 1, row))
    } else {
        0
    };
    let right = if aisle < graph.aisles() {
        t.multiplicity(graph.horizontal_edge(aisle, row))
    } else {
        0
    };
    (left, right)
}

fn has_horizontal(graph: &WarehouseGraph, t: &TourSubgraph, aisle: u32, row: u32) -> bool {
    let (l, r) = horizontal_mults(graph, t, aisle, row);
    l + r > 0
}

fn block_fully_doubled(graph: &WarehouseGraph, t: &TourSubgraph, aisle: u32, block: u32) -> bool {
    graph
        .block_segments(aisle, block)
        .iter()
        .all(|&e| t.multiplicity(e) == 2)
}

/// All maximal double runs, aisle ascending and bottom-up within an aisle.
/// Doubled stretches are split wherever an interior intersection carries a
/// horizontal edge.
pub fn find_double_runs(graph: &WarehouseGraph, t: &TourSubgraph) -> Vec<DoubleRun> {
    let mut runs = Vec::new();
    let blocks = graph.cross_aisles() - 1;
    for aisle in 1..=graph.aisles() {
        let mut block = 1;
        while block <= blocks {
            if !block_fully_doubled(graph, t, aisle, block) {
                block += 1;
                continue;
            }
            let lo = block;
            while block <= blocks && block_fully_doubled(graph, t, aisle, block) {
                block += 1;
            }
            let hi = block - 1;
            let mut bottom = lo;
            for row in lo + 1..=hi {
                if has_horizontal(graph, t, aisle, row) {
                    runs.push(make_run(graph, t, aisle, bottom, row));
                    bottom = row;
                }
            }
            runs.push(make_run(graph, t, aisle, bottom, hi + 1));
        }
    }
    runs
}

fn make_run(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
    aisle: u32,
    bottom_row: u32,
    top_row: u32,
) -> DoubleRun {
    let connecting = has_horizontal(graph, t, aisle, bottom_row)
        && has_horizontal(graph, t, aisle, top_row);
    DoubleRun {
        aisle,
        bottom_row,
        top_row,
        span: top_row - bottom_row,
        connecting,
    }
}

/// Normalizes a connecting run's state. The counted side stays left
/// whenever either end carries left edges (swapping the end roles is
/// enough to populate `b` then); the warehouse is mirrored only when the
/// run is supported purely from the right. Keeping the counted side
/// stable this way is what makes the rewrite chains march in one
/// direction: a mirrored run has horizontal edges on one side of both
/// ends, which is the immediately reducible family. Multiplicities above
/// two count as two.
pub fn classify_state(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
    run: &DoubleRun,
) -> Result<DoubleEdgeState, ReduceError> {
    if !run.connecting {
        return Err(ReduceError::NotConnecting);
    }
    let (la, ra) = horizontal_mults(graph, t, run.aisle, run.top_row);
    let (lb, rb) = horizontal_mults(graph, t, run.aisle, run.bottom_row);
    let mirror_lr = la == 0 && lb == 0;
    let (xa, xb) = if mirror_lr { (ra, rb) } else { (la, lb) };
    let (xa, xb) = (xa.min(2) as u8, xb.min(2) as u8);
    let swap_ab = xa > xb;
    let pair = if swap_ab { (xb, xa) } else { (xa, xb) };
    debug_assert!(pair.1 >= 1, "a connecting run always normalizes into S");
    Ok(DoubleEdgeState {
        pair,
        orientation: Orientation { mirror_lr, swap_ab },
    })
}

/// True when the run's end intersections stay connected after both copies
/// of the run are deleted (edge connectivity above two).
pub fn detect_redundant(graph: &WarehouseGraph, t: &TourSubgraph, run: &DoubleRun) -> bool {
    let mut stripped = t.clone();
    for block in run.bottom_row..run.top_row {
        for &e in graph.block_segments(run.aisle, block) {
            stripped.set_multiplicity(e, 0);
        }
    }
    let source = graph.intersection(run.aisle, run.top_row);
    let target = graph.intersection(run.aisle, run.bottom_row);
    let mut seen = alloc::vec![false; graph.vertex_count()];
    seen[source] = true;
    let mut queue = alloc::vec![source];
    while let Some(v) = queue.pop() {
        if v == target {
            return true;
        }
        for &e in graph.incident_edges(v) {
            if stripped.multiplicity(e) == 0 {
                continue;
            }
            let u = graph.other_end(e, v);
            if !seen[u] {
                seen[u] = true;
                queue.push(u);
            }
        }
    }
    false
}

/// Deletes a redundant run: both copies of every segment when nothing
/// inside the run needs coverage, otherwise both copies of the topmost
/// segment (splitting the run while every interior item keeps its other
/// doubled segment). Length strictly decreases either way.
pub fn remove_redundant_pair(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
    run: &DoubleRun,
) -> Result<TourSubgraph, ReduceError> {
    if !detect_redundant(graph, t, run) {
        return Err(ReduceError::NotRedundant);
    }
    let mut out = t.clone();
    let mut interior_obstacle = false;
    for block in run.bottom_row..run.top_row {
        if !graph.block_item_offsets(run.aisle, block).is_empty() {
            interior_obstacle = true;
        }
    }
    for row in run.bottom_row + 1..run.top_row {
        if graph.intersection(run.aisle, row) == graph.depot_vertex() {
            interior_obstacle = true;
        }
    }
    if interior_obstacle {
        let top_block = run.top_row - 1;
        let &seg = graph
            .block_segments(run.aisle, top_block)
            .last()
            .expect("blocks have segments");
        out.set_multiplicity(seg, out.multiplicity(seg) - 2);
    } else {
        for block in run.bottom_row..run.top_row {
            for &e in graph.block_segments(run.aisle, block) {
                out.set_multiplicity(e, 0);
            }
        }
    }
    Ok(out)
}

fn orientation_sides(
    graph: &WarehouseGraph,
    run: &DoubleRun,
    mirror_lr: bool,
) -> Result<(u32, u32), ReduceError> {
    if mirror_lr {
        if run.aisle >= graph.aisles() {
            return Err(ReduceError::NoAdjacentAisle);
        }
        Ok((run.aisle, run.aisle + 1))
    } else {
        if run.aisle <= 1 {
            return Err(ReduceError::NoAdjacentAisle);
        }
        Ok((run.aisle - 1, run.aisle - 1))
    }
}

/// Applies the length-preserving swap: one copy of the run and the
/// horizontal edge at its `b` end move over to the neighbouring aisle,
/// entering through a new horizontal edge at the `a` end. Every touched
/// vertex changes degree by -2, 0, or +2, so parity survives; the path
/// b' - a' - a - b keeps everything connected; block lengths match across
/// aisles, so the length is unchanged.
pub fn apply_transform(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
    run: &DoubleRun,
    state: &DoubleEdgeState,
) -> Result<TourSubgraph, ReduceError> {
    if !run.connecting {
        return Err(ReduceError::NotConnecting);
    }
    let (gap, neighbour) = orientation_sides(graph, run, state.orientation.mirror_lr)?;
    let (row_a, row_b) = if state.orientation.swap_ab {
        (run.bottom_row, run.top_row)
    } else {
        (run.top_row, run.bottom_row)
    };

    let removed = graph.horizontal_edge(gap, row_b);
    if t.multiplicity(removed) == 0 {
        return Err(ReduceError::MissingHorizontal { gap, row: row_b });
    }

    let mut out = t.clone();
    for block in run.bottom_row..run.top_row {
        for &e in graph.block_segments(run.aisle, block) {
            let m = out.multiplicity(e);
            debug_assert!(m > 0);
            out.set_multiplicity(e, m - 1);
        }
        for &e in graph.block_segments(neighbour, block) {
            out.set_multiplicity(e, out.multiplicity(e) + 1);
        }
    }
    out.set_multiplicity(removed, out.multiplicity(removed) - 1);
    let added = graph.horizontal_edge(gap, row_a);
    out.set_multiplicity(added, out.multiplicity(added) + 1);
    Ok(out)
}

/// Clean single path check: every segment between the run's rows in the
/// neighbouring aisle carries exactly one edge and no interior intersection
/// has horizontal edges.
fn has_single_edge(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
    aisle: u32,
    bottom_row: u32,
    top_row: u32,
) -> bool {
    for block in bottom_row..top_row {
        if graph
            .block_segments(aisle, block)
            .iter()
            .any(|&e| t.multiplicity(e) != 1)
        {
            return false;
        }
    }
    (bottom_row + 1..top_row).all(|row| !has_horizontal(graph, t, aisle, row))
}

/// Labels a state-(0,1) swap by where the shifted run ends up: follow the
/// doubled stretch in the neighbouring aisle from the `b` end away from the
/// `a` end, then look at which side of its far end still carries edges.
fn shift_case(
    graph: &WarehouseGraph,
    after: &TourSubgraph,
    run: &DoubleRun,
    state: &DoubleEdgeState,
) -> StepCase {
    let (gap, neighbour) =
        orientation_sides(graph, run, state.orientation.mirror_lr).expect("checked by transform");
    let (row_a, row_b) = if state.orientation.swap_ab {
        (run.bottom_row, run.top_row)
    } else {
        (run.top_row, run.bottom_row)
    };
    let downward = row_b < row_a;
    let mut c = row_b;
    loop {
        if has_horizontal(graph, after, neighbour, c) {
            break;
        }
        let (block, next) = if downward {
            if c == 1 {
                break;
            }
            (c - 1, c - 1)
        } else {
            if c == graph.cross_aisles() {
                break;
            }
            (c, c + 1)
        };
        if !block_fully_doubled(graph, after, neighbour, block) {
            break;
        }
        c = next;
    }
    let toward = after.multiplicity(graph.horizontal_edge(gap, c));
    let away_gap = if state.orientation.mirror_lr {
        // Neighbour is to the right; its far side is one gap further right.
        (neighbour < graph.aisles()).then_some(neighbour)
    } else {
        (neighbour > 1).then(|| neighbour - 1)
    };
    let away = away_gap.map_or(0, |g| after.multiplicity(graph.horizontal_edge(g, c)));
    if toward == 0 && away == 0 {
        StepCase::ShiftCleared
    } else if toward > 0 {
        StepCase::ShiftOpposite
    } else {
        StepCase::ShiftLeft
    }
}

/// Rewrites `t` until no connecting double run remains.
///
/// Policy per iteration: recompute all runs, take the connecting one with
/// the largest aisle index (ties to the smallest top row), remove it if
/// redundant, otherwise swap it toward the neighbouring aisle in normalized
/// orientation. Length only ever changes on redundant removals, where it
/// strictly drops. The step budget is deliberately generous; exhausting it
/// is reported as an error instead of truncating silently.
pub fn eliminate_connecting_doubles(
    graph: &WarehouseGraph,
    t: &TourSubgraph,
) -> Result<Reduction, ReduceError> {
    let report = is_tour_subgraph(graph, t);
    if !report.valid() {
        return Err(ReduceError::InvalidSubgraph(report));
    }

    let initial_connecting = find_double_runs(graph, t)
        .iter()
        .filter(|r| r.connecting)
        .count();
    let m = graph.aisles() as usize;
    let blocks = (graph.cross_aisles() - 1) as usize;
    let cap = m * (m * blocks) * (1 + initial_connecting);

    let mut current = t.clone();
    let mut steps = Vec::new();
    loop {
        let runs = find_double_runs(graph, &current);
        let target = runs
            .iter()
            .filter(|r| r.connecting)
            .fold(None::<DoubleRun>, |best, r| match best {
                None => Some(*r),
                Some(b)
                    if r.aisle > b.aisle || (r.aisle == b.aisle && r.top_row < b.top_row) =>
                {
                    Some(*r)
                }
                Some(b) => Some(b),
            });
        let Some(run) = target else {
            break;
        };
        if steps.len() >= cap {
            return Err(ReduceError::IterationCapExceeded { cap });
        }

        let length_before = tour_length(graph, &current);
        let (next, case) = if detect_redundant(graph, &current, &run) {
            (
                remove_redundant_pair(graph, &current, &run)?,
                StepCase::Redundant,
            )
        } else {
            let state = classify_state(graph, &current, &run)?;
            let (_, neighbour) = orientation_sides(graph, &run, state.orientation.mirror_lr)?;
            let single =
                has_single_edge(graph, &current, neighbour, run.bottom_row, run.top_row);
            let next = apply_transform(graph, &current, &run, &state)?;
            let case = if !single {
                StepCase::MissingSingle
            } else {
                match state.pair {
                    (0, 1) => shift_case(graph, &next, &run, &state),
                    (0, 2) => StepCase::DoubleIncident,
                    _ => StepCase::BothIncident,
                }
            };
            (next, case)
        };

        debug_assert!(is_tour_subgraph(graph, &next).valid());
        steps.push(ReduceStep {
            index: steps.len(),
            case,
            aisle: run.aisle,
            bottom_row: run.bottom_row,
            top_row: run.top_row,
            length_before,
            length_after: tour_length(graph, &next),
        });
        current = next;
    }

    Ok(Reduction {
        subgraph: current,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_graph, DepotLocation, WarehouseInstance};

    /// Bare grid, no items: m aisles, n cross-aisles, unit-free lengths.
    fn grid(m: u32, n: u32, block: Length, gap: Length) -> WarehouseGraph {
        let inst = WarehouseInstance::new(
            m,
            n,
            alloc::vec![block; (n - 1) as usize],
            alloc::vec![gap; (m - 1) as usize],
            alloc::vec![],
            DepotLocation {
                aisle: 1,
                cross_aisle: 1,
            },
        )
        .unwrap();
        build_graph(&inst)
    }

    fn set_block(graph: &WarehouseGraph, t: &mut TourSubgraph, aisle: u32, block: u32, m: u32) {
        for &e in graph.block_segments(aisle, block) {
            t.set_multiplicity(e, m);
        }
    }

    fn set_gap(graph: &WarehouseGraph, t: &mut TourSubgraph, gap: u32, row: u32, m: u32) {
        t.set_multiplicity(graph.horizontal_edge(gap, row), m);
    }

    #[test]
    fn isolated_double_block_is_a_non_connecting_run() {
        let g = grid(1, 2, 10, 1);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 1, 1, 2);
        let runs = find_double_runs(&g, &t);
        assert_eq!(runs.len(), 1);
        assert!(!runs[0].connecting);
        assert_eq!((runs[0].bottom_row, runs[0].top_row, runs[0].span), (1, 2, 1));
    }

    #[test]
    fn interior_horizontal_splits_a_run() {
        let g = grid(2, 3, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 1, 1, 2);
        set_block(&g, &mut t, 1, 2, 2);
        let merged = find_double_runs(&g, &t);
        assert_eq!(merged.len(), 1);
        assert_eq!((merged[0].bottom_row, merged[0].top_row), (1, 3));

        set_gap(&g, &mut t, 1, 2, 1);
        let split = find_double_runs(&g, &t);
        assert_eq!(split.len(), 2);
        assert_eq!((split[0].bottom_row, split[0].top_row), (1, 2));
        assert_eq!((split[1].bottom_row, split[1].top_row), (2, 3));
    }

    #[test]
    fn run_without_support_at_one_end_is_not_connecting() {
        let g = grid(3, 2, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 2, 1, 2);
        set_gap(&g, &mut t, 1, 1, 1); // bottom end only
        let runs = find_double_runs(&g, &t);
        assert_eq!(runs.len(), 1);
        assert!(!runs[0].connecting);

        set_gap(&g, &mut t, 2, 2, 1); // now the top end has support too
        let runs = find_double_runs(&g, &t);
        assert!(runs[0].connecting);
    }

    #[test]
    fn classify_normalizes_into_the_five_states() {
        let g = grid(3, 2, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 2, 1, 2);
        let run = |t: &TourSubgraph| find_double_runs(&g, t)[0];

        // Single left of b, nothing left of a; a supported on the right.
        set_gap(&g, &mut t, 1, 1, 1);
        set_gap(&g, &mut t, 2, 2, 1);
        let s = classify_state(&g, &t, &run(&t)).unwrap();
        assert_eq!(s.pair, (0, 1));
        assert!(!s.orientation.mirror_lr && !s.orientation.swap_ab);

        // Double left of both ends.
        set_gap(&g, &mut t, 1, 1, 2);
        set_gap(&g, &mut t, 1, 2, 2);
        set_gap(&g, &mut t, 2, 2, 0);
        let s = classify_state(&g, &t, &run(&t)).unwrap();
        assert_eq!(s.pair, (2, 2));

        // Single left of a, double left of b: already ordered.
        set_gap(&g, &mut t, 1, 1, 2);
        set_gap(&g, &mut t, 1, 2, 1);
        let s = classify_state(&g, &t, &run(&t)).unwrap();
        assert_eq!(s.pair, (1, 2));
        assert!(!s.orientation.swap_ab);

        // Double left of a, single left of b: the ends swap roles.
        set_gap(&g, &mut t, 1, 1, 1);
        set_gap(&g, &mut t, 1, 2, 2);
        let s = classify_state(&g, &t, &run(&t)).unwrap();
        assert_eq!(s.pair, (1, 2));
        assert!(s.orientation.swap_ab);

        // Nothing on the left at all: mirrored.
        set_gap(&g, &mut t, 1, 1, 0);
        set_gap(&g, &mut t, 1, 2, 0);
        set_gap(&g, &mut t, 2, 1, 1);
        set_gap(&g, &mut t, 2, 2, 1);
        let s = classify_state(&g, &t, &run(&t)).unwrap();
        assert_eq!(s.pair, (1, 1));
        assert!(s.orientation.mirror_lr);
    }

    #[test]
    fn classify_rejects_non_connecting_runs() {
        let g = grid(1, 2, 10, 1);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 1, 1, 2);
        let runs = find_double_runs(&g, &t);
        assert_eq!(
            classify_state(&g, &t, &runs[0]).unwrap_err(),
            ReduceError::NotConnecting
        );
    }

    /// Doubled two-block run next to a doubled detour: the classic
    /// redundant shape.
    fn redundant_ladder() -> (WarehouseGraph, TourSubgraph) {
        let g = grid(2, 3, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 1, 1, 2);
        set_block(&g, &mut t, 1, 2, 2);
        set_gap(&g, &mut t, 1, 1, 2);
        set_gap(&g, &mut t, 1, 3, 2);
        set_block(&g, &mut t, 2, 1, 2);
        set_block(&g, &mut t, 2, 2, 2);
        (g, t)
    }

    #[test]
    fn redundancy_is_connectivity_after_pair_removal() {
        let (g, t) = redundant_ladder();
        let runs = find_double_runs(&g, &t);
        let run = runs.iter().find(|r| r.aisle == 1).unwrap();
        assert!(detect_redundant(&g, &t, run));

        // Cut the detour and the run becomes the only connection.
        let mut cut = t.clone();
        set_gap(&g, &mut cut, 1, 3, 0);
        set_block(&g, &mut cut, 2, 1, 0);
        set_block(&g, &mut cut, 2, 2, 0);
        let runs = find_double_runs(&g, &cut);
        let run = runs.iter().find(|r| r.aisle == 1).unwrap();
        assert!(!detect_redundant(&g, &cut, run));
    }

    #[test]
    fn removing_a_redundant_run_drops_its_full_length() {
        let (g, t) = redundant_ladder();
        assert!(is_tour_subgraph(&g, &t).valid());
        let runs = find_double_runs(&g, &t);
        let run = *runs.iter().find(|r| r.aisle == 1).unwrap();
        let before = tour_length(&g, &t);
        let out = remove_redundant_pair(&g, &t, &run).unwrap();
        assert_eq!(tour_length(&g, &out), before - 2 * 20);
        assert!(is_tour_subgraph(&g, &out).valid());
        assert!(find_double_runs(&g, &out).iter().all(|r| r.aisle != 1));
    }

    #[test]
    fn remove_rejects_non_redundant_runs() {
        let g = grid(1, 2, 10, 1);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 1, 1, 2);
        let runs = find_double_runs(&g, &t);
        assert_eq!(
            remove_redundant_pair(&g, &t, &runs[0]).unwrap_err(),
            ReduceError::NotRedundant
        );
    }

    #[test]
    fn transform_preserves_parity_and_length() {
        // State (2,2) motif, parity audited vertex by vertex. The edit is a
        // pure multiset operation, so validity of the surroundings is not
        // required here.
        let g = grid(2, 2, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 2, 1, 2);
        set_gap(&g, &mut t, 1, 1, 2);
        set_gap(&g, &mut t, 1, 2, 2);
        let runs = find_double_runs(&g, &t);
        let state = classify_state(&g, &t, &runs[0]).unwrap();
        assert_eq!(state.pair, (2, 2));
        let out = apply_transform(&g, &t, &runs[0], &state).unwrap();
        assert_eq!(tour_length(&g, &out), tour_length(&g, &t));
        for v in 0..g.vertex_count() {
            let before = t.degree(&g, v);
            let after = out.degree(&g, v);
            assert_eq!(before % 2, after % 2, "parity changed at vertex {v}");
            assert!(after.abs_diff(before) <= 2);
        }
        // One horizontal moved from the b row to the a row; the run kept a
        // single copy; the neighbour aisle gained one.
        assert_eq!(out.multiplicity(g.horizontal_edge(1, 1)), 1);
        assert_eq!(out.multiplicity(g.horizontal_edge(1, 2)), 3);
        assert!(g
            .block_segments(2, 1)
            .iter()
            .all(|&e| out.multiplicity(e) == 1));
        assert!(g
            .block_segments(1, 1)
            .iter()
            .all(|&e| out.multiplicity(e) == 1));
    }

    #[test]
    fn transform_requires_a_removable_horizontal() {
        let g = grid(2, 2, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        set_block(&g, &mut t, 2, 1, 2);
        set_gap(&g, &mut t, 1, 1, 1);
        set_gap(&g, &mut t, 1, 2, 1);
        let runs = find_double_runs(&g, &t);
        let state = classify_state(&g, &t, &runs[0]).unwrap();
        // Sabotage: remove the b-side horizontal after classification.
        set_gap(&g, &mut t, 1, 1, 0);
        assert!(matches!(
            apply_transform(&g, &t, &runs[0], &state),
            Err(ReduceError::MissingHorizontal { .. })
        ));
    }

    #[test]
    fn clean_tours_reduce_in_zero_steps() {
        let g = grid(2, 2, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        // Simple loop around the warehouse.
        set_block(&g, &mut t, 1, 1, 1);
        set_block(&g, &mut t, 2, 1, 1);
        set_gap(&g, &mut t, 1, 1, 1);
        set_gap(&g, &mut t, 1, 2, 1);
        let reduction = eliminate_connecting_doubles(&g, &t).unwrap();
        assert!(reduction.steps.is_empty());
        assert_eq!(reduction.subgraph, t);
    }

    #[test]
    fn eliminate_rejects_invalid_input() {
        let g = grid(2, 2, 10, 5);
        let mut t = TourSubgraph::empty(&g);
        t.set_multiplicity(0, 1);
        assert!(matches!(
            eliminate_connecting_doubles(&g, &t),
            Err(ReduceError::InvalidSubgraph(_))
        ));
    }

    #[test]
    fn step_labels_render_like_the_case_analysis() {
        use alloc::string::ToString;
        let labels: Vec<_> = [
            StepCase::Redundant,
            StepCase::MissingSingle,
            StepCase::BothIncident,
            StepCase::DoubleIncident,
            StepCase::ShiftCleared,
            StepCase::ShiftOpposite,
            StepCase::ShiftLeft,
        ]
        .iter()
        .map(|c| c.to_string())
        .collect();
        assert_eq!(labels, ["0.1", "0.2", "1", "2", "3i", "3ii", "3iii"]);
    }
}
