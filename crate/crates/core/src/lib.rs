//! Exact picker-route optimization for rectangular parallel-aisle warehouses
//! with any number of cross-aisles.
//!
//! The crate models a warehouse as a grid-like multigraph, finds provably
//! minimum-length picking tours with a frontier dynamic program, validates
//! arbitrary tour subgraphs against the Eulerian conditions, and rewrites
//! tours to eliminate vertical double traversals that merely connect
//! cross-aisle travel. Independent exact solvers (Held-Karp over the metric
//! closure, configuration brute force) serve as referees for the DP.
//!
//! Everything in here is `no_std` + `alloc`; IO, file formats and the CLI
//! live in the companion `pickroute-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod configs;
pub mod dp;
pub mod model;
pub mod oracle;
pub mod reduce;
pub mod tour;

pub use configs::{HorizontalConfig, VerticalConfig};
pub use dp::{solve_dp, FrontierState, OptimalTour, SolveOptions};
pub use model::{
    build_graph, generate_instance, shortest_paths, DepotLocation, DistanceMatrix, GenParams,
    ItemLocation, Length, WarehouseGraph, WarehouseInstance,
};
pub use oracle::{brute_force_subgraphs, solve_held_karp, OracleResult};
pub use reduce::{
    eliminate_connecting_doubles, find_double_runs, DoubleRun, Reduction, StepCase,
};
pub use tour::{extract_walk, is_tour_subgraph, tour_length, TourSubgraph, ValidityReport, Walk};
