//! Command-line front end: solve, oracle, verify, reduce, gen, and bench.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invariant or
//! verification failure, 3 internal cap exceeded. Everything printed to
//! stdout is deterministic for fixed inputs and seeds; wall-clock timings
//! go to stderr (and to the last two columns of the bench table).

mod formats;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use formats::FormatError;
use pickroute_core::model::{generate_instance, build_graph, GenParams, WarehouseInstance};
use pickroute_core::oracle::{brute_force_subgraphs, solve_held_karp, OracleError};
use pickroute_core::reduce::eliminate_connecting_doubles;
use pickroute_core::reduce::ReduceError;
use pickroute_core::tour::{is_tour_subgraph, tour_length};
use pickroute_core::{solve_dp, SolveOptions};

#[derive(Parser)]
#[command(
    name = "pickroute",
    version,
    about = "Exact picker-route optimization for rectangular warehouses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PruneFlags {
    /// Reject connecting double runs inside the search (default).
    #[arg(long, conflicts_with = "no_prune")]
    prune: bool,
    /// Search the unrestricted configuration space.
    #[arg(long)]
    no_prune: bool,
}

impl PruneFlags {
    fn effective(&self) -> bool {
        !self.no_prune
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a minimum-length picking tour.
    Solve {
        /// Instance document to solve.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        prune: PruneFlags,
        /// Write the optimal tour document here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write an SVG drawing of the tour here.
        #[arg(long)]
        render: Option<PathBuf>,
    },
    /// Run the reference solvers (Held-Karp, and brute force when small).
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Check a tour document against an instance.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tour: PathBuf,
    },
    /// Rewrite a tour until no connecting double run remains.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tour: PathBuf,
        /// Write the rewritten tour document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        aisles: u32,
        #[arg(long, default_value_t = 3)]
        cross_aisles: u32,
        #[arg(long, default_value_t = 8)]
        items: u32,
        /// Write the instance document here (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve every instance in a directory with pruning off and on.
    Bench {
        /// Directory of instance documents (*.json).
        #[arg(long)]
        suite: PathBuf,
        /// Timing repetitions per instance and mode.
        #[arg(long, default_value_t = 1)]
        repeats: u32,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn cap(message: impl Into<String>) -> Failure {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(err: FormatError) -> Failure {
        match err {
            FormatError::Malformed(_) | FormatError::Instance(_) => {
                Failure::parse(err.to_string())
            }
            _ => Failure::verification(err.to_string()),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(failure) = run(cli.command) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            input,
            prune,
            out,
            render,
        } => cmd_solve(&input, prune.effective(), out.as_deref(), render.as_deref()),
        Command::Oracle { input } => cmd_oracle(&input),
        Command::Verify { input, tour } => cmd_verify(&input, &tour),
        Command::Reduce { input, tour, out } => cmd_reduce(&input, &tour, out.as_deref()),
        Command::Gen {
            seed,
            aisles,
            cross_aisles,
            items,
            out,
        } => cmd_gen(seed, aisles, cross_aisles, items, out.as_deref()),
        Command::Bench { suite, repeats } => cmd_bench(&suite, repeats.max(1)),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display())))
}

fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(6).fold(String::new(), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

fn load_instance(path: &Path) -> Result<(WarehouseInstance, String), Failure> {
    let text = read_file(path)?;
    let instance = formats::parse_instance(&text)?;
    Ok((instance, digest(&text)))
}

fn cmd_solve(
    input: &Path,
    prune: bool,
    out: Option<&Path>,
    render: Option<&Path>,
) -> Result<(), Failure> {
    let (instance, digest) = load_instance(input)?;
    let options = SolveOptions {
        prune_connecting: prune,
        forbid_double_traversal: false,
    };
    let started = Instant::now();
    let result = solve_dp(&instance, options).map_err(|e| Failure::cap(e.to_string()))?;
    let elapsed = started.elapsed();

    println!(
        "command: solve --input {} {}",
        input.display(),
        if prune { "--prune" } else { "--no-prune" }
    );
    println!("instance: {digest}");
    println!("length: {}", result.length);
    println!("states: {}", result.stats.states_expanded);
    println!("transitions: {}", result.stats.transitions_evaluated);

    let graph = build_graph(&instance);
    if let Some(path) = out {
        write_file(path, &formats::tour_to_json(&graph, &result.subgraph))?;
        println!("tour: {}", path.display());
    }
    if let Some(path) = render {
        write_file(path, &svg::render(&instance, &graph, &result.subgraph))?;
        println!("render: {}", path.display());
    }
    eprintln!("time_ms: {:.3}", elapsed.as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_oracle(input: &Path) -> Result<(), Failure> {
    let (instance, digest) = load_instance(input)?;
    println!("command: oracle --input {}", input.display());
    println!("instance: {digest}");
    let started = Instant::now();
    let hk = solve_held_karp(&instance).map_err(|e| Failure::cap(e.to_string()))?;
    println!("held_karp: {}", hk.length);
    match brute_force_subgraphs(&instance) {
        Ok(bf) => println!("brute_force: {}", bf.length),
        Err(OracleError::InstanceTooLarge { .. }) => println!("brute_force: skipped"),
        Err(e) => return Err(Failure::cap(e.to_string())),
    }
    eprintln!("time_ms: {:.3}", started.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_verify(input: &Path, tour: &Path) -> Result<(), Failure> {
    let (instance, digest) = load_instance(input)?;
    let graph = build_graph(&instance);
    let tour_text = read_file(tour)?;
    let subgraph = formats::parse_tour(&tour_text, &graph)?;

    println!(
        "command: verify --input {} --tour {}",
        input.display(),
        tour.display()
    );
    println!("instance: {digest}");
    let report = is_tour_subgraph(&graph, &subgraph);
    println!("valid: {}", report.valid());
    for failure in &report.failures {
        println!("failure: {} vertex {}", failure.condition, failure.witness);
    }
    println!("length: {}", tour_length(&graph, &subgraph));
    if report.valid() {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "tour fails {} condition(s)",
            report.failures.len()
        )))
    }
}

fn cmd_reduce(input: &Path, tour: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let (instance, digest) = load_instance(input)?;
    let graph = build_graph(&instance);
    let tour_text = read_file(tour)?;
    let subgraph = formats::parse_tour(&tour_text, &graph)?;

    println!(
        "command: reduce --input {} --tour {}",
        input.display(),
        tour.display()
    );
    println!("instance: {digest}");
    let started = Instant::now();
    let reduction = eliminate_connecting_doubles(&graph, &subgraph).map_err(|e| match e {
        ReduceError::InvalidSubgraph(_) => Failure::verification(e.to_string()),
        ReduceError::IterationCapExceeded { .. } => Failure::cap(e.to_string()),
        other => Failure::verification(other.to_string()),
    })?;
    for step in &reduction.steps {
        println!(
            "step: {} case={} aisle={} rows={}..{} before={} after={}",
            step.index,
            step.case,
            step.aisle,
            step.bottom_row,
            step.top_row,
            step.length_before,
            step.length_after
        );
    }
    println!("steps: {}", reduction.steps.len());
    println!("length: {}", tour_length(&graph, &reduction.subgraph));
    if let Some(path) = out {
        write_file(path, &formats::tour_to_json(&graph, &reduction.subgraph))?;
        println!("tour: {}", path.display());
    }
    eprintln!("time_ms: {:.3}", started.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

fn cmd_gen(
    seed: u64,
    aisles: u32,
    cross_aisles: u32,
    items: u32,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let params = GenParams {
        aisles,
        cross_aisles,
        items,
        block_length_range: (1, 100),
        gap_width_range: (1, 100),
    };
    let instance = generate_instance(&params, seed).map_err(|e| Failure::parse(e.to_string()))?;
    let json = formats::instance_to_json(&instance);
    match out {
        Some(path) => {
            write_file(path, &json)?;
            println!("command: gen --seed {seed}");
            println!("instance: {}", digest(&json));
            println!("out: {}", path.display());
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn cmd_bench(suite: &Path, repeats: u32) -> Result<(), Failure> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(suite)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", suite.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    entries.sort();

    println!("instance\tlength\ttransitions_off\ttransitions_on\ttime_off_ms\ttime_on_ms");
    for path in entries {
        let (instance, _) = load_instance(&path)?;
        let mut lengths = [0u64; 2];
        let mut transitions = [0u64; 2];
        let mut times = [0f64; 2];
        for (slot, prune) in [false, true].into_iter().enumerate() {
            let options = SolveOptions {
                prune_connecting: prune,
                forbid_double_traversal: false,
            };
            let mut best_time = f64::INFINITY;
            let mut result = None;
            for _ in 0..repeats {
                let started = Instant::now();
                let solved =
                    solve_dp(&instance, options).map_err(|e| Failure::cap(e.to_string()))?;
                best_time = best_time.min(started.elapsed().as_secs_f64() * 1e3);
                result = Some(solved);
            }
            let result = result.expect("at least one repeat");
            lengths[slot] = result.length;
            transitions[slot] = result.stats.transitions_evaluated;
            times[slot] = best_time;
        }
        if lengths[0] != lengths[1] {
            return Err(Failure::verification(format!(
                "pruned and unpruned lengths disagree on {} ({} vs {})",
                path.display(),
                lengths[0],
                lengths[1]
            )));
        }
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        println!(
            "{name}\t{}\t{}\t{}\t{:.3}\t{:.3}",
            lengths[0], transitions[0], transitions[1], times[0], times[1]
        );
    }
    Ok(())
}
