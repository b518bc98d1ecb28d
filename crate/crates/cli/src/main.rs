//! `ccy` — command-line front end for the compat-cycles library.
//!
//! Every subcommand is deterministic for a fixed invocation: seeds drive all
//! randomness and solution sets are cached by content hash, so repeated runs
//! produce identical bytes. Exit status is 0 on success, 2 when a requested
//! verification fails (an incompatible cycle, a failed --verify pass), and 1
//! on usage or input errors.

use std::collections::hash_map::DefaultHasher;
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use compat_cycles::chy::{
    monodromy_residual, pairing, random_kinematics, solve_scattering, GaugeFixing, SolutionSet,
    SolverConfig,
};
use compat_cycles::compat::{enumerate_compatible, generate, generate_with, GenerateOptions};
use compat_cycles::counting::{
    bubbles_exact_count, hultman_formula, orthogonal_count, super_catalan,
};
use compat_cycles::expand::{
    expansion_coefficients, find_compatible_basis, kk_orderings, numerical_rank, standard_basis,
    BasisSearch, DEFAULT_RANK_TOL,
};
use compat_cycles::feyn::{partial_amplitude_unsigned, KinematicPoint};
use compat_cycles::graphs::{all_cycles, is_compatible, CycleOrder, TwoRegularGraph};

#[derive(Parser)]
#[command(name = "ccy", version, about = "Compatible cycles, exact counts, and amplitude pairings")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached solution sets.
    #[arg(long, global = true, env = "CCY_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Construct compatible cycles for a 2-regular graph.
    Gen {
        /// Graph in cycle notation, e.g. "(1 2)(3 4 5)".
        #[arg(long)]
        graph: String,
        /// Re-check every generated cycle with the decomposition oracle.
        #[arg(long)]
        verify: bool,
        /// Keep only the first N cycles in the listing.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Test one cycle for compatibility (exit 2 when incompatible).
    Check {
        #[arg(long)]
        graph: String,
        /// Cycle as space-separated labels, e.g. "1 3 2 4".
        #[arg(long)]
        cycle: String,
    },
    /// Exhaustively enumerate all compatible cycles.
    Enumerate {
        #[arg(long)]
        graph: String,
    },
    /// Exact counts: signed Hultman numbers, bubbles, polygon subdivisions.
    Count {
        #[command(subcommand)]
        quantity: CountQuantity,
    },
    /// Kinematic points.
    Kin {
        #[command(subcommand)]
        action: KinAction,
    },
    /// Partial amplitudes.
    Amp {
        #[command(subcommand)]
        method: AmpMethod,
    },
    /// Cross-ratio monodromy residuals on the solved scattering equations.
    Monodromy {
        #[arg(long)]
        kin: PathBuf,
        /// Subset A, comma separated, e.g. "1,2".
        #[arg(long = "set")]
        subset: String,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Expand a graph vector in the standard cycle basis.
    Expand {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        kin: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Numerical rank of cycle/graph families under the solution map.
    Rank {
        #[arg(long)]
        n: usize,
        /// "all" (all cycle orders), "kk" (Kleiss-Kuijf set), or a file of
        /// graph notations, one per line.
        #[arg(long)]
        items: String,
        #[arg(long)]
        kin: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
        /// Also run the greedy compatible-basis search for this graph.
        #[arg(long)]
        basis_for: Option<String>,
    },
}

#[derive(Subcommand)]
enum CountQuantity {
    /// One-cycle signed Hultman number via the closed formula (index s).
    Hultman {
        #[arg(long)]
        n: usize,
    },
    /// Exact compatible-cycle count for n/2 disjoint bubbles.
    Bubbles {
        #[arg(long)]
        n: usize,
    },
    /// Polygon subdivisions by non-crossing diagonals.
    SuperCatalan {
        #[arg(long)]
        n: usize,
    },
    /// Cycle orders orthogonal to a fixed order.
    Orthogonal {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum KinAction {
    /// Sample a generic exact-rational point.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the point here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AmpMethod {
    /// Exact Feynman-diagram evaluation of m(alpha|beta).
    Feyn {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        kin: PathBuf,
    },
    /// Numerical pairing m(G1|G2) over the scattering-equation solutions.
    Chy {
        #[arg(long)]
        g1: String,
        #[arg(long)]
        g2: String,
        #[arg(long)]
        kin: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, code)) => {
            print_value(&value, cli.format);
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, u8)> {
    match &cli.command {
        Command::Gen { graph, verify, limit } => {
            let g = parse_graph(graph)?;
            let opts = GenerateOptions { picks: None, verify: *verify };
            let set = match generate_with(&g, &opts) {
                Ok(set) => set,
                Err(compat_cycles::compat::CompatError::GeneratedIncompatible {
                    graph,
                    cycle,
                }) => {
                    return Ok((
                        json!({
                            "graph": graph,
                            "verify_failed_on": cycle,
                        }),
                        2,
                    ));
                }
                Err(e) => return Err(e.into()),
            };
            let mut value = serde_json::to_value(&set)?;
            if let Some(limit) = limit {
                let cycles = value["cycles"].as_array().unwrap();
                let truncated: Vec<Value> = cycles.iter().take(*limit).cloned().collect();
                value["cycles"] = Value::Array(truncated);
            }
            Ok((value, 0))
        }
        Command::Check { graph, cycle } => {
            let g = parse_graph(graph)?;
            let c: CycleOrder = cycle.parse().map_err(|e| anyhow!("bad cycle: {e}"))?;
            let compatible = is_compatible(&g, &c)?;
            let code = if compatible { 0 } else { 2 };
            Ok((json!({ "compatible": compatible }), code))
        }
        Command::Enumerate { graph } => {
            let g = parse_graph(graph)?;
            let set = enumerate_compatible(&g)?;
            Ok((serde_json::to_value(&set)?, 0))
        }
        Command::Count { quantity } => {
            let (name, n, value) = match quantity {
                CountQuantity::Hultman { n } => ("hultman", *n, hultman_formula(*n)?),
                CountQuantity::Bubbles { n } => ("bubbles", *n, bubbles_exact_count(*n)?),
                CountQuantity::SuperCatalan { n } => {
                    ("super-catalan", *n, super_catalan(*n)?)
                }
                CountQuantity::Orthogonal { n } => ("orthogonal", *n, orthogonal_count(*n)?),
            };
            Ok((
                json!({ "quantity": name, "n_or_s": n, "value": value.to_string() }),
                0,
            ))
        }
        Command::Kin { action } => match action {
            KinAction::Random { n, seed, out } => {
                let kin = random_kinematics(*n, *seed)?;
                let body = serde_json::to_value(&kin)?;
                match out {
                    Some(path) => {
                        fs::write(path, serde_json::to_string(&kin)? + "\n")
                            .with_context(|| format!("writing {}", path.display()))?;
                        Ok((
                            json!({
                                "n": n,
                                "seed": seed,
                                "out": path.display().to_string(),
                            }),
                            0,
                        ))
                    }
                    None => Ok((body, 0)),
                }
            }
        },
        Command::Amp { method } => match method {
            AmpMethod::Feyn { alpha, beta, kin } => {
                let a: CycleOrder = alpha.parse().map_err(|e| anyhow!("bad alpha: {e}"))?;
                let b: CycleOrder = beta.parse().map_err(|e| anyhow!("bad beta: {e}"))?;
                let point = load_kin(kin)?;
                let value = partial_amplitude_unsigned(&a, &b, &point)?;
                Ok((
                    json!({
                        "alpha": a.to_string(),
                        "beta": b.to_string(),
                        "value": rational_string(&value),
                        "decimal": value.to_f64(),
                    }),
                    0,
                ))
            }
            AmpMethod::Chy { g1, g2, kin, tol } => {
                let graph1 = parse_graph(g1)?;
                let graph2 = parse_graph(g2)?;
                let point = load_kin(kin)?;
                let sols = cached_solve(&point, *tol, cli.cache_dir.as_deref())?;
                let value = pairing(&graph1, &graph2, &sols)?;
                Ok((
                    json!({
                        "g1": graph1.notation(),
                        "g2": graph2.notation(),
                        "value": [value.re, value.im],
                        "abs": value.norm(),
                        "solutions": sols.count(),
                        "residual": sols.residual,
                    }),
                    0,
                ))
            }
        },
        Command::Monodromy { kin, subset, a, b, tol } => {
            let point = load_kin(kin)?;
            let set: Vec<u32> = subset
                .split(',')
                .map(|t| t.trim().parse::<u32>().context("bad subset label"))
                .collect::<Result<_>>()?;
            let sols = cached_solve(&point, *tol, cli.cache_dir.as_deref())?;
            let residuals = monodromy_residual(&sols, &set, *a, *b)?;
            let max = residuals.iter().copied().fold(0.0f64, f64::max);
            Ok((
                json!({
                    "set": set,
                    "a": a,
                    "b": b,
                    "residuals": residuals,
                    "max": max,
                }),
                0,
            ))
        }
        Command::Expand { graph, kin, tol } => {
            let g = parse_graph(graph)?;
            let point = load_kin(kin)?;
            let sols = cached_solve(&point, *tol, cli.cache_dir.as_deref())?;
            let basis = standard_basis(g.n())?;
            let probes: Vec<CycleOrder> = generate(&g)?.cycles.into_iter().collect();
            let result = expansion_coefficients(&g, &basis, &probes, &sols)?;
            Ok((serde_json::to_value(&result)?, 0))
        }
        Command::Rank { n, items, kin, tol, basis_for } => {
            let point = load_kin(kin)?;
            if point.n() != *n {
                bail!("kinematics are for n = {}, requested n = {n}", point.n());
            }
            let sols = cached_solve(&point, 1e-12, cli.cache_dir.as_deref())?;
            let graphs: Vec<TwoRegularGraph> = match items.as_str() {
                "all" => all_cycles(*n)?.map(|c| c.to_graph()).collect(),
                "kk" => kk_orderings(*n)?.iter().map(|c| c.to_graph()).collect(),
                path => {
                    let text = fs::read_to_string(path)
                        .with_context(|| format!("reading items file {path}"))?;
                    text.lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .map(|line| {
                            if line.starts_with('(') {
                                parse_graph(line)
                            } else {
                                line.parse::<CycleOrder>()
                                    .map(|c| c.to_graph())
                                    .map_err(|e| anyhow!("bad cycle line: {e}"))
                            }
                        })
                        .collect::<Result<_>>()?
                }
            };
            let report = numerical_rank(&graphs, &sols, *tol)?;
            let mut value = serde_json::to_value(&report)?;
            if let Some(notation) = basis_for {
                let g = parse_graph(notation)?;
                let search = find_compatible_basis(&g, &sols, *tol)?;
                value["basis_search"] = serde_json::to_value(&search)?;
                if let BasisSearch::Partial { .. } = search {
                    return Ok((value, 2));
                }
            }
            Ok((value, 0))
        }
    }
}

/// Infer n as the maximum label; the parser then demands every label below
/// it appears exactly once.
fn parse_graph(text: &str) -> Result<TwoRegularGraph> {
    let max = text
        .split(|c: char| !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u32>().unwrap_or(0))
        .max()
        .ok_or_else(|| anyhow!("no labels in graph notation {text:?}"))?;
    TwoRegularGraph::parse(text, max as usize).map_err(|e| anyhow!("bad graph: {e}"))
}

fn load_kin(path: &Path) -> Result<KinematicPoint> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn rational_string(r: &num_rational::BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Solve once per (kinematics, gauge, tolerance): results are stored under a
/// content hash so repeated invocations reuse the file.
fn cached_solve(kin: &KinematicPoint, tol: f64, cache_dir: Option<&Path>) -> Result<SolutionSet> {
    let gauge = GaugeFixing::default();
    let config = SolverConfig { residual_tol: tol, ..SolverConfig::default() };
    let Some(dir) = cache_dir else {
        return Ok(solve_scattering(kin, &gauge, &config)?);
    };
    let mut hasher = DefaultHasher::new();
    serde_json::to_string(kin)?.hash(&mut hasher);
    serde_json::to_string(&gauge)?.hash(&mut hasher);
    tol.to_bits().hash(&mut hasher);
    let key = hasher.finish();
    let path = dir.join(format!("solutions-{key:016x}.json"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(sols) = serde_json::from_str::<SolutionSet>(&text) {
            return Ok(sols);
        }
    }
    let sols = solve_scattering(kin, &gauge, &config)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(&path, serde_json::to_string(&sols)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(sols)
}

fn print_value(value: &Value, format: Format) {
    match format {
        Format::Json => println!("{value}"),
        Format::Plain => println!("{}", serde_json::to_string_pretty(value).unwrap()),
        Format::Csv => {
            let Value::Object(map) = value else {
                println!("value\n{value}");
                return;
            };
            let headers: Vec<&String> = map.keys().collect();
            let row: Vec<String> = map.values().map(csv_cell).collect();
            println!(
                "{}\n{}",
                headers.iter().map(|h| h.as_str()).collect::<Vec<_>>().join(","),
                row.join(",")
            );
        }
    }
}

/// Scalars print bare; arrays join with ';' so they stay in one csv cell.
fn csv_cell(v: &Value) -> String {
    match v {
        Value::Array(items) => {
            items.iter().map(csv_cell).collect::<Vec<_>>().join(";")
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
