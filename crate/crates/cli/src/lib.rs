//! Command-line front end for the clique-packing toolkit.
//!
//! Single-shot subcommands compute one quantity and print a small CSV
//! table; `run` executes a full experiment configuration; `preset` ships
//! the canned configurations. All randomness flows from explicit seeds, so
//! every invocation is reproducible.

pub mod cells;
pub mod experiments;
pub mod presets;

pub use experiments::{expand, run_config, run_config_to_string, Config, ConfigError, Grid};
pub use presets::{preset_config, preset_names, preset_summary};

use cells::{csv_line, fmt_f64, Cell};
use clap::{Parser, Subcommand, ValueEnum};
use cliquepack_core::bounds::heuristic_panel;
use cliquepack_core::constructions::{
    affine_plane, example_hypergraph, perfect_matching_hypergraph, random_nearly_disjoint,
};
use cliquepack_core::estimators::{xi_exact, xi_mc, zeta_exact, zeta_mc_direct, zeta_sis};
use cliquepack_core::packing::{aks_pipeline, exact_nu_k, gamma_stats, greedy_packing, ScanOrder};
use cliquepack_core::random_graph::RandomGraph;
use cliquepack_core::rng::derive_seed;
use cliquepack_core::{Hypergraph, Params, SetFamily};
use std::path::PathBuf;

/// Failure with the process exit code it maps to: 2 for configuration and
/// domain problems, 3 for capacity guards, 1 for I/O.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl From<cliquepack_core::Error> for CliFailure {
    fn from(e: cliquepack_core::Error) -> Self {
        let code = match &e {
            cliquepack_core::Error::Capacity(_) => 3,
            _ => 2,
        };
        CliFailure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ConfigError> for CliFailure {
    fn from(e: ConfigError) -> Self {
        CliFailure {
            code: 2,
            message: e.0,
        }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> Self {
        CliFailure {
            code: 1,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cliquepack",
    version,
    about = "Edge-disjoint clique packings and nearly-disjoint set families"
)]
struct Cli {
    /// Worker threads for `run` (default: CLIQUEPACK_THREADS, then 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    Affine,
    Example,
    Matching,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZetaMethodArg {
    Exact,
    Direct,
    Sis,
}

#[derive(Clone, Copy, ValueEnum)]
enum XiMethodArg {
    Exact,
    Mc,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Given,
    Random,
    MinDegree,
}

impl OrderArg {
    fn resolve(self, seed: u64) -> ScanOrder {
        match self {
            OrderArg::Given => ScanOrder::Given,
            OrderArg::Random => ScanOrder::Random(derive_seed(seed, &[1])),
            OrderArg::MinDegree => ScanOrder::MinDegree,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a set family in the canonical text encoding.
    Construct {
        #[arg(long, value_enum)]
        kind: ConstructKind,
        /// Edge size (line length for plane-based kinds).
        #[arg(long)]
        l: Option<usize>,
        /// Parallel classes kept per copy.
        #[arg(long)]
        s: Option<usize>,
        /// Disjoint copies.
        #[arg(long)]
        copies: Option<usize>,
        /// Ground-set size.
        #[arg(long)]
        n: Option<usize>,
        /// Requested family size for the random kind.
        #[arg(long)]
        t_target: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Packing probability of t random k-subsets of [n].
    Zeta {
        #[arg(long, value_enum, default_value = "exact")]
        method: ZetaMethodArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 200)]
        particles: u64,
        #[arg(long, default_value_t = 200)]
        probes: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Matching probability of m random edges of a stored hypergraph.
    Xi {
        /// Hypergraph file in the canonical text encoding.
        #[arg(long)]
        hypergraph: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "exact")]
        method: XiMethodArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Draw edges independently with replacement instead of as a
        /// uniform m-subset.
        #[arg(long)]
        independent: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Closed-form bound panel for one (n, k, t) point.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Enumerate the k-cliques of one G(n, 1/2) sample.
    Cliques {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conflict-graph statistics over G(n, 1/2) samples.
    Gamma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Greedy and exact packing numbers over G(n, 1/2) samples.
    NuK {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        #[arg(long, value_enum, default_value = "min-degree")]
        order: OrderArg,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Subsample-and-repair packing pipeline over G(n, 1/2) samples.
    Aks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        samples: u64,
        /// Subsample fraction; without it the pipeline picks its own.
        #[arg(long)]
        delta_frac: Option<f64>,
        #[arg(long, value_enum, default_value = "min-degree")]
        order: OrderArg,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Execute an experiment configuration.
    Run {
        /// Configuration file (TOML).
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Preset name instead of a file.
        #[arg(long)]
        preset: Option<String>,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format override: csv or jsonl.
        #[arg(long)]
        format: Option<String>,
    },
    /// List presets, or print one preset's configuration.
    Preset {
        name: Option<String>,
    },
}

fn thread_count(cli_value: Option<usize>) -> usize {
    cli_value
        .or_else(|| {
            std::env::var("CLIQUEPACK_THREADS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), CliFailure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn require_arg<T>(value: Option<T>, name: &str, kind: &str) -> Result<T, CliFailure> {
    value.ok_or_else(|| CliFailure {
        code: 2,
        message: format!("--{name} is required for kind {kind}"),
    })
}

fn estimate_row(head: Vec<Cell>, r: &cliquepack_core::estimators::EstimateReport) -> String {
    let mut cells = head;
    cells.push(Cell::F64(r.log_p));
    cells.push(Cell::F64(r.se_log));
    cells.push(Cell::U64(r.trials));
    cells.push(r.seed.into());
    cells.push(Cell::Bool(r.degenerate));
    csv_line(&cells)
}

fn dispatch(cli: Cli) -> Result<(), CliFailure> {
    let threads = thread_count(cli.threads);
    match cli.command {
        Command::Construct {
            kind,
            l,
            s,
            copies,
            n,
            t_target,
            seed,
            out,
        } => {
            let text = match kind {
                ConstructKind::Affine => {
                    let l = require_arg(l, "l", "affine")?;
                    let plane = affine_plane(l)?;
                    let blocks: Vec<_> = plane.lines().cloned().collect();
                    let family = SetFamily::new(plane.point_count(), blocks)?;
                    Hypergraph::new(family, l)?.to_canonical_text()
                }
                ConstructKind::Example => {
                    let l = require_arg(l, "l", "example")?;
                    let s = require_arg(s, "s", "example")?;
                    let copies = require_arg(copies, "copies", "example")?;
                    example_hypergraph(l, s, copies)?
                        .into_hypergraph()
                        .to_canonical_text()
                }
                ConstructKind::Matching => {
                    let n = require_arg(n, "n", "matching")?;
                    let l = require_arg(l, "l", "matching")?;
                    perfect_matching_hypergraph(n, l)?.to_canonical_text()
                }
                ConstructKind::Random => {
                    let n = require_arg(n, "n", "random")?;
                    let l = require_arg(l, "l", "random")?;
                    let t_target = require_arg(t_target, "t-target", "random")?;
                    random_nearly_disjoint(n, l, t_target, seed)?.to_canonical_text()
                }
            };
            write_output(&out, &text)
        }
        Command::Zeta {
            method,
            n,
            k,
            t,
            trials,
            particles,
            probes,
            seed,
        } => {
            let p = Params::new(n, k, t)?;
            let report = match method {
                ZetaMethodArg::Exact => zeta_exact(&p)?,
                ZetaMethodArg::Direct => zeta_mc_direct(&p, trials, seed)?,
                ZetaMethodArg::Sis => zeta_sis(&p, particles, probes, seed)?,
            };
            let method = match method {
                ZetaMethodArg::Exact => "exact",
                ZetaMethodArg::Direct => "direct",
                ZetaMethodArg::Sis => "sis",
            };
            let head = vec![
                Cell::from(method),
                Cell::U64(n as u64),
                Cell::U64(k as u64),
                Cell::U64(t),
            ];
            println!("method,n,k,t,log_p,se_log,trials,seed,degenerate");
            println!("{}", estimate_row(head, &report));
            Ok(())
        }
        Command::Xi {
            hypergraph,
            m,
            method,
            trials,
            independent,
            seed,
        } => {
            let text = std::fs::read_to_string(&hypergraph)?;
            let h = Hypergraph::from_canonical_text(&text)?;
            let report = match method {
                XiMethodArg::Exact => xi_exact(&h, m)?,
                XiMethodArg::Mc => xi_mc(&h, m, trials, seed, independent)?,
            };
            let method = match method {
                XiMethodArg::Exact => "exact",
                XiMethodArg::Mc => "mc",
            };
            let head = vec![
                Cell::from(method),
                Cell::U64(h.n() as u64),
                Cell::U64(h.edge_count() as u64),
                Cell::U64(m as u64),
            ];
            println!("method,n,t,m,log_p,se_log,trials,seed,degenerate");
            println!("{}", estimate_row(head, &report));
            Ok(())
        }
        Command::Bounds { n, k, t, beta } => {
            let p = Params::new(n, k, t)?;
            let panel = heuristic_panel(&p, beta)?;
            println!("formula,n,k,t,log_value,regime_ok,constants");
            for row in &panel {
                let constants = row
                    .constants
                    .iter()
                    .map(|(name, value)| format!("{name}={}", fmt_f64(*value)))
                    .collect::<Vec<_>>()
                    .join(";");
                let cells = vec![
                    Cell::from(row.name),
                    Cell::U64(n as u64),
                    Cell::U64(k as u64),
                    Cell::U64(t),
                    Cell::F64(row.log_value),
                    Cell::Bool(row.regime_ok),
                    Cell::Str(constants),
                ];
                println!("{}", csv_line(&cells));
            }
            Ok(())
        }
        Command::Cliques {
            n,
            k,
            seed,
            budget,
            out,
        } => {
            let g = RandomGraph::gnp_half(n, seed);
            let cliques = g.enumerate_cliques(k, budget)?;
            write_output(&out, &cliques.to_canonical_text())
        }
        Command::Gamma {
            n,
            k,
            seed,
            samples,
            budget,
        } => {
            println!("sample,seed,n,k,m_emp,e_emp,t_emp,m_formula,e_bound,t_bound");
            for i in 0..samples {
                let sample_seed = derive_seed(seed, &[i]);
                let g = RandomGraph::gnp_half(n, sample_seed);
                let stats = gamma_stats(&g, k, budget)?;
                let cells = vec![
                    Cell::U64(i),
                    Cell::U64(sample_seed),
                    Cell::U64(n as u64),
                    Cell::U64(k as u64),
                    Cell::U64(stats.m_emp),
                    Cell::U64(stats.e_emp),
                    Cell::U64(stats.t_emp),
                    Cell::F64(stats.m_formula),
                    Cell::F64(stats.e_bound),
                    Cell::F64(stats.t_bound),
                ];
                println!("{}", csv_line(&cells));
            }
            Ok(())
        }
        Command::NuK {
            n,
            k,
            seed,
            samples,
            order,
            budget,
        } => {
            println!("sample,seed,n,k,clique_count,greedy_size,nu_size,nu_exact,ceiling");
            for i in 0..samples {
                let sample_seed = derive_seed(seed, &[i]);
                let g = RandomGraph::gnp_half(n, sample_seed);
                let cliques = g.enumerate_cliques(k, budget)?;
                let greedy = greedy_packing(&cliques, order.resolve(sample_seed))?;
                let nu = exact_nu_k(&cliques, budget)?;
                let ceiling = cliquepack_core::formulas::trivial_packing_bound(n, k)?;
                let cells = vec![
                    Cell::U64(i),
                    Cell::U64(sample_seed),
                    Cell::U64(n as u64),
                    Cell::U64(k as u64),
                    Cell::U64(cliques.len() as u64),
                    Cell::U64(greedy.len() as u64),
                    Cell::U64(nu.size),
                    Cell::Bool(nu.exact),
                    Cell::U64(ceiling),
                ];
                println!("{}", csv_line(&cells));
            }
            Ok(())
        }
        Command::Aks {
            n,
            k,
            seed,
            samples,
            delta_frac,
            order,
            budget,
        } => {
            println!(
                "sample,seed,n,k,clique_count,w_size,conflict_edges_in_w,triangles_removed,packing_size,delta_frac,greedy_size"
            );
            for i in 0..samples {
                let sample_seed = derive_seed(seed, &[i]);
                let g = RandomGraph::gnp_half(n, sample_seed);
                let pipeline_seed = derive_seed(sample_seed, &[2]);
                let (_, report) = aks_pipeline(&g, k, delta_frac, pipeline_seed, budget)?;
                let cliques = g.enumerate_cliques(k, budget)?;
                let greedy = greedy_packing(&cliques, order.resolve(sample_seed))?;
                let cells = vec![
                    Cell::U64(i),
                    Cell::U64(sample_seed),
                    Cell::U64(n as u64),
                    Cell::U64(k as u64),
                    Cell::U64(report.clique_count),
                    Cell::U64(report.w_size),
                    Cell::U64(report.conflict_edges_in_w),
                    Cell::U64(report.triangles_removed),
                    Cell::U64(report.packing_size),
                    Cell::F64(report.delta_frac),
                    Cell::U64(greedy.len() as u64),
                ];
                println!("{}", csv_line(&cells));
            }
            Ok(())
        }
        Command::Run {
            config,
            preset,
            out,
            format,
        } => {
            let mut config = match (config, preset) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(&path)?;
                    Config::from_toml(&text)?
                }
                (None, Some(name)) => preset_config(&name)?,
                _ => {
                    return Err(CliFailure {
                        code: 2,
                        message: "run needs exactly one of --config or --preset".into(),
                    })
                }
            };
            if let Some(format) = format {
                config.format = Some(format);
            }
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path)?;
                    let mut writer = std::io::BufWriter::new(file);
                    run_config(&config, threads, &mut writer)?;
                    use std::io::Write;
                    writer.flush()?;
                }
                None => {
                    let text = run_config_to_string(&config, threads)?;
                    print!("{text}");
                }
            }
            Ok(())
        }
        Command::Preset { name } => {
            match name {
                Some(name) => print!("{}", preset_config(&name)?.to_toml()),
                None => {
                    for name in preset_names() {
                        println!("{name}  {}", preset_summary(name).unwrap_or(""));
                    }
                }
            }
            Ok(())
        }
    }
}

/// Parses the process arguments, runs the command, and returns the exit
/// code, printing any failure to stderr.
pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
