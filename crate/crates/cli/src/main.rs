//! `qgraph`: connectivity of quantum graphs from the command line.
//!
//! Reads JSON instance files, writes JSON reports (stdout or `--output`).
//! Exit codes: 0 ok, 1 negative verdict, 2 validation error, 3 internal
//! inconsistency.

mod commands;
mod error;
mod io;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qgraph::random::DEFAULT_SEED;
use qgraph::Tolerance;
use serde::Serialize;

use commands::{Ctx, Generate, Output, Report};
use error::{CliError, EXIT_NEGATIVE};
use io::{load_instance, InstanceFile};

#[derive(Parser)]
#[command(name = "qgraph", version, about = "Connectivity of quantum graphs (operator systems in M_n)")]
struct Cli {
    /// Root seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the JSON output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Tolerance override as `rank_rel,residual_abs`; instance files may
    /// override it again in `meta.tolerance`.
    #[arg(long, env = "QGRAPH_TOL", global = true)]
    tol: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide connectedness, with a witness projection when disconnected.
    Connectedness { graph: PathBuf },
    /// Certified lower and upper bounds on the connectivity.
    KBounds {
        graph: PathBuf,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        /// Kraus map to try as an LGP orthogonal representation.
        #[arg(long)]
        lgp_rep: Option<PathBuf>,
        /// Samples for the LGP representation checks.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// The operator system S_G of a classical graph.
    Lift { graph: PathBuf },
    /// The confusability graph of a quantum graph in a basis.
    Confusability {
        graph: PathBuf,
        #[arg(long, conflicts_with = "haar")]
        basis: Option<PathBuf>,
        /// Use a Haar-random basis.
        #[arg(long)]
        haar: bool,
    },
    /// The confusability graph span{K_i† K_j} of a channel.
    ChannelGraph {
        map: PathBuf,
        /// Also write the graph as an instance file.
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Check Σ_{i≠j} dim P_j S P_i ≥ 2(m − 1) for a partition of unity.
    TreePacking { graph: PathBuf, partition: PathBuf },
    /// Sampled check that a map is an orthogonal representation.
    CheckOrthRep {
        map: PathBuf,
        graph: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Sampled check of locally general position.
    CheckLgp {
        map: PathBuf,
        graph: PathBuf,
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
    /// Random and named instances.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Re-check a saved report.
    Verify { report: PathBuf },
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Erdős–Rényi graph G(n, p).
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Haar-random orthonormal basis of C^n.
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// Channel from a Haar isometry C^n → C^d ⊗ C^k.
    Channel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Operator system spanned by Ginibre generators, their adjoints and I.
    System {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        gens: usize,
    },
    /// Quantum Hamming cube C_order.
    Cube {
        #[arg(long)]
        order: usize,
    },
    /// span{I_n, E_ij : i ≠ j}.
    Maximal {
        #[arg(long)]
        n: usize,
    },
    /// Kraus map of a random orthogonal representation of a classical graph
    /// (default dimension n − κ(G)).
    OrthRep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: Option<usize>,
    },
}

fn parse_tol(text: &str) -> Result<Tolerance, CliError> {
    let bad = || CliError::Usage(format!("tolerance `{text}` is not `rank_rel,residual_abs`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok(Tolerance::new(a, b)?)
}

/// Default, then `--tol`/`QGRAPH_TOL`, then the primary input's meta.
fn resolve_tol(flag: Option<&str>, primary: Option<&InstanceFile>) -> Result<Tolerance, CliError> {
    let mut tol = match flag {
        Some(t) => parse_tol(t)?,
        None => Tolerance::default(),
    };
    if let Some(t) = primary.and_then(|f| f.meta.as_ref()).and_then(|m| m.tolerance) {
        tol = Tolerance::new(t.rank_rel, t.residual_abs)?;
    }
    Ok(tol)
}

fn write_json(value: &impl Serialize, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let flag = cli.tol.as_deref();
    let ctx_for = |primary: Option<&InstanceFile>| -> Result<Ctx, CliError> {
        Ok(Ctx {
            seed: cli.seed,
            tol: resolve_tol(flag, primary)?,
        })
    };
    let out = cli.output.as_deref();
    let output = match cli.command {
        Command::Connectedness { graph } => {
            let g = load_instance(&graph)?;
            commands::connectedness(&ctx_for(Some(&g))?, g)?
        }
        Command::KBounds {
            graph,
            restarts,
            lgp_rep,
            samples,
        } => {
            let g = load_instance(&graph)?;
            let rep = lgp_rep.as_deref().map(load_instance).transpose()?;
            commands::k_bounds(&ctx_for(Some(&g))?, g, restarts, samples, rep)?
        }
        Command::Lift { graph } => {
            let g = load_instance(&graph)?;
            commands::lift_cmd(&ctx_for(Some(&g))?, g)?
        }
        Command::Confusability { graph, basis, haar } => {
            let g = load_instance(&graph)?;
            let b = basis.as_deref().map(load_instance).transpose()?;
            commands::confusability_cmd(&ctx_for(Some(&g))?, g, b, haar)?
        }
        Command::ChannelGraph { map, graph_out } => {
            let m = load_instance(&map)?;
            let (report, graph) = commands::channel_graph(&ctx_for(Some(&m))?, m)?;
            if let Some(p) = graph_out {
                write_json(&graph, Some(&p))?;
            }
            report
        }
        Command::TreePacking { graph, partition } => {
            let g = load_instance(&graph)?;
            let p = load_instance(&partition)?;
            commands::tree_packing(&ctx_for(Some(&g))?, g, p)?
        }
        Command::CheckOrthRep { map, graph, samples } => {
            let m = load_instance(&map)?;
            let g = load_instance(&graph)?;
            commands::check_orth_rep_cmd(&ctx_for(Some(&g))?, m, g, samples)?
        }
        Command::CheckLgp { map, graph, samples } => {
            let m = load_instance(&map)?;
            let g = load_instance(&graph)?;
            commands::check_lgp_cmd(&ctx_for(Some(&g))?, m, g, samples)?
        }
        Command::Generate(what) => {
            let ctx = ctx_for(None)?;
            let what = match what {
                GenerateCmd::Graph { n, p } => Generate::Graph { n, p },
                GenerateCmd::Basis { n } => Generate::Basis { n },
                GenerateCmd::Channel { n, d, k } => Generate::Channel { n, d, k },
                GenerateCmd::System { n, gens } => Generate::System { n, gens },
                GenerateCmd::Cube { order } => Generate::Cube { order },
                GenerateCmd::Maximal { n } => Generate::Maximal { n },
                GenerateCmd::OrthRep { graph, d } => Generate::OrthRep {
                    graph: load_instance(&graph)?,
                    d,
                },
            };
            commands::generate(&ctx, what)?
        }
        Command::Verify { report } => {
            let r: Report = io::read_json(&report)?;
            let v = verify::verify(&r)?;
            write_json(&v, out)?;
            return Ok(!v.verified);
        }
    };
    match output {
        Output::Report(report, negative) => {
            eprintln!("{}", report.summary);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            write_json(&report, out)?;
            Ok(negative)
        }
        Output::Instance(file) => {
            write_json(&file, out)?;
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_NEGATIVE as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
