//! `hgfrft`: fractional joint Hilbert-space/vertex spectral transforms from
//! the command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric error, 4 stability
//! error.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::{CmdEnv, GridSearchFlags};
use config::{config_error, load_config};

/// A failure with a process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl From<hgfrft_core::Error> for CliError {
    fn from(e: hgfrft_core::Error) -> Self {
        use hgfrft_core::Error as E;
        let code = match &e {
            E::UnstableSpeed { .. } => 4,
            E::Parse { .. }
            | E::NegativeWeight { .. }
            | E::DuplicateEdge { .. }
            | E::InvalidGraph(_)
            | E::InvalidArgument(_)
            | E::Io(_)
            | E::Json(_) => 2,
            _ => 3,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "hgfrft",
    version,
    about = "Fractional joint Hilbert-space/vertex spectral transforms for graph signals"
)]
struct Cli {
    /// Experiment configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's out_dir; default ".").
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed (overrides the config's seed; default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joint fractional transform of a signal file.
    Transform,
    /// Inverse transform of a spectrum file (orders from its sidecar).
    Inverse,
    /// Hilbert-side partial transform.
    PartialH,
    /// Graph-side partial transform.
    PartialG,
    /// Bandpass projection onto a frequency region.
    FilterBandpass,
    /// Fractional-domain convolution of two signals.
    Convolve,
    /// Greedy optimal sampling plan for a bandlimited support.
    SampleGreedy,
    /// Reconstruct a signal from samples and a plan file.
    Recover,
    /// Search fractional orders minimizing the noise amplification.
    GridSearch {
        /// Number of samples (default: the support size).
        #[arg(long)]
        samples: Option<usize>,
        /// Coarse alpha range as LO:HI.
        #[arg(long, value_parser = parse_range)]
        alpha_range: Option<(f64, f64)>,
        /// Coarse beta range as LO:HI.
        #[arg(long, value_parser = parse_range)]
        beta_range: Option<(f64, f64)>,
        /// Coarse grid step.
        #[arg(long)]
        coarse_step: Option<f64>,
        /// Refinement step.
        #[arg(long)]
        fine_step: Option<f64>,
    },
    /// Self-contained product-graph sampling experiment.
    ProductDemo,
    /// Chirp concentration sweep across fractional orders.
    ChirpDemo,
    /// Closed-form heat diffusion spectrum.
    Heat,
    /// Closed-form wave propagation spectrum.
    Wave,
    /// Energy compactness curve of a transform.
    Compactness,
    /// Build a graph and emit its edge list plus metadata.
    GenGraph,
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got `{s}`"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad low bound: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad high bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => Some(load_config(path)?),
        None => None,
    };
    let out = cli
        .out
        .clone()
        .or_else(|| config.as_ref().and_then(|c| c.out_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out)
        .map_err(|e| config_error(format!("cannot create output dir {}: {e}", out.display())))?;
    let seed = cli
        .seed
        .or_else(|| config.as_ref().and_then(|c| c.seed))
        .unwrap_or(0);
    let env = CmdEnv { config, out, seed };

    match cli.command {
        Command::Transform => commands::cmd_transform(&env),
        Command::Inverse => commands::cmd_inverse(&env),
        Command::PartialH => commands::cmd_partial_h(&env),
        Command::PartialG => commands::cmd_partial_g(&env),
        Command::FilterBandpass => commands::cmd_filter_bandpass(&env),
        Command::Convolve => commands::cmd_convolve(&env),
        Command::SampleGreedy => commands::cmd_sample_greedy(&env),
        Command::Recover => commands::cmd_recover(&env),
        Command::GridSearch {
            samples,
            alpha_range,
            beta_range,
            coarse_step,
            fine_step,
        } => commands::cmd_grid_search(
            &env,
            &GridSearchFlags {
                samples,
                alpha_range,
                beta_range,
                coarse_step,
                fine_step,
            },
        ),
        Command::ProductDemo => commands::cmd_product_demo(&env),
        Command::ChirpDemo => commands::cmd_chirp_demo(&env),
        Command::Heat => commands::cmd_heat(&env),
        Command::Wave => commands::cmd_wave(&env),
        Command::Compactness => commands::cmd_compactness(&env),
        Command::GenGraph => commands::cmd_gen_graph(&env),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.msg);
        std::process::exit(e.code);
    }
}
