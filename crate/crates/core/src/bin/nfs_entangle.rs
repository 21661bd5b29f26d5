use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nfs_entangle::config::{parse_config, Mode, RunConfig};
use nfs_entangle::driver;
use nfs_entangle::error::Result;

#[derive(Parser)]
#[command(
    name = "nfs-entangle",
    about = "Heralded nuclear-entanglement simulator: wavepackets, fringes, Monte Carlo trials, tomography and XPDC rate estimates",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// TOML configuration file; defaults apply for every missing key.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output CSV path (overrides config and NFS_ENTANGLE_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Random seed (overrides the config value).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Scattered wavepacket psi(t) on the configured grid.
    Wavepacket(CommonOpts),
    /// Detector intensities versus the magnetic switching time.
    Fringe(CommonOpts),
    /// Seeded Monte Carlo event generation with count summary.
    Simulate(CommonOpts),
    /// Monte Carlo tomography: density-matrix entries and concurrence.
    Tomography(CommonOpts),
    /// XPDC susceptibility, pump density, signal flux and heralded rate.
    Rate(CommonOpts),
}

impl Command {
    fn mode(&self) -> Mode {
        match self {
            Command::Wavepacket(_) => Mode::Wavepacket,
            Command::Fringe(_) => Mode::Fringe,
            Command::Simulate(_) => Mode::Simulate,
            Command::Tomography(_) => Mode::Tomography,
            Command::Rate(_) => Mode::Rate,
        }
    }

    fn opts(&self) -> &CommonOpts {
        match self {
            Command::Wavepacket(o)
            | Command::Fringe(o)
            | Command::Simulate(o)
            | Command::Tomography(o)
            | Command::Rate(o) => o,
        }
    }
}

fn load_config(opts: &CommonOpts, mode: Mode) -> Result<RunConfig> {
    let text = match &opts.config {
        Some(path) => std::fs::read_to_string(path)?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text, mode)?;
    if let Some(seed) = opts.seed {
        cfg.doc.experiment.seed = seed;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = cli.command.mode();
    let opts = cli.command.opts();
    let result = load_config(opts, mode).and_then(|cfg| driver::run(&cfg, opts.out.as_deref()));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
