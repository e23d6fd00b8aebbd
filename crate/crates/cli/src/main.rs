use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;
mod registry;

use config::{Command, Layers, Settings};
use error::{exit, CliError, Result};

#[derive(Parser)]
#[command(name = "wisfbm", version, about = "fBm-driven quasilinear SDE solvers and convergence studies")]
struct Cli {
    /// Config file (`key = value` lines) or a previous manifest.txt.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Figure preset, e.g. fig3a. See `wisfbm list`.
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Override one key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Use the large reference grid and sample counts of the preset.
    #[arg(long, global = true)]
    paper_scale: bool,

    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, env = "WISFBM_OUT", default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Sample fBm paths and solve along them.
    SamplePath {
        /// Write only the value at t_final.
        #[arg(long)]
        endpoint_only: bool,
    },
    /// RMSE against a reference solution for a list of step sizes.
    Converge,
    /// Fitted convergence rate for a list of Hurst values.
    RateSweep,
    /// Print presets, drifts and config keys.
    List,
}

fn list() {
    println!("presets:");
    for p in &config::PRESETS {
        println!("  {:<6} {:<12} {}", p.name, p.command.to_string(), p.caption);
    }
    println!("drifts:");
    for d in &registry::DRIFTS {
        println!("  {:<15} {}", d.name, d.formula_doc);
    }
    println!("config keys:");
    for (k, v) in config::KeyValues::defaults().iter() {
        println!("  {k} = {v}");
    }
}

fn run(cli: Cli) -> Result<()> {
    let (command, endpoint_only) = match cli.command {
        Sub::SamplePath { endpoint_only } => (Command::SamplePath, endpoint_only),
        Sub::Converge => (Command::Converge, false),
        Sub::RateSweep => (Command::RateSweep, false),
        Sub::List => {
            list();
            return Ok(());
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let layers = Layers {
        preset: cli.preset.as_deref(),
        file: cli.config.as_deref(),
        overrides: &cli.set,
        paper_scale: cli.paper_scale,
        seed: cli.seed,
        endpoint_only,
    };
    let kv = config::resolve(command, &layers)?;
    let settings = Settings::from_kv(&kv)?;

    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let files = commands::run(command, &settings)?;
    let info = output::RunInfo {
        command: command.to_string(),
        threads: rayon::current_num_threads(),
        started_unix,
        wall_seconds: clock.elapsed().as_secs_f64(),
        config: &kv,
    };
    let manifest = output::manifest(&info, &files);
    output::write_all(&cli.out, &files, &manifest)?;
    for f in files.iter().chain(std::iter::once(&manifest)) {
        eprintln!("wrote {}", cli.out.join(&f.name).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("wisfbm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
