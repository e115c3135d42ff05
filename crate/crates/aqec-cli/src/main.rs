use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use aqec_cli::cache::Cache;
use aqec_cli::{analyze, bounds, GlobalOpts};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "aqec", version, about = "Approximate error-correction analyses on qubit lattice codes")]
struct Cli {
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Correctability intervals, cleaning and exact-condition checks per region.
    Analyze {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tradeoff-bound sweep tables and plots.
    Bounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Inspect or prune the result cache (root from AQEC_CACHE_DIR).
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Stats,
    Gc {
        /// Remove entries at least this many seconds old.
        #[arg(long, default_value_t = 30 * 24 * 3600)]
        max_age: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == Some(0) {
        eprintln!("error: --jobs must be positive");
        return ExitCode::from(2);
    }
    let opts = GlobalOpts { seed: cli.seed, jobs: cli.jobs, out: cli.out };
    let cache = Cache::from_env();
    let result = match cli.command {
        Command::Analyze { config } => analyze::cmd_analyze(&config, &opts, &cache),
        Command::Bounds { config } => bounds::cmd_bounds(&config, &opts),
        Command::Cache { action } => {
            let r = match action {
                CacheAction::Stats => cache.stats().and_then(|s| {
                    println!("{}", serde_json::to_string_pretty(&s)?);
                    Ok(())
                }),
                CacheAction::Gc { max_age } => cache.gc(Duration::from_secs(max_age)).map(|n| println!("removed {n} entries")),
            };
            return match r {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
    };
    match result {
        Ok(outcome) => {
            let m = &outcome.manifest;
            eprintln!("{} tasks, {} cache hits, {:.0} ms", m.tasks.len(), m.cache_hits, m.wall_clock_ms);
            for p in &outcome.failing {
                eprintln!("FAILED {}", p.display());
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
