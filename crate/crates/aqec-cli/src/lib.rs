//! Configured runs of the aqec workbench: analyses, bound sweeps and the result cache.

pub mod analyze;
pub mod bounds;
pub mod cache;
pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
pub mod region;

use std::path::PathBuf;

pub use error::{CliError, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Schema version of the CLI's own reports.
pub const REPORT_VERSION: u32 = 1;

/// Flags that override the config file.
#[derive(Clone, Debug, Default)]
pub struct GlobalOpts {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn apply(&self, cfg: &mut config::ExperimentConfig) {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = o.display().to_string();
        }
    }

    pub fn out_dir(&self, cfg: &config::ExperimentConfig) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(&cfg.out))
    }

    pub fn jobs_or_default(&self) -> usize {
        self.jobs.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs_or_default())
            .build()
            .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))
    }
}

pub struct Outcome {
    pub exit_code: i32,
    /// Reports whose assertions failed.
    pub failing: Vec<PathBuf>,
    pub manifest: manifest::RunManifest,
}
