//! Run manifests: everything about a run that is allowed to differ between reruns.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task: String,
    pub cache_hit: bool,
    pub wall_clock_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub jobs: usize,
    pub cache_root: String,
    pub cache_hits: usize,
    pub tasks: Vec<TaskRecord>,
    pub wall_clock_ms: f64,
}

impl RunManifest {
    pub fn new(command: &str, config_hash: String, seed: u64, jobs: usize, cache_root: String) -> Self {
        RunManifest {
            command: command.into(),
            config_hash,
            tool_version: crate::TOOL_VERSION.into(),
            seed,
            jobs,
            cache_root,
            cache_hits: 0,
            tasks: vec![],
            wall_clock_ms: 0.0,
        }
    }

    pub fn record(&mut self, mut tasks: Vec<TaskRecord>) {
        tasks.sort_by(|a, b| a.task.cmp(&b.task));
        self.cache_hits = tasks.iter().filter(|t| t.cache_hit).count();
        self.tasks = tasks;
    }

    pub fn hit_rate(&self) -> f64 {
        if self.tasks.is_empty() {
            return 0.0;
        }
        self.cache_hits as f64 / self.tasks.len() as f64
    }
}
