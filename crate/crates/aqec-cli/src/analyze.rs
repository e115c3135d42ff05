//! `aqec analyze`: per (region, ℓ) correctability analysis with every check that applies.

use std::path::{Path, PathBuf};
use std::time::Instant;

use aqec::cleaning::{converse_cleaning, cleaning_reports, equivalence_suite, CleaningReport, ConverseReport, EquivalenceReport};
use aqec::codes::{zoo, CodeSpace};
use aqec::engine::{delta_ell_interval, sandwich_from_interval, CorrectabilityInterval, SandwichReport, SearchBudget};
use aqec::geometry::Region;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{digest, Cache, CacheKey};
use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::manifest::{RunManifest, TaskRecord};
use crate::output::{write_csv, write_json};
use crate::{GlobalOpts, Outcome, REPORT_VERSION, TOOL_VERSION};

/// Below this an upper bound counts as exact correctability.
pub const CORRECTABLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub report_version: u32,
    pub task: String,
    pub code: String,
    pub code_fingerprint: String,
    pub region: Vec<usize>,
    pub ell: f64,
    pub interval: CorrectabilityInterval,
    pub sandwich: SandwichReport,
    pub cleaning: Option<Vec<CleaningReport>>,
    pub converse: Option<ConverseReport>,
    pub equivalence: Option<EquivalenceReport>,
    pub skipped: Vec<String>,
    pub failures: Vec<String>,
    pub status: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummaryRow {
    pub task: String,
    pub region: String,
    pub ell: f64,
    pub delta_lower: f64,
    pub delta_upper: f64,
    pub mu: f64,
    pub status: String,
    pub passed: bool,
    pub report: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalyzeSummary {
    pub report_version: u32,
    pub config_hash: String,
    pub code: String,
    pub tasks: Vec<SummaryRow>,
    pub passed: bool,
}

pub fn task_id(region: &[usize], ell: f64) -> String {
    let r = if region.is_empty() {
        "none".to_string()
    } else {
        region.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("-")
    };
    format!("region-{r}_ell-{ell}")
}

/// Skips a check that is out of reach for this code instead of failing the task.
fn optional<T>(what: &str, r: aqec::Result<T>, skipped: &mut Vec<String>, failures: &mut Vec<String>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(aqec::Error::Capacity(m)) => {
            skipped.push(format!("{what}: {m}"));
            None
        }
        Err(e) => {
            failures.push(format!("{what}: {e}"));
            None
        }
    }
}

pub fn analyze_one(space: &CodeSpace, fingerprint: &str, a: &Region, ell: f64, budget: &SearchBudget) -> Result<AnalyzeReport> {
    let interval = delta_ell_interval(space, a, ell, budget)?;
    let sandwich = sandwich_from_interval(&interval);
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    if !interval.is_consistent() {
        failures.push(format!("interval: lower {} above upper {}", interval.delta_lower, interval.delta_upper));
    }
    if !sandwich.passed {
        failures.push("sandwich: decoupling bracket violated".into());
    }
    let cleaning = optional(
        "cleaning",
        cleaning_reports(space, a, ell, interval.delta_upper, None),
        &mut skipped,
        &mut failures,
    );
    if let Some(c) = &cleaning {
        for r in c.iter().filter(|r| !r.passed) {
            failures.push(format!("cleaning: logical {} misses its bound by {:.3e}", r.logical, -r.slack));
        }
    }
    let converse = optional("converse", converse_cleaning(space, a, None, budget), &mut skipped, &mut failures);
    if let Some(c) = &converse {
        if !c.holds {
            failures.push(format!("converse: {} > 5ε", c.sup_trace_norm));
        }
        if !c.twirl_ok {
            failures.push(format!("converse: twirl defect {:.3e}", c.twirl_defect));
        }
    }
    let equivalence = if space.stabilizer().is_none() || space.is_perturbed() {
        skipped.push("equivalence: needs an unperturbed stabilizer code".into());
        None
    } else if ell + 1e-9 < zoo::generator_diameter(space) {
        skipped.push(format!("equivalence: ℓ = {ell} is below the generator diameter"));
        None
    } else {
        optional("equivalence", equivalence_suite(space, a, ell, budget), &mut skipped, &mut failures)
    };
    if let Some(e) = &equivalence {
        if !e.agree {
            failures.push(format!("equivalence: conditions disagree {:?}", e.conditions()));
        }
    }
    let status = match &equivalence {
        Some(e) => e.status.clone(),
        None if interval.delta_upper < CORRECTABLE_TOL => "correctable".into(),
        None => format!("approximately correctable, δ ≤ {:.3e}", interval.delta_upper),
    };
    Ok(AnalyzeReport {
        report_version: REPORT_VERSION,
        task: task_id(a.sites(), ell),
        code: space.name().to_string(),
        code_fingerprint: fingerprint.to_string(),
        region: a.sites().to_vec(),
        ell,
        interval,
        sandwich,
        cleaning,
        converse,
        equivalence,
        passed: failures.is_empty(),
        skipped,
        failures,
        status,
    })
}

pub fn report_bytes(r: &AnalyzeReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(r)?;
    s.push('\n');
    Ok(s)
}

pub fn cmd_analyze(config_path: &Path, opts: &GlobalOpts, cache: &Cache) -> Result<Outcome> {
    let started = Instant::now();
    let (mut cfg, base) = ExperimentConfig::load(config_path)?;
    opts.apply(&mut cfg);
    if cfg.regions.is_empty() || cfg.ell.is_empty() {
        return config_err("analyze needs at least one region and one ℓ");
    }
    let loaded = cfg.load_code(&base)?;
    let space = &loaded.space;
    let fingerprint = digest(&loaded.fingerprint_bytes);
    let budget = cfg.search_budget();
    let mut regions: Vec<Region> = Vec::new();
    for spec in &cfg.regions {
        for r in spec.literal()?.expand(space)? {
            if !regions.iter().any(|x| x.sites() == r.sites()) {
                regions.push(r);
            }
        }
    }
    let tasks: Vec<(Region, f64)> = regions.iter().flat_map(|r| cfg.ell.iter().map(move |&l| (r.clone(), l))).collect();
    let out_dir = opts.out_dir(&cfg).join("analyze");
    let config_hash = cfg.hash()?;

    let run = |(a, ell): &(Region, f64)| -> Result<(AnalyzeReport, TaskRecord, PathBuf)> {
        let t0 = Instant::now();
        let id = task_id(a.sites(), *ell);
        let key = CacheKey { tool_version: TOOL_VERSION, task: "analyze", code: fingerprint.clone(), region: a.sites(), ell: *ell, budget: &budget }
            .digest()?;
        let cached = cache.get(&key).and_then(|p| serde_json::from_str::<AnalyzeReport>(&p).ok().map(|r| (p, r)));
        let hit = cached.is_some();
        let (text, report) = match cached {
            Some(c) => c,
            None => {
                let r = analyze_one(space, &fingerprint, a, *ell, &budget)?;
                let text = report_bytes(&r)?;
                cache.put(&key, &fingerprint, a.sites(), *ell, &text)?;
                (text, r)
            }
        };
        let path = out_dir.join(format!("{id}.json"));
        crate::output::atomic_write(&path, text.as_bytes())?;
        let rec = TaskRecord { task: id, cache_hit: hit, wall_clock_ms: t0.elapsed().as_secs_f64() * 1e3 };
        Ok((report, rec, path))
    };
    let results: Vec<Result<(AnalyzeReport, TaskRecord, PathBuf)>> = opts.pool()?.install(|| tasks.par_iter().map(run).collect());
    let mut done = Vec::new();
    for r in results {
        done.push(r?);
    }
    done.sort_by(|a, b| a.1.task.cmp(&b.1.task));

    let rows: Vec<SummaryRow> = done
        .iter()
        .map(|(r, _, path)| SummaryRow {
            task: r.task.clone(),
            region: format!("{:?}", r.region),
            ell: r.ell,
            delta_lower: r.interval.delta_lower,
            delta_upper: r.interval.delta_upper,
            mu: r.interval.mu,
            status: r.status.clone(),
            passed: r.passed,
            report: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
        })
        .collect();
    let failing: Vec<PathBuf> = done.iter().filter(|(r, _, _)| !r.passed).map(|(_, _, p)| p.clone()).collect();
    let summary = AnalyzeSummary {
        report_version: REPORT_VERSION,
        config_hash: config_hash.clone(),
        code: space.name().to_string(),
        tasks: rows.clone(),
        passed: failing.is_empty(),
    };
    write_json(&out_dir.join("summary.json"), &summary)?;
    write_csv(&out_dir.join("summary.csv"), &rows)?;

    let mut manifest = RunManifest::new("analyze", config_hash, cfg.seed, opts.jobs_or_default(), cache.root().display().to_string());
    manifest.record(done.into_iter().map(|(_, t, _)| t).collect());
    manifest.wall_clock_ms = started.elapsed().as_secs_f64() * 1e3;
    write_json(&opts.out_dir(&cfg).join("manifest.analyze.json"), &manifest)?;
    Ok(Outcome { exit_code: if failing.is_empty() { 0 } else { 1 }, failing, manifest })
}
