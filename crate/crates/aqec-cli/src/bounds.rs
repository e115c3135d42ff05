//! `aqec bounds`: tradeoff sweeps, vacuousness flags and slack plots.

use std::path::Path;
use std::time::Instant;

use aqec::cleaning::{evaluate_exponential_profile, evaluate_tradeoff, BoundEvaluation, CodeParameters};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{config_err, Result};
use crate::manifest::{RunManifest, TaskRecord};
use crate::output::{atomic_write, line_plot_svg, write_csv, write_json, Series};
use crate::{GlobalOpts, Outcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub series: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub dimension: usize,
    pub delta: f64,
    pub ell: f64,
    pub epsilon: f64,
    pub prefactor: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `log(rhs/lhs)`; not finite when the left side is not positive.
    pub log_slack: f64,
    pub holds: bool,
    pub vacuous: bool,
}

fn row(series: &str, ev: &BoundEvaluation) -> BoundRow {
    let p = ev.params;
    BoundRow {
        series: series.into(),
        n: p.n,
        k: p.k,
        d: p.d,
        dimension: p.dimension,
        delta: p.delta,
        ell: p.ell,
        epsilon: ev.epsilon,
        prefactor: ev.prefactor,
        lhs: ev.lhs,
        rhs: ev.rhs,
        log_slack: if ev.lhs > 0.0 { (ev.rhs / ev.lhs).ln() } else { f64::NAN },
        holds: ev.holds,
        vacuous: ev.vacuous,
    }
}

/// Every evaluation a config asks for, in file order.
pub fn sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, BoundEvaluation)>> {
    let Some(spec) = &cfg.bounds else {
        return config_err("bounds needs a \"bounds\" section");
    };
    let dim = spec.dimension;
    if dim < 2 {
        return config_err(format!("the tradeoff exponent 2/(D-1) is undefined for D = {dim}"));
    }
    let family_len = spec.profile.as_ref().map_or(0, |p| p.family.len());
    if spec.points.is_empty() && family_len == 0 {
        return config_err("empty sweep: give points or a profile family");
    }
    let (c, cp) = (cfg.constants.c, cfg.constants.c_prime);
    let mut out = Vec::new();
    for p in &spec.points {
        let params = CodeParameters { n: p.n, k: p.k, d: p.d, delta: p.delta, ell: p.ell, dimension: dim };
        out.push(("points".to_string(), evaluate_tradeoff(params, c, cp)?));
    }
    if let Some(prof) = &spec.profile {
        if !(prof.fixed_ell > 0.0) || !(prof.xi > 0.0) {
            return config_err("profile needs fixed_ell > 0 and xi > 0");
        }
        for m in &prof.family {
            let delta = prof.amplitude * (-prof.fixed_ell / prof.xi).exp();
            let params = CodeParameters { n: m.n, k: m.k, d: m.d, delta, ell: prof.fixed_ell, dimension: dim };
            out.push(("fixed-ell".to_string(), evaluate_tradeoff(params, c, cp)?));
        }
        for m in &prof.family {
            let ev = evaluate_exponential_profile(m.n, m.k, m.d, dim, prof.amplitude, prof.xi, c, cp)?;
            out.push(("log-n".to_string(), ev));
        }
    }
    Ok(out)
}

pub fn cmd_bounds(config_path: &Path, opts: &GlobalOpts) -> Result<Outcome> {
    let started = Instant::now();
    let (mut cfg, _) = ExperimentConfig::load(config_path)?;
    opts.apply(&mut cfg);
    let evals = sweep(&cfg)?;
    let dir = opts.out_dir(&cfg).join("bounds");
    let rows: Vec<BoundRow> = evals.iter().map(|(s, e)| row(s, e)).collect();
    write_csv(&dir.join("tradeoff.csv"), &rows)?;
    let reports: Vec<&BoundEvaluation> = evals.iter().map(|(_, e)| e).collect();
    write_json(&dir.join("tradeoff.json"), &reports)?;

    let mut names: Vec<&str> = Vec::new();
    for r in &rows {
        if !names.contains(&r.series.as_str()) {
            names.push(&r.series);
        }
    }
    let series = |f: &dyn Fn(&BoundRow) -> f64| -> Vec<Series> {
        names
            .iter()
            .map(|&name| Series {
                name: name.to_string(),
                points: rows.iter().filter(|r| r.series == name).map(|r| (r.n as f64, f(r))).collect(),
            })
            .collect()
    };
    atomic_write(&dir.join("prefactor.svg"), line_plot_svg("accuracy prefactor", "n", "1 - c eps log(1/eps)", &series(&|r| r.prefactor)).as_bytes())?;
    atomic_write(&dir.join("slack.svg"), line_plot_svg("bound slack", "n", "log(rhs / lhs)", &series(&|r| r.log_slack)).as_bytes())?;

    let mut manifest = RunManifest::new("bounds", cfg.hash()?, cfg.seed, opts.jobs_or_default(), String::new());
    manifest.record(vec![TaskRecord {
        task: "sweep".into(),
        cache_hit: false,
        wall_clock_ms: started.elapsed().as_secs_f64() * 1e3,
    }]);
    manifest.wall_clock_ms = started.elapsed().as_secs_f64() * 1e3;
    write_json(&opts.out_dir(&cfg).join("manifest.bounds.json"), &manifest)?;
    Ok(Outcome { exit_code: 0, failing: vec![], manifest })
}
