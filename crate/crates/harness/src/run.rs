//! Runs a scenario file and assembles the report.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use pqfreq::InequalityReport;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::run_checks;
use crate::scenario::{Check, Scenario, ScenarioFile};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub id: String,
    pub pass: bool,
    pub reports: Vec<InequalityReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

/// Everything that varies between identical runs lives here.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub started_unix: f64,
    pub finished_unix: f64,
    pub hostname: String,
    pub jobs: usize,
    pub crate_version: String,
    /// Seconds per scenario, in scenario order.
    pub wall_clock: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub pass: bool,
    pub scenarios: Vec<ScenarioReport>,
    pub metadata: Metadata,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Worker threads; 1 runs serially on the calling thread.
    pub jobs: usize,
    /// Restrict every scenario to these checks.
    pub only: Option<Vec<Check>>,
    /// Replaces every scenario's seed.
    pub seed: Option<u64>,
    /// Replaces every scenario's tolerance.
    pub tolerance: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { jobs: 1, only: None, seed: None, tolerance: None }
    }
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

fn hostname() -> String {
    std::env::var("HOSTNAME")
        .ok()
        .or_else(|| std::fs::read_to_string("/proc/sys/kernel/hostname").ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

fn run_one(s: &Scenario, only: Option<&[Check]>) -> (ScenarioReport, f64) {
    let start = Instant::now();
    let out = run_checks(s, only);
    let pass = out.errors.is_empty() && out.reports.iter().all(|r| r.pass);
    (ScenarioReport { id: s.id.clone(), pass, reports: out.reports, errors: out.errors }, start.elapsed().as_secs_f64())
}

/// Runs every scenario independently; results keep the file's order
/// whatever the job count.
pub fn run(file: &ScenarioFile, opts: &RunOptions) -> Result<RunReport, crate::scenario::ScenarioError> {
    let mut file = file.clone();
    for s in &mut file.scenarios {
        if let Some(seed) = opts.seed {
            s.seed = seed;
        }
        if opts.tolerance.is_some() {
            s.tolerance = opts.tolerance;
        }
    }
    file.validate()?;
    let started_unix = unix_now();
    let only = opts.only.as_deref();
    let jobs = opts.jobs.max(1);
    let results: Vec<(ScenarioReport, f64)> = if jobs == 1 {
        file.scenarios.iter().map(|s| run_one(s, only)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
        pool.install(|| file.scenarios.par_iter().map(|s| run_one(s, only)).collect())
    };
    let wall_clock = results.iter().map(|(r, t)| (r.id.clone(), *t)).collect();
    let scenarios: Vec<ScenarioReport> = results.into_iter().map(|(r, _)| r).collect();
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        pass: scenarios.iter().all(|s| s.pass),
        scenarios,
        metadata: Metadata {
            started_unix,
            finished_unix: unix_now(),
            hostname: hostname(),
            jobs,
            crate_version: env!("CARGO_PKG_VERSION").into(),
            wall_clock,
        },
    })
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The report with the metadata block blanked, for comparisons.
    pub fn without_metadata(&self) -> RunReport {
        RunReport {
            metadata: Metadata {
                started_unix: 0.0,
                finished_unix: 0.0,
                hostname: String::new(),
                jobs: 0,
                crate_version: String::new(),
                wall_clock: Vec::new(),
            },
            ..self.clone()
        }
    }

    pub fn failures(&self) -> usize {
        self.scenarios.iter().map(|s| s.errors.len() + s.reports.iter().filter(|r| !r.pass).count()).sum()
    }

    /// One row per report, plus one per check error.
    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["scenario", "check", "left", "direction", "right", "ratio", "tolerance", "pass"]).expect("in-memory write");
        for s in &self.scenarios {
            for r in &s.reports {
                let direction = serde_json::to_value(r.direction).expect("enum serializes");
                w.write_record([
                    s.id.as_str(),
                    r.id.as_str(),
                    &r.left.to_string(),
                    direction.as_str().unwrap_or_default(),
                    &r.right.to_string(),
                    &r.ratio.to_string(),
                    &r.tolerance.to_string(),
                    &r.pass.to_string(),
                ])
                .expect("in-memory write");
            }
            for e in &s.errors {
                w.write_record([s.id.as_str(), e.as_str(), "", "error", "", "", "", "false"]).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}
