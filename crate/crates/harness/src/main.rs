use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pqfreq_harness::{constants_table, run, Check, RunOptions, ScenarioFile};

/// Audits of sharp lower bounds for generalized principal frequencies.
///
/// Exit status: 0 when every verdict passes, 1 when any fails, 2 on bad
/// input.
#[derive(Parser, Debug)]
#[command(name = "pqfreq", version)]
struct Cli {
    /// Scenario JSON; the bundled suite when omitted.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Directory for report.json and summary.csv; JSON goes to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Scenarios run concurrently.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Replaces every scenario's seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replaces every scenario's tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of π_pq, C_pq and the discrete cross-check.
    Constants {
        #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0, 3.0, 4.0])]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 4.0])]
        q: Vec<f64>,
        /// Cells of the one-dimensional discretization.
        #[arg(long, default_value_t = 2000)]
        n: usize,
    },
    /// Makai, Hersch–Protter and moment-bound checks.
    Verify,
    /// Slab-family sharpness checks.
    Sharpness,
    /// The toothed annulus.
    Counterexample,
    /// Normal-coordinate integrals and weighted quotients.
    Cov,
    /// Every check of every scenario.
    Suite,
}

fn write_out(dir: &Path, name: &str, body: &str) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let path = dir.join(name);
    std::fs::write(&path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, String> {
    let only = match &cli.command {
        Command::Constants { p, q, n } => {
            let table = constants_table(p, q, *n);
            match &cli.out {
                Some(dir) => write_out(dir, "constants.csv", &table)?,
                None => print!("{table}"),
            }
            return Ok(true);
        }
        Command::Verify => Some(vec![Check::Makai, Check::HerschProtter, Check::MomentBound]),
        Command::Sharpness => Some(vec![Check::SlabSharpness]),
        Command::Counterexample => Some(vec![Check::Counterexample]),
        Command::Cov => Some(vec![Check::Cov, Check::WeightedQuotient]),
        Command::Suite => None,
    };
    let file = match &cli.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ScenarioFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ScenarioFile::bundled_suite(),
    };
    let opts = RunOptions { jobs: cli.jobs, only, seed: cli.seed, tolerance: cli.tol };
    let report = run(&file, &opts).map_err(|e| e.to_string())?;
    for (s, (_, t)) in report.scenarios.iter().zip(&report.metadata.wall_clock) {
        let verdict = if s.pass { "PASS" } else { "FAIL" };
        eprintln!("{verdict} {} ({} reports, {t:.2}s)", s.id, s.reports.len());
        for r in s.reports.iter().filter(|r| !r.pass) {
            eprintln!("    failed: {}: {} {:?} {}", r.id, r.left, r.direction, r.right);
        }
        for e in &s.errors {
            eprintln!("    error: {e}");
        }
    }
    eprintln!("{} — {} failure(s)", if report.pass { "all pass" } else { "FAILED" }, report.failures());
    match &cli.out {
        Some(dir) => {
            write_out(dir, "report.json", &report.to_json())?;
            write_out(dir, "summary.csv", &report.summary_csv())?;
        }
        None => println!("{}", report.to_json()),
    }
    Ok(report.pass)
}
