use std::process::Command;

use pqfreq_harness::{run, RunOptions, RunReport, ScenarioFile};

const SMALL: &str = r#"{
  "scenarios": [
    { "id": "square", "domain": { "generator": "rectangle", "length": 1.0 },
      "pairs": [[2, 1], [2, 2]], "checks": ["makai", "moment_bound"], "h": 0.1 },
    { "id": "random", "domain": { "generator": "random_convex", "k": 10 },
      "pairs": [[3, 2]], "checks": ["makai"], "h": 0.1, "seed": 4 },
    { "id": "box", "domain": { "generator": "box3d", "a": 1, "b": 1, "c": 2 }, "checks": ["moment_bound"] },
    { "id": "slab", "pairs": [[2, 1]], "checks": ["slab_sharpness"], "lengths": [1, 2, 4], "h": 0.05 }
  ]
}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pqfreq"))
}

fn body(r: &RunReport) -> String {
    r.without_metadata().to_json()
}

#[test]
fn identical_inputs_give_identical_reports() {
    let file = ScenarioFile::parse(SMALL).unwrap();
    let a = run(&file, &RunOptions::default()).unwrap();
    let b = run(&file, &RunOptions::default()).unwrap();
    assert!(a.pass);
    assert_eq!(body(&a), body(&b));
    assert_eq!(a.metadata.wall_clock.len(), 4);
}

#[test]
fn parallel_and_serial_runs_agree() {
    let file = ScenarioFile::parse(SMALL).unwrap();
    let serial = run(&file, &RunOptions { jobs: 1, ..RunOptions::default() }).unwrap();
    let parallel = run(&file, &RunOptions { jobs: 4, ..RunOptions::default() }).unwrap();
    assert_eq!(body(&serial), body(&parallel));
    let ids: Vec<&str> = parallel.scenarios.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, ["square", "random", "box", "slab"]);
}

#[test]
fn seed_override_changes_random_domains_only() {
    let file = ScenarioFile::parse(SMALL).unwrap();
    let a = run(&file, &RunOptions::default()).unwrap();
    let b = run(&file, &RunOptions { seed: Some(99), ..RunOptions::default() }).unwrap();
    assert_eq!(a.scenarios[0], b.scenarios[0]);
    assert_ne!(a.scenarios[1].reports[0].left, b.scenarios[1].reports[0].left);
}

#[test]
fn empty_scenario_list_passes() {
    let r = run(&ScenarioFile::parse(r#"{"scenarios": []}"#).unwrap(), &RunOptions::default()).unwrap();
    assert!(r.pass && r.scenarios.is_empty());
    assert_eq!(r.schema_version, 1);
    assert_eq!(r.summary_csv().lines().count(), 1);
}

#[test]
fn zero_tolerance_is_rejected() {
    let file = ScenarioFile::parse(SMALL).unwrap();
    assert!(run(&file, &RunOptions { tolerance: Some(0.0), ..RunOptions::default() }).is_err());
    let text = SMALL.replace("\"h\": 0.1 }", "\"h\": 0.1, \"tolerance\": 0 }");
    assert!(ScenarioFile::parse(&text).is_err());
}

#[test]
fn cli_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("s.json");
    std::fs::write(&scen, SMALL).unwrap();
    let out = dir.path().join("out");
    let status = bin().args(["suite", "--jobs", "2", "--scenario"]).arg(&scen).arg("--out").arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let report: RunReport = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(report.pass);
    assert_eq!(report.metadata.jobs, 2);
    let csv = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let rows = report.scenarios.iter().map(|s| s.reports.len()).sum::<usize>();
    assert_eq!(csv.lines().count(), rows + 1);
}

#[test]
fn subcommands_filter_checks() {
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("s.json");
    std::fs::write(&scen, SMALL).unwrap();
    let out = bin().arg("sharpness").arg("--scenario").arg(&scen).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.scenarios[..3].iter().all(|s| s.reports.is_empty()));
    assert!(!report.scenarios[3].reports.is_empty());
}

#[test]
fn exit_status_reflects_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    // the discrete slab ratio cannot match its oracle to 1e-12
    let failing = r#"{"scenarios": [
        {"id": "tight", "pairs": [[2, 2]], "checks": ["slab_sharpness"], "lengths": [1], "h": 0.1, "tolerance": 1e-12},
        {"id": "fine", "domain": {"generator": "box3d", "a": 1, "b": 1, "c": 1}, "checks": ["moment_bound"]}]}"#;
    let path = dir.path().join("f.json");
    std::fs::write(&path, failing).unwrap();
    let out = bin().arg("suite").arg("--scenario").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.pass && !report.scenarios[0].pass && report.scenarios[1].pass);

    let wrong_kind = r#"{"scenarios": [{"id": "c", "domain": {"generator": "circle", "radius": 1}, "checks": ["makai"], "pairs": [[2, 1]]}]}"#;
    std::fs::write(&path, wrong_kind).unwrap();
    assert_eq!(bin().arg("suite").arg("--scenario").arg(&path).output().unwrap().status.code(), Some(1));

    std::fs::write(&path, "{\"scenarios\": [\n {\"id\": 3}]}").unwrap();
    let out = bin().arg("suite").arg("--scenario").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    let out = bin().args(["verify", "--tol", "0", "--scenario"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constants_table_has_known_rows() {
    let out = bin().args(["constants", "--p", "2", "--q", "1,2,5", "--n", "400"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,1,"));
    let c: f64 = lines[1].split(',').nth(3).unwrap().parse().unwrap();
    assert!((c - 1.0).abs() < 1e-12);
    assert!(lines[3].contains("skipped"));
}

#[test]
fn bundled_suite_passes() {
    let out = bin().args(["suite", "--jobs", "2"]).output().unwrap();
    let report: RunReport = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<_> = report.scenarios.iter().filter(|s| !s.pass).map(|s| (&s.id, &s.errors)).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(out.status.code(), Some(0));
}
