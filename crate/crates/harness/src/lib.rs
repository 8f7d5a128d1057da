//! Scenario-driven audits over the `pqfreq` library: generate a domain, run
//! the requested inequality checks, collect one JSON report and a CSV
//! summary.

pub mod checks;
pub mod domain;
pub mod run;
pub mod scenario;
pub mod table;

pub use domain::{generate_domain, Domain};
pub use run::{run, RunOptions, RunReport, ScenarioReport, SCHEMA_VERSION};
pub use scenario::{Check, DomainSpec, Scenario, ScenarioError, ScenarioFile};
pub use table::constants_table;
