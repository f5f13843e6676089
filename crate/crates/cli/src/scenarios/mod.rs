//! The scenario registry. Each entry validates its configuration up front
//! and returns a job that produces the scenario's tables.

use beltrami_core::error::Result as CoreResult;

use crate::config::{ScenarioConfig, COMMON_KEYS};
use crate::error::{CliError, CliResult};
use crate::table::{Table, TableSpec};

mod criteria;
mod dirichlet;
mod modulus;
mod solver;

/// A validated scenario ready to run.
pub type Job = Box<dyn FnOnce() -> CoreResult<Vec<Table>> + Send>;

pub struct Entry {
    pub name: &'static str,
    pub description: &'static str,
    /// Group names matched by `list` filters.
    pub tags: &'static [&'static str],
    /// Scenario-specific configuration keys with their meaning and default.
    pub keys: &'static [(&'static str, &'static str)],
    pub tables: &'static [&'static TableSpec],
    pub build: fn(&ScenarioConfig, u64) -> CliResult<Job>,
}

pub fn registry() -> Vec<&'static Entry> {
    let mut all = Vec::new();
    all.extend_from_slice(modulus::ENTRIES);
    all.extend_from_slice(criteria::ENTRIES);
    all.extend_from_slice(solver::ENTRIES);
    all.extend_from_slice(dirichlet::ENTRIES);
    all
}

pub fn find(name: &str) -> Option<&'static Entry> {
    registry().into_iter().find(|e| e.name == name)
}

/// Entries whose name contains `filter` or that carry it as a tag; an
/// empty filter selects everything.
pub fn list(filter: &str) -> Vec<&'static Entry> {
    registry()
        .into_iter()
        .filter(|e| filter.is_empty() || e.name.contains(filter) || e.tags.contains(&filter))
        .collect()
}

/// Checks the keys of `cfg` against the entry and builds its job.
pub fn build(cfg: &ScenarioConfig, default_seed: u64) -> CliResult<(&'static Entry, Job)> {
    let entry = find(&cfg.name).ok_or_else(|| CliError::config(format!("unknown scenario `{}`", cfg.name)))?;
    for key in cfg.given_keys() {
        if !COMMON_KEYS.contains(&key) && !entry.keys.iter().any(|(k, _)| *k == key) {
            return Err(CliError::config(format!("scenario `{}` does not accept key `{key}`", entry.name)));
        }
    }
    let job = (entry.build)(cfg, cfg.seed.unwrap_or(default_seed))
        .map_err(|e| match e {
            CliError::Config(m) => CliError::config(format!("scenario `{}`: {m}", entry.name)),
            other => other,
        })?;
    Ok((entry, job))
}

/// Builds and runs one scenario in-process.
pub fn run_one(cfg: &ScenarioConfig, default_seed: u64) -> CliResult<Vec<Table>> {
    let (entry, job) = build(cfg, default_seed)?;
    job().map_err(|source| CliError::Numerical {
        scenario: entry.name.to_string(),
        source,
    })
}
