//! Validation and execution of a run configuration.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Component, Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::{self, Config};
use crate::error::{CliError, CliResult};
use crate::scenarios::{self, Entry, Job};
use crate::schema::schema_markdown;
use crate::svg;
use crate::table::Table;

/// Environment variable overriding the directory run outputs are written
/// under (the working directory by default).
pub const OUTPUT_ROOT_VAR: &str = "BELTRAMI_OUTPUT_ROOT";

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// A configuration whose every scenario passed validation.
pub struct Plan {
    pub config: Config,
    pub jobs: Vec<(&'static Entry, String, Job)>,
}

fn relative_dir(key: &str, dir: &str) -> CliResult<()> {
    let p = Path::new(dir);
    if dir.is_empty() || !p.components().all(|c| matches!(c, Component::Normal(_))) {
        return Err(CliError::config(format!("{key} `{dir}` must be a plain relative path")));
    }
    Ok(())
}

/// Parses and validates a configuration text without running anything.
pub fn plan(text: &str) -> CliResult<Plan> {
    let config = config::parse(text)?;
    if config.scenarios.is_empty() {
        return Err(CliError::config("no [[scenario]] entries"));
    }
    relative_dir("run.output", &config.run.output)?;
    let mut dirs = BTreeSet::new();
    let mut jobs = Vec::with_capacity(config.scenarios.len());
    for s in &config.scenarios {
        let dir = s.output_dir().to_string();
        relative_dir("scenario output", &dir)?;
        if !dirs.insert(dir.clone()) {
            return Err(CliError::config(format!("two scenarios write to `{dir}`; set distinct `output` keys")));
        }
        let (entry, job) = scenarios::build(s, config.run.seed)?;
        jobs.push((entry, dir, job));
    }
    Ok(Plan { config, jobs })
}

pub fn validate_file(path: &Path) -> CliResult<Plan> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    plan(&text)
}

/// Outcome of one scenario.
pub struct ScenarioRun {
    pub name: &'static str,
    pub dir: String,
    pub seconds: f64,
    pub result: CliResult<Vec<String>>,
}

/// Summary of a finished run.
pub struct RunReport {
    pub out_dir: PathBuf,
    pub scenarios: Vec<ScenarioRun>,
}

impl RunReport {
    /// First failure, if any.
    pub fn error(&self) -> Option<&CliError> {
        self.scenarios.iter().find_map(|s| s.result.as_ref().err())
    }
}

/// Validates the configuration at `path`, then runs every scenario and
/// writes its CSV files (and SVG plots when enabled) under
/// `<root>/<run.output>/<scenario output>/`, plus `manifest.toml` and
/// `SCHEMA.md` at the run directory. Nothing is written when validation
/// fails.
pub fn run_file(path: &Path, root: &Path, parallel: bool) -> CliResult<RunReport> {
    let plan = validate_file(path)?;
    run_plan(plan, root, parallel)
}

pub fn run_plan(plan: Plan, root: &Path, parallel: bool) -> CliResult<RunReport> {
    let Plan { config, jobs } = plan;
    let out_dir = root.join(&config.run.output);
    fs::create_dir_all(&out_dir)?;
    let svg_on = config.run.svg;
    let execute = |entry: &'static Entry, dir: String, job: Job| -> ScenarioRun {
        let start = Instant::now();
        let result = job()
            .map_err(|source| CliError::Numerical {
                scenario: entry.name.to_string(),
                source,
            })
            .and_then(|tables| write_tables(&out_dir.join(&dir), entry.name, &tables, svg_on));
        ScenarioRun {
            name: entry.name,
            dir,
            seconds: start.elapsed().as_secs_f64(),
            result,
        }
    };
    let scenarios: Vec<ScenarioRun> = if parallel || config.run.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = jobs
                .into_iter()
                .map(|(entry, dir, job)| s.spawn(move || execute(entry, dir, job)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
        })
    } else {
        jobs.into_iter().map(|(entry, dir, job)| execute(entry, dir, job)).collect()
    };
    fs::write(out_dir.join("manifest.toml"), manifest(&config, &scenarios)?)?;
    fs::write(out_dir.join("SCHEMA.md"), schema_markdown())?;
    Ok(RunReport { out_dir, scenarios })
}

fn write_tables(dir: &Path, scenario: &str, tables: &[Table], svg_on: bool) -> CliResult<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for t in tables {
        let mut buf = Vec::new();
        t.write_csv(scenario, &mut buf)?;
        let name = format!("{}.csv", t.spec.name);
        fs::write(dir.join(&name), &buf)?;
        files.push(name);
        if svg_on {
            let text = String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))?;
            if let Some(image) = svg::render(t.spec, &text)? {
                let name = format!("{}.svg", t.spec.name);
                fs::write(dir.join(&name), image)?;
                files.push(name);
            }
        }
    }
    Ok(files)
}

#[derive(Serialize)]
struct Manifest<'a> {
    toolkit: &'static str,
    version: &'static str,
    seed: u64,
    config: &'a Config,
    results: Vec<ManifestEntry>,
}

#[derive(Serialize)]
struct ManifestEntry {
    scenario: String,
    output: String,
    status: String,
    runtime_seconds: f64,
    files: Vec<String>,
}

/// `manifest.toml`: a timestamp comment line, then toolkit version, seed,
/// the configuration echo and per-scenario outcomes.
fn manifest(config: &Config, runs: &[ScenarioRun]) -> CliResult<String> {
    let m = Manifest {
        toolkit: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        seed: config.run.seed,
        config,
        results: runs
            .iter()
            .map(|r| ManifestEntry {
                scenario: r.name.to_string(),
                output: r.dir.clone(),
                status: match &r.result {
                    Ok(_) => "ok".to_string(),
                    Err(e) => e.to_string(),
                },
                runtime_seconds: r.seconds,
                files: r.result.as_ref().map(|f| f.clone()).unwrap_or_default(),
            })
            .collect(),
    };
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut out = String::new();
    writeln!(out, "# generated at unix time {secs}").unwrap();
    out.push_str(&toml::to_string(&m).map_err(|e| CliError::Io(e.to_string()))?);
    Ok(out)
}
