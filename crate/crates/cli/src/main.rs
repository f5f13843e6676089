use std::path::PathBuf;
use std::process::ExitCode;

use beltrami_cli::error::{CliError, CliResult};
use beltrami_cli::run::{output_root, run_file, validate_file};
use beltrami_cli::scenarios;
use beltrami_cli::schema::schema_markdown;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "beltrami", version, about = "Runs the beltrami-core numerical experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a configuration and run its scenarios.
    Run {
        config: PathBuf,
        /// Run scenarios concurrently, each in its own thread.
        #[arg(long)]
        parallel: bool,
    },
    /// List registered scenarios whose name or tag matches the filter.
    List {
        #[arg(default_value = "")]
        filter: String,
    },
    /// Check a configuration without running it.
    Validate { config: PathBuf },
    /// Print the configuration and output schema as Markdown.
    Schema,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Run { config, parallel } => {
            let report = run_file(&config, &output_root(), parallel)?;
            for s in &report.scenarios {
                let status = match &s.result {
                    Ok(files) => format!("ok ({} files)", files.len()),
                    Err(e) => format!("failed: {e}"),
                };
                println!("{:<28} {:>9.2}s  {status}", s.name, s.seconds);
            }
            println!("outputs in {}", report.out_dir.display());
            match report.error() {
                Some(CliError::Numerical { scenario, source }) => Err(CliError::Numerical {
                    scenario: scenario.clone(),
                    source: source.clone(),
                }),
                Some(CliError::Config(m)) => Err(CliError::Config(m.clone())),
                Some(CliError::Io(m)) => Err(CliError::Io(m.clone())),
                None => Ok(()),
            }
        }
        Command::List { filter } => {
            for e in scenarios::list(&filter) {
                println!("{:<28} {}", e.name, e.description);
            }
            Ok(())
        }
        Command::Validate { config } => {
            let plan = validate_file(&config)?;
            for (entry, dir, _) in &plan.jobs {
                println!("{:<28} -> {dir}", entry.name);
            }
            println!("configuration is valid");
            Ok(())
        }
        Command::Schema => {
            print!("{}", schema_markdown());
            Ok(())
        }
    }
}
