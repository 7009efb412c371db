mod report;
mod run;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use scenario::Scenario;

#[derive(Parser)]
#[command(name = "deform", version, about = "Deformation computations driven by scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a scenario and write a JSON report.
    Run {
        scenario: PathBuf,
        /// Report path (default: print the JSON report to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Progress on stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Parse and validate a scenario without computing anything.
    Validate { scenario: PathBuf },
}

fn load(path: &PathBuf) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Scenario::parse(&text)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate { scenario } => load(&scenario).map(|s| {
            println!("ok: P{} with tasks {}", s.variety, s.tasks.iter().map(|t| t.name()).collect::<Vec<_>>().join(", "));
            true
        }),
        Command::Run { scenario, out, verbose } => load(&scenario).and_then(|s| {
            let report = run::run(&s, verbose)?;
            match &out {
                Some(path) => {
                    std::fs::write(path, report.to_json()).with_context(|| format!("cannot write {}", path.display()))?;
                    print!("{}", report.summary());
                }
                None => print!("{}", report.to_json()),
            }
            if verbose && out.is_none() {
                eprint!("{}", report.summary());
            }
            Ok(report.passed())
        }),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
