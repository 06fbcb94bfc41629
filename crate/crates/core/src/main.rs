use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use equivariant_cw::report::{run, Command, EXIT_IO, EXIT_USAGE};
use equivariant_cw::scenario::{Scenario, ScenarioError};

/// Run symbolic and numerical checks described by a scenario file.
#[derive(Parser, Debug)]
#[command(name = "eqcw", version)]
struct Args {
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// verify-core, universal-check, series, anomaly or all.
    #[arg(long, default_value = "all", value_parser = |s: &str| s.parse::<Command>())]
    command: Command,
    /// Overrides the scenario's truncation degree.
    #[arg(long)]
    truncation: Option<u32>,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut scenario = match Scenario::from_file(&args.scenario) {
        Ok(s) => s,
        Err(e @ ScenarioError::Io { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO as u8);
        }
        Err(e) => {
            eprintln!("error: invalid scenario {}\n{e}", args.scenario.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if let Some(t) = args.truncation {
        // re-parse so the override passes the same validation
        let text = scenario.to_text().replacen(
            &format!("truncation = {}", scenario.truncation),
            &format!("truncation = {t}"),
            1,
        );
        scenario = match text.parse() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: invalid truncation override\n{e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        };
    }
    let report = run(args.command, &scenario);
    let text = report.render();
    print!("{text}");
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_IO as u8);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
