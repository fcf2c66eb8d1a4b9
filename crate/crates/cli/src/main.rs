use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use netcoh::scenario::{emit, list_checks, parse_scenario, run, Format};

#[derive(Parser)]
#[command(
    name = "netcoh",
    version,
    about = "Exact checks for symplectic nets on causal posets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and report per-check results.
    Run {
        /// Scenario JSON (not needed with --list-checks).
        scenario: Option<PathBuf>,
        /// Write the full JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a flat CSV table.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Print the available check kinds and exit.
        #[arg(long)]
        list_checks: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run {
        scenario,
        out,
        csv,
        jobs,
        seed,
        list_checks: list,
    } = cli.command;
    if list {
        print!("{}", list_checks());
        return ExitCode::SUCCESS;
    }
    let Some(path) = scenario else {
        eprintln!("netcoh: a scenario file is required");
        return ExitCode::from(2);
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("netcoh: cannot read {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let mut sc = match parse_scenario(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("netcoh: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    if let Some(s) = seed {
        sc.seed = s;
    }
    let report = run(&sc, jobs);
    for c in &report.checks {
        eprintln!(
            "{:<8} {} — {}",
            format!("{:?}", c.status).to_lowercase(),
            c.name,
            c.detail
        );
    }
    let json = emit(&report, Format::Json);
    let written = match &out {
        Some(p) => std::fs::write(p, &json),
        None => {
            println!("{json}");
            Ok(())
        }
    };
    let written = written.and_then(|_| match &csv {
        Some(p) => std::fs::write(p, emit(&report, Format::Csv)),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("netcoh: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if report.summary.all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
