use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use tunneltime::runner;
use tunneltime::scenario::{Scenario, BUILTINS};
use tunneltime::verify::{self, Suite};

#[derive(Parser)]
#[command(name = "tunneltime", version, about = "Tunneling times for two identical rectangular barriers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or a builtin scenario and write its outputs
    Run {
        /// Path to a TOML scenario, or the name of a builtin
        scenario: String,
        /// Output directory [default: out/<scenario name>]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for the sweep [default: all cores]
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the acceptance checks; exits nonzero when any fails
    Verify {
        /// Skip the ODE sweep and the physical-unit packet run (default)
        #[arg(long, conflicts_with = "full")]
        fast: bool,
        #[arg(long)]
        full: bool,
    },
    /// List the builtin scenarios
    ListBuiltins,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { scenario, out, threads } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .context("setting up the thread pool")?;
            }
            let sc = Scenario::load(&scenario).with_context(|| format!("loading scenario {scenario}"))?;
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&sc.name));
            let report = runner::run(&sc, &out).with_context(|| format!("running scenario {}", sc.name))?;
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            if report.flagged_rows > 0 {
                println!("{} rows carry flags other than ok", report.flagged_rows);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { full, .. } => {
            let suite = if full { Suite::Full } else { Suite::Fast };
            let report = verify::run(suite)?;
            println!("{report}");
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::ListBuiltins => {
            for (name, text) in BUILTINS {
                let sc = Scenario::from_toml(text)?;
                let first = text.lines().next().unwrap_or("").trim_start_matches('#').trim();
                let summary = first.split_inclusive(". ").next().unwrap_or(first).trim();
                println!("{name:<6} {:<11} {summary}", sc.mode.name());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
