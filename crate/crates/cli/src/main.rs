use std::process::ExitCode;

use clap::Parser;
use semisched_cli::commands::{self, Command};
use semisched_cli::report::to_json;
use semisched_cli::{node_budget_from_env, CliResult};

/// Semi-online makespan scheduling with known Decr and Sum.
///
/// Exit codes: 0 success, 2 invalid input or flags, 3 policy/machine count
/// mismatch, 4 optimum search budget exceeded, 5 policy left undefined.
#[derive(Debug, Parser)]
#[command(name = "semisched", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn execute(command: &Command) -> CliResult<String> {
    Ok(match command {
        Command::Run(args) => to_json(&commands::run(args, node_budget_from_env()?)?),
        Command::Lowerbound(args) => to_json(&commands::lowerbound(args)?),
        Command::Audit(args) => to_json(&commands::audit(args, node_budget_from_env()?)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(json) => {
            print!("{json}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
