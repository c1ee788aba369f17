use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use conifold_cli::commands::{
    cmd_report, cmd_transform, cmd_validate, CommandOutput, Direction, ReportFlags, UsageError,
};

/// Exact arithmetic for projective conifold transitions.
#[derive(Parser)]
#[command(name = "conifold", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation file against the exactness and consistency rules.
    Validate {
        /// Presentation file (JSON).
        file: PathBuf,
    },
    /// Print a structured report about a presentation.
    Report {
        /// Presentation file (JSON).
        file: PathBuf,
        /// Include quantum residues, nilpotent blocks, and pairing matrices.
        #[arg(long)]
        monodromy: bool,
        /// Include the principal parts of the triple couplings.
        #[arg(long)]
        yukawa: bool,
        /// Include both gluing verdicts.
        #[arg(long)]
        glue: bool,
        /// Include structural series up to this Novikov order (0 = classical).
        #[arg(long, value_name = "N")]
        series_order: Option<u32>,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Transport Gromov-Witten data across the transition.
    Transform {
        /// Presentation file (JSON) carrying a `gw` table.
        file: PathBuf,
        /// Which side the input data lives on.
        #[arg(long, value_enum)]
        direction: Direction,
    },
}

fn finish(result: Result<CommandOutput, UsageError>) -> ExitCode {
    match result {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(s) = out.stderr {
                eprint!("{s}");
            }
            ExitCode::from(u8::try_from(out.code).unwrap_or(1))
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { file } => finish(cmd_validate(&file)),
        Command::Report { file, monodromy, yukawa, glue, series_order, json } => finish(
            cmd_report(&file, ReportFlags { monodromy, yukawa, glue, series_order, json }),
        ),
        Command::Transform { file, direction } => finish(cmd_transform(&file, direction)),
    }
}
