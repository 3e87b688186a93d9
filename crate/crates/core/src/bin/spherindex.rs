use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spherindex::cli::{self, FanCheck, Format, Input, Options};

#[derive(Parser)]
#[command(name = "spherindex", version, about = "Restricted spherical roots, valuation cones and toroidal fans")]
struct Args {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Smooth,
    Complete,
    Support,
}

#[derive(Subcommand)]
enum Command {
    /// Restrict a spherical datum and report its invariants.
    Analyze { file: PathBuf },
    /// Restricted root system of a group index.
    RestrictIndex { file: PathBuf },
    /// Check a fan against the valuation cone of a datum.
    Fan {
        file: PathBuf,
        #[arg(long = "fan")]
        fan: PathBuf,
        /// Checks to run; all of them by default.
        #[arg(long = "check", value_enum)]
        check: Vec<CheckArg>,
        /// Also print the strata poset.
        #[arg(long)]
        strata: bool,
    },
    /// Standard fan and its strata.
    StandardFan { file: PathBuf },
    /// Localization at a set of spherical roots.
    Localize {
        file: PathBuf,
        /// Comma-separated names.
        #[arg(long, value_delimiter = ',')]
        roots: Vec<String>,
    },
    /// Lattice data of the boundary degeneration.
    Degenerate { file: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = match Options::from_env() {
        Ok(o) => o,
        Err(e) => {
            eprintln!("spherindex: {e}");
            return ExitCode::from(2);
        }
    };
    let input = |p: &PathBuf| Input::file(p);
    let report = match &args.command {
        Command::Analyze { file } => cli::analyze(&input(file), opts),
        Command::RestrictIndex { file } => cli::restrict_index(&input(file), opts),
        Command::Fan { file, fan, check, strata } => {
            let checks: Vec<FanCheck> = check
                .iter()
                .map(|c| match c {
                    CheckArg::Smooth => FanCheck::Smooth,
                    CheckArg::Complete => FanCheck::Complete,
                    CheckArg::Support => FanCheck::Support,
                })
                .collect();
            cli::fan(&input(file), &input(fan), &checks, *strata, opts)
        }
        Command::StandardFan { file } => cli::standard(&input(file), opts),
        Command::Localize { file, roots } => cli::localize_cmd(&input(file), roots, opts),
        Command::Degenerate { file } => cli::degenerate(&input(file), opts),
    };
    let format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Text => Format::Text,
    };
    print!("{}", cli::render(&report, format));
    ExitCode::from(report.status.exit_code() as u8)
}
