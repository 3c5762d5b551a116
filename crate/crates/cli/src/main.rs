use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use skewdet::skew::Algorithm;
use skewdet_cli::commands::{run, Command, Options};
use skewdet_cli::problem::ProblemFile;
use skewdet_cli::report::Format;
use skewdet_cli::CliError;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Relax,
    Expand,
    Oracle,
    All,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Relax => Algorithm::Relax,
            AlgoArg::Expand => Algorithm::Expand,
            AlgoArg::Oracle => Algorithm::Oracle,
            AlgoArg::All => Algorithm::All,
        }
    }
}

/// Degrees and orders of Dieudonné determinants of skew polynomial
/// matrices.
///
/// Exit codes: 0 success, 1 I/O or internal error, 2 invalid input,
/// 3 engines disagree under `--algo all`, 4 query unsupported for the twist.
#[derive(Debug, Parser)]
#[command(name = "skewdet", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Problem file (JSON); `-` reads standard input.
    file: PathBuf,
    /// ζ engine; `all` runs every engine and checks that they agree.
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    /// Budget M for ζ; defaults to ℓn.
    #[arg(long)]
    bound: Option<u64>,
    /// Write the relaxation passes as JSON lines to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn read_problem(path: &PathBuf) -> Result<String, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = read_problem(&cli.file)
        .and_then(|t| ProblemFile::from_json(&t))
        .and_then(|f| f.parse())
        .and_then(|p| {
            let opts = Options {
                algorithm: cli.algo.map(Algorithm::from),
                bound: cli.bound,
                trace: cli.trace.clone(),
            };
            run(cli.command, &p, &opts)
        });
    match result {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
