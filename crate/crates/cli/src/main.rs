use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use imm_core::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "imm", version, about = "Exact computations on the iterated matrix multiplication polynomial")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Number of matrices
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Matrix size
    #[arg(long, global = true)]
    q: Option<usize>,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Random points per check
    #[arg(long, global = true, default_value_t = 20)]
    trials: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the polynomial at the point stored in a JSON file
    Eval { point: PathBuf },
    /// Check the symmetry group and the marked-diagram stabilizer
    Symmetry,
    /// Hessian at the distinguished point and the dual-variety dimension
    Hessian,
    /// Catalog of singular-locus components
    Sing,
    /// Catalog of Jacobian-locus components
    Jacobian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

pub struct RunConfig {
    pub n: usize,
    pub q: usize,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
    pub inject_fault: bool,
}

/// Rendered output and whether every check passed.
pub struct Report {
    pub text: String,
    pub ok: bool,
}

pub enum Failure {
    Input(String),
    Verification(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Guard { .. } => Failure::Guard(e.to_string()),
            Error::InvalidArgument(_) | Error::Parse(_) | Error::Shape(_) => Failure::Input(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Failure> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure::Input(format!("--{name} is required")));
    Ok(RunConfig {
        n: need(cli.n, "n")?,
        q: need(cli.q, "q")?,
        seed: cli.seed,
        trials: cli.trials,
        format: cli.format,
        inject_fault: cli.inject_fault,
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Eval { point } => commands::eval(point, cli.format),
        Command::Symmetry => commands::symmetry(&config(cli)?),
        Command::Hessian => commands::hessian(&config(cli)?),
        Command::Sing => commands::sing(&config(cli)?),
        Command::Jacobian => commands::jacobian(&config(cli)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (report, code) = match run(&cli) {
        Ok(report) => {
            let code = if report.ok { 0 } else { 1 };
            (report, code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report.text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.text),
    }
    ExitCode::from(code)
}
